"""Modulation recognition of single and 2:1 cochannel mixed digital signals."""
from ._core import BACKEND as KERNEL_BACKEND
from .sigsynth import MixSpec, ModScheme, RealSignal, SignalConfig

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "MixSpec", "ModScheme", "RealSignal", "SignalConfig", "__version__"]
