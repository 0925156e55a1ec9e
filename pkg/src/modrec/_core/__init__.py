"""Kernel backend selection.

The compiled extension is used when it was built; otherwise, or when the
environment variable ``MODREC_PURE_PYTHON`` is set to a non-empty value, the
pure-Python fallback is used. Both expose ``phase_correction``,
``best_split`` and ``smo_solve``.
"""
import os

from . import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None
else:
    _BACKENDS["cython"] = _ckernels


def available_backends():
    return sorted(_BACKENDS)


def get_backend(name=None):
    """Return the kernel module called ``name`` (default: the active one)."""
    if name is None:
        return _active
    try:
        return _BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} is not available; have {available_backends()}") from None


if os.environ.get("MODREC_PURE_PYTHON") or _ckernels is None:
    BACKEND = "python"
else:
    BACKEND = "cython"
_active = _BACKENDS[BACKEND]

phase_correction = _active.phase_correction
best_split = _active.best_split
smo_solve = _active.smo_solve

__all__ = ["BACKEND", "available_backends", "get_backend", "phase_correction", "best_split", "smo_solve"]
