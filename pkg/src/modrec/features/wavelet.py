"""Mallat pyramid with the Daubechies db4 filter pair and periodic extension."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSignalError, DomainError
from .vector import FeatureFamily, FeatureVector

# db4: four vanishing moments, eight taps (scaling filter)
DB4_LOW = np.array([
    0.2303778133088965, 0.7148465705529157, 0.6308807679298589, -0.027983769416859854,
    -0.18703481171909309, 0.030841381835560764, 0.0328830116668852, -0.010597401785069032,
])
DB4_HIGH = np.array([(-1) ** m * DB4_LOW[len(DB4_LOW) - 1 - m] for m in range(len(DB4_LOW))])

WAV_NAMES = tuple(f"wav_d{j}" for j in range(1, 6))
LOG_FLOOR = 1e-12


@dataclass(frozen=True)
class WaveletBands:
    approx: np.ndarray
    details: tuple  # D1 (finest) ... DL
    levels: int
    length: int  # input length before zero padding

    def energies(self) -> np.ndarray:
        return np.array([float(d @ d) for d in self.details])

    def total_energy(self) -> float:
        return float(self.energies().sum() + self.approx @ self.approx)


def _analyze(x):
    n = x.size
    a = np.zeros(n // 2)
    d = np.zeros(n // 2)
    for m in range(DB4_LOW.size):
        shifted = np.roll(x, -m)[::2]
        a += DB4_LOW[m] * shifted
        d += DB4_HIGH[m] * shifted
    return a, d


def _synthesize(a, d):
    n = 2 * a.size
    x = np.zeros(n)
    base = 2 * np.arange(a.size)
    for m in range(DB4_LOW.size):
        x[(base + m) % n] += DB4_LOW[m] * a + DB4_HIGH[m] * d
    return x


def wavelet_decompose(sig, levels: int = 5) -> WaveletBands:
    x = np.asarray(getattr(sig, "samples", sig), dtype=float)
    if levels < 1:
        raise DomainError("levels must be >= 1")
    if x.size < 2 ** levels:
        raise DomainError(f"need at least {2 ** levels} samples for {levels} levels")
    block = 2 ** levels
    padded = np.zeros(-(-x.size // block) * block)
    padded[: x.size] = x
    details = []
    a = padded
    for _ in range(levels):
        a, d = _analyze(a)
        details.append(d)
    return WaveletBands(a, tuple(details), levels, x.size)


def wavelet_reconstruct(bands: WaveletBands) -> np.ndarray:
    a = bands.approx
    for d in reversed(bands.details):
        a = _synthesize(a, d)
    return a[: bands.length]


def wavelet_features(bands: WaveletBands) -> FeatureVector:
    """``log10(||D_j||^2 / ||x||^2 + 1e-12)`` for the five detail levels."""
    if bands.levels != 5:
        raise DomainError("wavelet features are defined for a five-level decomposition")
    total = bands.total_energy()
    if not total > 0:
        raise DegenerateSignalError("zero-energy signal")
    values = np.log10(bands.energies() / total + LOG_FLOOR)
    return FeatureVector.of(FeatureFamily.WAV, WAV_NAMES, values)
