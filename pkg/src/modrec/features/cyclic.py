"""Time-smoothed cyclic periodogram and cyclic-spectrum envelope features."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSignalError, DomainError
from ..sigsynth import RealSignal
from .vector import FeatureFamily, FeatureVector

CYC_NAMES = ("cyc_var_s0", "cyc_var_sfc", "cyc_mean_s0", "cyc_beta", "cyc_p2fc")


@dataclass(frozen=True)
class CyclicSpectrumGrid:
    """``|S_x^alpha(f)|`` normalized to a global maximum of one.

    Row ``k`` is cycle frequency ``k * d_alpha`` for ``k = 0 .. n_fft // 2``.
    Column ``j`` is spectral frequency ``(j - n_fft // 2) * d_f``; on odd rows
    the bin pair straddles that frequency and is centred half a bin above it.
    """

    magnitudes: np.ndarray
    d_alpha: float
    d_f: float
    scale: float = 1.0

    @property
    def alphas(self) -> np.ndarray:
        return np.arange(self.magnitudes.shape[0]) * self.d_alpha

    @property
    def freqs(self) -> np.ndarray:
        n = self.magnitudes.shape[1]
        return (np.arange(n) - n // 2) * self.d_f

    def alpha_index(self, alpha: float) -> int:
        k = int(round(alpha / self.d_alpha))
        if not 0 <= k < self.magnitudes.shape[0]:
            raise DomainError(f"cycle frequency {alpha} outside the grid")
        return k

    def freq_index(self, f: float) -> int:
        n = self.magnitudes.shape[1]
        j = int(round(f / self.d_f)) + n // 2
        if not 0 <= j < n:
            raise DomainError(f"frequency {f} outside the grid")
        return j


def _window(name: str, n: int) -> np.ndarray:
    if name in ("boxcar", "rect", "rectangular"):
        return np.ones(n)
    if name in ("hann", "hanning"):
        return 0.5 - 0.5 * np.cos(2.0 * np.pi * np.arange(n) / n)
    raise DomainError(f"unknown window {name!r}")


def cyclic_spectrum(sig: RealSignal, n_fft: int = 256, overlap: float = 0.5,
                    window: str = "boxcar") -> CyclicSpectrumGrid:
    """Average ``X_s(f + alpha/2) conj(X_s(f - alpha/2))`` over windowed segments.

    Each segment product is re-referenced to absolute time with
    ``exp(-j 2 pi alpha t_s)`` so cyclic components add coherently.
    """
    x = sig.samples if isinstance(sig, RealSignal) else np.asarray(sig, dtype=float)
    fs = sig.sample_hz if isinstance(sig, RealSignal) else 1.0
    if n_fft < 4:
        raise DomainError("n_fft must be at least 4")
    if x.size < 4 * n_fft:
        raise DomainError(f"need at least {4 * n_fft} samples, got {x.size}")
    if not 0 <= overlap < 1:
        raise DomainError("overlap must lie in [0, 1)")
    hop = n_fft - int(round(overlap * n_fft))
    w = _window(window, n_fft)
    segs = np.lib.stride_tricks.sliding_window_view(x, n_fft)[::hop]
    X = np.fft.fft(segs * w, axis=1)
    n_seg = X.shape[0]
    n_alpha = n_fft // 2 + 1
    norm = n_seg * float(np.sum(w * w))

    c = np.arange(n_fft) - n_fft // 2
    raw = np.empty((n_alpha, n_fft), dtype=complex)
    if n_fft % hop == 0:
        q = n_fft // hop
        grams = [X[r::q].conj().T @ X[r::q] for r in range(q)]
        for k in range(n_alpha):
            lo = (c - k // 2) % n_fft
            hi = (c + (k - k // 2)) % n_fft
            acc = np.zeros(n_fft, dtype=complex)
            for r, g in enumerate(grams):
                acc += np.exp(-2j * np.pi * k * r / q) * g[lo, hi]
            raw[k] = acc
    else:
        starts = np.arange(n_seg) * hop
        for k in range(n_alpha):
            lo = (c - k // 2) % n_fft
            hi = (c + (k - k // 2)) % n_fft
            ph = np.exp(-2j * np.pi * k * starts / n_fft)
            raw[k] = ph @ (X[:, hi] * X[:, lo].conj())
    mag = np.abs(raw) / norm
    peak = float(mag.max())
    if not peak > 0:
        raise DegenerateSignalError("cyclic spectrum is identically zero")
    return CyclicSpectrumGrid(mag / peak, fs / n_fft, fs / n_fft, peak)


def cyclic_features(grid: CyclicSpectrumGrid, carrier_hz: float) -> FeatureVector:
    g = np.asarray(grid.magnitudes, dtype=float)
    peak = float(g.max()) if g.size else 0.0
    if g.ndim != 2 or g.shape[0] < 2 or not peak > 0:
        raise DegenerateSignalError("degenerate cyclic spectrum grid")
    g = g / peak
    j0 = grid.freq_index(0.0)
    jfc = grid.freq_index(carrier_hz)
    k2 = grid.alpha_index(2.0 * carrier_hz)
    s0 = g[:, j0]
    sfc = g[:, jfc]
    psd_max = float(g[0].max())
    beta = float(s0[1:].max() / psd_max) if psd_max > 0 else 0.0
    values = [float(np.var(s0)), float(np.var(sfc)), float(np.mean(s0)), beta,
              float(np.mean(g[k2] ** 2))]
    return FeatureVector.of(FeatureFamily.CYC, CYC_NAMES, values)
