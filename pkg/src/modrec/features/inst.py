"""Seven instantaneous amplitude / phase / frequency features."""
from __future__ import annotations

import math

import numpy as np

from ..analytic import EDGE_TRIM, InstSeries, inst_frequency, unwrap_phase
from ..errors import DegenerateSignalError, DomainError, InsufficientSamplesError
from .vector import FeatureFamily, FeatureVector

INST_NAMES = ("gamma_max", "sigma_aa", "sigma_ap", "sigma_dp", "sigma_af", "amp_std", "psd_peak")
MIN_GATED = 10


def _std(mean_sq: float, mean: float) -> float:
    return math.sqrt(max(mean_sq - mean * mean, 0.0))


def gated_count(series: InstSeries, threshold: float) -> int:
    a = series.amplitude
    return int(np.count_nonzero(a / a.mean() > threshold))


def inst_features(series: InstSeries, threshold: float = 1.0, symbol_baud: float = 2.0,
                  trim: float = EDGE_TRIM) -> FeatureVector:
    """Instantaneous features of an (untrimmed) :class:`InstSeries`.

    ``threshold`` gates phase and frequency statistics on the normalized
    amplitude ``A_n = a / mean(a)``; ``symbol_baud`` normalizes frequency.
    """
    if not threshold > 0:
        raise DomainError("amplitude threshold must be positive")
    if series.unwrapped_phase is None:
        phi = unwrap_phase(series.wrapped_phase)
        series = InstSeries(series.amplitude, series.wrapped_phase, series.sample_hz, phi,
                            phi, inst_frequency(phi, series.sample_hz))
    s = series.trimmed(trim)
    a = s.amplitude
    n = a.size
    mu_a = float(a.mean())
    if not mu_a > 0:
        raise DegenerateSignalError("zero instantaneous amplitude")
    a_n = a / mu_a
    a_cn = a_n - 1.0

    gamma_max = float(np.max(np.abs(np.fft.fft(a_cn)) ** 2) / n)
    sigma_aa = _std(float(np.mean(a_cn * a_cn)), float(np.mean(a_cn)))

    gate = a_n > threshold
    n_c = int(np.count_nonzero(gate))
    if n_c < MIN_GATED:
        raise InsufficientSamplesError(f"only {n_c} samples exceed the amplitude gate")
    phi_nl = s.nonlinear_phase[gate]
    msq = float(np.mean(phi_nl * phi_nl))
    sigma_ap = _std(msq, float(np.mean(np.abs(phi_nl))))
    sigma_dp = _std(msq, float(np.mean(phi_nl)))

    f = s.inst_freq
    f_n = (f - f.mean()) / symbol_baud
    f_gate = f_n[gate[: f.size]]
    if f_gate.size == 0:
        raise InsufficientSamplesError("no gated frequency samples")
    sigma_af = _std(float(np.mean(f_gate * f_gate)), float(np.mean(f_gate)))

    amp_std = float(np.std(a, ddof=1)) if n > 1 else 0.0

    spectrum = np.abs(np.fft.fft(a * np.cos(s.wrapped_phase)))
    total = float(spectrum.sum())
    psd_peak = float(spectrum.max() / total) if total > 0 else 0.0

    return FeatureVector.of(
        FeatureFamily.INST, INST_NAMES,
        [gamma_max, sigma_aa, sigma_ap, sigma_dp, sigma_af, amp_std, psd_peak],
    )
