"""Average-likelihood classification at the symbol rate.

Received passband waveforms are reduced to one complex value per symbol by
an integrate-and-dump matched filter. Each hypothesis is a finite
constellation with equiprobable points; cochannel mixes become a single
composite constellation of all strong/weak point sums.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import DomainError, EmptyInputError, InvalidMixError
from .sigsynth import Family, MixSpec, ModScheme, RealSignal, SignalConfig, psk_phases

#: baseband amplitude of a unit-power real passband carrier
UNIT_AMPLITUDE = math.sqrt(2.0)
#: noise variance used when the configured SNR is infinite
NOISE_FLOOR = 1e-12
MERGE_DISTANCE = 1e-9


@dataclass(frozen=True)
class Hypothesis:
    label: str
    points: np.ndarray  # complex, unit mean power
    weights: np.ndarray  # point priors, sum to one

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=complex)
        w = np.asarray(self.weights, dtype=float)
        if pts.size == 0 or pts.shape != w.shape:
            raise DomainError("constellation needs matching non-empty points and weights")
        if abs(w.sum() - 1.0) > 1e-12:
            raise DomainError("constellation weights must sum to 1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)

    @property
    def power(self) -> float:
        return float(np.sum(self.weights * np.abs(self.points) ** 2))

    def __len__(self):
        return self.points.size


@dataclass(frozen=True)
class SymbolObservations:
    r: np.ndarray
    noise_var: float
    amplitude: float = UNIT_AMPLITUDE
    phase_rad: float = 0.0

    def __post_init__(self):
        r = np.asarray(self.r, dtype=complex)
        if r.size == 0:
            raise EmptyInputError("no symbol observations")
        if not self.noise_var > 0:
            raise DomainError("noise variance must be positive")
        object.__setattr__(self, "r", r)

    def __len__(self):
        return self.r.size


def scheme_constellation(scheme: ModScheme) -> np.ndarray:
    """Unit-power symbol-rate points of a linear scheme (FSK has none)."""
    if scheme.family is Family.PHASE:
        return np.exp(1j * psk_phases(scheme.order))
    if scheme.family is Family.AMPLITUDE:
        levels = np.arange(scheme.order, dtype=float)
        return (levels / math.sqrt(np.mean(levels**2))).astype(complex)
    raise DomainError(f"{scheme} has no symbol-rate constellation")


def _merge(points: np.ndarray, weights: np.ndarray):
    kept_p: list = []
    kept_w: list = []
    for p, w in zip(points, weights):
        for i, q in enumerate(kept_p):
            if abs(p - q) < MERGE_DISTANCE:
                kept_w[i] += w
                break
        else:
            kept_p.append(p)
            kept_w.append(w)
    return np.array(kept_p), np.array(kept_w)


def _normalized(points: np.ndarray, weights: np.ndarray):
    power = float(np.sum(weights * np.abs(points) ** 2))
    if power == 0.0:
        raise DomainError("constellation has zero power")
    return points / math.sqrt(power), weights


def single_hypothesis(scheme: ModScheme) -> Hypothesis:
    pts = scheme_constellation(scheme)
    w = np.full(pts.size, 1.0 / pts.size)
    return Hypothesis(scheme.label, *_normalized(pts, w))


def composite_constellation(spec: MixSpec) -> Hypothesis:
    """All sums ``g_s*s1 + g_w*s2``, near-coincident points merged, rescaled to unit power."""
    if not isinstance(spec, MixSpec):
        raise InvalidMixError("composite constellation needs a MixSpec")
    gs, gw = spec.gains
    a = scheme_constellation(spec.strong)
    b = scheme_constellation(spec.weak)
    pts = (gs * a[:, None] + gw * b[None, :]).ravel()
    w = np.full(pts.size, 1.0 / pts.size)
    pts, w = _merge(pts, w)
    pts, w = _normalized(pts, w)
    return Hypothesis(spec.label, pts, w / w.sum())


def hypothesis_for(label: str) -> Hypothesis:
    if "+" in label:
        return composite_constellation(MixSpec.parse(label))
    return single_hypothesis(ModScheme.parse(label))


def symbol_noise_var(snr_db: float, samples_per_symbol: int, signal_power: float = 1.0) -> float:
    """Variance of the complex matched-filter noise for a unit-power passband signal."""
    if math.isinf(snr_db) and snr_db > 0:
        return NOISE_FLOOR
    sample_var = signal_power / 10.0 ** (snr_db / 10.0)
    return max(4.0 * sample_var / samples_per_symbol, NOISE_FLOOR)


def matched_filter_symbols(sig: RealSignal, cfg: SignalConfig, snr_db: float = math.inf) -> SymbolObservations:
    """Downconvert and integrate-and-dump: ``r[n] = 2/T * integral over symbol n of x(t) e^{-j wc t}``."""
    x = sig.samples if isinstance(sig, RealSignal) else np.asarray(sig, dtype=float)
    ratio = cfg.sample_hz / cfg.symbol_baud
    if abs(ratio - round(ratio)) > 1e-9:
        raise DomainError("samples per symbol must be an integer")
    sps = int(round(ratio))
    if x.size < sps:
        raise EmptyInputError("signal shorter than one symbol")
    if x.size % sps:
        raise DomainError("signal length is not a whole number of symbols")
    n = np.arange(x.size)
    lo = x * np.exp(-2j * np.pi * cfg.carrier_hz * n / cfg.sample_hz)
    r = 2.0 * lo.reshape(-1, sps).mean(axis=1)
    return SymbolObservations(r, symbol_noise_var(snr_db, sps), UNIT_AMPLITUDE, cfg.initial_phase_rad)


def _logsumexp_rows(a: np.ndarray) -> np.ndarray:
    m = a.max(axis=1)
    return m + np.log(np.exp(a - m[:, None]).sum(axis=1))


def log_likelihood(obs: SymbolObservations, h: Hypothesis) -> float:
    """``sum_n log( sum_l w_l / (pi s2) exp(-|r_n - A e^{j phi} s_l|^2 / s2) )``."""
    s2 = obs.noise_var
    if not s2 > 0:
        raise DomainError("noise variance must be positive")
    ref = obs.amplitude * np.exp(1j * obs.phase_rad) * h.points
    d2 = np.abs(obs.r[:, None] - ref[None, :]) ** 2
    logits = np.log(h.weights)[None, :] - d2 / s2
    per = _logsumexp_rows(logits) - math.log(math.pi * s2)
    return float(per.sum())


def alrt_scores(obs: SymbolObservations, hypotheses: Sequence[Hypothesis], priors=None) -> np.ndarray:
    if len(hypotheses) == 0:
        raise EmptyInputError("empty hypothesis set")
    if priors is None:
        priors = np.full(len(hypotheses), 1.0 / len(hypotheses))
    priors = np.asarray(priors, dtype=float)
    if priors.shape != (len(hypotheses),) or abs(priors.sum() - 1.0) > 1e-9 or np.any(priors < 0):
        raise DomainError("priors must be non-negative, one per hypothesis, summing to 1")
    with np.errstate(divide="ignore"):
        logp = np.log(priors)
    return logp + np.array([log_likelihood(obs, h) for h in hypotheses])


def alrt_classify(obs: SymbolObservations, hypotheses: Sequence[Hypothesis], priors=None) -> str:
    """Maximum a-posteriori label; the first of several equal scores wins."""
    scores = alrt_scores(obs, hypotheses, priors)
    return hypotheses[int(np.argmax(scores))].label


PSK_FAMILY = (ModScheme.PSK2, ModScheme.PSK4, ModScheme.PSK8)


def mixed_psk_hypotheses() -> list:
    return [composite_constellation(MixSpec(a, b)) for a in PSK_FAMILY for b in PSK_FAMILY if a is not b]


def single_psk_hypotheses() -> list:
    return [single_hypothesis(s) for s in PSK_FAMILY]
