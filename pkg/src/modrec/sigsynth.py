"""Passband MASK / MPSK / MFSK synthesis, AWGN and 2:1 cochannel mixing.

All randomness comes from an explicit :class:`numpy.random.Generator`, so a
waveform is a pure function of (scheme, config, seed).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateSignalError, DomainError, EmptyInputError, InvalidMixError


class Family(enum.Enum):
    AMPLITUDE = "amplitude"
    PHASE = "phase"
    FREQUENCY = "frequency"


class ModScheme(enum.Enum):
    ASK2 = ("ASK2", 2, Family.AMPLITUDE)
    ASK4 = ("ASK4", 4, Family.AMPLITUDE)
    PSK2 = ("PSK2", 2, Family.PHASE)
    PSK4 = ("PSK4", 4, Family.PHASE)
    PSK8 = ("PSK8", 8, Family.PHASE)
    FSK2 = ("FSK2", 2, Family.FREQUENCY)
    FSK4 = ("FSK4", 4, Family.FREQUENCY)

    def __init__(self, label, order, family):
        self.label = label
        self.order = order
        self.family = family

    def __str__(self):
        return self.label

    @classmethod
    def parse(cls, name: str) -> "ModScheme":
        key = name.strip().upper()
        if key in _ALIASES:
            return cls[_ALIASES[key]]
        try:
            return cls[key]
        except KeyError:
            raise DomainError(f"unknown modulation scheme {name!r}") from None


_ALIASES = {
    "2ASK": "ASK2", "OOK": "ASK2", "4ASK": "ASK4",
    "BPSK": "PSK2", "2PSK": "PSK2", "QPSK": "PSK4", "4PSK": "PSK4", "8PSK": "PSK8",
    "2FSK": "FSK2", "BFSK": "FSK2", "4FSK": "FSK4",
}


@dataclass(frozen=True)
class SignalConfig:
    """Waveform parameters. Defaults reproduce the 70 Hz / 400 Hz / 2 baud protocol."""

    carrier_hz: float = 70.0
    sample_hz: float = 400.0
    symbol_baud: float = 2.0
    n_symbols: int = 1000
    initial_phase_rad: float = 0.0
    rng_seed: int = 0
    # tone spacing in multiples of the symbol rate
    fsk_spacing: float = 2.0

    def __post_init__(self):
        if not self.sample_hz > 2 * self.carrier_hz:
            raise DomainError("sample_hz must exceed twice carrier_hz")
        if self.symbol_baud <= 0:
            raise DomainError("symbol_baud must be positive")
        ratio = self.sample_hz / self.symbol_baud
        if ratio < 1 or abs(ratio - round(ratio)) > 1e-9:
            raise DomainError("sample_hz / symbol_baud must be a positive integer")
        if self.n_symbols < 1:
            raise DomainError("n_symbols must be >= 1")

    @property
    def samples_per_symbol(self) -> int:
        return int(round(self.sample_hz / self.symbol_baud))

    @property
    def n_samples(self) -> int:
        return self.n_symbols * self.samples_per_symbol

    def replace(self, **changes) -> "SignalConfig":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass(frozen=True)
class RealSignal:
    samples: np.ndarray
    sample_hz: float

    def __post_init__(self):
        arr = np.asarray(self.samples, dtype=float)
        if not np.all(np.isfinite(arr)):
            raise DomainError("signal contains non-finite samples")
        object.__setattr__(self, "samples", arr)

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class MixSpec:
    strong: ModScheme
    weak: ModScheme
    power_ratio: float = 2.0

    def __post_init__(self):
        if self.strong == self.weak:
            raise InvalidMixError("cochannel components must use different schemes")
        if not self.power_ratio > 0:
            raise InvalidMixError("power_ratio must be positive")

    @property
    def label(self) -> str:
        return f"2{self.strong.label}+{self.weak.label}"

    @property
    def gains(self) -> tuple[float, float]:
        r = self.power_ratio
        return math.sqrt(r / (1.0 + r)), math.sqrt(1.0 / (1.0 + r))

    @classmethod
    def parse(cls, text: str) -> "MixSpec":
        parts = text.split("+")
        if len(parts) != 2:
            raise InvalidMixError(f"mix must look like STRONG+WEAK, got {text!r}")
        strong, weak = parts
        strong = strong.strip()
        if strong.startswith("2") and strong[1:2].isalpha():
            strong = strong[1:]
        return cls(ModScheme.parse(strong), ModScheme.parse(weak))


@dataclass(frozen=True)
class MixedSignal:
    """A noiseless cochannel mix together with its already-scaled components."""

    signal: RealSignal
    strong: RealSignal
    weak: RealSignal
    label: str
    symbols: tuple = field(default=(), compare=False)


def draw_symbols(scheme: ModScheme, n: int, rng: np.random.Generator) -> np.ndarray:
    if n < 1:
        raise EmptyInputError("need at least one symbol")
    return rng.integers(0, scheme.order, size=n)


def psk_phases(order: int) -> np.ndarray:
    return 2.0 * np.pi * np.arange(order) / order


def fsk_offsets(order: int, symbol_baud: float, spacing: float = 2.0) -> np.ndarray:
    """Tone offsets from the carrier, symmetric about it, ``spacing * Rs`` apart."""
    k = np.arange(order)
    return (2 * k - (order - 1)) * 0.5 * spacing * symbol_baud


def modulate(scheme: ModScheme, symbols, cfg: SignalConfig) -> RealSignal:
    """Key a carrier with rectangular pulses and scale the result to unit mean power."""
    symbols = np.asarray(symbols)
    if symbols.size == 0:
        raise EmptyInputError("no symbols to modulate")
    if symbols.dtype.kind not in "iu" and not np.all(symbols == np.round(symbols)):
        raise DomainError("symbols must be integers")
    symbols = symbols.astype(np.int64)
    if symbols.min() < 0 or symbols.max() >= scheme.order:
        raise DomainError(f"symbol outside the {scheme.order}-ary alphabet of {scheme}")

    sps = cfg.samples_per_symbol
    n = np.arange(symbols.size * sps)
    wt = 2.0 * np.pi * cfg.carrier_hz * n / cfg.sample_hz + cfg.initial_phase_rad
    per_sample = np.repeat(symbols, sps)

    if scheme.family is Family.AMPLITUDE:
        x = per_sample.astype(float) * np.cos(wt)
    elif scheme.family is Family.PHASE:
        x = np.cos(wt + psk_phases(scheme.order)[per_sample])
    else:
        freq = fsk_offsets(scheme.order, cfg.symbol_baud, cfg.fsk_spacing)[per_sample]
        # phase-continuous: deviation phase accumulates sample by sample
        dev = np.empty(freq.size)
        dev[0] = 0.0
        np.cumsum(2.0 * np.pi * freq[:-1] / cfg.sample_hz, out=dev[1:])
        x = np.cos(wt + dev)

    power = float(np.mean(x * x))
    if power == 0.0:
        raise DegenerateSignalError("modulated waveform has zero power")
    return RealSignal(x / math.sqrt(power), cfg.sample_hz)


def signal_power(sig: RealSignal) -> float:
    x = sig.samples if isinstance(sig, RealSignal) else np.asarray(sig)
    if x.size == 0:
        raise EmptyInputError("empty signal")
    return float(np.mean(np.abs(x) ** 2))


def awgn(sig: RealSignal, snr_db: float, rng: np.random.Generator) -> RealSignal:
    """Add white Gaussian noise at ``snr_db`` relative to the measured signal power.

    ``snr_db = inf`` returns the input unchanged.
    """
    if len(sig) == 0:
        raise EmptyInputError("empty signal")
    if math.isinf(snr_db) and snr_db > 0:
        return RealSignal(sig.samples.copy(), sig.sample_hz)
    power = signal_power(sig)
    if power == 0.0:
        raise DegenerateSignalError("reference signal has zero power")
    noise_var = power / 10.0 ** (snr_db / 10.0)
    noise = rng.standard_normal(len(sig)) * math.sqrt(noise_var)
    return RealSignal(sig.samples + noise, sig.sample_hz)


def synthesize(scheme: ModScheme, cfg: SignalConfig, rng: np.random.Generator) -> RealSignal:
    return modulate(scheme, draw_symbols(scheme, cfg.n_symbols, rng), cfg)


def mix_components(spec: MixSpec, cfg: SignalConfig, rng: np.random.Generator) -> MixedSignal:
    g_strong, g_weak = spec.gains
    sym_s = draw_symbols(spec.strong, cfg.n_symbols, rng)
    sym_w = draw_symbols(spec.weak, cfg.n_symbols, rng)
    xs = g_strong * modulate(spec.strong, sym_s, cfg).samples
    xw = g_weak * modulate(spec.weak, sym_w, cfg).samples
    # one common factor removes the random cross term from the total power
    # without touching the 2:1 component ratio
    c = 1.0 / math.sqrt(float(np.mean((xs + xw) ** 2)))
    strong = RealSignal(c * xs, cfg.sample_hz)
    weak = RealSignal(c * xw, cfg.sample_hz)
    mixed = RealSignal(strong.samples + weak.samples, cfg.sample_hz)
    return MixedSignal(mixed, strong, weak, spec.label, (sym_s, sym_w))


def mix_cochannel(spec: MixSpec, cfg: SignalConfig, rng: np.random.Generator) -> tuple[RealSignal, str]:
    """Noiseless ``sqrt(2/3) s_strong + sqrt(1/3) s_weak`` with independent symbol streams.

    The sum is rescaled to unit measured power; both components share the factor.
    """
    mixed = mix_components(spec, cfg, rng)
    return mixed.signal, mixed.label
