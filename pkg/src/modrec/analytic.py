"""Analytic signal and instantaneous amplitude / phase / frequency sequences."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import DomainError, EmptyInputError
from .sigsynth import RealSignal

#: fraction of samples dropped at each end by the feature extractors
EDGE_TRIM = 0.02


@dataclass(frozen=True)
class ComplexSignal:
    samples: np.ndarray
    sample_hz: float

    def __len__(self):
        return self.samples.size


@dataclass(frozen=True)
class InstSeries:
    amplitude: np.ndarray
    wrapped_phase: np.ndarray
    sample_hz: float
    unwrapped_phase: np.ndarray | None = None
    nonlinear_phase: np.ndarray | None = None
    inst_freq: np.ndarray | None = None

    def __len__(self):
        return self.amplitude.size

    def trimmed(self, fraction: float = EDGE_TRIM) -> "InstSeries":
        """Drop ``fraction`` of the samples at both ends of every sequence."""
        n = self.amplitude.size
        k = int(math.floor(fraction * n))
        if k == 0:
            return self
        sl = slice(k, n - k)

        def cut(a):
            return None if a is None else a[sl]

        # inst_freq is one shorter; take the same start so index n still pairs with n
        freq = None if self.inst_freq is None else self.inst_freq[k : n - k - 1]
        return InstSeries(
            self.amplitude[sl], self.wrapped_phase[sl], self.sample_hz,
            cut(self.unwrapped_phase), cut(self.nonlinear_phase), freq,
        )

    def to_text(self) -> str:
        """Multi-column dump: index, a, wrapped, unwrapped, nonlinear, f."""
        n = len(self)
        cols = [np.arange(n, dtype=float), self.amplitude, self.wrapped_phase]
        for extra in (self.unwrapped_phase, self.nonlinear_phase):
            cols.append(np.full(n, np.nan) if extra is None else extra)
        freq = np.full(n, np.nan)
        if self.inst_freq is not None:
            freq[: self.inst_freq.size] = self.inst_freq
        cols.append(freq)
        lines = ["# index a phase_wrapped phase_unwrapped phase_nl freq_hz"]
        for row in np.column_stack(cols):
            lines.append(" ".join(f"{v:.16e}" for v in row))
        return "\n".join(lines) + "\n"


def analytic_signal(sig: RealSignal) -> ComplexSignal:
    """``u + j H{u}`` by the frequency-domain method (DC and Nyquist bins kept once)."""
    u = sig.samples if isinstance(sig, RealSignal) else np.asarray(sig, dtype=float)
    fs = sig.sample_hz if isinstance(sig, RealSignal) else 1.0
    n = u.size
    if n < 4:
        raise DomainError("analytic signal needs at least 4 samples")
    spec = np.fft.fft(u)
    h = np.zeros(n)
    h[0] = 1.0
    if n % 2 == 0:
        h[n // 2] = 1.0
        h[1 : n // 2] = 2.0
    else:
        h[1 : (n + 1) // 2] = 2.0
    v = np.fft.ifft(spec * h).imag
    # real part is the input itself, not its FFT round trip
    return ComplexSignal(u + 1j * v, fs)


def instantaneous(z: ComplexSignal) -> InstSeries:
    s = z.samples if isinstance(z, ComplexSignal) else np.asarray(z, dtype=complex)
    if s.size == 0:
        raise EmptyInputError("empty analytic signal")
    fs = z.sample_hz if isinstance(z, ComplexSignal) else 1.0
    return InstSeries(np.abs(s), np.angle(s), fs)


def unwrap_phase(wrapped) -> np.ndarray:
    """Add the cumulative +/-2pi correction sequence at every jump larger than pi."""
    return _core.phase_correction(np.asarray(wrapped, dtype=float))


def nonlinear_phase(unwrapped, carrier_hz: float, sample_hz: float) -> np.ndarray:
    if not sample_hz > 0:
        raise DomainError("sample_hz must be positive")
    phi = np.asarray(unwrapped, dtype=float)
    if carrier_hz == 0:
        return phi.copy()
    return phi - 2.0 * np.pi * carrier_hz / sample_hz * np.arange(phi.size)


def inst_frequency(unwrapped, sample_hz: float) -> np.ndarray:
    phi = np.asarray(unwrapped, dtype=float)
    if phi.size < 2:
        raise DomainError("instantaneous frequency needs at least 2 phase samples")
    return sample_hz / (2.0 * np.pi) * np.diff(phi)


def inst_series(sig: RealSignal, carrier_hz: float) -> InstSeries:
    """Full instantaneous description of a passband signal."""
    z = analytic_signal(sig)
    base = instantaneous(z)
    phi = unwrap_phase(base.wrapped_phase)
    return InstSeries(
        base.amplitude,
        base.wrapped_phase,
        z.sample_hz,
        phi,
        nonlinear_phase(phi, carrier_hz, z.sample_hz),
        inst_frequency(phi, z.sample_hz),
    )


def downconvert(z: ComplexSignal, carrier_hz: float) -> ComplexSignal:
    """Remove the carrier from an analytic signal: ``z * exp(-j 2 pi fc n / fs)``."""
    n = np.arange(len(z))
    return ComplexSignal(z.samples * np.exp(-2j * np.pi * carrier_hz * n / z.sample_hz), z.sample_hz)
