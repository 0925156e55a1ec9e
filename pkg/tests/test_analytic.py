import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from modrec.analytic import (InstSeries, analytic_signal, inst_frequency, inst_series, instantaneous,
                             nonlinear_phase, unwrap_phase, ComplexSignal)
from modrec.errors import DomainError, EmptyInputError
from modrec.sigsynth import ModScheme, RealSignal, SignalConfig, synthesize
from oracles import hilbert_by_convolution, wrap

FS = 400.0


def carrier(f=70.0, n=4000, phase=0.0):
    t = np.arange(n) / FS
    return RealSignal(np.cos(2 * np.pi * f * t + phase), FS)


def test_hilbert_of_cosine_is_sine():
    sig = carrier(10.0)
    z = analytic_signal(sig).samples
    t = np.arange(len(sig)) / FS
    assert np.max(np.abs(z.imag - np.sin(2 * np.pi * 10.0 * t))) < 1e-6
    assert np.array_equal(z.real, sig.samples)


def test_cosine_envelope_is_one():
    a = instantaneous(analytic_signal(carrier())).amplitude
    assert np.max(np.abs(a[10:-10] - 1.0)) < 1e-6


def test_two_tone_matches_convolution_oracle():
    t = np.arange(2000) / FS
    u = np.cos(2 * np.pi * 13.0 * t) + 0.5 * np.sin(2 * np.pi * 71.0 * t + 0.3)
    v = analytic_signal(RealSignal(u, FS)).samples.imag
    assert np.max(np.abs(v - hilbert_by_convolution(u))) < 1e-3


def test_short_input_rejected():
    with pytest.raises(DomainError):
        analytic_signal(RealSignal(np.ones(3), FS))


@pytest.mark.parametrize("z,a,phi", [(1 + 0j, 1.0, 0.0), (0 - 1j, 1.0, -np.pi / 2), (3 + 4j, 5.0, None)])
def test_instantaneous_points(z, a, phi):
    s = instantaneous(ComplexSignal(np.array([z]), 1.0))
    assert s.amplitude[0] == pytest.approx(a)
    if phi is not None:
        assert s.wrapped_phase[0] == pytest.approx(phi)


def test_instantaneous_empty():
    with pytest.raises(EmptyInputError):
        instantaneous(ComplexSignal(np.zeros(0, dtype=complex), 1.0))


def test_unwrap_single_jump():
    out = unwrap_phase([3.0, -3.0])
    assert out[0] == 3.0
    assert out[1] == pytest.approx(2 * np.pi - 3.0)


def test_unwrap_leaves_smooth_ramp():
    ramp = np.arange(0, 3, 0.1) - 1.5
    assert np.array_equal(unwrap_phase(ramp), ramp)


def test_unwrap_linear_ramp_round_trip():
    ramp = np.linspace(0, 50, 5001)
    assert np.max(np.abs(unwrap_phase(wrap(ramp)) - ramp)) < 1e-9


@given(st.floats(-np.pi, np.pi), arrays(float, st.integers(2, 200), elements=st.floats(-3.1, 3.1)))
def test_unwrap_round_trip_property(start, steps):
    phi = start + np.concatenate([[0.0], np.cumsum(steps)])
    out = unwrap_phase(wrap(phi))
    assert np.max(np.abs(out - phi)) < 1e-9
    d = np.diff(out)
    assert np.all((d > -np.pi) & (d <= np.pi))


def test_nonlinear_phase_of_carrier():
    sig = carrier(70.0, phase=0.4)
    s = inst_series(sig, 70.0)
    nl = s.nonlinear_phase[10:-10]
    assert np.max(np.abs(nl - 0.4)) < 1e-6


def test_nonlinear_phase_identity_at_zero_carrier():
    phi = np.linspace(-2, 7, 33)
    assert np.array_equal(nonlinear_phase(phi, 0.0, FS), phi)
    with pytest.raises(DomainError):
        nonlinear_phase(phi, 1.0, 0.0)


def test_bpsk_nonlinear_phase_two_clusters():
    cfg = SignalConfig(n_symbols=50)
    s = inst_series(synthesize(ModScheme.PSK2, cfg, np.random.default_rng(2)), cfg.carrier_hz)
    nl = np.mod(s.nonlinear_phase, 2 * np.pi).reshape(-1, cfg.samples_per_symbol)[2:-2, 50:-50].ravel()
    d0 = np.minimum(np.abs(nl), np.abs(nl - 2 * np.pi))
    dpi = np.abs(nl - np.pi)
    assert np.all(np.minimum(d0, dpi) < 0.05)
    assert (d0 < 0.05).any() and (dpi < 0.05).any()


def test_instantaneous_frequency_of_carrier():
    s = inst_series(carrier(70.0), 70.0)
    assert np.max(np.abs(s.inst_freq[10:-10] - 70.0)) < 1e-6
    assert abs(s.inst_freq.mean() - 70.0) < 0.01
    assert s.inst_freq.size == len(s) - 1


def test_frequency_of_constant_phase():
    assert np.array_equal(inst_frequency(np.full(9, 1.3), FS), np.zeros(8))
    with pytest.raises(DomainError):
        inst_frequency([1.0], FS)


@given(arrays(float, st.integers(4, 300), elements=st.floats(-10, 10)))
def test_envelope_dominates_real_part(u):
    z = analytic_signal(RealSignal(u, FS)).samples
    assert np.all(np.abs(z) >= np.abs(u) - 1e-12)


def test_energy_doubles():
    t = np.arange(8000) / FS
    u = np.cos(2 * np.pi * 31.0 * t) + 0.3 * np.cos(2 * np.pi * 97.0 * t + 1.0)
    z = analytic_signal(RealSignal(u, FS)).samples
    ratio = np.sum(np.abs(z) ** 2) / (2 * np.sum(u * u))
    assert abs(ratio - 1.0) < 0.005


def test_series_arrays_and_trim():
    cfg = SignalConfig(n_symbols=20)
    s = inst_series(synthesize(ModScheme.PSK4, cfg, np.random.default_rng(0)), cfg.carrier_hz)
    n = len(s)
    assert s.wrapped_phase.size == s.unwrapped_phase.size == s.nonlinear_phase.size == n
    assert np.all(np.abs(s.wrapped_phase) <= np.pi) and np.all(s.amplitude >= 0)
    t = s.trimmed(0.02)
    k = int(0.02 * n)
    assert len(t) == n - 2 * k and t.inst_freq.size == len(t) - 1
    assert np.array_equal(t.amplitude, s.amplitude[k : n - k])


def test_series_text_dump():
    s = inst_series(carrier(n=16), 70.0)
    lines = s.to_text().splitlines()
    assert lines[0].startswith("# index a")
    assert len(lines) == 17 and len(lines[1].split()) == 6
    assert isinstance(s, InstSeries)
