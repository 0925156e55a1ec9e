"""Feature families (instantaneous, HOC, cyclic, wavelet) and the extraction pipeline."""
from __future__ import annotations

from ..analytic import EDGE_TRIM, analytic_signal, downconvert, inst_frequency, nonlinear_phase, unwrap_phase
from ..analytic import InstSeries, instantaneous
from ..sigsynth import RealSignal, SignalConfig
from .cyclic import CYC_NAMES, CyclicSpectrumGrid, cyclic_features, cyclic_spectrum
from .hoc import HOC_NAMES, cumulants, hoc_features
from .inst import INST_NAMES, inst_features
from .vector import CANONICAL_ORDER, FeatureFamily, FeatureVector, assemble
from .wavelet import WAV_NAMES, WaveletBands, wavelet_decompose, wavelet_features, wavelet_reconstruct

ALL_FAMILIES = frozenset(FeatureFamily)
FAMILY_NAMES = {
    FeatureFamily.INST: INST_NAMES,
    FeatureFamily.HOC: HOC_NAMES,
    FeatureFamily.CYC: CYC_NAMES,
    FeatureFamily.WAV: WAV_NAMES,
}
AMPLITUDE_GATE = 1.0


def feature_names(families=ALL_FAMILIES) -> tuple:
    families = FeatureFamily.parse_set(families) if not isinstance(families, frozenset) else families
    return tuple(n for fam in CANONICAL_ORDER if fam in families for n in FAMILY_NAMES[fam])


def baseband_samples(z, carrier_hz: float, trim: float = EDGE_TRIM):
    """Carrier-removed analytic samples with the transform edges dropped."""
    bb = downconvert(z, carrier_hz).samples
    k = int(trim * bb.size)
    return bb[k : bb.size - k] if k else bb


def extract(sig: RealSignal, cfg: SignalConfig, families=ALL_FAMILIES, n_fft: int | None = None) -> FeatureVector:
    """Compute the selected feature families of one received waveform.

    ``n_fft`` defaults to the samples per symbol, which puts every multiple of
    the symbol rate (and so the carrier lines) on the cycle-frequency grid.
    """
    families = FeatureFamily.parse_set(families) if not isinstance(families, frozenset) else families
    parts = []
    z = None
    if FeatureFamily.INST in families or FeatureFamily.HOC in families:
        z = analytic_signal(sig)
    if FeatureFamily.INST in families:
        base = instantaneous(z)
        phi = unwrap_phase(base.wrapped_phase)
        series = InstSeries(base.amplitude, base.wrapped_phase, z.sample_hz, phi,
                            nonlinear_phase(phi, cfg.carrier_hz, z.sample_hz),
                            inst_frequency(phi, z.sample_hz))
        parts.append(inst_features(series, AMPLITUDE_GATE, cfg.symbol_baud))
    if FeatureFamily.HOC in families:
        parts.append(hoc_features(baseband_samples(z, cfg.carrier_hz))[0])
    if FeatureFamily.CYC in families:
        grid = cyclic_spectrum(sig, n_fft=n_fft or cfg.samples_per_symbol, overlap=0.5)
        parts.append(cyclic_features(grid, cfg.carrier_hz))
    if FeatureFamily.WAV in families:
        parts.append(wavelet_features(wavelet_decompose(sig, 5)))
    return assemble(families, parts)


__all__ = [
    "ALL_FAMILIES", "CANONICAL_ORDER", "CyclicSpectrumGrid", "FeatureFamily", "FeatureVector",
    "WaveletBands", "assemble", "baseband_samples", "cumulants", "cyclic_features", "cyclic_spectrum",
    "extract", "feature_names", "hoc_features", "inst_features", "wavelet_decompose", "wavelet_features",
    "wavelet_reconstruct",
]
