import numpy as np
import pytest

from modrec.errors import DomainError, EmptyInputError
from modrec.features import (ALL_FAMILIES, FeatureFamily, FeatureVector, assemble, extract, feature_names,
                             hoc_features)
from modrec.sigsynth import MixSpec, ModScheme, SignalConfig, awgn, mix_cochannel, synthesize

CFG = SignalConfig(n_symbols=100)


def _parts():
    sig = awgn(synthesize(ModScheme.PSK4, CFG, np.random.default_rng(0)), 10.0, np.random.default_rng(1))
    full = extract(sig, CFG)
    return sig, full


def test_hoc_only_is_five_dims():
    sig, _ = _parts()
    fv = extract(sig, CFG, {FeatureFamily.HOC})
    assert fv.values.size == 5 and fv.families() == {FeatureFamily.HOC}


def test_all_families_22_dims_in_canonical_order():
    _, full = _parts()
    assert full.values.size == 22
    assert full.names == feature_names(ALL_FAMILIES)
    assert [g for g in full.groups][:7] == [FeatureFamily.INST] * 7
    assert full.groups[-1] == FeatureFamily.WAV


def test_empty_selection_rejected():
    with pytest.raises((DomainError, EmptyInputError)):
        assemble(set(), [])


def test_missing_family_rejected():
    x = np.exp(1j * np.arange(64) * 0.7)
    hoc = hoc_features(x)[0]
    with pytest.raises(DomainError):
        assemble({FeatureFamily.HOC, FeatureFamily.WAV}, [hoc])


def test_assemble_orders_parts():
    _, full = _parts()
    parts = []
    for fam in reversed(list(FeatureFamily)):
        idx = [i for i, g in enumerate(full.groups) if g == fam]
        parts.append(FeatureVector.of(fam, [full.names[i] for i in idx], full.values[idx]))
    again = assemble(ALL_FAMILIES, parts)
    assert again.names == full.names and np.array_equal(again.values, full.values)


def test_vector_invariants():
    with pytest.raises(DomainError):
        FeatureVector.of(FeatureFamily.HOC, ("a", "a"), [1.0, 2.0])
    with pytest.raises(DomainError):
        FeatureVector.of(FeatureFamily.HOC, ("a", "b"), [1.0, np.nan])


def test_parse_set():
    assert FeatureFamily.parse_set("inst,HOC") == {FeatureFamily.INST, FeatureFamily.HOC}
    with pytest.raises(DomainError):
        FeatureFamily.parse_set("inst,fancy")


def test_mixed_signal_extraction_deterministic():
    def run():
        rng = np.random.default_rng(8)
        sig, _ = mix_cochannel(MixSpec(ModScheme.PSK4, ModScheme.FSK4), CFG, rng)
        return extract(awgn(sig, 6.0, rng), CFG).values

    a, b = run(), run()
    assert np.array_equal(a, b) and np.all(np.isfinite(a))
