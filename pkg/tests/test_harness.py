import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from modrec.errors import DomainError, TrainingError
from modrec.features import FeatureFamily
from modrec.harness import (CLASS_SETS, AccuracyCurve, CurvePoint, Dataset, ExperimentConfig, family_subsets,
                            feature_search, generate_dataset, parse_classes, parse_snr_grid, run_curve, trial_seed)
from modrec.fileio import read_csv
from modrec.sigsynth import SignalConfig

SMALL = SignalConfig(n_symbols=40)


def small_cfg(**kw):
    base = dict(classes="single6", snr_db=(10.0,), trials=10, signal=SMALL, seed=3)
    base.update(kw)
    return ExperimentConfig(**base)


@pytest.fixture(scope="module")
def small_data():
    return generate_dataset(small_cfg())


def test_dataset_shape(small_data):
    assert small_data.X.shape == (60, 22)
    assert sum(small_data.rejects.values()) == 0
    assert sorted(set(small_data.labels)) == sorted(CLASS_SETS["single6"])


def test_dataset_csv_is_reproducible(small_data, tmp_path):
    again = generate_dataset(small_cfg())
    assert small_data.to_csv() == again.to_csv()
    p = tmp_path / "d.csv"
    small_data.to_csv(p)
    header, rows = read_csv(p)
    assert header[:3] == ["label", "snr_db", "trial"] and len(header) == 25
    back = Dataset.from_rows(header, rows)
    assert np.array_equal(back.X, small_data.X) and back.labels == small_data.labels


def test_defaults_follow_simulation_protocol():
    cfg = ExperimentConfig()
    s = cfg.signal
    assert (s.carrier_hz, s.sample_hz, s.symbol_baud, s.n_symbols) == (70.0, 400.0, 2.0, 1000)
    assert cfg.train_fraction == 0.7 and cfg.trials == 50
    assert cfg.snr_db[0] == -10 and cfg.snr_db[-1] == 20 and len(cfg.snr_db) == 16
    assert not cfg.pooled


def test_config_validation():
    for bad in (dict(trials=0), dict(train_fraction=1.0), dict(train_fraction=0.0), dict(snr_db=()),
                dict(algo="knn"), dict(classes="PSK2,PSK2")):
        with pytest.raises(DomainError):
            small_cfg(**bad)


def test_oracle_classifier_scores_one(small_data):
    truth = {row.tobytes(): lab for row, lab in zip(small_data.X, small_data.labels)}

    def fit(X, y):
        return lambda Z: [truth[r.tobytes()] for r in Z]

    curve = run_curve(small_cfg(), small_data, fit)
    assert all(p.accuracy == 1.0 for p in curve.points)
    assert all(p.trials == 3 for p in curve.points)


def test_train_and_test_rows_are_disjoint(small_data):
    cfg = small_cfg()
    trial_of = {row.tobytes(): t for row, t in zip(small_data.X, small_data.trial)}
    seen = {}

    def fit(X, y):
        seen["train"] = {trial_of[r.tobytes()] for r in X}

        def predict(Z):
            seen["test"] = {trial_of[r.tobytes()] for r in Z}
            return ["ASK2"] * len(Z)

        return predict

    run_curve(cfg, small_data, fit)
    assert seen["train"] == set(range(cfg.n_train)) and seen["test"] == set(range(cfg.n_train, cfg.trials))


def test_seed_tuples_are_distinct():
    seeds = {tuple(trial_seed(0, lab, snr, t).generate_state(4))
             for lab in CLASS_SETS["single6"] for snr in (-10.0, 0.0, math.inf) for t in range(20)}
    assert len(seeds) == 6 * 3 * 20


def test_degenerate_splits_raise(small_data):
    with pytest.raises(TrainingError):
        run_curve(small_cfg(trials=1))
    missing = small_data.select(~((np.array(small_data.labels) == "PSK4") & (small_data.trial < 7)))
    with pytest.raises(TrainingError):
        run_curve(small_cfg(), missing)


def test_curve_counts_and_csv(small_data):
    curve = run_curve(small_cfg(algo="tree"), small_data)
    for p in curve.points:
        assert 0.0 <= p.accuracy <= 1.0 and p.trials + p.rejects == 3
    text = curve.to_csv()
    lines = text.strip().splitlines()
    assert lines[0] == "snr_db,class,trials,correct,accuracy,rejects"
    assert len(lines) == 1 + 7 and lines[-1].split(",")[1] == "ALL"
    assert "<polyline" in curve.to_svg()


def test_pooled_training_runs(small_data):
    curve = run_curve(small_cfg(pooled=True), small_data)
    assert len(curve.points) == 6


def test_curve_overall_accuracy():
    pts = [CurvePoint(0.0, "a", 10, 7), CurvePoint(0.0, "b", 10, 9), CurvePoint(5.0, "a", 10, 10),
           CurvePoint(5.0, "b", 10, 10)]
    c = AccuracyCurve("svm", ("a", "b"), pts)
    assert c.overall(0.0) == pytest.approx(0.8) and c.overall_series() == [pytest.approx(0.8), 1.0]


def test_alrt_curve():
    cfg = ExperimentConfig(classes="mixedpsk6", snr_db=(20.0,), trials=5, signal=SMALL, algo="alrt")
    curve = run_curve(cfg)
    assert len(curve.points) == 6 and all(p.trials == 5 for p in curve.points)


def test_family_subsets():
    subs = family_subsets()
    assert len(subs) == 15 and len(set(subs)) == 15
    assert frozenset(FeatureFamily) in subs


def test_feature_search(small_data):
    rep = feature_search(small_cfg(), small_data)
    assert len(rep.entries) == 15
    assert [e.rank for e in rep.entries] == list(range(1, 16))
    full = rep.entry("inst,hoc,cyc,wav")
    assert full.n_features == 22
    best = rep.best
    for e in rep.entries:
        assert (e.mean_accuracy, -e.n_features) <= (best.mean_accuracy, -best.n_features)
    singles = [e for e in rep.entries if len(e.families) == 1]
    beaten = {e.name for e in singles if any(a > b for a, b in zip(e.per_snr, best.per_snr))}
    assert set(best.dominated_by) == beaten
    assert rep.to_csv().splitlines()[0].startswith("rank,families,n_features,mean_accuracy,acc_")


@pytest.mark.parametrize("text,expect", [("0:20:4", (0, 4, 8, 12, 16, 20)), ("-10:-6:2", (-10, -8, -6)),
                                         ("5", (5,)), ("1,3,inf", (1, 3, math.inf)), ("0:1:0.5", (0, 0.5, 1))])
def test_snr_grid(text, expect):
    assert parse_snr_grid(text) == tuple(float(v) for v in expect)


@given(st.integers(-30, 30), st.integers(0, 40), st.integers(1, 8))
def test_snr_grid_range_property(a, span, step):
    g = parse_snr_grid(f"{a}:{a + span}:{step}")
    assert g[0] == a and g[-1] <= a + span and len(g) == span // step + 1
    assert np.allclose(np.diff(g), step)


def test_bad_grids_and_classes():
    for bad in ("5:1", "0:4:0", "", "1:2:3:4"):
        with pytest.raises(DomainError):
            parse_snr_grid(bad)
    assert parse_classes("psk2, psk4+fsk4") == ("PSK2", "2PSK4+FSK4")
    assert parse_classes("2PSK4+FSK4") == parse_classes("PSK4+FSK4")
    with pytest.raises(DomainError):
        parse_classes("QAM16")


def test_accuracy_at_20db_not_below_minus_10db():
    cfg = ExperimentConfig(snr_db=(-10.0, 20.0), trials=50)
    data = generate_dataset(cfg)
    for algo in ("svm", "tree"):
        s = run_curve(cfg.replace(algo=algo), data).overall_series()
        assert s[1] >= s[0], algo
    s = run_curve(cfg.replace(classes="mixedpsk6", algo="alrt")).overall_series()
    assert s[1] >= s[0]
