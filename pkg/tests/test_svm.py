import math

import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings, strategies as st

from modrec.errors import DimensionMismatchError, TrainingError
from modrec.svm import (fit_scaler, load_svm, ovo_train, rbf_gram, rbf_kernel, save_svm, smo_train)


def kkt_violation(m, X, y):
    """Largest KKT residual of a trained machine over its training set."""
    f = rbf_gram(X, X, m.g) @ (m.alpha * y) + m.bias
    yf = y * f
    a, C = m.alpha, m.C
    eps = 1e-12
    worst = 0.0
    for ai, v in zip(a, yf):
        if ai <= eps * C:
            worst = max(worst, 1 - v)
        elif ai >= C * (1 - eps):
            worst = max(worst, v - 1)
        else:
            worst = max(worst, abs(v - 1))
    return worst


def two_class(n=30, seed=0, gap=2.0):
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.normal(-gap / 2, 1, (n, 2)), rng.normal(gap / 2, 1, (n, 2))])
    y = np.r_[np.ones(n), -np.ones(n)]
    return fit_scaler(X).transform(X), y


def test_scaler_examples():
    s = fit_scaler([[0.0, 5.0, 1.0], [10.0, 5.0, 3.0]])
    assert np.allclose(s.transform([5.0, 5.0, 2.0]), [0.5, 0.0, 0.5])
    assert np.allclose(s.transform([20.0, 7.0, 1.0]), [2.0, 0.0, 0.0])
    with pytest.raises(DimensionMismatchError):
        s.transform([1.0, 2.0])


def test_kernel_value():
    assert rbf_kernel([1.0, 0.0], [0.0, 0.0], 0.1) == pytest.approx(math.exp(-0.1), abs=1e-15)
    assert rbf_kernel([3.0, 4.0], [3.0, 4.0], 7.0) == 1.0


@given(st.integers(2, 40), st.integers(1, 6), st.floats(1e-3, 10), st.integers(0, 10_000))
def test_gram_is_symmetric_psd(n, d, g, seed):
    X = np.random.default_rng(seed).standard_normal((n, d))
    K = rbf_gram(X, X, g)
    assert np.array_equal(K, K.T) and np.all(np.diag(K) == 1.0)
    assert scipy.linalg.eigvalsh(K).min() > -1e-9


def test_two_point_boundary_is_midpoint():
    m = smo_train([[0.0], [1.0]], [-1, 1], C=10.0, g=1.0)
    lo, hi = 0.0, 1.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if m.decision([mid]) < 0:
            lo = mid
        else:
            hi = mid
    assert abs(lo - 0.5) < 1e-3


def test_xor():
    X = np.array([[0.0, 0.0], [1.0, 1.0], [0.0, 1.0], [1.0, 0.0]])
    y = np.array([1, 1, -1, -1])
    m = smo_train(X, y, C=10.0, g=1.0)
    assert list(m.predict(X)) == list(y)
    assert m.converged


def test_duplicating_the_data_keeps_the_boundary():
    X, y = two_class(15, seed=1, gap=4.0)
    probe = np.random.default_rng(2).random((20, 2))
    a = smo_train(X, y, C=1e3, g=1.0, tol=1e-9, max_passes=5000)
    b = smo_train(np.vstack([X, X]), np.r_[y, y], C=1e3, g=1.0, tol=1e-9, max_passes=5000)
    assert a.converged and b.converged
    assert np.max(np.abs(a.decision(probe) - b.decision(probe))) < 1e-6


@settings(max_examples=20)
@given(st.integers(0, 10_000), st.floats(0.05, 20), st.floats(0.01, 5))
def test_trained_machine_satisfies_kkt(seed, C, g):
    X, y = two_class(20, seed=seed, gap=1.0)
    m = smo_train(X, y, C=C, g=g)
    assert m.converged
    assert kkt_violation(m, X, y) <= 1e-3
    assert abs(float(m.alpha @ y)) < 1e-8
    assert np.all(m.alpha >= 0) and np.all(m.alpha <= C)


@settings(max_examples=20)
@given(st.integers(0, 10_000))
def test_dual_objective_never_decreases(seed):
    X, y = two_class(25, seed=seed, gap=0.5)
    h = np.array(smo_train(X, y, C=2.0, g=0.5).objective_history)
    assert h.size >= 1 and np.all(np.diff(h) >= -1e-12)


def test_seeded_determinism():
    X, y = two_class(30, seed=3, gap=0.5)
    a = smo_train(X, y, seed=11)
    b = smo_train(X, y, seed=11)
    assert np.array_equal(a.alpha, b.alpha) and a.bias == b.bias


def test_training_errors():
    with pytest.raises(TrainingError):
        smo_train([[0.0], [1.0]], [1, 1])
    with pytest.raises(TrainingError):
        smo_train([[0.0], [1.0]], [1, -1], C=0.0)
    with pytest.raises(TrainingError):
        ovo_train([[0.0], [1.0], [2.0]], ["a", "a", "b"])


def blobs(k, n=40, seed=0):
    rng = np.random.default_rng(seed)
    centers = 6 * np.eye(k, 4)
    X = np.vstack([c + rng.standard_normal((n, 4)) for c in centers])
    y = [f"k{i}" for i in range(k) for _ in range(n)]
    return X, y


def test_machine_counts():
    assert len(ovo_train(*blobs(2, 10)).machines) == 1
    assert len(ovo_train(*blobs(6, 10)).machines) == 15


def test_three_blobs_test_accuracy():
    X, y = blobs(3, 100, seed=4)
    Xt, yt = blobs(3, 100, seed=5)
    model = ovo_train(X, y)
    acc = np.mean([p == t for p, t in zip(model.predict(Xt), yt)])
    assert acc >= 0.99


def test_every_pairwise_machine_meets_kkt():
    X, y = blobs(4, 30, seed=6)
    model = ovo_train(X, y, C=5.0, g=0.5)
    Z = model.scaler.transform(X)
    lab = np.array([model.labels.index(v) for v in y])
    for (i, j), m in model.machines.items():
        rows = (lab == i) | (lab == j)
        yy = np.where(lab[rows] == i, 1.0, -1.0)
        assert kkt_violation(m, Z[rows], yy) <= 1e-3


def test_save_load_round_trip(tmp_path):
    X, y = blobs(3, 20, seed=7)
    model = ovo_train(X, y)
    p = tmp_path / "m.svm"
    save_svm(model, p)
    back = load_svm(p)
    assert back.labels == model.labels
    probe = np.random.default_rng(8).normal(0, 4, (50, 4))
    assert back.predict(probe) == model.predict(probe)
    for pair, m in model.machines.items():
        assert np.array_equal(back.machines[pair].decision(probe), m.decision(probe))
    q = tmp_path / "m2.svm"
    save_svm(back, q)
    assert p.read_bytes() == q.read_bytes()


def test_constant_feature_is_ignored():
    X, y = blobs(2, 20, seed=9)
    Xc = np.c_[X, np.full(len(y), 3.0)]
    model = ovo_train(Xc, y)
    assert model.predict(np.r_[X[0], 99.0]) == model.predict(np.r_[X[0], 3.0])
