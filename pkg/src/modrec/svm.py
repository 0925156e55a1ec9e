"""Soft-margin RBF support vector machines trained by SMO.

Binary machines solve the dual QP with :func:`modrec._core.smo_solve`;
:class:`MulticlassSVM` wraps one machine per class pair and votes.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from . import _core
from .errors import DimensionMismatchError, EmptyInputError, TrainingError

DEFAULT_C = 0.5
DEFAULT_G = 0.05
DEFAULT_TOL = 1e-3
DEFAULT_MAX_PASSES = 200


@dataclass(frozen=True)
class Scaler:
    """Per-feature min-max map onto [0, 1]; constant features map to 0."""

    minimum: np.ndarray
    maximum: np.ndarray

    def transform(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.minimum.size:
            raise DimensionMismatchError(f"expected {self.minimum.size} features, got {x.shape[-1]}")
        span = self.maximum - self.minimum
        safe = np.where(span > 0, span, 1.0)
        return np.where(span > 0, (x - self.minimum) / safe, 0.0)


def fit_scaler(data) -> Scaler:
    data = np.asarray(data, dtype=float)
    if data.ndim != 2 or data.shape[0] == 0:
        raise EmptyInputError("scaler needs a non-empty 2-D array")
    return Scaler(data.min(axis=0), data.max(axis=0))


def apply_scaler(s: Scaler, x) -> np.ndarray:
    return s.transform(x)


def rbf_kernel(x, z, g: float) -> float:
    x = np.asarray(x, dtype=float)
    z = np.asarray(z, dtype=float)
    if x.shape != z.shape:
        raise DimensionMismatchError("kernel arguments differ in dimension")
    d = x - z
    return math.exp(-g * float(d @ d))


def rbf_gram(A, B, g: float) -> np.ndarray:
    A = np.atleast_2d(np.asarray(A, dtype=float))
    B = np.atleast_2d(np.asarray(B, dtype=float))
    if A.shape[1] != B.shape[1]:
        raise DimensionMismatchError("kernel arguments differ in dimension")
    sq = (A * A).sum(1)[:, None] + (B * B).sum(1)[None, :] - 2.0 * A @ B.T
    np.maximum(sq, 0.0, out=sq)
    K = np.exp(-g * sq)
    if A is B or (A.shape == B.shape and np.array_equal(A, B)):
        np.fill_diagonal(K, 1.0)
    return K


@dataclass(frozen=True)
class BinarySVM:
    support_vectors: np.ndarray
    dual_coef: np.ndarray  # alpha_i * y_i
    bias: float
    g: float
    C: float
    converged: bool = True
    alpha: np.ndarray = field(default=None, repr=False, compare=False)
    objective_history: tuple = field(default=(), repr=False, compare=False)

    @property
    def dim(self) -> int:
        return self.support_vectors.shape[1]

    def decision(self, x) -> np.ndarray | float:
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        X = np.atleast_2d(x)
        if X.shape[1] != self.dim:
            raise DimensionMismatchError(f"expected {self.dim} features, got {X.shape[1]}")
        out = rbf_gram(X, self.support_vectors, self.g) @ self.dual_coef + self.bias
        return float(out[0]) if single else out

    def predict(self, x):
        d = self.decision(x)
        return np.where(np.asarray(d) >= 0, 1, -1) if np.ndim(d) else (1 if d >= 0 else -1)


def _bias(alpha, y, K, C, eps=1e-12):
    """Average over free support vectors, else the midpoint of the KKT interval."""
    grad = K @ (alpha * y)
    free = (alpha > eps * C) & (alpha < C * (1 - eps))
    if free.any():
        return float(np.mean(y[free] - grad[free]))
    # each bound point limits b from one side: b >= r_i or b <= r_i
    r = y - grad
    at_zero = alpha <= eps * C
    at_c = alpha >= C * (1 - eps)
    lower_mask = ((y > 0) & at_zero) | ((y < 0) & at_c)
    upper_mask = ((y > 0) & at_c) | ((y < 0) & at_zero)
    lo = r[lower_mask].max() if lower_mask.any() else -np.inf
    hi = r[upper_mask].min() if upper_mask.any() else np.inf
    if np.isfinite(lo) and np.isfinite(hi):
        return float((lo + hi) / 2.0)
    return float(lo if np.isfinite(lo) else hi)


def smo_train(data, labels, C: float = DEFAULT_C, g: float = DEFAULT_G, tol: float = DEFAULT_TOL,
              max_passes: int = DEFAULT_MAX_PASSES, seed: int = 0, backend: str | None = None) -> BinarySVM:
    """Train a binary RBF machine on already-scaled data with labels in {+1, -1}.

    The solver works to ``tol / 2`` internally so that re-averaging the bias
    over the free support vectors keeps every KKT residual within ``tol``.
    A run that hits ``max_passes`` returns its best point with
    ``converged=False``.
    """
    X = np.asarray(data, dtype=float)
    y = np.asarray(labels, dtype=float)
    if X.ndim != 2 or X.shape[0] != y.size or y.size == 0:
        raise EmptyInputError("need a non-empty 2-D data array with one label per row")
    if not np.all(np.isin(y, (-1.0, 1.0))):
        raise TrainingError("labels must be +1 or -1")
    if np.all(y == y[0]):
        raise TrainingError("both classes must be present")
    if not C > 0:
        raise TrainingError("C must be positive")
    K = rbf_gram(X, X, g)
    kernels = _core.get_backend(backend)
    alpha, _, _, converged, history = kernels.smo_solve(K, y, float(C), 0.5 * tol, int(max_passes), int(seed))
    alpha = np.asarray(alpha)
    b = _bias(alpha, y, K, C)
    sv = alpha > 0
    return BinarySVM(X[sv].copy(), (alpha * y)[sv], b, g, C, bool(converged), alpha, tuple(history))


def svm_decision(m: BinarySVM, x):
    return m.decision(x)


def svm_predict(m: BinarySVM, x):
    return m.predict(x)


@dataclass(frozen=True)
class MulticlassSVM:
    scaler: Scaler
    labels: tuple
    machines: dict  # (i, j) with i < j -> BinarySVM; +1 means labels[i]
    C: float = DEFAULT_C
    g: float = DEFAULT_G

    @property
    def dim(self) -> int:
        return self.scaler.minimum.size

    def decision_matrix(self, X) -> dict:
        Z = self.scaler.transform(np.atleast_2d(np.asarray(X, dtype=float)))
        return {pair: m.decision(Z) for pair, m in self.machines.items()}

    def predict(self, X):
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        L = len(self.labels)
        votes = np.zeros((X.shape[0], L), dtype=int)
        margin = np.zeros((X.shape[0], L))
        for (i, j), d in self.decision_matrix(X).items():
            win_i = d >= 0
            votes[win_i, i] += 1
            votes[~win_i, j] += 1
            margin[win_i, i] += np.abs(d[win_i])
            margin[~win_i, j] += np.abs(d[~win_i])
        out = []
        for r in range(X.shape[0]):
            top = np.flatnonzero(votes[r] == votes[r].max())
            if top.size > 1:
                m = margin[r, top]
                top = top[m == m.max()]
            out.append(self.labels[int(top[0])])
        return out[0] if single else out


def ovo_train(data, labels, C: float = DEFAULT_C, g: float = DEFAULT_G, tol: float = DEFAULT_TOL,
              max_passes: int = DEFAULT_MAX_PASSES, seed: int = 0, backend: str | None = None) -> MulticlassSVM:
    """Fit the scaler and one binary machine per unordered class pair."""
    X = np.asarray(data, dtype=float)
    labels = list(labels)
    if X.ndim != 2 or X.shape[0] != len(labels):
        raise EmptyInputError("need a 2-D data array with one label per row")
    classes = sorted(set(labels), key=lambda c: labels.index(c))
    if len(classes) < 2:
        raise TrainingError("at least two classes are needed")
    lab = np.array([classes.index(c) for c in labels])
    counts = np.bincount(lab, minlength=len(classes))
    if counts.min() < 2:
        raise TrainingError(f"class {classes[int(counts.argmin())]!r} has fewer than 2 samples")
    scaler = fit_scaler(X)
    Z = scaler.transform(X)
    machines = {}
    for i, j in itertools.combinations(range(len(classes)), 2):
        rows = (lab == i) | (lab == j)
        y = np.where(lab[rows] == i, 1.0, -1.0)
        machines[(i, j)] = smo_train(Z[rows], y, C, g, tol, max_passes, seed + 7919 * i + j, backend)
    return MulticlassSVM(scaler, tuple(classes), machines, C, g)


def ovo_predict(model: MulticlassSVM, x):
    return model.predict(x)


# -- text serialization -------------------------------------------------------

def _f(v: float) -> str:
    return f"{v:.16e}"


def save_svm(model: MulticlassSVM, path) -> None:
    """Header (C, g, dimension, labels, scaler rows), then per machine its SV lines.

    Each support vector line is ``sv <alpha*y> <bound-flag> <components...>``
    where the flag is 1 when ``alpha`` sits at the box bound ``C``.
    """
    lines = ["# modrec svm v1", f"C {_f(model.C)}", f"g {_f(model.g)}", f"dim {model.dim}",
             "labels " + " ".join(model.labels),
             "min " + " ".join(_f(v) for v in model.scaler.minimum),
             "max " + " ".join(_f(v) for v in model.scaler.maximum)]
    for (i, j), m in sorted(model.machines.items()):
        lines.append(f"machine {i} {j} bias {_f(m.bias)} nsv {m.support_vectors.shape[0]} "
                     f"converged {int(m.converged)}")
        for coef, vec in zip(m.dual_coef, m.support_vectors):
            bound = int(abs(coef) >= m.C * (1 - 1e-12))
            lines.append(f"sv {_f(coef)} {bound} " + " ".join(_f(v) for v in vec))
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_svm(path) -> MulticlassSVM:
    header: dict = {}
    machines = {}
    current = None
    with open(path) as fh:
        for raw in fh:
            parts = raw.split()
            if not parts or parts[0].startswith("#"):
                continue
            key = parts[0]
            if key == "machine":
                i, j = int(parts[1]), int(parts[2])
                current = {"pair": (i, j), "bias": float(parts[4]), "converged": bool(int(parts[8])),
                           "coef": [], "sv": []}
                machines[(i, j)] = current
            elif key == "sv":
                current["coef"].append(float(parts[1]))
                current["sv"].append([float(v) for v in parts[3:]])
            else:
                header[key] = parts[1:]
    C = float(header["C"][0])
    g = float(header["g"][0])
    dim = int(header["dim"][0])
    built = {}
    for pair, m in machines.items():
        sv = np.array(m["sv"], dtype=float).reshape(-1, dim)
        built[pair] = BinarySVM(sv, np.array(m["coef"]), m["bias"], g, C, m["converged"])
    scaler = Scaler(np.array(header["min"], dtype=float), np.array(header["max"], dtype=float))
    return MulticlassSVM(scaler, tuple(header["labels"]), built, C, g)
