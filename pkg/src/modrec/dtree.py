"""Gini decision trees over feature vectors.

Splits test ``x[feature] < threshold`` (true goes left); thresholds are
midpoints between consecutive distinct training values.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _core
from .errors import DimensionMismatchError, EmptyInputError, DomainError

DEFAULT_MAX_DEPTH = 8
DEFAULT_MIN_LEAF = 5


@dataclass(frozen=True)
class Node:
    id: int
    feature: int = -1
    threshold: float = float("nan")
    left: int = -1
    right: int = -1
    label: str | None = None
    n_samples: int = 0

    @property
    def is_leaf(self) -> bool:
        return self.label is not None


@dataclass(frozen=True)
class Tree:
    nodes: tuple
    dim: int
    labels: tuple
    max_depth: int | None = DEFAULT_MAX_DEPTH
    min_leaf: int = DEFAULT_MIN_LEAF

    @property
    def root(self) -> Node:
        return self.nodes[0]

    def depth(self) -> int:
        def walk(i):
            nd = self.nodes[i]
            return 0 if nd.is_leaf else 1 + max(walk(nd.left), walk(nd.right))

        return walk(0)

    def leaves(self):
        return [n for n in self.nodes if n.is_leaf]

    def predict(self, x):
        x = np.asarray(x, dtype=float)
        if x.ndim == 2:
            return [self.predict(row) for row in x]
        if x.shape != (self.dim,):
            raise DimensionMismatchError(f"expected {self.dim} features, got {x.shape}")
        nd = self.nodes[0]
        while not nd.is_leaf:
            nd = self.nodes[nd.left if x[nd.feature] < nd.threshold else nd.right]
        return nd.label


def _majority(codes: np.ndarray, n_classes: int) -> int:
    # argmax returns the first maximum: ties go to the lowest label index
    return int(np.argmax(np.bincount(codes, minlength=n_classes)))


def train_tree(data, labels, max_depth: int | None = DEFAULT_MAX_DEPTH,
               min_leaf: int = DEFAULT_MIN_LEAF, backend: str | None = None) -> Tree:
    """Greedy recursive Gini splitting.

    Labels are ordered by first appearance; that order decides majority
    ties. ``max_depth=None`` grows until leaves are pure or unsplittable.
    """
    X = np.asarray(data, dtype=float)
    labels = [str(v) for v in labels]
    if X.ndim != 2 or X.shape[0] == 0:
        raise EmptyInputError("training data must be a non-empty 2-D array")
    if X.shape[0] != len(labels):
        raise DimensionMismatchError("one label per row required")
    if not np.all(np.isfinite(X)):
        raise DomainError("training features must be finite")
    if min_leaf < 1:
        raise DomainError("min_leaf must be >= 1")
    classes = list(dict.fromkeys(labels))
    index = {c: i for i, c in enumerate(classes)}
    y = np.array([index[v] for v in labels], dtype=np.int64)
    kernels = _core.get_backend(backend)
    nodes: list = []

    def grow(rows: np.ndarray, depth: int) -> int:
        nid = len(nodes)
        nodes.append(None)
        codes = y[rows]
        pure = np.all(codes == codes[0])
        deep = max_depth is not None and depth >= max_depth
        if not (pure or deep):
            feat, thr, _ = kernels.best_split(X[rows], codes, len(classes), min_leaf)
            if feat >= 0:
                go_left = X[rows, feat] < thr
                left = grow(rows[go_left], depth + 1)
                right = grow(rows[~go_left], depth + 1)
                nodes[nid] = Node(nid, int(feat), float(thr), left, right, None, rows.size)
                return nid
        nodes[nid] = Node(nid, label=classes[_majority(codes, len(classes))], n_samples=rows.size)
        return nid

    grow(np.arange(X.shape[0]), 0)
    return Tree(tuple(nodes), X.shape[1], tuple(classes), max_depth, min_leaf)


def tree_predict(t: Tree, x):
    return t.predict(x)


def save_tree(t: Tree, path) -> None:
    lines = [f"# modrec tree dim {t.dim} labels {' '.join(t.labels)}"]
    for nd in t.nodes:
        if nd.is_leaf:
            lines.append(f"leaf {nd.id} label {nd.label}")
        else:
            lines.append(f"node {nd.id} feat {nd.feature} thr {nd.threshold:.17g} left {nd.left} right {nd.right}")
    with open(path, "w") as fh:
        fh.write("\n".join(lines) + "\n")


def load_tree(path) -> Tree:
    dim = None
    labels: list = []
    nodes = {}
    with open(path) as fh:
        for raw in fh:
            parts = raw.split()
            if not parts:
                continue
            if parts[0] == "#":
                if "dim" in parts:
                    dim = int(parts[parts.index("dim") + 1])
                if "labels" in parts:
                    labels = parts[parts.index("labels") + 1:]
                continue
            if parts[0] == "node":
                nid = int(parts[1])
                nodes[nid] = Node(nid, int(parts[3]), float(parts[5]), int(parts[7]), int(parts[9]))
            elif parts[0] == "leaf":
                nid = int(parts[1])
                nodes[nid] = Node(nid, label=" ".join(parts[3:]))
            else:
                raise DomainError(f"unrecognised tree line: {raw.strip()!r}")
    if not nodes:
        raise EmptyInputError("tree file has no nodes")
    ordered = tuple(nodes[i] for i in range(len(nodes)))
    if dim is None:
        dim = max((n.feature for n in ordered), default=-1) + 1
    if not labels:
        labels = list(dict.fromkeys(n.label for n in ordered if n.is_leaf))
    return Tree(ordered, dim, tuple(labels))


def train_accuracy(t: Tree, data, labels) -> float:
    pred = t.predict(np.asarray(data, dtype=float))
    return float(np.mean([p == str(l) for p, l in zip(pred, labels)]))


__all__ = ["Node", "Tree", "train_tree", "tree_predict", "save_tree", "load_tree", "train_accuracy",
           "DEFAULT_MAX_DEPTH", "DEFAULT_MIN_LEAF"]
