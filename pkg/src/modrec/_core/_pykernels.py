"""Pure-Python implementations of the hot kernels.

These mirror ``_ckernels.pyx`` operation for operation so both backends give
the same results; the compiled one is simply faster.
"""
import math

import numpy as np

TWO_PI = 2.0 * math.pi
_MASK64 = (1 << 64) - 1
SWEEPS_PER_PASS = 50  # safety cap on active-set sweeps per pass


def phase_correction(wrapped):
    """Unwrap a phase sequence using the +/-2pi correction-sequence rule."""
    wrapped = np.ascontiguousarray(wrapped, dtype=np.float64)
    n = wrapped.size
    out = np.empty(n)
    if n == 0:
        return out
    d = np.diff(wrapped)
    step = np.where(d <= -math.pi, TWO_PI, np.where(d > math.pi, -TWO_PI, 0.0))
    corr = np.empty(n)
    corr[0] = 0.0
    np.cumsum(step, out=corr[1:])
    np.add(wrapped, corr, out=out)
    return out


def best_split(X, y, n_classes, min_leaf):
    """Exhaustive Gini search over midpoint thresholds.

    Returns ``(feature, threshold, score)`` where ``score`` is
    ``sum_L c^2 / n_L + sum_R c^2 / n_R`` (larger is purer), or
    ``(-1, nan, -inf)`` when no admissible split exists.
    """
    X = np.ascontiguousarray(X, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.int64)
    n, d = X.shape
    best = (-1, math.nan, -math.inf)
    if n < 2 * min_leaf or n < 2:
        return best
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    total = np.bincount(y, minlength=n_classes).astype(np.int64)
    n_left = np.arange(1, n, dtype=np.int64)
    n_right = n - n_left
    size_ok = (n_left >= min_leaf) & (n_right >= min_leaf)
    best_score = -math.inf
    for j in range(d):
        order = np.argsort(X[:, j], kind="stable")
        xs = X[order, j]
        onehot[:] = 0
        onehot[np.arange(n), y[order]] = 1
        left = np.cumsum(onehot, axis=0)[:-1]
        right = total - left
        sq_l = (left * left).sum(axis=1)
        sq_r = (right * right).sum(axis=1)
        score = sq_l / n_left + sq_r / n_right
        valid = size_ok & (xs[:-1] < xs[1:])
        if not valid.any():
            continue
        idx = np.flatnonzero(valid)
        k = idx[np.argmax(score[idx])]
        if score[k] > best_score:
            best_score = float(score[k])
            lo, hi = float(xs[k]), float(xs[k + 1])
            thr = lo + (hi - lo) / 2.0
            if thr <= lo:
                thr = hi
            best = (j, thr, best_score)
    return best


class _XorShift:
    def __init__(self, seed):
        self.state = (seed * 0x9E3779B97F4A7C15 + 0x2545F4914F6CDD1D) & _MASK64 or 1

    def next(self):
        x = self.state
        x ^= x >> 12
        x ^= (x << 25) & _MASK64
        x ^= x >> 27
        self.state = x
        return (x * 2685821657736338717) & _MASK64


def _dual_objective(alpha, y, K):
    ay = alpha * y
    return float(alpha.sum() - 0.5 * (ay @ K @ ay))


def smo_solve(K, y, C, tol, max_passes, seed, eps=1e-12):
    """Platt-style SMO on a precomputed Gram matrix.

    The decision value is ``sum_j alpha_j y_j K_ij + b``. Returns
    ``(alpha, b, passes, converged, objective_per_pass)``.
    """
    K = np.ascontiguousarray(K, dtype=np.float64)
    y = np.ascontiguousarray(y, dtype=np.float64)
    n = y.size
    alpha = np.zeros(n)
    E = -y.copy()
    b = 0.0
    rng = _XorShift(seed)
    history = []

    def take_step(i1, i2):
        nonlocal b
        if i1 == i2:
            return 0
        a1 = alpha[i1]
        a2 = alpha[i2]
        y1 = y[i1]
        y2 = y[i2]
        E1 = E[i1]
        E2 = E[i2]
        s = y1 * y2
        if y1 != y2:
            L = max(0.0, a2 - a1)
            H = min(C, C + a2 - a1)
        else:
            L = max(0.0, a2 + a1 - C)
            H = min(C, a2 + a1)
        if L >= H:
            return 0
        k11 = K[i1, i1]
        k12 = K[i1, i2]
        k22 = K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0.0:
            a2n = a2 + y2 * (E1 - E2) / eta
            if a2n < L:
                a2n = L
            elif a2n > H:
                a2n = H
        else:
            # dual gain at each end of the feasible segment
            v1 = E1 + y1 - b
            v2 = E2 + y2 - b
            d1 = s * (a2 - L)
            d2 = L - a2
            Lobj = d1 + d2 - y1 * d1 * v1 - y2 * d2 * v2 - 0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * s * d1 * d2 * k12)
            d1 = s * (a2 - H)
            d2 = H - a2
            Hobj = d1 + d2 - y1 * d1 * v1 - y2 * d2 * v2 - 0.5 * (d1 * d1 * k11 + d2 * d2 * k22 + 2.0 * s * d1 * d2 * k12)
            if Lobj > Hobj + eps:
                a2n = L
            elif Lobj < Hobj - eps:
                a2n = H
            else:
                a2n = a2
        if abs(a2n - a2) < eps * (a2n + a2 + eps):
            return 0
        a1n = a1 + s * (a2 - a2n)
        if a1n < 0.0:
            a1n = 0.0
        elif a1n > C:
            a1n = C
        t1 = y1 * (a1n - a1)
        t2 = y2 * (a2n - a2)
        b1 = b - E1 - t1 * k11 - t2 * k12
        b2 = b - E2 - t1 * k12 - t2 * k22
        if 0.0 < a1n < C:
            bn = b1
        elif 0.0 < a2n < C:
            bn = b2
        else:
            bn = (b1 + b2) / 2.0
        db = bn - b
        E[:] = E + (t1 * K[i1] + t2 * K[i2] + db)
        b = bn
        alpha[i1] = a1n
        alpha[i2] = a2n
        return 1

    def examine(i2):
        y2 = y[i2]
        a2 = alpha[i2]
        E2 = E[i2]
        r2 = E2 * y2
        if not ((r2 < -tol and a2 < C) or (r2 > tol and a2 > 0.0)):
            return 0
        n_free = 0
        i1 = -1
        best = -1.0
        for k in range(n):
            if 0.0 < alpha[k] < C:
                n_free += 1
                gap = abs(E[k] - E2)
                if gap > best:
                    best = gap
                    i1 = k
        if n_free > 1 and take_step(i1, i2):
            return 1
        start = rng.next() % n
        for j in range(n):
            k = (start + j) % n
            if 0.0 < alpha[k] < C and take_step(k, i2):
                return 1
        start = rng.next() % n
        for j in range(n):
            k = (start + j) % n
            if take_step(k, i2):
                return 1
        return 0

    # a pass is one full sweep plus the active-set sweeps that follow it
    passes = 0
    sweeps = 0
    changed = 0
    examine_all = True
    while changed > 0 or examine_all:
        if (examine_all and passes >= max_passes) or sweeps >= SWEEPS_PER_PASS * max_passes:
            break
        if examine_all:
            passes += 1
        changed = 0
        if examine_all:
            for i in range(n):
                changed += examine(i)
        else:
            for i in range(n):
                if 0.0 < alpha[i] < C:
                    changed += examine(i)
        if examine_all:
            examine_all = False
        elif changed == 0:
            examine_all = True
        sweeps += 1
        history.append(_dual_objective(alpha, y, K))
    converged = changed == 0 and not examine_all
    return alpha, b, passes, converged, history
