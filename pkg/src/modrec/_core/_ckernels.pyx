# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels. Same algorithms, same operation order as _pykernels."""
import numpy as np
cimport numpy as cnp
from libc.math cimport fabs, M_PI, INFINITY, NAN

cnp.import_array()

cdef double TWO_PI = 2.0 * M_PI


def phase_correction(wrapped):
    cdef const double[::1] w = np.ascontiguousarray(wrapped, dtype=np.float64)
    cdef Py_ssize_t n = w.shape[0], i
    out = np.empty(n)
    cdef double[::1] o = out
    cdef double corr = 0.0, d
    if n == 0:
        return out
    o[0] = w[0]
    for i in range(1, n):
        d = w[i] - w[i - 1]
        if d <= -M_PI:
            corr += TWO_PI
        elif d > M_PI:
            corr -= TWO_PI
        o[i] = w[i] + corr
    return out


def best_split(X, y, Py_ssize_t n_classes, Py_ssize_t min_leaf):
    cdef const double[:, ::1] Xv = np.ascontiguousarray(X, dtype=np.float64)
    cdef const cnp.int64_t[::1] yv = np.ascontiguousarray(y, dtype=np.int64)
    cdef Py_ssize_t n = Xv.shape[0], d = Xv.shape[1]
    if n < 2 * min_leaf or n < 2:
        return (-1, NAN, -INFINITY)
    orders = np.argsort(np.asarray(Xv), axis=0, kind="stable").astype(np.int64)
    cdef const cnp.int64_t[:, ::1] ov = np.ascontiguousarray(orders)
    cdef cnp.int64_t[::1] total = np.bincount(np.asarray(yv), minlength=n_classes).astype(np.int64)
    cdef cnp.int64_t[::1] left = np.zeros(n_classes, dtype=np.int64)
    cdef cnp.int64_t[::1] right = np.zeros(n_classes, dtype=np.int64)
    cdef Py_ssize_t j, i, c, k, best_j = -1
    cdef cnp.int64_t sq_l, sq_r, n_l, n_r, tot_sq = 0
    cdef double score, best_score = -INFINITY, best_thr = NAN, lo, hi, thr
    for c in range(n_classes):
        tot_sq += total[c] * total[c]
    for j in range(d):
        for c in range(n_classes):
            left[c] = 0
            right[c] = total[c]
        sq_l = 0
        sq_r = tot_sq
        for i in range(n - 1):
            k = ov[i, j]
            c = yv[k]
            sq_l += 2 * left[c] + 1
            left[c] += 1
            sq_r -= 2 * right[c] - 1
            right[c] -= 1
            n_l = i + 1
            n_r = n - n_l
            if n_l < min_leaf or n_r < min_leaf:
                continue
            lo = Xv[k, j]
            hi = Xv[ov[i + 1, j], j]
            if not lo < hi:
                continue
            score = <double>sq_l / <double>n_l + <double>sq_r / <double>n_r
            if score > best_score:
                best_score = score
                thr = lo + (hi - lo) / 2.0
                if thr <= lo:
                    thr = hi
                best_thr = thr
                best_j = j
    return (best_j, best_thr, best_score)


cdef class _XorShift:
    cdef cnp.uint64_t state

    def __init__(self, cnp.uint64_t seed):
        self.state = seed * <cnp.uint64_t>0x9E3779B97F4A7C15 + <cnp.uint64_t>0x2545F4914F6CDD1D
        if self.state == 0:
            self.state = 1

    cdef cnp.uint64_t next(self):
        cdef cnp.uint64_t x = self.state
        x ^= x >> 12
        x ^= x << 25
        x ^= x >> 27
        self.state = x
        return x * <cnp.uint64_t>2685821657736338717


cdef class _SMO:
    cdef const double[:, ::1] K
    cdef const double[::1] y
    cdef double[::1] alpha
    cdef double[::1] E
    cdef double b, C, tol, eps
    cdef Py_ssize_t n
    cdef _XorShift rng

    def __init__(self, K, y, double C, double tol, double eps, cnp.uint64_t seed):
        self.K = K
        self.y = y
        self.n = y.shape[0]
        self.alpha = np.zeros(self.n)
        self.E = -np.asarray(y, dtype=np.float64)
        self.b = 0.0
        self.C = C
        self.tol = tol
        self.eps = eps
        self.rng = _XorShift(seed)

    cdef int take_step(self, Py_ssize_t i1, Py_ssize_t i2):
        cdef double a1, a2, y1, y2, E1, E2, s, L, H, k11, k12, k22, eta
        cdef double a2n, a1n, v1, v2, d1, d2, Lobj, Hobj, t1, t2, b1, b2, bn, db
        cdef double C = self.C, eps = self.eps
        cdef Py_ssize_t k
        if i1 == i2:
            return 0
        a1 = self.alpha[i1]
        a2 = self.alpha[i2]
        y1 = self.y[i1]
        y2 = self.y[i2]
        E1 = self.E[i1]
        E2 = self.E[i2]
        s = y1 * y2
        if y1 != y2:
            L = max(0.0, a2 - a1)
            H = min(C, C + a2 - a1)
        else:
            L = max(0.0, a2 + a1 - C)
            H = min(C, a2 + a1)
        if L >= H:
            return 0
        k11 = self.K[i1, i1]
        k12 = self.K[i1, i2]
        k22 = self.K[i2, i2]
        eta = k11 + k22 - 2.0 * k12
        if eta > 0.0:
            a2n = a2 + y2 * (E1 - E2) / eta
            if a2n < L:
                a2n = L
            elif a2n > H:
                a2n = H
        else:
            v1 = E1 + y1 - self.b
            v2 = E2 + y2 - self.b
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
        if fabs(a2n - a2) < eps * (a2n + a2 + eps):
            return 0
        a1n = a1 + s * (a2 - a2n)
        if a1n < 0.0:
            a1n = 0.0
        elif a1n > C:
            a1n = C
        t1 = y1 * (a1n - a1)
        t2 = y2 * (a2n - a2)
        b1 = self.b - E1 - t1 * k11 - t2 * k12
        b2 = self.b - E2 - t1 * k12 - t2 * k22
        if 0.0 < a1n < C:
            bn = b1
        elif 0.0 < a2n < C:
            bn = b2
        else:
            bn = (b1 + b2) / 2.0
        db = bn - self.b
        for k in range(self.n):
            self.E[k] = self.E[k] + (t1 * self.K[i1, k] + t2 * self.K[i2, k] + db)
        self.b = bn
        self.alpha[i1] = a1n
        self.alpha[i2] = a2n
        return 1

    cdef int examine(self, Py_ssize_t i2):
        cdef double y2 = self.y[i2], a2 = self.alpha[i2], E2 = self.E[i2]
        cdef double r2 = E2 * y2, best = -1.0, gap, C = self.C
        cdef Py_ssize_t n = self.n, k, j, i1 = -1, n_free = 0, start
        if not ((r2 < -self.tol and a2 < C) or (r2 > self.tol and a2 > 0.0)):
            return 0
        for k in range(n):
            if 0.0 < self.alpha[k] < C:
                n_free += 1
                gap = fabs(self.E[k] - E2)
                if gap > best:
                    best = gap
                    i1 = k
        if n_free > 1 and self.take_step(i1, i2):
            return 1
        start = <Py_ssize_t>(self.rng.next() % <cnp.uint64_t>n)
        for j in range(n):
            k = (start + j) % n
            if 0.0 < self.alpha[k] < C and self.take_step(k, i2):
                return 1
        start = <Py_ssize_t>(self.rng.next() % <cnp.uint64_t>n)
        for j in range(n):
            k = (start + j) % n
            if self.take_step(k, i2):
                return 1
        return 0

    cdef double objective(self):
        cdef Py_ssize_t i, j, n = self.n
        cdef double total = 0.0, quad = 0.0, row
        for i in range(n):
            total += self.alpha[i]
        for i in range(n):
            if self.alpha[i] == 0.0:
                continue
            row = 0.0
            for j in range(n):
                row += self.alpha[j] * self.y[j] * self.K[i, j]
            quad += self.alpha[i] * self.y[i] * row
        return total - 0.5 * quad

    def run(self, Py_ssize_t max_passes):
        # a pass is one full sweep plus the active-set sweeps that follow it
        cdef Py_ssize_t passes = 0, sweeps = 0, changed = 0, i
        cdef Py_ssize_t sweep_cap = SWEEPS_PER_PASS * max_passes
        cdef bint examine_all = True
        history = []
        while changed > 0 or examine_all:
            if (examine_all and passes >= max_passes) or sweeps >= sweep_cap:
                break
            if examine_all:
                passes += 1
            changed = 0
            if examine_all:
                for i in range(self.n):
                    changed += self.examine(i)
            else:
                for i in range(self.n):
                    if 0.0 < self.alpha[i] < self.C:
                        changed += self.examine(i)
            if examine_all:
                examine_all = False
            elif changed == 0:
                examine_all = True
            sweeps += 1
            history.append(self.objective())
        converged = changed == 0 and not examine_all
        return np.asarray(self.alpha).copy(), self.b, passes, converged, history


SWEEPS_PER_PASS = 50


def smo_solve(K, y, double C, double tol, Py_ssize_t max_passes, seed, double eps=1e-12):
    Kc = np.ascontiguousarray(K, dtype=np.float64)
    yc = np.ascontiguousarray(y, dtype=np.float64)
    solver = _SMO(Kc, yc, C, tol, eps, <cnp.uint64_t>(int(seed) & 0xFFFFFFFFFFFFFFFF))
    return solver.run(max_passes)
