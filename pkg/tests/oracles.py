"""Independent reference implementations used only by the tests."""
import math
from functools import lru_cache

import numpy as np


def set_partitions(items):
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


@lru_cache(maxsize=None)
def _partitions(n):
    return tuple(tuple(tuple(b) for b in p) for p in set_partitions(range(n)))


def joint_cumulant(x, p, q):
    """Brute-force C_pq from sample moments by the partition (Leonov-Shiryaev) formula."""
    x = np.asarray(x, dtype=complex)
    x = x - x.mean()
    x = x / math.sqrt(np.mean(np.abs(x) ** 2))
    factors = [x] * (p - q) + [np.conj(x)] * q
    block_moment = {}
    for mask in range(1, 1 << p):
        term = np.ones_like(x)
        for i in range(p):
            if mask >> i & 1:
                term = term * factors[i]
        block_moment[mask] = term.mean()
    total = 0j
    for part in _partitions(p):
        k = len(part)
        prod = 1 + 0j
        for block in part:
            prod *= block_moment[sum(1 << i for i in block)]
        total += (-1) ** (k - 1) * math.factorial(k - 1) * prod
    return total


def hilbert_by_convolution(u, taps=10_000):
    """Discrete ideal Hilbert kernel 2/(pi n) on odd n, applied to a periodically extended signal."""
    u = np.asarray(u, dtype=float)
    n = u.size
    reps = 2 * (taps // n + 1) + 1
    ext = np.tile(u, reps)
    k = np.arange(-taps, taps + 1)
    h = np.zeros(k.size)
    odd = k % 2 != 0
    h[odd] = 2.0 / (np.pi * k[odd])
    full = np.convolve(ext, h, mode="same")
    mid = (reps // 2) * n
    return full[mid : mid + n]


def wrap(phi):
    return np.angle(np.exp(1j * np.asarray(phi)))
