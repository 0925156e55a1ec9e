"""Higher-order moments and cumulants of complex baseband samples.

Cumulants are expressed through mixing moments ``M_pq = E[x^(p-q) conj(x)^q]``
of the mean-removed, unit-power sequence. The identities below are complete
for zero-mean data; when odd-order moments vanish and the signal is circular
they reduce to the familiar short forms (for instance
``C63 = M63 - 9 C42 C21 - 6 C21^3``).
"""
from __future__ import annotations

import numpy as np

from ..errors import DegenerateSignalError, EmptyInputError
from .vector import FeatureFamily, FeatureVector

HOC_NAMES = ("C40", "C41", "C42", "C60", "C63")


def normalize(x) -> np.ndarray:
    """Subtract the sample mean and scale to unit mean power."""
    x = np.asarray(x, dtype=complex)
    if x.size == 0:
        raise EmptyInputError("empty sequence")
    x = x - x.mean()
    power = float(np.mean(np.abs(x) ** 2))
    if not power > 0:
        raise DegenerateSignalError("sequence has zero power after mean removal")
    return x / np.sqrt(power)


def moment(x, p: int, q: int) -> complex:
    return complex(np.mean(x ** (p - q) * np.conj(x) ** q))


def cumulants(x, *, prepared: bool = False) -> dict:
    """Return ``{C20, C21, C40, C41, C42, C60, C63, C80}`` of ``x``."""
    if not prepared:
        x = normalize(x)
    xc = np.conj(x)
    x2 = x * x
    x3 = x2 * x
    x4 = x2 * x2
    ax2 = (x * xc).real

    def mean(a):
        return complex(np.mean(a))

    M20, M21, M22 = mean(x2), mean(ax2), mean(np.conj(x2))
    M30, M31, M32, M33 = mean(x3), mean(x2 * xc), mean(x * xc * xc), mean(np.conj(x3))
    M40, M41, M42, M43 = mean(x4), mean(x3 * xc), mean(ax2 * ax2), mean(x * np.conj(x3))
    M50 = mean(x4 * x)
    M60 = mean(x4 * x2)
    M63 = mean(ax2 ** 3)
    M80 = mean(x4 * x4)

    C42 = M42 - abs(M20) ** 2 - 2 * M21 ** 2
    return {
        "C20": M20,
        "C21": M21,
        "C40": M40 - 3 * M20 ** 2,
        "C41": M41 - 3 * M21 * M20,
        "C42": C42,
        "C60": M60 - 15 * M40 * M20 - 10 * M30 ** 2 + 30 * M20 ** 3,
        "C63": (
            M63 - 9 * M21 * M42 - 3 * M20 * M43 - 3 * M22 * M41
            - M30 * M33 - 9 * M31 * M32 + 12 * M21 ** 3 + 18 * M20 * M22 * M21
        ),
        "C80": (
            M80 - 28 * M60 * M20 - 56 * M50 * M30 - 35 * M40 ** 2
            + 420 * M40 * M20 ** 2 + 560 * M30 ** 2 * M20 - 630 * M20 ** 4
        ),
    }


def hoc_features(baseband) -> tuple[FeatureVector, dict]:
    """Magnitudes ``|C40|, |C41|, |C42|, |C60|, |C63|`` plus the full cumulant record."""
    samples = getattr(baseband, "samples", baseband)
    record = cumulants(samples)
    fv = FeatureVector.of(FeatureFamily.HOC, HOC_NAMES, [abs(record[k]) for k in HOC_NAMES])
    return fv, record
