"""Special functions for the Bessel-series propagator.

Spherical Bessel functions of the first kind ``j_n`` for ``n >= -1`` with the
convention ``j_{-1}(x) = cos(x)/x``, the confluent limit function ``0F1`` and
the complementary error function.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath
import numpy as np
from scipy import special

__all__ = [
    "BesselTable",
    "bessel_row",
    "spherical_bessel_j",
    "hyper_0F1",
    "erfc",
    "erfcx",
]

_SMALL_X = 0.01
_RESCALE = 1e250


@dataclass(frozen=True)
class BesselTable:
    """Values ``j_{-1}(x), j_0(x), ..., j_N(x)`` at a single argument."""

    order_max: int
    x: float
    values: np.ndarray

    def __getitem__(self, n: int) -> float:
        if n < -1 or n > self.order_max:
            raise IndexError(f"order {n} outside -1..{self.order_max}")
        return float(self.values[n + 1])

    @property
    def orders(self) -> np.ndarray:
        return np.arange(-1, self.order_max + 1)


def _series_small(n_max: int, x: float) -> np.ndarray:
    # j_n(x) = x^n/(2n+1)!! * sum_m (-x^2/2)^m / (m! (2n+3)(2n+5)...(2n+2m+1))
    out = np.empty(n_max + 1)
    y = -0.5 * x * x
    for n in range(n_max + 1):
        log_lead = n * math.log(x) - _log_double_factorial(2 * n + 1)
        if log_lead < -745.0:
            out[n:] = 0.0
            break
        term, total, m = 1.0, 1.0, 0
        while abs(term) > 1e-17 * abs(total):
            m += 1
            term *= y / (m * (2 * n + 2 * m + 1))
            total += term
        out[n] = math.exp(log_lead) * total
    return out


def _log_double_factorial(odd: int) -> float:
    # log((2m+1)!!) = log((2m+1)!) - m log 2 - log(m!)
    m = (odd - 1) // 2
    return math.lgamma(odd + 1) - m * math.log(2.0) - math.lgamma(m + 1)


def _upward(n_max: int, x: float, jm1: float, j0: float) -> np.ndarray:
    vals = np.empty(n_max + 2)
    vals[0], vals[1] = jm1, j0
    for n in range(0, n_max):
        vals[n + 2] = (2 * n + 1) / x * vals[n + 1] - vals[n]
    return vals


def _downward(n_lo: int, n_max: int, x: float) -> np.ndarray:
    """Unnormalized minimal solution for orders ``n_lo-1 .. n_max`` (Miller)."""
    start = n_max + int(math.ceil(math.sqrt(40.0 * max(n_max, 1)))) + 20
    start = max(start, int(x) + 20)
    size = start - n_lo + 3
    buf = np.zeros(size)  # buf[i] <-> order n_lo - 1 + i
    buf[-1] = 0.0
    buf[-2] = 1e-300
    for i in range(size - 2, 0, -1):
        n = n_lo - 1 + i
        buf[i - 1] = (2 * n + 1) / x * buf[i] - buf[i + 1]
        if abs(buf[i - 1]) > _RESCALE:
            buf[i - 1 :] /= _RESCALE
    return buf[: n_max - n_lo + 2]


def bessel_row(n_max: int, x: float) -> BesselTable:
    """Spherical Bessel functions ``j_{-1}(x) ... j_{n_max}(x)``.

    Orders below ``x`` come from the upward recurrence started at
    ``j_{-1} = cos(x)/x`` and ``j_0 = sin(x)/x``; orders above ``x`` come from a
    downward Miller recurrence matched to the upward values at the seam.
    """
    n_max = int(n_max)
    x = float(x)
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if not x > 0.0:
        raise ValueError("bessel_row needs x > 0 (j_{-1} is singular at 0)")

    jm1 = math.cos(x) / x
    if x < _SMALL_X:
        vals = np.concatenate(([jm1], _series_small(n_max, x)))
        return BesselTable(n_max, x, vals)

    j0 = math.sin(x) / x
    if x > n_max:
        return BesselTable(n_max, x, _upward(n_max, x, jm1, j0))

    # seam order: highest order still handled by the stable upward pass
    seam = max(int(math.floor(x)), 0)
    up = _upward(seam, x, jm1, j0)  # orders -1..seam
    down = _downward(seam, n_max, x)  # orders seam-1..n_max
    a = up[-2:]  # orders seam-1, seam
    big = float(np.max(np.abs(down[:2])))
    b = down[:2] / big
    scale = float(a @ b) / float(b @ b) / big
    vals = np.empty(n_max + 2)
    vals[: seam + 2] = up
    vals[seam + 1 :] = scale * down[1:]
    return BesselTable(n_max, x, vals)


def spherical_bessel_j(n: int, x: float) -> float:
    """Spherical Bessel function ``j_n(x)`` for ``n >= -1``, ``x >= 0``.

    >>> round(spherical_bessel_j(0, 1.0), 10)
    0.8414709848
    """
    n = int(n)
    x = float(x)
    if n < -1:
        raise ValueError(f"order must be >= -1, got {n}")
    if x < 0.0 or math.isnan(x):
        raise ValueError(f"argument must be >= 0, got {x}")
    if x == 0.0:
        if n == -1:
            raise ValueError("j_{-1} is singular at x = 0")
        return 1.0 if n == 0 else 0.0
    if n == -1:
        return math.cos(x) / x
    if n == 0 and x >= _SMALL_X:
        return math.sin(x) / x
    return bessel_row(n, x)[n]


def hyper_0F1(b: float, z: float) -> float:
    """Confluent hypergeometric limit function ``0F1(-; b; z)``.

    Direct summation of ``sum z^k / ((b)_k k!)``.  For negative ``z`` the terms
    alternate and peak near ``exp(2 sqrt|z|)``, so the accumulation is carried
    out with enough extra binary digits to absorb that cancellation.
    """
    if not b > 0:
        raise ValueError("b must be positive")
    z = float(z)
    extra = int(2.0 * math.sqrt(abs(z)) / math.log(2.0)) + 16
    with mpmath.workprec(53 + extra):
        zz = mpmath.mpf(z)
        bb = mpmath.mpf(b)
        term = mpmath.mpf(1)
        total = mpmath.mpf(1)
        k = 0
        while True:
            term = term * zz / ((bb + k) * (k + 1))
            k += 1
            total += term
            if k > abs(z) and abs(term) <= mpmath.mpf(1e-17) * abs(total):
                break
            if term == 0:
                break
        return float(total)


def erfc(x):
    """Complementary error function (thin wrapper over ``scipy.special``)."""
    return special.erfc(x)


def erfcx(x):
    """Scaled complementary error function ``exp(x^2) erfc(x)``."""
    return special.erfcx(x)
