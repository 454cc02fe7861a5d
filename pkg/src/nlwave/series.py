"""Spherical-Bessel operator series for the wave propagators.

For a kernel with positive mass ``c`` and density ``rho`` put
``x = sqrt(c t^2 / rho)``.  Then

    c(t, A_C) f = sum_k  x^(k+1) j_{k-1}(x) / (2^k k!) * c^-k C^k * f
    s(t, A_C) f = t sum_k  x^k j_k(x) / (2^k k!)      * c^-k C^k * f

with ``j_{-1}(x) = cos(x)/x``.  Truncating after ``k = N`` leaves an
operator-norm error of at most

    pi / N!            * min(1, q^(N+1)) * e^q      (cos family)
    pi |t| / (2 (N+1)!) * min(1, q^(N+1)) * e^q      (sin family)

with ``q = t^2 ||C/rho|| / 4``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .kernels import GaussianKernel, Micromodulus
from .specfun import bessel_row, erfc, erfcx
from .spectral import Field, Grid1D, dft, idft

__all__ = [
    "SeriesPlan",
    "GaussianData",
    "ExpJumpData",
    "truncation_bounds",
    "choose_order",
    "symbol_sup_norm",
    "bessel_coefficients",
    "make_plan",
    "conv_power_gaussian",
    "conv_power_expjump",
    "conv_power_numeric",
    "series_propagate",
    "MAX_ORDER",
]

MAX_ORDER = 400
_LOG_PI = math.log(math.pi)


class UnreachableToleranceError(ValueError):
    pass


def _log_bound_tail(N: int, q: float) -> float:
    # log(min(1, q^(N+1)) * e^q), or -inf when q == 0
    if q == 0.0:
        return -math.inf
    return min(0.0, (N + 1) * math.log(q)) + q


def truncation_bounds(N: int, t: float, norm_c_op: float) -> tuple[float, float]:
    """Operator-norm remainder bounds after keeping terms ``k = 0..N``."""
    if N < 0:
        raise ValueError("N must be >= 0")
    if norm_c_op < 0:
        raise ValueError("norm_c_op must be >= 0")
    q = t * t * norm_c_op / 4.0
    tail = _log_bound_tail(N, q)
    if tail == -math.inf:
        return 0.0, 0.0
    b_cos = _exp(_LOG_PI - math.lgamma(N + 1) + tail)
    b_sin = abs(t) * _exp(_LOG_PI - math.log(2.0) - math.lgamma(N + 2) + tail)
    return b_cos, b_sin


def _exp(v: float) -> float:
    return math.inf if v > 709.0 else math.exp(v)


def choose_order(t: float, norm_c_op: float, tol: float) -> int:
    """Smallest ``N`` whose bounds are both at most ``tol``."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    for N in range(MAX_ORDER + 1):
        if max(truncation_bounds(N, t, norm_c_op)) <= tol:
            return N
    raise UnreachableToleranceError(
        f"tolerance {tol:g} needs more than {MAX_ORDER} terms at t={t:g}"
    )


def symbol_sup_norm(C: Micromodulus, rho: float, grid: Grid1D | None = None) -> float:
    """``sup_k |(F1 C)(k)| / rho``, the norm of convolution by ``C/rho``.

    Sign-constant kernels attain the supremum at ``k = 0``; otherwise a dense
    scan plus local refinement is used.
    """
    sign_constant = not hasattr(C, "is_sign_constant") or C.is_sign_constant()
    if sign_constant and not hasattr(C, "samples"):
        return abs(C.mass()) / rho
    k_hi = 60.0 / max(min(C.support_radius(), 1e3), 1e-3) + 20.0
    if grid is not None:
        k_hi = max(k_hi, float(np.abs(grid.k).max()))
    ks = np.linspace(0.0, k_hi, 40001)
    vals = np.abs(C.symbol(ks))
    i = int(np.argmax(vals))
    best = float(vals[i])
    lo, hi = ks[max(i - 1, 0)], ks[min(i + 1, ks.size - 1)]
    if hi > lo:
        res = optimize.minimize_scalar(
            lambda k: -abs(float(C.symbol(k))), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12},
        )
        best = max(best, -float(res.fun))
    if grid is not None:
        best = max(best, float(np.abs(C.symbol(grid.k)).max()))
    return best / rho


def _log_abs(v: float) -> float:
    return math.log(abs(v)) if v != 0.0 else -math.inf


def bessel_coefficients(c: float, rho: float, t: float, N: int) -> tuple[np.ndarray, np.ndarray]:
    """Series weights ``coef_cos[k]``, ``coef_sin[k]`` for ``k = 0..N``.

    Powers and factorials are combined in log space, so orders in the hundreds
    do not overflow.
    """
    coef_cos = np.zeros(N + 1)
    coef_sin = np.zeros(N + 1)
    x = abs(t) * math.sqrt(c / rho)
    if x == 0.0:
        coef_cos[0] = 1.0
        return coef_cos, coef_sin
    row = bessel_row(N, x)
    lx = math.log(x)
    log2 = math.log(2.0)
    coef_cos[0] = math.cos(x)
    for k in range(N + 1):
        lf = k * log2 + math.lgamma(k + 1)
        if k > 0:
            jv = row[k - 1]
            if jv != 0.0:
                coef_cos[k] = math.copysign(math.exp((k + 1) * lx + _log_abs(jv) - lf), jv)
        jv = row[k]
        if jv != 0.0:
            coef_sin[k] = t * math.copysign(math.exp(k * lx + _log_abs(jv) - lf), jv)
    return coef_cos, coef_sin


@dataclass(frozen=True)
class SeriesPlan:
    order: int
    t: float
    c: float
    rho: float
    norm_c_op: float
    coef_cos: np.ndarray
    coef_sin: np.ndarray
    bound_cos: float
    bound_sin: float


def make_plan(
    C: Micromodulus,
    rho: float,
    t: float,
    tol: float | None = 1e-10,
    order: int | None = None,
    grid: Grid1D | None = None,
    norm_c_op: float | None = None,
) -> SeriesPlan:
    """Pick the truncation order (from ``tol`` unless ``order`` is given) and weights."""
    c = C.mass()
    if not c > 0:
        raise ValueError(
            f"Bessel series needs positive kernel mass, got {c:g}; use the spectral solver"
        )
    if norm_c_op is None:
        norm_c_op = symbol_sup_norm(C, rho, grid)
    if order is None:
        if tol is None:
            raise ValueError("give either tol or order")
        order = choose_order(t, norm_c_op, tol)
    cc, cs = bessel_coefficients(c, rho, t, order)
    bc, bs = truncation_bounds(order, t, norm_c_op)
    return SeriesPlan(order, float(t), float(c), float(rho), float(norm_c_op), cc, cs, bc, bs)


@dataclass(frozen=True)
class GaussianData:
    """Closed-form data ``amplitude / (sqrt(2 pi) sigma_d) * exp(-x^2 / (2 sigma_d^2))``."""

    sigma_d: float = 0.5
    amplitude: float = 1.0

    def __call__(self, x):
        return self.amplitude * conv_power_gaussian(0, 1.0, 1.0, self.sigma_d, x)


@dataclass(frozen=True)
class ExpJumpData:
    """Closed-form data ``b exp(-eps x)`` for ``x > 0``, ``b/2`` at 0, zero for ``x < 0``."""

    b: float = 1.0
    eps: float = 1.0

    def __call__(self, x):
        return conv_power_expjump(0, 1.0, 1.0, self.b, self.eps, x)


def conv_power_gaussian(k: int, a: float, sigma: float, sigma_d: float, x):
    """``C^k * f`` for a Gaussian kernel ``(a, sigma)`` and unit-mass Gaussian data."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if not (sigma > 0 and sigma_d > 0):
        raise ValueError("sigma and sigma_d must be positive")
    var = k * sigma * sigma + sigma_d * sigma_d
    x = np.asarray(x, dtype=float)
    return a**k / math.sqrt(2.0 * math.pi * var) * np.exp(-0.5 * x * x / var)


def conv_power_expjump(k: int, a: float, sigma: float, b: float, eps: float, x):
    """``C^k * f`` for a Gaussian kernel and ``f = b exp(-eps x)`` on ``x >= 0``.

    For ``k >= 1`` this is ``a^k (b/2) exp(alpha^2 - eps x) erfc(alpha - x/s)``
    with ``s = sigma sqrt(2k)`` and ``alpha = eps s / 2``; where the erfc
    argument is positive the equivalent form ``exp(-x^2/s^2) erfcx(.)`` is
    used so that no factor overflows.
    """
    if k < 0:
        raise ValueError("k must be >= 0")
    if not (sigma > 0 and b > 0 and eps > 0):
        raise ValueError("sigma, b and eps must be positive")
    x = np.asarray(x, dtype=float)
    if k == 0:
        return np.where(x > 0, b * np.exp(-eps * np.where(x > 0, x, 0.0)),
                        np.where(x == 0, 0.5 * b, 0.0))
    s = sigma * math.sqrt(2.0 * k)
    alpha = 0.5 * eps * s
    z = alpha - x / s
    pos = z >= 0
    zp = np.where(pos, z, 0.0)
    zn = np.where(pos, 0.0, z)
    scaled = np.exp(-(x / s) ** 2) * erfcx(zp)
    direct = np.exp(alpha * alpha - eps * np.where(pos, 0.0, x)) * erfc(zn)
    return a**k * 0.5 * b * np.where(pos, scaled, direct)


def conv_power_numeric(C: Micromodulus, f: Field, k: int) -> Field:
    """``C^k * f`` via the multiplier ``(F1 C)^k`` on the grid."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k == 0:
        return f
    g = f.grid
    mult = np.asarray(C.symbol(g.k), dtype=float) ** k
    return idft(Field(g, mult * dft(f).values, spectral=True), real=np.isrealobj(f.values))


def _powers(C, data, grid: Grid1D, N: int) -> list[np.ndarray]:
    """``c^-k C^k * data`` on the grid for ``k = 0..N``."""
    c = C.mass()
    if isinstance(C, GaussianKernel) and isinstance(data, GaussianData):
        return [
            data.amplitude * conv_power_gaussian(k, 1.0, C.sigma, data.sigma_d, grid.x)
            for k in range(N + 1)
        ]
    if isinstance(C, GaussianKernel) and isinstance(data, ExpJumpData):
        return [conv_power_expjump(k, 1.0, C.sigma, data.b, data.eps, grid.x) for k in range(N + 1)]
    f = data if isinstance(data, Field) else grid.sample(data)
    fh = dft(f).values
    ratio = np.asarray(C.symbol(grid.k), dtype=float) / c
    out = []
    cur = fh
    for _ in range(N + 1):
        out.append(idft(Field(grid, cur, spectral=True), real=True).values)
        cur = cur * ratio
    return out


def series_propagate(
    plan: SeriesPlan,
    C: Micromodulus,
    xi,
    eta,
    grid: Grid1D | None = None,
) -> tuple[Field, float]:
    """Displacement at ``plan.t`` from the truncated Bessel series.

    ``xi`` and ``eta`` may be a :class:`Field`, a closed-form data object
    (:class:`GaussianData`, :class:`ExpJumpData`) or ``None`` for zero data.
    Returns ``(u, err_bound)`` where ``err_bound`` bounds the L2 truncation
    error: ``bound_cos ||xi|| + bound_sin ||eta||``.
    """
    if not C.mass() > 0:
        raise ValueError("Bessel series needs positive kernel mass; use the spectral solver")
    if grid is None:
        for d in (xi, eta):
            if isinstance(d, Field):
                grid = d.grid
                break
        else:
            raise ValueError("grid required when no Field data is given")
    u = np.zeros(grid.n)
    err = 0.0
    N = plan.order
    for data, coef, bound in ((xi, plan.coef_cos, plan.bound_cos), (eta, plan.coef_sin, plan.bound_sin)):
        if data is None:
            continue
        terms = _powers(C, data, grid, N)
        # ordered reduction, highest order first (smallest terms)
        for k in range(N, -1, -1):
            if coef[k] != 0.0:
                u += coef[k] * terms[k]
        err += bound * grid.norm(terms[0])
    return Field(grid, u), err
