"""Quantitative checks of the analytic properties of the evolution."""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import optimize

from .kernels import BoxKernel, MaterialParams, Micromodulus, ScaledGaussianKernel, dispersion
from .series import conv_power_numeric
from .spectral import (
    DispersionSymbol,
    Field,
    Grid1D,
    build_symbol,
    classical_symbol,
    dft,
    idft,
    propagate,
    apply_operator,
    _check,
)

__all__ = [
    "RunReport",
    "ConvergenceRecord",
    "StabilityResult",
    "energy",
    "current_j",
    "current_jB",
    "stability_check",
    "instability_growth",
    "spectrum_interval",
    "convergence_study",
    "jump_tracker",
    "classical_movers",
    "fmt",
]


def fmt(v) -> str:
    """Round-trip float formatting (17 significant digits); empty for None/NaN."""
    if v is None:
        return ""
    v = float(v)
    if math.isnan(v):
        return ""
    return f"{v:.17g}"


@dataclass
class RunReport:
    times: np.ndarray
    energy: np.ndarray
    j_uv: np.ndarray
    j_uB: np.ndarray
    l2_norms: np.ndarray
    jump_locations: np.ndarray | None = None

    COLUMNS = ("t", "energy", "j_uv", "j_uB", "l2_norm", "jump_x")

    def __post_init__(self):
        n = len(self.times)
        cols = [self.energy, self.j_uv, self.j_uB, self.l2_norms]
        if self.jump_locations is not None:
            cols.append(self.jump_locations)
        if any(len(c) != n for c in cols):
            raise ValueError("all report arrays must share the length of times")

    def write_csv(self, path) -> None:
        jumps = self.jump_locations
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(self.COLUMNS)
            for i, t in enumerate(self.times):
                jx = None if jumps is None else jumps[i]
                w.writerow([fmt(t), fmt(self.energy[i]), fmt(self.j_uv[i]),
                            fmt(self.j_uB[i]), fmt(self.l2_norms[i]), fmt(jx)])


@dataclass
class ConvergenceRecord:
    nu_values: np.ndarray
    errors: np.ndarray
    t: float
    family: str = ""
    symbol_bound_violation: float = 0.0

    def __post_init__(self):
        self.nu_values = np.asarray(self.nu_values, dtype=float)
        self.errors = np.asarray(self.errors, dtype=float)
        if self.nu_values.shape != self.errors.shape:
            raise ValueError("nu_values and errors must align")
        if np.any(np.diff(self.nu_values) <= 0):
            raise ValueError("nu values must be strictly increasing")

    @property
    def strictly_decreasing(self) -> bool:
        return bool(np.all(np.diff(self.errors) < 0))

    def write_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(("nu", "l2_error"))
            for nu, e in zip(self.nu_values, self.errors):
                w.writerow([fmt(nu), fmt(e)])


def energy(u: Field, udot: Field, sym: DispersionSymbol) -> float:
    """``(<u'|u'> + <u|A u>) / 2`` with the grid inner product."""
    _check(sym.grid, u, udot)
    g = sym.grid
    total = g.inner(udot, udot) + g.inner(u, apply_operator(sym, u))
    return 0.5 * float(np.real(total))


def current_j(u: Field, udot: Field, v: Field, vdot: Field):
    """``<u|v'> - <u'|v>``; conserved along pairs of solutions."""
    g = u.grid
    _check(g, udot, v, vdot)
    return g.inner(u, vdot) - g.inner(udot, v)


def current_jB(u: Field, udot: Field, C: Micromodulus):
    """``<u|B u'> - <u'|B u>`` with ``B`` the convolution by ``C``."""
    g = u.grid
    _check(g, udot)
    return g.inner(u, conv_power_numeric(C, udot, 1)) - g.inner(udot, conv_power_numeric(C, u, 1))


@dataclass(frozen=True)
class StabilityResult:
    applicable: bool
    ok: bool | None
    max_violation: float


def stability_check(
    sym: DispersionSymbol,
    xi: Field,
    eta: Field,
    times: Sequence[float],
    slack: float = 1e-10,
) -> StabilityResult:
    """Check ``||u(t)|| <= ||xi|| + |t| ||eta||`` at every sampled time.

    Not applicable (``applicable=False``) when the symbol takes negative values.
    """
    if not sym.is_nonnegative:
        return StabilityResult(False, None, math.nan)
    nx, ne = xi.norm(), eta.norm()
    worst = -math.inf
    for t in times:
        u, _ = propagate(sym, xi, eta, t, warn_boundary=None)
        worst = max(worst, u.norm() - (nx + abs(t) * ne))
    return StabilityResult(True, worst <= slack, worst)


def _scan_extrema(func, k_max: float, n: int = 20001):
    ks = np.linspace(0.0, k_max, n)
    vals = np.asarray(func(ks), dtype=float)
    out = []
    for idx, sign in ((int(np.argmin(vals)), 1.0), (int(np.argmax(vals)), -1.0)):
        best_k, best = ks[idx], vals[idx]
        lo, hi = ks[max(idx - 1, 0)], ks[min(idx + 1, n - 1)]
        res = optimize.minimize_scalar(
            lambda k: sign * float(func(k)), bounds=(lo, hi), method="bounded",
            options={"xatol": 1e-12},
        )
        if sign * res.fun < sign * best:
            best_k, best = float(res.x), sign * float(res.fun)
        out.append((float(best_k), float(best)))
    return out


def spectrum_interval(C: Micromodulus, rho: float, k_max: float) -> tuple[float, float]:
    """``(min, max)`` of the dispersion over ``[0, k_max]``.

    An inner approximation of the spectrum of ``A_C``, which is the closure of
    the range of the dispersion over the whole line.
    """
    if not k_max > 0:
        raise ValueError("k_max must be positive")
    (_, lo), (_, hi) = _scan_extrema(lambda k: dispersion(C, rho, k), k_max)
    return lo, hi


def instability_growth(
    C: Micromodulus,
    rho: float,
    t_max: float = 40.0,
    grid: Grid1D | None = None,
    k_max: float = 50.0,
    band: float | None = None,
    k_center: float | None = None,
    n_times: int = 41,
) -> tuple[float, float]:
    """Most negative dispersion ``lambda0`` and the measured growth rate.

    The witness is a narrow Gaussian packet in frequency centred on the
    minimizing wavenumber (or ``k_center``), kept to grid modes within three
    packet widths.  The rate is the least-squares slope of ``log ||u(t)||``
    over the last quarter of ``[0, t_max]``.
    """
    grid = grid or Grid1D(4096, 80.0)
    (k0, lam0), _ = _scan_extrema(lambda k: dispersion(C, rho, k), k_max)
    if not lam0 < 0:
        raise ValueError("dispersion is nonnegative on the scanned range; no unstable modes")
    kc = k0 if k_center is None else float(k_center)
    width = band if band is not None else 2.0 * grid.dk
    k = grid.k
    dist = np.minimum(np.abs(k - kc), np.abs(k + kc))
    packet = np.where(dist <= 3.0 * width, np.exp(-0.5 * (dist / width) ** 2), 0.0)
    if not packet.any():
        raise ValueError("packet contains no grid modes; widen the band")
    xi = idft(Field(grid, packet.astype(complex), spectral=True), real=True)
    sym = build_symbol(C, rho, grid)
    zero = grid.zeros()
    times = np.linspace(0.75 * t_max, t_max, n_times)
    logs = [math.log(propagate(sym, xi, zero, t, warn_boundary=None)[0].norm()) for t in times]
    rate = float(np.polyfit(times, logs, 1)[0])
    return lam0, rate


def convergence_study(
    family: str,
    nu_values: Sequence[float],
    params: MaterialParams,
    xi: Field,
    eta: Field,
    t: float,
) -> ConvergenceRecord:
    """L2 distance between nonlocal solutions for ``C_nu`` and the classical one.

    Also records the worst violation of ``0 <= lambda_nu(k) <= (E/rho) k^2``
    over the grid frequencies (stored as ``symbol_bound_violation``; a value
    of at most zero means the bound holds).
    """
    builders = {"box": BoxKernel, "scaled_gaussian": ScaledGaussianKernel}
    if family not in builders:
        raise ValueError(f"unknown family {family!r}; expected one of {sorted(builders)}")
    nus = np.asarray(nu_values, dtype=float)
    if nus.size == 0:
        raise ValueError("empty nu list")
    grid = xi.grid
    cl = classical_symbol(params, grid)
    ucl, _ = propagate(cl, xi, eta, t, warn_boundary=None)
    errs = []
    violation = -math.inf
    for nu in nus:
        sym = build_symbol(builders[family](params.E, float(nu)), params.rho, grid)
        violation = max(violation, float(np.max(-sym.lam)), float(np.max(sym.lam - cl.lam)))
        u, _ = propagate(sym, xi, eta, t, warn_boundary=None)
        errs.append(grid.norm(u.values - ucl.values))
    return ConvergenceRecord(nus, np.array(errs), float(t), family, violation)


def jump_tracker(u: Field, factor: float = 5.0) -> float | None:
    """Position of the dominant single-cell jump, or ``None``.

    The jump is the largest ``|u[i+1] - u[i]|``, reported at the cell midpoint;
    it must exceed ``factor`` times the median cell difference, taken over
    cells whose difference is above ``1e-3`` of the largest.  Ties go to the
    midpoint closest to the origin.
    """
    v = np.asarray(u.values).real
    d = np.abs(np.diff(v))
    if d.size == 0:
        return None
    top = d.max()
    if top == 0.0:
        return None
    # median over cells where the field is not numerically flat
    active = d[d > 1e-3 * top]
    if not top > factor * np.median(active):
        return None
    mids = u.grid.x[:-1] + 0.5 * u.grid.h
    cand = np.flatnonzero(d == top)
    return float(mids[cand[np.argmin(np.abs(mids[cand]))]])


def classical_movers(
    params: MaterialParams, xi: Field, eta: Field, t: float
) -> tuple[Field, Field]:
    """Right- and left-moving parts of the classical solution at time ``t``.

    With speed ``v = sqrt(E/rho)`` the classical solution splits as
    ``u = R(x - v t) + L(x + v t)`` with ``R = (xi - V)/2``, ``L = (xi + V)/2``
    and ``V' = eta / v``; both parts are shifted exactly in Fourier space.
    """
    g = xi.grid
    _check(g, eta)
    v = math.sqrt(params.E / params.rho)
    k = g.k
    xh = dft(xi).values
    eh = dft(eta).values
    safe = np.where(k == 0, 1.0, k)
    # antiderivative of eta / v in Fourier space; the mean mode splits evenly
    vh = np.where(k == 0, 0.0, eh / (1j * safe * v))
    rh = 0.5 * (xh - vh) * np.exp(-1j * k * v * t)
    lh = 0.5 * (xh + vh) * np.exp(1j * k * v * t)
    if eh[0] != 0:
        rh[0] += 0.5 * t * eh[0]
        lh[0] += 0.5 * t * eh[0]
    right = idft(Field(g, rh, spectral=True), real=True)
    left = idft(Field(g, lh, spectral=True), real=True)
    return right, left
