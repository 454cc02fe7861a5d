"""Exact-in-time propagation by Fourier multipliers on a periodic grid.

The whole line is truncated to the periodic box ``[-L/2, L/2)``.  A bounded
function ``g`` of the governing operator acts on a field by multiplying its
discrete Fourier coefficients with ``g(lambda(k_j))``.  The wave propagators
are the entire extensions

    cos-branch  c(t, lam) = cos(t sqrt(lam))        (cosh for lam < 0)
    sin-branch  s(t, lam) = sin(t sqrt(lam))/sqrt(lam)   (t at 0, sinh for lam < 0)

so ``u(t) = c(t, A) xi + s(t, A) eta`` with no time stepping.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .kernels import MaterialParams, Micromodulus, dispersion

__all__ = [
    "Grid1D",
    "Field",
    "DispersionSymbol",
    "BoundaryWarning",
    "GridMismatchError",
    "dft",
    "idft",
    "build_symbol",
    "classical_symbol",
    "apply_operator",
    "apply_multiplier",
    "propagate",
    "cos_branch",
    "sin_branch",
    "duhamel",
    "default_quad_panels",
    "boundary_excess",
]


class GridMismatchError(ValueError):
    pass


class BoundaryWarning(RuntimeWarning):
    """Field is not negligible at the edge of the periodic box."""


@dataclass(frozen=True)
class Grid1D:
    n: int = 4096
    length: float = 80.0

    def __post_init__(self):
        n = int(self.n)
        if n < 8 or n & (n - 1):
            raise ValueError(f"grid size must be a power of two >= 8, got {self.n}")
        if not self.length > 0:
            raise ValueError("grid length must be positive")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "length", float(self.length))

    @property
    def h(self) -> float:
        return self.length / self.n

    @property
    def x(self) -> np.ndarray:
        return -0.5 * self.length + self.h * np.arange(self.n)

    @property
    def k(self) -> np.ndarray:
        """Wavenumbers in FFT order; ``k[0] = 0``."""
        return 2.0 * np.pi * np.fft.fftfreq(self.n, d=self.h)

    @property
    def dk(self) -> float:
        return 2.0 * np.pi / self.length

    def inner(self, f, g) -> complex | float:
        """Grid inner product ``h * sum(conj(f) g)``, antilinear in ``f``."""
        f = _values(f)
        g = _values(g)
        val = self.h * np.vdot(f, g)
        if np.isrealobj(f) and np.isrealobj(g):
            return float(val.real)
        return complex(val)

    def norm(self, f) -> float:
        v = _values(f)
        return math.sqrt(self.h * float(np.vdot(v, v).real))

    def sample(self, func: Callable) -> "Field":
        return Field(self, np.asarray(func(self.x), dtype=float))

    def zeros(self) -> "Field":
        return Field(self, np.zeros(self.n))


@dataclass(frozen=True)
class Field:
    """Samples of a displacement-like quantity on ``grid`` (or its DFT)."""

    grid: Grid1D
    values: np.ndarray
    spectral: bool = False

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.shape != (self.grid.n,):
            raise GridMismatchError(f"expected {self.grid.n} values, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def norm(self) -> float:
        if self.spectral:
            return math.sqrt(self.grid.dk * float(np.vdot(self.values, self.values).real))
        return self.grid.norm(self.values)

    @property
    def real(self) -> "Field":
        return Field(self.grid, self.values.real, self.spectral)


def _values(f) -> np.ndarray:
    return f.values if isinstance(f, Field) else np.asarray(f)


def _check(grid: Grid1D, *fields: Field) -> None:
    for f in fields:
        if f.grid != grid:
            raise GridMismatchError(f"field on {f.grid} but operator on {grid}")


def _phase(grid: Grid1D) -> np.ndarray:
    # the first sample sits at x0 = -L/2, not at the origin
    return np.exp(-1j * grid.k * grid.x[0])


def dft(f: Field) -> Field:
    """Unitary discrete surrogate of the continuous Fourier transform.

    ``fhat(k_j) = h / sqrt(2 pi) * sum_m f(x_m) exp(-i k_j x_m)`` so that
    ``sum |f|^2 h = sum |fhat|^2 (2 pi / L)``.
    """
    g = f.grid
    vals = np.fft.fft(f.values) * _phase(g) * (g.h / math.sqrt(2.0 * math.pi))
    return Field(g, vals, spectral=True)


def idft(fhat: Field, real: bool | None = None) -> Field:
    """Inverse of :func:`dft`; returns real values when ``real`` (default: imag ~ 0)."""
    g = fhat.grid
    vals = np.fft.ifft(fhat.values / _phase(g)) * (math.sqrt(2.0 * math.pi) / g.h)
    if real is None:
        real = bool(np.max(np.abs(vals.imag), initial=0.0) <= 1e-12 * max(np.max(np.abs(vals.real), initial=0.0), 1e-300))
    return Field(g, vals.real if real else vals)


@dataclass(frozen=True)
class DispersionSymbol:
    """Multiplier ``lambda(k_j)`` of an operator on ``grid`` (FFT order)."""

    grid: Grid1D
    lam: np.ndarray

    def __post_init__(self):
        lam = np.array(self.lam, dtype=float)
        if lam.shape != (self.grid.n,):
            raise GridMismatchError("symbol length does not match grid")
        lam.setflags(write=False)
        object.__setattr__(self, "lam", lam)

    @property
    def lambda_min(self) -> float:
        return float(self.lam.min())

    @property
    def lambda_max(self) -> float:
        return float(self.lam.max())

    @property
    def is_nonnegative(self) -> bool:
        return self.lambda_min >= 0.0


def build_symbol(C: Micromodulus, rho: float, grid: Grid1D) -> DispersionSymbol:
    """Multiplier of ``A_C`` on the grid frequencies."""
    lam = np.asarray(dispersion(C, rho, grid.k), dtype=float)
    lam[0] = 0.0
    return DispersionSymbol(grid, lam)


def classical_symbol(params: MaterialParams, grid: Grid1D) -> DispersionSymbol:
    """Multiplier ``(E/rho) k^2`` of the local operator ``-(E/rho) d^2/dx^2``."""
    return DispersionSymbol(grid, params.E / params.rho * grid.k**2)


def apply_multiplier(mult: np.ndarray, f: Field) -> Field:
    real = np.isrealobj(f.values)
    return idft(Field(f.grid, mult * dft(f).values, spectral=True), real=real)


def apply_operator(sym: DispersionSymbol, f: Field) -> Field:
    _check(sym.grid, f)
    return apply_multiplier(sym.lam, f)


def cos_branch(t: float, lam):
    """Entire extension of ``cos(t sqrt(lam))``."""
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(np.abs(lam))
    pos = lam >= 0
    # mask the argument so the discarded branch cannot overflow
    return np.where(pos, np.cos(t * np.where(pos, r, 0.0)), np.cosh(t * np.where(pos, 0.0, r)))


def sin_branch(t: float, lam):
    """Entire extension of ``sin(t sqrt(lam)) / sqrt(lam)``; equals ``t`` at 0."""
    lam = np.asarray(lam, dtype=float)
    r = np.sqrt(np.abs(lam))
    safe = np.where(r > 0, r, 1.0)
    pos = lam > 0
    osc = np.sin(t * np.where(pos, r, 0.0)) / safe
    grow = np.sinh(t * np.where(pos, 0.0, r)) / safe
    return np.where(r == 0, t, np.where(pos, osc, grow))


def boundary_excess(f: Field, edge_cells: int = 4) -> float:
    """Largest edge magnitude relative to the peak (0 for a zero field)."""
    v = np.abs(_values(f))
    peak = v.max(initial=0.0)
    if peak == 0.0:
        return 0.0
    edge = max(v[:edge_cells].max(), v[-edge_cells:].max())
    return float(edge / peak)


def propagate(
    sym: DispersionSymbol,
    xi: Field,
    eta: Field,
    t: float,
    warn_boundary: float | None = 1e-8,
) -> tuple[Field, Field]:
    """Solve ``u'' = -A u`` with ``u(0) = xi``, ``u'(0) = eta``; return ``(u(t), u'(t))``."""
    _check(sym.grid, xi, eta)
    lam = sym.lam
    c = cos_branch(t, lam)
    s = sin_branch(t, lam)
    xh = dft(xi).values
    eh = dft(eta).values
    real = np.isrealobj(xi.values) and np.isrealobj(eta.values)
    g = sym.grid
    u = idft(Field(g, c * xh + s * eh, spectral=True), real=real)
    ud = idft(Field(g, -lam * s * xh + c * eh, spectral=True), real=real)
    if warn_boundary is not None:
        excess = boundary_excess(u)
        if excess > warn_boundary:
            warnings.warn(
                f"solution at t={t:g} reaches {excess:.2e} of its peak at the box edge; "
                "periodization error may be significant",
                BoundaryWarning,
                stacklevel=2,
            )
    return u, ud


def default_quad_panels(t: float, sym: DispersionSymbol) -> int:
    lam_max = max(sym.lambda_max, 0.0)
    n = max(64, int(math.ceil(abs(t) * math.sqrt(lam_max) * 8.0)))
    return n + (n % 2)


def duhamel(
    sym: DispersionSymbol,
    forcing: Callable[[float], Field | np.ndarray],
    t: float,
    n_quad: int | None = None,
    with_velocity: bool = False,
):
    """Solution of ``v'' + A v = f`` with ``v(0) = v'(0) = 0``.

    ``v(t) = int_0^t s(t - tau, A) f(tau) dtau``, integrated mode by mode with
    the composite Simpson rule on ``n_quad`` panels.  With ``with_velocity``
    also returns ``v'(t) = int_0^t c(t - tau, A) f(tau) dtau``.
    """
    if sym.lambda_min < 0:
        raise ValueError("Duhamel solution requires a nonnegative symbol")
    if n_quad is None:
        n_quad = default_quad_panels(t, sym)
    if n_quad <= 0 or n_quad % 2:
        raise ValueError(f"n_quad must be a positive even integer, got {n_quad}")
    g = sym.grid
    if t == 0:
        z = g.zeros()
        return (z, g.zeros()) if with_velocity else z

    taus = np.linspace(0.0, t, n_quad + 1)
    w = np.ones(n_quad + 1)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    w *= (t / n_quad) / 3.0

    vh = np.zeros(g.n, dtype=complex)
    vdh = np.zeros(g.n, dtype=complex)
    real = True
    for wi, tau in zip(w, taus):
        f = forcing(float(tau))
        f = f if isinstance(f, Field) else Field(g, np.asarray(f))
        _check(g, f)
        real = real and np.isrealobj(f.values)
        fh = dft(f).values
        vh += wi * sin_branch(t - tau, sym.lam) * fh
        if with_velocity:
            vdh += wi * cos_branch(t - tau, sym.lam) * fh
    v = idft(Field(g, vh, spectral=True), real=real)
    if with_velocity:
        return v, idft(Field(g, vdh, spectral=True), real=real)
    return v
