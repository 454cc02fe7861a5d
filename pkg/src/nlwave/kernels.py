"""Micromodulus kernel models.

Every kernel is an even, integrable function ``C`` on the real line.  Each
model knows its mass ``int C``, its L1 norm, its pointwise values and its
Fourier symbol ``(F1 C)(k) = int exp(-i k x) C(x) dx``, which is real and even.
The governing operator ``A_C f = ((int C) f - C * f) / rho`` acts in Fourier
space as multiplication by ``dispersion(C, rho, k)``.
"""
from __future__ import annotations

import ast
import csv
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Union

import numpy as np
from scipy import integrate

__all__ = [
    "GaussianKernel",
    "BoxKernel",
    "ScaledGaussianKernel",
    "SignedGaussianMixture",
    "SampledKernel",
    "Micromodulus",
    "MaterialParams",
    "mass",
    "l1_norm",
    "fourier_symbol",
    "dispersion",
    "operator_norm_bound",
    "evaluate",
    "parse_kernel",
]

_SQRT2PI = math.sqrt(2.0 * math.pi)


@dataclass(frozen=True)
class MaterialParams:
    """Mass density ``rho`` and Young's modulus ``E`` of the bar."""

    rho: float = 1.0
    E: float = 1.0

    def __post_init__(self):
        if not (self.rho > 0 and self.E > 0):
            raise ValueError(f"need rho > 0 and E > 0, got rho={self.rho}, E={self.E}")


@dataclass(frozen=True)
class GaussianKernel:
    """``C(x) = a / (sqrt(2 pi) sigma) * exp(-x^2 / (2 sigma^2))``."""

    a: float = 1.0
    sigma: float = 1.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError("sigma must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.a / (_SQRT2PI * self.sigma) * np.exp(-0.5 * (x / self.sigma) ** 2)

    def mass(self) -> float:
        return float(self.a)

    def l1_norm(self) -> float:
        return abs(float(self.a))

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        return self.a * np.exp(-0.5 * (self.sigma * k) ** 2)

    def support_radius(self) -> float:
        return 12.0 * self.sigma


@dataclass(frozen=True)
class BoxKernel:
    """``C_nu = 3 E nu^3`` on ``[-1/nu, 1/nu]``, zero elsewhere."""

    E: float = 1.0
    nu: float = 1.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(np.abs(x) <= 1.0 / self.nu, 3.0 * self.E * self.nu**3, 0.0)

    def mass(self) -> float:
        return 6.0 * self.E * self.nu**2

    def l1_norm(self) -> float:
        return abs(self.mass())

    def symbol(self, k):
        # 6 E nu^2 * sin(u)/u with u = k/nu; Taylor branch near the removable point
        u = np.asarray(k, dtype=float) / self.nu
        small = np.abs(u) < 1e-4
        safe = np.where(small, 1.0, u)
        u2 = u * u
        taylor = 1.0 - u2 / 6.0 + u2 * u2 / 120.0 - u2**3 / 5040.0
        sinc = np.where(small, taylor, np.sin(safe) / safe)
        return self.mass() * sinc

    def support_radius(self) -> float:
        return 1.0 / self.nu


@dataclass(frozen=True)
class ScaledGaussianKernel:
    """``C_nu = 2 E nu^3 / sqrt(2 pi) * exp(-(nu^2/2) x^2)``.

    Same shape as a :class:`GaussianKernel` with ``a = 2 E nu^2`` and
    ``sigma = 1/nu``.
    """

    E: float = 1.0
    nu: float = 1.0

    def __post_init__(self):
        if not self.nu > 0:
            raise ValueError("nu must be positive")

    def as_gaussian(self) -> GaussianKernel:
        return GaussianKernel(a=2.0 * self.E * self.nu**2, sigma=1.0 / self.nu)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return 2.0 * self.E * self.nu**3 / _SQRT2PI * np.exp(-0.5 * (self.nu * x) ** 2)

    def mass(self) -> float:
        return 2.0 * self.E * self.nu**2

    def l1_norm(self) -> float:
        return abs(self.mass())

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        return self.mass() * np.exp(-0.5 * (k / self.nu) ** 2)

    def support_radius(self) -> float:
        return 12.0 / self.nu


@dataclass(frozen=True)
class SignedGaussianMixture:
    """Sum of Gaussian terms ``(a_i, sigma_i)``; amplitudes may be negative."""

    terms: tuple = ()

    def __post_init__(self):
        terms = tuple((float(a), float(s)) for a, s in self.terms)
        if not terms:
            raise ValueError("mixture needs at least one term")
        if any(s <= 0 for _, s in terms):
            raise ValueError("all sigma_i must be positive")
        object.__setattr__(self, "terms", terms)

    @property
    def components(self) -> list[GaussianKernel]:
        return [GaussianKernel(a, s) for a, s in self.terms]

    def __call__(self, x):
        return sum(g(x) for g in self.components)

    def mass(self) -> float:
        return math.fsum(a for a, _ in self.terms)

    def is_sign_constant(self) -> bool:
        signs = {math.copysign(1.0, a) for a, _ in self.terms if a != 0.0}
        return len(signs) <= 1

    def l1_norm(self) -> float:
        if self.is_sign_constant():
            return math.fsum(abs(a) for a, _ in self.terms)
        # even integrand: twice the half-line integral
        r = self.support_radius()
        val, _ = integrate.quad(
            lambda x: abs(float(self(x))), 0.0, r, epsabs=1e-13, epsrel=1e-12, limit=400
        )
        return 2.0 * val

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        return sum(g.symbol(k) for g in self.components)

    def support_radius(self) -> float:
        return 12.0 * max(s for _, s in self.terms)


@dataclass(frozen=True)
class SampledKernel:
    """Kernel tabulated on the half line ``x_i = i*h``, ``i = 0..m-1``.

    The negative half is the mirror image.  Values between nodes are linearly
    interpolated; the kernel vanishes beyond the last node.
    """

    h: float
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        s = np.array(self.samples, dtype=float)
        if s.ndim != 1 or s.size < 2:
            raise ValueError("need at least two half-line samples")
        if not self.h > 0:
            raise ValueError("spacing h must be positive")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)

    @classmethod
    def from_symmetric(cls, h: float, values, atol: float = 0.0) -> "SampledKernel":
        """Build from samples on ``-(m-1)h .. (m-1)h``; asymmetric input is rejected."""
        v = np.asarray(values, dtype=float)
        if v.size % 2 != 1:
            raise ValueError("symmetric sample array must have odd length")
        if not np.allclose(v, v[::-1], rtol=0.0, atol=atol):
            raise ValueError("kernel samples are not even; refusing to symmetrize")
        return cls(h, v[v.size // 2 :])

    @classmethod
    def from_csv(cls, path) -> "SampledKernel":
        """Read ``x,value`` rows with ``x >= 0`` ascending and uniformly spaced."""
        xs, vs = [], []
        with open(Path(path), newline="") as fh:
            for row in csv.reader(fh):
                if not row or row[0].strip().startswith("#"):
                    continue
                try:
                    xs.append(float(row[0]))
                    vs.append(float(row[1]))
                except ValueError:
                    if xs:
                        raise
                    continue  # header
        x = np.asarray(xs)
        if x.size < 2 or x[0] != 0.0 or np.any(np.diff(x) <= 0):
            raise ValueError("sampled kernel CSV needs x starting at 0, strictly ascending")
        h = x[1] - x[0]
        if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0.0):
            raise ValueError("sampled kernel CSV must be uniformly spaced")
        return cls(float(h), np.asarray(vs))

    @property
    def nodes(self) -> np.ndarray:
        return self.h * np.arange(self.samples.size)

    def _weights(self) -> np.ndarray:
        # full-line trapezoid weights on the mirrored grid, folded onto x >= 0
        w = np.full(self.samples.size, 2.0 * self.h)
        w[0] = self.h
        w[-1] = self.h
        return w

    def __call__(self, x):
        ax = np.abs(np.asarray(x, dtype=float))
        return np.interp(ax, self.nodes, self.samples, right=0.0)

    def mass(self) -> float:
        return float(self._weights() @ self.samples)

    def l1_norm(self) -> float:
        return float(self._weights() @ np.abs(self.samples))

    def symbol(self, k):
        k = np.asarray(k, dtype=float)
        w = self._weights() * self.samples
        out = np.cos(np.multiply.outer(k, self.nodes)) @ w
        return out

    def support_radius(self) -> float:
        return float(self.nodes[-1])


Micromodulus = Union[
    GaussianKernel, BoxKernel, ScaledGaussianKernel, SignedGaussianMixture, SampledKernel
]


def mass(C: Micromodulus) -> float:
    """Integral of the kernel over the line."""
    return C.mass()


def l1_norm(C: Micromodulus) -> float:
    return C.l1_norm()


def fourier_symbol(C: Micromodulus, k):
    """``(F1 C)(k)``; real and even in ``k``."""
    return C.symbol(k)


def dispersion(C: Micromodulus, rho: float, k):
    """Multiplier ``((F1 C)(0) - (F1 C)(k)) / rho`` of the governing operator."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return (C.symbol(0.0) - C.symbol(k)) / rho


def operator_norm_bound(C: Micromodulus, rho: float) -> float:
    """``(|int C| + ||C||_1) / rho``, never larger than ``2 ||C||_1 / rho``."""
    if not rho > 0:
        raise ValueError("rho must be positive")
    return (abs(C.mass()) + C.l1_norm()) / rho


def evaluate(C: Micromodulus, x):
    return C(x)


_CALL = re.compile(r"^\s*([A-Za-z_]\w*)\s*\((.*)\)\s*$", re.S)


def parse_kernel(spec: str) -> Micromodulus:
    """Parse a kernel specification string.

    Accepted forms::

        gaussian(a=1,sigma=1)
        box(E=1,nu=4)
        scaled_gaussian(E=1,nu=8)
        mixture((1.2,0.5),(-1,1))
        sampled(path/to/kernel.csv)
    """
    m = _CALL.match(spec)
    if not m:
        raise ValueError(f"cannot parse kernel spec {spec!r}")
    name, body = m.group(1).lower(), m.group(2).strip()
    if name == "sampled":
        return SampledKernel.from_csv(body.strip("'\""))

    try:
        call = ast.parse(f"f({body})", mode="eval").body
        args = [ast.literal_eval(a) for a in call.args]
        kwargs = {kw.arg: ast.literal_eval(kw.value) for kw in call.keywords}
    except (SyntaxError, ValueError) as exc:
        raise ValueError(f"bad arguments in kernel spec {spec!r}") from exc

    builders = {
        "gaussian": GaussianKernel,
        "box": BoxKernel,
        "scaled_gaussian": ScaledGaussianKernel,
    }
    if name in builders:
        if args:
            raise ValueError(f"{name} takes keyword arguments only")
        try:
            return builders[name](**{k: float(v) for k, v in kwargs.items()})
        except TypeError as exc:
            raise ValueError(f"bad arguments in kernel spec {spec!r}") from exc
    if name == "mixture":
        if kwargs or not args or not all(isinstance(t, tuple) and len(t) == 2 for t in args):
            raise ValueError("mixture expects (a, sigma) pairs")
        return SignedGaussianMixture(tuple(args))
    raise ValueError(f"unknown kernel type {name!r}")
