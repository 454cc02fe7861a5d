"""Exact propagation for the one-dimensional nonlocal (peridynamic) wave equation."""
from .kernels import (
    BoxKernel,
    GaussianKernel,
    MaterialParams,
    SampledKernel,
    ScaledGaussianKernel,
    SignedGaussianMixture,
    dispersion,
    fourier_symbol,
    l1_norm,
    mass,
    operator_norm_bound,
    parse_kernel,
)
from .series import (
    ExpJumpData,
    GaussianData,
    SeriesPlan,
    UnreachableToleranceError,
    choose_order,
    make_plan,
    series_propagate,
    truncation_bounds,
)
from .spectral import (
    BoundaryWarning,
    DispersionSymbol,
    Field,
    Grid1D,
    GridMismatchError,
    build_symbol,
    classical_symbol,
    duhamel,
    propagate,
)
from .specfun import bessel_row, hyper_0F1, spherical_bessel_j

__version__ = "0.1.0"
