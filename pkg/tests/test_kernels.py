import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from nlwave.kernels import (
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


def quad_symbol(C, k, r):
    val, _ = integrate.quad(lambda x: float(C(x)) * math.cos(k * x), 0.0, r, limit=400,
                            epsabs=1e-13, epsrel=1e-11)
    return 2.0 * val


def test_material_params_validation():
    with pytest.raises(ValueError):
        MaterialParams(rho=0.0)
    with pytest.raises(ValueError):
        MaterialParams(E=-1.0)


def test_gaussian_mass_and_symbol():
    C = GaussianKernel(1.0, 1.0)
    assert mass(C) == 1.0
    assert fourier_symbol(C, 0.0) == 1.0
    assert fourier_symbol(C, 2.0) == pytest.approx(math.exp(-2.0), rel=1e-15)
    for k in (0.0, 0.7, 3.0):
        assert fourier_symbol(C, k) == pytest.approx(quad_symbol(C, k, 15.0), rel=1e-10, abs=1e-14)


def test_gaussian_validation():
    with pytest.raises(ValueError):
        GaussianKernel(1.0, 0.0)


def test_box_kernel():
    C = BoxKernel(E=1.0, nu=2.0)
    assert mass(C) == pytest.approx(24.0)
    assert C(0.5) == 24.0 and C(0.51) == 0.0
    for k in (0.0, 1e-6, 0.3, 5.0, 40.0):
        ref = quad_symbol(C, k, 0.5)
        assert fourier_symbol(C, k) == pytest.approx(ref, rel=1e-10, abs=1e-12)


def test_box_symbol_near_removable_point():
    C = BoxKernel(E=1.0, nu=1.0)
    for u in (1e-9, 5e-5, 2e-4):
        assert fourier_symbol(C, u) == pytest.approx(6.0 * math.sin(u) / u, rel=1e-15)


def test_scaled_gaussian():
    C = ScaledGaussianKernel(E=2.0, nu=3.0)
    assert mass(C) == pytest.approx(36.0)
    g = C.as_gaussian()
    x = np.linspace(-2, 2, 11)
    assert np.allclose(C(x), g(x), rtol=1e-14)
    assert fourier_symbol(C, 1.3) == pytest.approx(float(g.symbol(1.3)), rel=1e-14)


def test_mixture_l1_by_quadrature():
    C = SignedGaussianMixture(((1.2, 0.5), (-1.0, 1.0)))
    assert mass(C) == pytest.approx(0.2, abs=1e-15)
    assert not C.is_sign_constant()
    ref, _ = integrate.quad(lambda x: abs(float(C(x))), -20, 20, points=[-1, 0, 1], limit=400)
    assert l1_norm(C) == pytest.approx(ref, rel=1e-9)
    assert l1_norm(C) > abs(mass(C))


def test_mixture_symbol_closed_form():
    C = SignedGaussianMixture(((1.2, 0.5), (-1.0, 1.0)))
    k = 2.0
    lam = 0.2 - 1.2 * math.exp(-k * k / 8) + math.exp(-k * k / 2)
    assert float(dispersion(C, 1.0, k)) == pytest.approx(lam, rel=1e-14)
    assert lam < 0


def test_sampled_kernel_matches_gaussian():
    G = GaussianKernel(1.0, 1.0)
    h = 0.01
    C = SampledKernel(h, G(h * np.arange(1300)))
    assert mass(C) == pytest.approx(1.0, abs=1e-12)
    for k in (0.5, 2.0):
        assert float(fourier_symbol(C, k)) == pytest.approx(float(G.symbol(k)), abs=1e-9)
    assert float(C(-0.005)) == pytest.approx(float(G(0.005)), rel=1e-4)
    assert float(C(100.0)) == 0.0


def test_sampled_from_symmetric_rejects_odd_function():
    with pytest.raises(ValueError):
        SampledKernel.from_symmetric(0.1, [1.0, 2.0, 3.0])
    C = SampledKernel.from_symmetric(0.1, [1.0, 2.0, 1.0])
    assert list(C.samples) == [2.0, 1.0]


def test_sampled_from_csv(tmp_path):
    p = tmp_path / "k.csv"
    p.write_text("x,value\n0,1\n0.5,0.5\n1,0\n")
    C = SampledKernel.from_csv(p)
    assert C.h == 0.5
    assert mass(C) == pytest.approx(1.0)
    bad = tmp_path / "bad.csv"
    bad.write_text("0,1\n0.5,0.5\n1.2,0\n")
    with pytest.raises(ValueError):
        SampledKernel.from_csv(bad)


def test_operator_norm_bound():
    assert operator_norm_bound(GaussianKernel(1.0, 1.0), 1.0) == 2.0
    C = SignedGaussianMixture(((1.2, 0.5), (-1.0, 1.0)))
    assert operator_norm_bound(C, 2.0) <= 2 * l1_norm(C) / 2.0 + 1e-15
    with pytest.raises(ValueError):
        operator_norm_bound(C, 0.0)


def test_parse_kernel():
    assert parse_kernel("gaussian(a=1,sigma=2)") == GaussianKernel(1.0, 2.0)
    assert parse_kernel("box(E=1, nu=8)") == BoxKernel(1.0, 8.0)
    assert parse_kernel("scaled_gaussian(nu=4)") == ScaledGaussianKernel(1.0, 4.0)
    assert parse_kernel("mixture((1.2,0.5),(-1,1))").terms == ((1.2, 0.5), (-1.0, 1.0))
    for bad in ("gauss", "gaussian(1,2)", "box(q=1)", "mixture(1,2)", "nope(a=1)"):
        with pytest.raises(ValueError):
            parse_kernel(bad)


kernels = st.one_of(
    st.builds(GaussianKernel, st.floats(-5, 5), st.floats(0.1, 5)),
    st.builds(BoxKernel, st.floats(0.1, 5), st.floats(0.2, 10)),
    st.builds(ScaledGaussianKernel, st.floats(0.1, 5), st.floats(0.2, 10)),
    st.builds(
        lambda a, s, b, r: SignedGaussianMixture(((a, s), (b, r))),
        st.floats(-3, 3), st.floats(0.2, 3), st.floats(-3, 3), st.floats(0.2, 3),
    ),
)


@settings(max_examples=80, deadline=None)
@given(C=kernels, k=st.floats(-50, 50))
def test_symbol_even_and_bounded(C, k):
    s1 = float(fourier_symbol(C, k))
    s2 = float(fourier_symbol(C, -k))
    assert s1 == s2
    assert abs(s1) <= l1_norm(C) * (1 + 1e-9) + 1e-12
    lam = float(dispersion(C, 1.0, k))
    assert abs(lam) <= operator_norm_bound(C, 1.0) * (1 + 1e-9) + 1e-12


@settings(max_examples=40, deadline=None)
@given(C=kernels, x=st.floats(0, 20))
def test_kernel_even(C, x):
    assert float(C(x)) == float(C(-x))
