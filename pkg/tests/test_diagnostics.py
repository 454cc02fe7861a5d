import math

import numpy as np
import pytest

from nlwave.diagnostics import (
    ConvergenceRecord,
    RunReport,
    classical_movers,
    convergence_study,
    current_j,
    current_jB,
    energy,
    instability_growth,
    jump_tracker,
    spectrum_interval,
    stability_check,
)
from nlwave.kernels import (
    BoxKernel,
    GaussianKernel,
    MaterialParams,
    ScaledGaussianKernel,
    SignedGaussianMixture,
    dispersion,
    operator_norm_bound,
)
from nlwave.series import ExpJumpData, GaussianData
from nlwave.spectral import Field, Grid1D, GridMismatchError, build_symbol, classical_symbol, propagate

GRID = Grid1D(4096, 80.0)
G = GaussianKernel(1.0, 1.0)
SYM = build_symbol(G, 1.0, GRID)
MIX = SignedGaussianMixture(((1.2, 0.5), (-1.0, 1.0)))


def data():
    return GRID.sample(GaussianData(0.5))


def test_energy_trivial_cases():
    z = GRID.zeros()
    assert energy(z, z, SYM) == 0.0
    one = Field(GRID, np.ones(GRID.n))
    assert abs(energy(one, z, SYM)) < 1e-12


def test_energy_conserved():
    xi = data()
    eta = GRID.sample(lambda x: -x * GaussianData(0.7)(x))
    e0 = energy(xi, eta, SYM)
    for t in (0.5, 2.0, 6.0):
        u, ud = propagate(SYM, xi, eta, t)
        assert energy(u, ud, SYM) == pytest.approx(e0, rel=1e-12)


def test_energy_grid_mismatch():
    other = Grid1D(1024, 80.0)
    with pytest.raises(GridMismatchError):
        energy(other.zeros(), other.zeros(), SYM)


def test_current_trivial_cases():
    u = data()
    z = GRID.zeros()
    assert current_j(u, z, u, z) == 0.0
    assert current_j(u, z, u, u) == pytest.approx(GRID.inner(u, u))
    assert current_jB(u, z, G) == 0.0


def test_currents_conserved():
    xi = data()
    eta = GRID.sample(GaussianData(1.0))
    j0 = jb0 = None
    for t in (0.0, 1.0, 2.0):
        u, ud = propagate(SYM, xi, GRID.zeros(), t)
        v, vd = propagate(SYM, GRID.zeros(), eta, t)
        w, wd = propagate(SYM, xi, eta, t)
        j, jb = current_j(u, ud, v, vd), current_jB(w, wd, G)
        if j0 is None:
            j0, jb0 = j, jb
        assert abs(j - j0) < 1e-10
        assert abs(jb - jb0) < 1e-10


def test_stability_holds():
    xi = data()
    res = stability_check(SYM, xi, GRID.zeros(), np.linspace(0, 6, 13))
    assert res.applicable and res.ok
    eta = data()
    res = stability_check(SYM, GRID.zeros(), eta, [1e-4, 0.5, 2.0])
    assert res.ok
    # near equality at small t: ||u|| ~ t ||eta||
    u, _ = propagate(SYM, GRID.zeros(), eta, 1e-4)
    assert u.norm() == pytest.approx(1e-4 * eta.norm(), rel=1e-8)


def test_stability_not_applicable_for_negative_symbol():
    sym = build_symbol(MIX, 1.0, GRID)
    res = stability_check(sym, data(), GRID.zeros(), [1.0])
    assert not res.applicable and res.ok is None


def test_instability_rate():
    lam0, rate = instability_growth(MIX, 1.0, 40.0, GRID)
    k = np.linspace(0, 10, 2000001)
    ref = np.min(0.2 - 1.2 * np.exp(-k * k / 8) + np.exp(-k * k / 2))
    assert lam0 == pytest.approx(ref, abs=1e-10)
    assert lam0 == pytest.approx(-0.40249, abs=1e-4)
    assert 0.9 * math.sqrt(-lam0) <= rate <= 1.01 * math.sqrt(-lam0)


def test_instability_requires_negative_symbol():
    with pytest.raises(ValueError):
        instability_growth(G, 1.0, 10.0, GRID)


def test_instability_packet_at_stable_mode():
    # the mixture symbol is positive for large k
    assert float(dispersion(MIX, 1.0, 6.0)) > 0
    _, rate = instability_growth(MIX, 1.0, 40.0, GRID, k_center=6.0)
    assert abs(rate) < 0.02


def test_spectrum_interval():
    lo, hi = spectrum_interval(G, 1.0, 20.0)
    assert lo == 0.0
    assert hi == pytest.approx(1.0, abs=1e-12)
    B = BoxKernel(1.0, 2.0)
    lo, hi = spectrum_interval(B, 1.0, 50.0)
    assert lo == 0.0 and hi <= operator_norm_bound(B, 1.0)
    assert spectrum_interval(GaussianKernel(0.0, 1.0), 1.0, 5.0) == (0.0, 0.0)
    lo, _ = spectrum_interval(MIX, 1.0, 20.0)
    assert lo < -0.4


@pytest.mark.parametrize("family", ["box", "scaled_gaussian"])
def test_convergence_study(family):
    xi = data()
    rec = convergence_study(family, [1, 2, 4, 8, 16], MaterialParams(), xi, GRID.zeros(), 1.0)
    assert rec.strictly_decreasing
    assert rec.symbol_bound_violation <= 1e-12


def test_convergence_large_nu():
    xi = data()
    for family in ("box", "scaled_gaussian"):
        rec = convergence_study(family, [64], MaterialParams(), xi, GRID.zeros(), 1.0)
        assert rec.errors[0] < 1e-3


def test_symbol_bounds_pointwise():
    k = GRID.k
    for nu in (1.0, 3.0, 16.0):
        box = np.asarray(dispersion(BoxKernel(1.0, nu), 1.0, k))
        sg = np.asarray(dispersion(ScaledGaussianKernel(1.0, nu), 1.0, k))
        assert np.all(box >= -1e-12) and np.all(box <= k * k + 1e-12)
        assert np.all(sg >= -1e-12) and np.all(sg <= k * k + 1e-12)


def test_convergence_validation():
    with pytest.raises(ValueError):
        convergence_study("lorentz", [1], MaterialParams(), data(), GRID.zeros(), 1.0)
    with pytest.raises(ValueError):
        convergence_study("box", [], MaterialParams(), data(), GRID.zeros(), 1.0)
    with pytest.raises(ValueError):
        ConvergenceRecord([2, 1], [0.1, 0.2], 1.0)


def test_jump_tracker_on_data():
    f = GRID.sample(ExpJumpData(1.0, 1.0))
    assert abs(jump_tracker(f)) <= GRID.h
    assert jump_tracker(GRID.zeros()) is None
    assert jump_tracker(data()) is None


def test_jump_tracker_tie_breaks_to_origin():
    i0 = GRID.n // 2
    # alternating background keeps every cell active; both edges jump by 1.02
    v = 0.01 * (-1.0) ** np.arange(GRID.n)
    v[i0 - 10 : i0 + 3] += 1.0
    loc = jump_tracker(Field(GRID, v))
    assert loc == pytest.approx(GRID.x[i0 + 2] + 0.5 * GRID.h)


@pytest.mark.parametrize("t", [0.5, 1.0, 2.0])
def test_nonlocal_jump_stays(t):
    f = GRID.sample(ExpJumpData(1.0, 1.0))
    u, _ = propagate(SYM, f, GRID.zeros(), t)
    assert abs(jump_tracker(u)) <= GRID.h


def test_classical_jumps_move():
    f = GRID.sample(ExpJumpData(1.0, 1.0))
    right, left = classical_movers(MaterialParams(), f, GRID.zeros(), 1.0)
    assert abs(jump_tracker(right) - 1.0) <= 2 * GRID.h
    assert abs(jump_tracker(left) + 1.0) <= 2 * GRID.h


def test_movers_sum_to_classical_solution():
    params = MaterialParams(2.0, 3.0)
    xi = data()
    eta = GRID.sample(GaussianData(1.0))
    r, l = classical_movers(params, xi, eta, 1.5)
    u, _ = propagate(classical_symbol(params, GRID), xi, eta, 1.5)
    assert np.max(np.abs(r.values + l.values - u.values)) < 1e-12


def test_report_csv(tmp_path):
    rep = RunReport(np.array([0.0, 0.1]), np.array([1.0, 1.0]), np.zeros(2), np.zeros(2),
                    np.array([2.0, 2.0]), np.array([0.5, math.nan]))
    p = tmp_path / "r.csv"
    rep.write_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,energy,j_uv,j_uB,l2_norm,jump_x"
    assert lines[2].endswith(",")
    assert float(lines[2].split(",")[0]) == 0.1
    with pytest.raises(ValueError):
        RunReport(np.zeros(2), np.zeros(1), np.zeros(2), np.zeros(2), np.zeros(2))


def test_convergence_csv(tmp_path):
    rec = ConvergenceRecord([1, 2], [0.1, 1 / 3], 1.0)
    p = tmp_path / "c.csv"
    rec.write_csv(p)
    lines = p.read_text().splitlines()
    assert lines[0] == "nu,l2_error"
    assert float(lines[2].split(",")[1]) == 1 / 3
