"""Shrinking the horizon: nonlocal solutions approach the classical one."""
from nlwave import GaussianData, Grid1D, MaterialParams
from nlwave.diagnostics import convergence_study

grid = Grid1D(4096, 80.0)
xi = grid.sample(GaussianData(0.5))
nus = [1, 2, 4, 8, 16, 32, 64]
for family in ("box", "scaled_gaussian"):
    rec = convergence_study(family, nus, MaterialParams(), xi, grid.zeros(), 1.0)
    print(family, "(symbol bound violation %.1e)" % rec.symbol_bound_violation)
    for nu, err in zip(rec.nu_values, rec.errors):
        print(f"  nu={nu:4.0f}  L2 error {err:.3e}")
