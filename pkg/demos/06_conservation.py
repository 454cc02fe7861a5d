"""Energy and the two conserved currents along a propagated pair of solutions."""
import numpy as np

from nlwave import GaussianData, GaussianKernel, Grid1D, build_symbol, propagate
from nlwave.diagnostics import current_j, current_jB, energy

grid = Grid1D(4096, 80.0)
C = GaussianKernel(1.0, 1.0)
sym = build_symbol(C, 1.0, grid)
xi = grid.sample(GaussianData(0.5))
eta = grid.sample(GaussianData(1.0))

print(" t    energy               j_uv                 j_uB")
for t in np.arange(0, 6.5, 1.5):
    u, ud = propagate(sym, xi, grid.zeros(), t)
    v, vd = propagate(sym, grid.zeros(), eta, t)
    w, wd = propagate(sym, xi, eta, t)
    print(f"{t:4.1f}  {energy(w, wd, sym):.15f}  {current_j(u, ud, v, vd):.15f}  {current_jB(w, wd, C):+.2e}")
