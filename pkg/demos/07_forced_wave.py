"""Duhamel's principle: a forced nonlocal wave and its residual."""
import math

from nlwave import GaussianData, GaussianKernel, Grid1D, build_symbol, duhamel
from nlwave.spectral import Field, apply_operator

grid = Grid1D(4096, 80.0)
sym = build_symbol(GaussianKernel(1.0, 1.0), 1.0, grid)
f0 = grid.sample(GaussianData(0.5)).values
force = lambda tau: math.sin(2 * tau) * f0

for dt in (0.1, 0.05, 0.025):
    v = [duhamel(sym, force, s, n_quad=600).values for s in (1 - dt, 1.0, 1 + dt)]
    vtt = (v[2] - 2 * v[1] + v[0]) / dt**2
    r = vtt + apply_operator(sym, Field(grid, v[1])).values - force(1.0)
    print(f"dt={dt:<6} residual {grid.norm(r):.3e}")
