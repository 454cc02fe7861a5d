"""Discontinuous data: the nonlocal jump stays where it is, the classical one travels."""
from nlwave import ExpJumpData, GaussianKernel, Grid1D, MaterialParams, build_symbol, propagate
from nlwave.diagnostics import classical_movers, jump_tracker

grid = Grid1D(4096, 80.0)
f = grid.sample(ExpJumpData(b=1.0, eps=1.0))
sym = build_symbol(GaussianKernel(1.0, 1.0), 1.0, grid)
params = MaterialParams()

print(f"cell width h = {grid.h}")
print(" t    nonlocal jump   right mover   left mover")
for t in (0.0, 0.5, 1.0, 2.0, 3.0):
    u, _ = propagate(sym, f, grid.zeros(), t)
    right, left = classical_movers(params, f, grid.zeros(), t)
    print(f"{t:4.1f}  {jump_tracker(u):+.4f}         {jump_tracker(right):+.4f}       {jump_tracker(left):+.4f}")
