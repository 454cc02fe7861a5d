"""A sign-changing micromodulus gives a partly negative dispersion and growing modes."""
import math

from nlwave import SignedGaussianMixture
from nlwave.diagnostics import instability_growth, spectrum_interval

C = SignedGaussianMixture(((1.2, 0.5), (-1.0, 1.0)))
lo, hi = spectrum_interval(C, 1.0, 30.0)
print(f"dispersion range on [0, 30]: [{lo:.5f}, {hi:.5f}]")

lam0, rate = instability_growth(C, 1.0, t_max=40.0)
print(f"lambda0 = {lam0:.6f}, predicted rate sqrt|lambda0| = {math.sqrt(-lam0):.6f}")
print(f"measured rate = {rate:.6f} (ratio {rate / math.sqrt(-lam0):.4f})")

# A packet sitting on a stable mode just oscillates.
_, rate_stable = instability_growth(C, 1.0, t_max=40.0, k_center=6.0)
print(f"packet at k = 6: measured rate {rate_stable:.2e}")
