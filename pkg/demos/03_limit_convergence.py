"""
How fast the four-body problem approaches its limit
===================================================

Blow up a neighbourhood of m3 by m3**(1/3) and compare the full
acceleration with the limit one.  The gap shrinks like m3**(1/3).
"""

import numpy as np
from r4bp.model import fit_order, limit_deviations, sample_scaled_states
from r4bp.equilibria import scaled_distances

m3s = np.logspace(-3, -9, 7)
states = sample_scaled_states(50, seed=0)
dev = limit_deviations(0.25, m3s, states)
for m, d in zip(m3s, dev):
    print(f"m3 = {m:.0e}   sup deviation = {d:.3e}")
print("fitted order:", fit_order(m3s, dev))

# the equilibria of the full problem slide onto the limit ones
for m3 in (1e-6, 1e-8, 1e-10, 1e-12):
    d = scaled_distances(0.00095, m3)
    print(f"m3 = {m3:.0e}  " + "  ".join(f"{k}: {v:.2e}" for k, v in d.items()))
