"""
Libration points of the limit problem and their stability
=========================================================

Zooming in on the smallest primary leaves a Hill-type problem with four
equilibria.  L1/L2 sit along the short axis of a 2x2 matrix, L3/L4 along
the long one.
"""

import numpy as np
from r4bp import critical_mass, equilibrium_points, grad_omega
from r4bp.stability import classify_all, coefficient_sweep

mu = 0.00095
eq = equilibrium_points(mu)
for name, p in eq.points().items():
    print(f"{name}: ({p.x:+.12f}, {p.y:+.12f})  |grad| = {np.linalg.norm(grad_omega(p.as_array(), mu)):.1e}")

# linear stability: L1/L2 are always saddle-centres
for name, rep in classify_all(mu).items():
    print(name, rep.stability_class, np.round(rep.roots, 6))

# L3/L4 change from centre-centre to complex saddle at a single mass ratio
cm = critical_mass()
print("mu0 =", cm.mu0, "bracket", cm.bracket)

# the coefficient curves as a table, one row per mass ratio
table = coefficient_sweep(np.linspace(0.0, 0.5, 6))
print("   mu      A_L1     B_L1     D_L1     A_L3     B_L3     D_L3")
print(np.array2string(table, precision=4, suppress_small=True))
