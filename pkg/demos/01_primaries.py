"""
The three primaries in the rotating frame
=========================================

Three masses on an equilateral triangle of unit side, centred on their
barycentre.  With m3 = 0 the familiar three-body layout comes back.
"""

import numpy as np
from r4bp import MassConfig, primary_positions

# Sun, Jupiter and a small third body
masses = MassConfig.from_mu(0.00095, 7.03e-12)
tri = primary_positions(masses)
print("positions:\n", tri.as_array())

# every side has length one
p = tri.as_array()
print("sides:", [np.linalg.norm(p[i] - p[j]) for i, j in [(0, 1), (0, 2), (1, 2)]])

# and the mass-weighted centre sits at the origin
print("barycentre:", masses.as_array() @ p)

# dropping m3 recovers (-mu, 0), (1 - mu, 0), (1/2 - mu, sqrt(3)/2)
print(primary_positions(MassConfig.from_mu(0.00095)).as_array())
