"""
A bounded orbit and its Jacobi constant
=======================================

Propagate a near-circular orbit around m3 in the limit problem and
watch the first integral.
"""

import numpy as np
from r4bp.integrate import IntegratorSettings, jacobi_drift, limit_field, propagate

mu = 0.00095
field = limit_field(mu)
r = 0.3
state0 = [r, 0.0, 0.0, 0.0, np.sqrt(1 / r) - r, 0.0]

traj = propagate(field, state0, (0.0, 100.0), IntegratorSettings(1e-12, 1e-12))
print(f"{traj.n_steps} steps, {traj.n_rejected} rejected")
print("Jacobi constant:", traj.jacobi[0], " drift:", jacobi_drift(traj))
print("largest distance from m3:", np.linalg.norm(traj.states[:, :3], axis=1).max())

# dense output at chosen times
samples = propagate(field, state0, (0.0, 10.0), t_eval=np.linspace(0, 10, 6))
print(np.column_stack([samples.times, samples.states[:, :2]]))

# run it backwards and land where we started
fwd = propagate(field, state0, (0.0, 0.5))
back = propagate(field.reversed(), fwd.states[-1], (0.0, 0.5))
print("reversal error:", np.abs(back.states[-1] - state0).max())
