"""
Trajectory propagation with the Dormand-Prince 5(4) embedded pair.

Steps are accepted when the embedded error estimate satisfies
``|err|_inf <= max(rel_tol * |y|_inf, abs_tol)``.  Samples at requested
times come from the fourth-order continuous extension of the pair.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import partial
from typing import Callable, Sequence

import numpy as np

from . import hill, model
from .errors import DomainError, PreconditionError, SingularityError, SingularityEvent, StepBudgetExceeded

#: Closest approach to a point mass before propagation is stopped.
GUARD_RADIUS = 1e-9

# Dormand & Prince (1980) tableau
C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
A = [np.asarray(row) for row in [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]]
B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
E = B5 - B4

# Shampine's dense output: y(t + th) = y + h * K^T @ (P @ [th, th^2, th^3, th^4])
P = np.array([
    [1, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0, 0, 0, 0],
    [0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass(frozen=True)
class VectorField:
    """A first-order system ``y' = rhs(y)`` plus optional diagnostics.

    ``singularities`` holds 3D positions that the first three state
    components must stay away from; ``jacobi`` maps a state to its first
    integral.
    """

    name: str
    rhs: Callable[[np.ndarray], np.ndarray]
    jacobi: Callable[[np.ndarray], float] | None = None
    singularities: np.ndarray = field(default_factory=lambda: np.zeros((0, 3)))

    def reversed(self) -> "VectorField":
        """Field whose flow runs this one backwards in time."""
        return VectorField(self.name + "-reversed", lambda y: -self.rhs(y),
                           self.jacobi, self.singularities)


def limit_field(mu) -> VectorField:
    mu = float(hill.MassRatio(float(mu)).mu)
    c = hill.coupling(mu)

    def rhs(y):
        # inlined hill.eom_limit; this is the integrator's inner loop
        x, yy, z, vx, vy, vz = y
        rr = x * x + yy * yy + z * z
        if rr < hill.SINGULAR_RADIUS ** 2:
            return hill.eom_limit(y, mu)
        k = rr ** -1.5
        return np.array([vx, vy, vz,
                         2.0 * vy + 0.75 * x + c * yy - x * k,
                         -2.0 * vx + c * x + 2.25 * yy - yy * k,
                         -z - z * k])

    return VectorField("limit", rhs,
                       partial(model.jacobi_constant, omega=partial(hill.omega_limit, mu=mu)),
                       np.zeros((1, 3)))


def full_field(masses: model.MassConfig) -> VectorField:
    tri = model.primary_positions(masses).as_array()
    keep = masses.as_array() > 0
    sing = np.hstack([tri, np.zeros((3, 1))])[keep]
    m = masses.as_array()[keep]

    def rhs(y):
        d = y[:3] - sing
        r = np.sqrt(np.einsum("ij,ij->i", d, d))
        if np.any(r < model.SINGULAR_RADIUS):
            return model.eom_full(y, masses)
        g = -(m / r ** 3) @ d
        return np.array([y[3], y[4], y[5],
                         2.0 * y[4] + y[0] + g[0], -2.0 * y[3] + y[1] + g[1], g[2]])

    return VectorField("full", rhs,
                       partial(model.jacobi_constant, omega=partial(model.omega_full, masses=masses)),
                       sing)


def quadratic_field(mu) -> VectorField:
    """Limit problem with the ``1/r`` kernel removed (linear test field)."""
    c = hill.coupling(mu)
    hess = np.array([[0.75, c, 0.0], [c, 2.25, 0.0], [0.0, 0.0, -1.0]])

    def rhs(y):
        g = hess @ y[:3]
        return np.array([y[3], y[4], y[5], 2 * y[4] + g[0], -2 * y[3] + g[1], g[2]])

    def jacobi(y):
        return float(y[:3] @ hess @ y[:3] - y[3:] @ y[3:])

    return VectorField("quadratic", rhs, jacobi)


def harmonic_field() -> VectorField:
    """``x'' = -x`` as the two-component system ``(x, v)``."""
    return VectorField("harmonic", lambda y: np.array([y[1], -y[0]]),
                       lambda y: float(y[0] ** 2 + y[1] ** 2))


@dataclass(frozen=True)
class IntegratorSettings:
    rel_tol: float = 1e-12
    abs_tol: float = 1e-12
    max_step: float = np.inf
    max_steps: int = 1_000_000
    fixed_step: float | None = None

    def __post_init__(self):
        for name in ("rel_tol", "abs_tol"):
            v = getattr(self, name)
            if not 1e-15 <= v <= 1e-2:
                raise DomainError(f"{name} must lie in [1e-15, 1e-2], got {v}")
        if self.max_steps < 1:
            raise DomainError(f"max_steps must be >= 1, got {self.max_steps}")
        if not self.max_step > 0:
            raise DomainError(f"max_step must be positive, got {self.max_step}")
        if self.fixed_step is not None and not self.fixed_step > 0:
            raise DomainError(f"fixed_step must be positive, got {self.fixed_step}")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    jacobi: np.ndarray
    n_steps: int = 0
    n_rejected: int = 0

    def __len__(self):
        return len(self.times)


def _stages(f, y, h, k0):
    k = np.empty((7, y.size))
    k[0] = k0
    for i in range(1, 7):
        k[i] = f(y + h * (A[i] @ k[:i]))
    return k


def _check_guard(field: VectorField, y: np.ndarray) -> bool:
    if len(field.singularities) == 0:
        return True
    dist = np.linalg.norm(field.singularities - y[:3], axis=1)
    return bool(np.all(dist >= GUARD_RADIUS))


def _initial_step(f, y0, f0, rtol, atol):
    scale = np.maximum(rtol * np.abs(y0), atol)
    d0 = np.linalg.norm(y0 / scale) / np.sqrt(y0.size)
    d1 = np.linalg.norm(f0 / scale) / np.sqrt(y0.size)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    f1 = f(y0 + h0 * f0)
    d2 = np.linalg.norm((f1 - f0) / scale) / np.sqrt(y0.size) / h0
    h1 = max(1e-6, h0 * 1e-3) if max(d1, d2) <= 1e-15 else (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1)


def propagate(field: VectorField, state0, t_span: Sequence[float],
              settings: IntegratorSettings | None = None,
              t_eval: Sequence[float] | None = None) -> Trajectory:
    """Integrate ``field`` from ``state0`` over ``t_span = (t0, t1)``.

    Without ``t_eval`` every accepted step is recorded; otherwise the
    trajectory is sampled exactly at ``t_eval`` (inside ``t_span``) by
    dense output.  Raises :class:`SingularityEvent` when the state comes
    within ``GUARD_RADIUS`` of a point mass and :class:`StepBudgetExceeded`
    after ``settings.max_steps`` attempted steps.
    """
    settings = settings or IntegratorSettings()
    if hasattr(state0, "as_array"):
        state0 = state0.as_array()
    y = np.array(state0, dtype=float)
    t0, t1 = map(float, t_span)
    if not t1 > t0:
        raise PreconditionError(f"t_span must be increasing, got {(t0, t1)}")
    if not np.all(np.isfinite(y)):
        raise PreconditionError("initial state must be finite")
    if not _check_guard(field, y):
        raise SingularityEvent("initial state lies on a point mass", t=t0, state=y)

    if t_eval is not None:
        t_eval = np.asarray(t_eval, dtype=float)
        if np.any(np.diff(t_eval) <= 0) or t_eval[0] < t0 or t_eval[-1] > t1:
            raise PreconditionError("t_eval must be strictly increasing and inside t_span")

    def f(v):
        try:
            return field.rhs(v)
        except SingularityError as exc:
            raise SingularityEvent(str(exc), t=t, state=y.copy()) from exc

    rtol, atol = settings.rel_tol, settings.abs_tol
    t = t0
    k0 = f(y)
    fixed = settings.fixed_step
    h = fixed if fixed else min(_initial_step(f, y, k0, rtol, atol), settings.max_step)

    times, states = [], []
    if t_eval is None:
        times.append(t)
        states.append(y.copy())
    else:
        idx = 0
        while idx < len(t_eval) and t_eval[idx] == t0:
            times.append(t0)
            states.append(y.copy())
            idx += 1

    n_steps = n_rej = 0
    while t < t1:
        if n_steps + n_rej >= settings.max_steps:
            raise StepBudgetExceeded(f"step budget {settings.max_steps} exhausted at t={t}", t=t, state=y)
        h = min(h, t1 - t)
        k = _stages(f, y, h, k0)
        y_new = y + h * (B5 @ k)
        if fixed:
            accept = True
        else:
            err = h * np.max(np.abs(E @ k))
            tol = max(rtol * max(np.max(np.abs(y)), np.max(np.abs(y_new))), atol)
            accept = err <= tol
            factor = 5.0 if err == 0 else min(5.0, max(0.2, 0.9 * (tol / err) ** 0.2))
        if not accept:
            n_rej += 1
            h *= factor
            continue
        if not _check_guard(field, y_new):
            raise SingularityEvent(f"trajectory within {GUARD_RADIUS} of a point mass at t={t + h}",
                                   t=t, state=y)
        t_new = t + h if t1 - t - h > 1e-14 * max(1.0, abs(t1)) else t1
        if t_eval is None:
            times.append(t_new)
            states.append(y_new.copy())
        else:
            q = k.T @ P
            while idx < len(t_eval) and t_eval[idx] <= t_new:
                theta = (t_eval[idx] - t) / h
                if t_eval[idx] == t_new:
                    states.append(y_new.copy())
                else:
                    states.append(y + h * (q @ theta ** np.arange(1, 5)))
                times.append(t_eval[idx])
                idx += 1
        y, t, k0 = y_new, t_new, k[6]
        n_steps += 1
        if not fixed:
            h = min(h * factor, settings.max_step)

    states = np.array(states)
    jac = np.array([field.jacobi(s) for s in states]) if field.jacobi else np.full(len(states), np.nan)
    return Trajectory(np.array(times), states, jac, n_steps, n_rej)


def jacobi_drift(traj: Trajectory) -> float:
    """Largest departure of the first integral from its initial value."""
    if len(traj) == 0:
        raise PreconditionError("empty trajectory")
    return float(np.max(np.abs(traj.jacobi - traj.jacobi[0])))
