"""
Full equilateral restricted four-body problem in the synodic frame.

Three primaries of masses ``m1 >= m2`` and a small ``m3`` sit at the corners
of a unit equilateral triangle that rotates with unit angular velocity about
the common centre of mass.  A massless particle moves under their attraction.

The module also provides the translated and rescaled vector field
(:func:`pullback_acceleration`) used to check numerically that the problem
converges to the Hill-type limit of :mod:`r4bp.hill` as ``m3 -> 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import hill
from .errors import DomainError, SingularityError

#: Distance below which a primary is treated as a collision.
SINGULAR_RADIUS = 1e-12

_SQRT3 = np.sqrt(3.0)


@dataclass(frozen=True)
class MassConfig:
    """Dimensionless primary masses, normalised so that ``m1 + m2 + m3 = 1``.

    Sums within ``1e-12`` of one are renormalised, larger deviations raise
    :class:`DomainError`.  ``m3`` is the small primary and must not exceed
    either of the other two masses.
    """

    m1: float
    m2: float
    m3: float

    def __post_init__(self):
        m = np.array([self.m1, self.m2, self.m3], dtype=float)
        if not np.all(np.isfinite(m)):
            raise DomainError(f"masses must be finite, got {tuple(m)}")
        if np.any(m < 0):
            raise DomainError(f"masses must be non-negative, got {tuple(m)}")
        total = m.sum()
        if abs(total - 1.0) > 1e-12:
            raise DomainError(f"masses must sum to 1 (got sum {total!r})")
        if total != 1.0:
            m = m / total
        if m[2] > min(m[0], m[1]):
            raise DomainError(
                f"m3 must be the smallest primary, got {tuple(m)}")
        object.__setattr__(self, "m1", float(m[0]))
        object.__setattr__(self, "m2", float(m[1]))
        object.__setattr__(self, "m3", float(m[2]))

    @classmethod
    def from_mu(cls, mu: float, m3: float = 0.0) -> "MassConfig":
        """Masses ``(1 - mu - m3, mu, m3)``."""
        return cls(1.0 - mu - m3, mu, m3)

    def as_array(self) -> np.ndarray:
        return np.array([self.m1, self.m2, self.m3])


@dataclass(frozen=True)
class PrimaryTriangle:
    p1: np.ndarray
    p2: np.ndarray
    p3: np.ndarray

    def as_array(self) -> np.ndarray:
        """Primary positions stacked into a ``(3, 2)`` array."""
        return np.vstack([self.p1, self.p2, self.p3])


@dataclass(frozen=True)
class SpatialState:
    """Rotating-frame position and velocity."""

    x: float
    y: float
    z: float
    vx: float
    vy: float
    vz: float

    def __post_init__(self):
        if not np.all(np.isfinite(self.as_array())):
            raise DomainError("state components must be finite")

    @classmethod
    def from_array(cls, arr: Sequence[float]) -> "SpatialState":
        return cls(*(float(a) for a in arr))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z, self.vx, self.vy, self.vz])

    @property
    def position(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    @property
    def velocity(self) -> np.ndarray:
        return np.array([self.vx, self.vy, self.vz])


def primary_positions(masses: MassConfig) -> PrimaryTriangle:
    """Synodic coordinates of the three primaries.

    Closed-form central configuration with unit sides, centre of mass at the
    origin, ``m1`` on the negative x axis and ``m3`` in the upper half plane.
    For ``m3 = 0`` and ``m2 = mu`` this reduces to the restricted three-body
    layout ``(-mu, 0)``, ``(1 - mu, 0)`` with ``m3`` at the triangular point.
    """
    m1, m2, m3 = masses.m1, masses.m2, masses.m3
    if m2 <= 0.0:
        raise DomainError(f"primary positions need m2 > 0, got masses {(m1, m2, m3)}")
    K = m2 * (m3 - m2) + m1 * (m2 + 2.0 * m3)
    # |K|/K; K = 0 only on the equal-mass R3BP corner, continued from K > 0
    sign = -1.0 if K < 0 else 1.0
    S = np.sqrt(m2 * m2 + m2 * m3 + m3 * m3)
    root = np.sqrt(m2 ** 3 / S ** 2)

    x1 = -sign * S
    x2 = sign * ((m2 - m3) * m3 + m1 * (2.0 * m2 + m3)) / (2.0 * S)
    y2 = -_SQRT3 * m3 / (2.0 * m2 ** 1.5) * root
    x3 = abs(K) / (2.0 * S)
    y3 = _SQRT3 / (2.0 * np.sqrt(m2)) * root
    return PrimaryTriangle(np.array([x1, 0.0]), np.array([x2, y2]), np.array([x3, y3]))


def _offsets(pos: np.ndarray, masses: MassConfig):
    """Displacements from each massive primary and their lengths.

    Returns ``(m, d, r)`` with ``d`` of shape ``(..., k, 3)`` for the ``k``
    primaries carrying positive mass.
    """
    tri = primary_positions(masses).as_array()
    m = masses.as_array()
    keep = m > 0
    centres = np.zeros((3, 3))
    centres[:, :2] = tri
    d = pos[..., None, :] - centres[keep]
    r = np.sqrt(np.sum(d * d, axis=-1))
    close = r < SINGULAR_RADIUS
    if np.any(close):
        idx = np.flatnonzero(keep)[np.argwhere(close)[0][-1]] + 1
        raise SingularityError(f"position coincides with primary m{idx}", index=int(idx))
    return m[keep], d, r


def omega_full(pos, masses: MassConfig):
    """Effective potential ``(x^2 + y^2)/2 + sum m_i / r_i``.

    ``pos`` is a 3-vector or any array with a trailing axis of length 3.
    """
    pos = np.asarray(pos, dtype=float)
    m, _, r = _offsets(pos, masses)
    return 0.5 * (pos[..., 0] ** 2 + pos[..., 1] ** 2) + np.sum(m / r, axis=-1)


def grad_omega_full(pos, masses: MassConfig) -> np.ndarray:
    pos = np.asarray(pos, dtype=float)
    m, d, r = _offsets(pos, masses)
    g = -np.sum((m / r ** 3)[..., None] * d, axis=-2)
    g[..., 0] += pos[..., 0]
    g[..., 1] += pos[..., 1]
    return g


def hess_omega_full(pos, masses: MassConfig) -> np.ndarray:
    pos = np.asarray(pos, dtype=float)
    m, d, r = _offsets(pos, masses)
    outer = d[..., :, None] * d[..., None, :]
    h = np.sum(m[:, None, None] * (3.0 * outer / r[..., None, None] ** 5
                                   - np.eye(3) / r[..., None, None] ** 3), axis=-3)
    h[..., 0, 0] += 1.0
    h[..., 1, 1] += 1.0
    return h


def _rotating_rhs(state: np.ndarray, grad: np.ndarray) -> np.ndarray:
    vx, vy, vz = state[3], state[4], state[5]
    return np.array([vx, vy, vz,
                     2.0 * vy + grad[0], -2.0 * vx + grad[1], grad[2]])


def eom_full(state, masses: MassConfig) -> np.ndarray:
    """Time derivative of ``(x, y, z, vx, vy, vz)`` for the full problem."""
    s = _as_state_array(state)
    return _rotating_rhs(s, grad_omega_full(s[:3], masses))


def jacobi_constant(state, omega: Callable[[np.ndarray], float]) -> float:
    """Jacobi constant ``C = 2*Omega - |v|^2``.

    ``omega`` maps a position to the effective potential; pass e.g.
    ``functools.partial(omega_full, masses=m)`` or
    ``functools.partial(hill.omega_limit, mu=mu)``.
    """
    s = _as_state_array(state)
    return float(2.0 * omega(s[:3]) - np.dot(s[3:], s[3:]))


def _as_state_array(state) -> np.ndarray:
    if isinstance(state, SpatialState):
        return state.as_array()
    s = np.asarray(state, dtype=float)
    if s.shape != (6,):
        raise DomainError(f"state must have 6 components, got shape {s.shape}")
    return s


def _check_limit_params(mu: float, m3: float):
    if not 0.0 < mu <= 0.5:
        raise DomainError(f"mu must lie in (0, 1/2], got {mu}")
    if not 0.0 < m3 <= 1e-2:
        raise DomainError(f"m3 must lie in (0, 1e-2], got {m3}")


def pullback_acceleration(scaled_state, mu: float, m3: float) -> np.ndarray:
    """Full-problem acceleration seen in coordinates centred on ``m3``.

    The scaled state ``(q', v')`` maps to ``q = p3 + m3**(1/3) q'`` and
    ``v = m3**(1/3) v'``; the rotating-frame acceleration there is returned
    multiplied by ``m3**(-1/3)``.  As ``m3 -> 0`` this tends to the
    acceleration of :func:`r4bp.hill.eom_limit` at ``(q', v')``.
    """
    _check_limit_params(mu, m3)
    s = _as_state_array(scaled_state)
    masses = MassConfig.from_mu(mu, m3)
    eps = np.cbrt(m3)
    p3 = primary_positions(masses).p3
    q = np.array([p3[0], p3[1], 0.0]) + eps * s[:3]
    v = eps * s[3:]
    return _rotating_rhs(np.concatenate([q, v]), grad_omega_full(q, masses))[3:] / eps


def limit_deviations(mu: float, m3_values: Sequence[float], states: np.ndarray) -> np.ndarray:
    """Sup-norm gap between pulled-back and limit accelerations.

    Returns one value per entry of ``m3_values``: the maximum over ``states``
    (shape ``(n, 6)``) of ``|pullback - limit|_inf``.
    """
    states = np.atleast_2d(np.asarray(states, dtype=float))
    limit = np.array([hill.eom_limit(s, mu)[3:] for s in states])
    out = []
    for m3 in m3_values:
        full = np.array([pullback_acceleration(s, mu, m3) for s in states])
        out.append(np.max(np.abs(full - limit)))
    return np.array(out)


def fit_order(h: Sequence[float], err: Sequence[float]) -> float:
    """Least-squares slope of ``log(err)`` against ``log(h)``."""
    slope, _ = np.polyfit(np.log(np.asarray(h)), np.log(np.asarray(err)), 1)
    return float(slope)


def sample_scaled_states(n: int, seed: int = 0, r_min: float = 0.3, r_max: float = 1.5) -> np.ndarray:
    """Reproducible scaled states with ``r_min <= |q'| <= r_max`` and ``|v'| <= 1``."""
    rng = np.random.default_rng(seed)
    direction = rng.normal(size=(n, 3))
    direction /= np.linalg.norm(direction, axis=1, keepdims=True)
    radius = rng.uniform(r_min, r_max, size=(n, 1))
    vel = rng.uniform(-1.0, 1.0, size=(n, 3)) / np.sqrt(3.0)
    return np.hstack([direction * radius, vel])
