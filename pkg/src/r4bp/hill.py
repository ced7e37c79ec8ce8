"""
Hill-type limit of the restricted four-body problem.

Coordinates are centred on the vanished primary ``m3`` and scaled by
``m3**(1/3)``.  The remaining system depends only on ``mu = m2`` through the
coupling ``(3*sqrt(3)/4) * (1 - 2*mu)`` of the quadratic tidal term, which is
the restricted three-body quadratic form at the triangular point ``L4``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularityError

SINGULAR_RADIUS = 1e-12


@dataclass(frozen=True)
class MassRatio:
    mu: float

    def __post_init__(self):
        if not (np.isfinite(self.mu) and 0.0 <= self.mu <= 0.5):
            raise DomainError(f"mu must lie in [0, 1/2], got {self.mu}")

    def __float__(self):
        return float(self.mu)


@dataclass(frozen=True)
class PlanarPoint:
    x: float
    y: float

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y])

    def __iter__(self):
        yield self.x
        yield self.y


def _mu(mu) -> float:
    return float(MassRatio(float(mu)).mu)


def coupling(mu) -> float:
    """Off-diagonal tidal coefficient ``(3*sqrt(3)/4) * (1 - 2*mu)``."""
    return 0.75 * np.sqrt(3.0) * (1.0 - 2.0 * _mu(mu))


def _radius(pos: np.ndarray) -> np.ndarray:
    r = np.sqrt(np.sum(pos * pos, axis=-1))
    if np.any(r < SINGULAR_RADIUS):
        raise SingularityError("position coincides with the third primary (origin)", index=3)
    return r


def _pad3(pos) -> np.ndarray:
    pos = np.asarray(pos, dtype=float)
    if pos.shape[-1] == 2:
        pos = np.concatenate([pos, np.zeros(pos.shape[:-1] + (1,))], axis=-1)
    return pos


def gravitational_kernel(pos):
    """``1 / sqrt(x^2 + y^2 + z^2)``."""
    return 1.0 / _radius(_pad3(pos))


def omega_limit(pos, mu):
    """Effective potential of the limit problem.

    ``3/8 x^2 + c xy + 9/8 y^2 - z^2/2 + 1/r`` with ``c = coupling(mu)``.
    Accepts planar points (trailing axis of length 2, ``z = 0``) or spatial
    ones, with arbitrary leading batch axes.
    """
    pos = _pad3(pos)
    x, y, z = pos[..., 0], pos[..., 1], pos[..., 2]
    return (0.375 * x * x + coupling(mu) * x * y + 1.125 * y * y - 0.5 * z * z
            + 1.0 / _radius(pos))


def gravitational_potential(pos, mu):
    """``Omega - (x^2 + y^2)/2``."""
    pos = _pad3(pos)
    return omega_limit(pos, mu) - 0.5 * (pos[..., 0] ** 2 + pos[..., 1] ** 2)


def grad_omega(pos, mu) -> np.ndarray:
    pos = _pad3(pos)
    r3 = _radius(pos) ** 3
    x, y, z = pos[..., 0], pos[..., 1], pos[..., 2]
    c = coupling(mu)
    return np.stack([0.75 * x + c * y - x / r3,
                     c * x + 2.25 * y - y / r3,
                     -z - z / r3], axis=-1)


def hess_omega(pos, mu) -> np.ndarray:
    """Symmetric 3x3 Hessian of :func:`omega_limit`."""
    pos = _pad3(pos)
    r = _radius(pos)
    c = coupling(mu)
    quad = np.array([[0.75, c, 0.0], [c, 2.25, 0.0], [0.0, 0.0, -1.0]])
    outer = pos[..., :, None] * pos[..., None, :]
    return (quad + 3.0 * outer / r[..., None, None] ** 5
            - np.eye(3) / r[..., None, None] ** 3)


def eom_limit(state, mu) -> np.ndarray:
    """Time derivative of ``(x, y, z, vx, vy, vz)`` for the limit problem."""
    s = _state(state)
    g = grad_omega(s[:3], mu)
    return np.array([s[3], s[4], s[5],
                     2.0 * s[4] + g[0], -2.0 * s[3] + g[1], g[2]])


def hamiltonian_limit(state_momenta, mu) -> float:
    """Limit Hamiltonian in canonical variables ``(x, y, z, px, py, pz)``."""
    x, y, z, px, py, pz = _state(state_momenta)
    r = float(_radius(np.array([x, y, z])))
    return (0.5 * (px * px + py * py + pz * pz) + y * px - x * py
            + x * x / 8.0 - coupling(mu) * x * y - 5.0 * y * y / 8.0 + 0.5 * z * z
            - 1.0 / r)


def momenta_velocity_map(state, direction: str = "to_velocity") -> np.ndarray:
    """Convert between canonical momenta and rotating-frame velocities.

    ``vx = px + y``, ``vy = py - x``, ``vz = pz``.  ``direction`` is
    ``"to_velocity"`` or ``"to_momenta"``.
    """
    s = np.array(_state(state), dtype=float)
    x, y = s[0], s[1]
    if direction == "to_velocity":
        s[3] += y
        s[4] -= x
    elif direction == "to_momenta":
        s[3] -= y
        s[4] += x
    else:
        raise DomainError(f"unknown direction {direction!r}")
    return s


def _state(state) -> np.ndarray:
    if hasattr(state, "as_array"):
        state = state.as_array()
    s = np.asarray(state, dtype=float)
    if s.shape != (6,):
        raise DomainError(f"state must have 6 components, got shape {s.shape}")
    return s
