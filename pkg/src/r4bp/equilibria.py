"""
Equilibria of the limit problem.

The planar effective potential is ``z^T M z / 2 + 1/|z|``.  Critical points
lie on the eigen-directions of ``M``: ``L1, L2 = +-lambda2**(-1/3) v2`` and
``L3, L4 = +-lambda1**(-1/3) v1``.  A Newton search from a grid of starting
points serves as an independent check, and :func:`r4bp_equilibria_near_m3`
continues the four points into the full problem with small ``m3 > 0``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import hill, model
from .errors import ContinuationError, DegenerateParameterError, DomainError, OracleFailureError

LABELS = ("L1", "L2", "L3", "L4")


@dataclass(frozen=True)
class SpectralData:
    d: float
    lambda1: float
    lambda2: float
    v1: np.ndarray
    v2: np.ndarray


@dataclass(frozen=True)
class EquilibriumSet:
    """Four planar libration points and where they came from.

    ``provenance`` is ``"closed-form"`` or ``"numeric"``.  For the μ = 0
    boundary only ``L1`` and ``L2`` are finite; the others are ``None``.
    """

    L1: hill.PlanarPoint
    L2: hill.PlanarPoint
    L3: hill.PlanarPoint | None
    L4: hill.PlanarPoint | None
    provenance: str
    meta: dict = field(default_factory=dict, compare=False)

    def points(self) -> dict:
        return {name: getattr(self, name) for name in LABELS if getattr(self, name) is not None}

    def as_array(self) -> np.ndarray:
        return np.array([p.as_array() for p in self.points().values()])


def _check_mu(mu, open_left=False):
    mu = float(mu)
    lo_ok = mu > 0.0 if open_left else mu >= 0.0
    if not (np.isfinite(mu) and lo_ok and mu <= 0.5):
        rng = "(0, 1/2]" if open_left else "[0, 1/2]"
        raise DomainError(f"mu must lie in {rng}, got {mu}")
    return mu


def interaction_matrix(mu) -> np.ndarray:
    """Quadratic-form matrix ``M`` of the planar effective potential."""
    mu = _check_mu(mu)
    c = 0.75 * np.sqrt(3.0) * (1.0 - 2.0 * mu)
    return np.array([[0.75, c], [c, 2.25]])


def spectral_decomposition(mu) -> SpectralData:
    """Closed-form eigenpairs of :func:`interaction_matrix`.

    Eigenvectors are unit length with non-negative y component (x > 0 when
    y = 0).  At μ = 1/2 the matrix is diagonal and ``v1 = (1, 0)``,
    ``v2 = (0, 1)``.
    """
    mu = _check_mu(mu)
    d = np.sqrt(1.0 - 3.0 * mu + 3.0 * mu * mu)
    # 1 - d and 1 - 2d rewritten without cancellation
    one_minus_d = 3.0 * mu * (1.0 - mu) / (1.0 + d)
    lam1 = 1.5 * one_minus_d
    lam2 = 1.5 * (1.0 + d)
    if mu == 0.5:
        return SpectralData(d, lam1, lam2, np.array([1.0, 0.0]), np.array([0.0, 1.0]))

    s = 1.0 - 2.0 * mu
    t1 = (1.0 + 2.0 * d) / s
    t2 = -3.0 * s / (1.0 + 2.0 * d)  # (1 - 2d) / (1 - 2mu)
    n1 = np.sqrt(3.0 + t1 * t1)
    n2 = np.sqrt(3.0 + t2 * t2)
    v1 = np.array([-t1 / n1, np.sqrt(3.0) / n1])
    v2 = np.array([-t2 / n2, np.sqrt(3.0) / n2])
    return SpectralData(d, lam1, lam2, v1, v2)


def equilibrium_points(mu, require_all: bool = True) -> EquilibriumSet:
    """Closed-form libration points ``L1..L4``.

    At μ = 0 the smaller eigenvalue vanishes and ``L3``, ``L4`` escape to
    infinity: with ``require_all`` this raises
    :class:`DegenerateParameterError`, otherwise those two are ``None``.
    """
    mu = _check_mu(mu)
    sd = spectral_decomposition(mu)
    l1 = sd.v2 / np.cbrt(sd.lambda2)
    pts = [hill.PlanarPoint(*l1), hill.PlanarPoint(*(-l1))]
    if sd.lambda1 == 0.0:
        if require_all:
            raise DegenerateParameterError(
                "lambda1 = 0 at mu = 0: L3 and L4 are at infinity")
        pts += [None, None]
    else:
        l3 = sd.v1 / np.cbrt(sd.lambda1)
        pts += [hill.PlanarPoint(*l3), hill.PlanarPoint(*(-l3))]
    return EquilibriumSet(*pts, provenance="closed-form")


def _dedupe(roots: np.ndarray, tol: float) -> np.ndarray:
    roots = roots[np.lexsort((roots[:, 1], roots[:, 0]))]
    kept: list[np.ndarray] = []
    for r in roots:
        if all(np.linalg.norm(r - k) > tol for k in kept):
            kept.append(r)
    return np.array(kept).reshape(-1, 2)


def _planar_grad(z, c):
    r3 = np.sum(z * z, axis=-1) ** 1.5
    x, y = z[..., 0], z[..., 1]
    return np.stack([0.75 * x + c * y - x / r3, c * x + 2.25 * y - y / r3], axis=-1)


def _planar_hess(z, c):
    rr = np.sum(z * z, axis=-1)
    r3 = rr ** 1.5
    r5 = rr ** 2.5
    x, y = z[..., 0], z[..., 1]
    hxx = 0.75 + 3 * x * x / r5 - 1 / r3
    hyy = 2.25 + 3 * y * y / r5 - 1 / r3
    hxy = c + 3 * x * y / r5
    return hxx, hxy, hyy


def numeric_equilibria_oracle(mu, grid_extent: float = 3.0, grid_n: int = 40,
                              tol: float = 1e-13, max_iter: int = 100) -> EquilibriumSet:
    """Brute-force critical points of the planar effective potential.

    Damped Newton iteration (step capped at half the distance to the origin,
    then halved while ``|grad|`` grows) is started
    from every node of a ``grid_n x grid_n`` grid over
    ``[-grid_extent, grid_extent]^2``; converged roots are deduplicated at
    ``1e-6``.  The extent is widened to ``1.5 * lambda_min**(-1/3)`` when
    the default would miss the far pair; ``lambda_min`` comes from a
    generic symmetric eigensolver, not from the closed form.
    """
    mu = _check_mu(mu, open_left=True)
    c = 0.75 * np.sqrt(3.0) * (1.0 - 2.0 * mu)
    lam_min = np.linalg.eigvalsh(np.array([[0.75, c], [c, 2.25]]))[0]
    extent = max(float(grid_extent), 1.5 * lam_min ** (-1.0 / 3.0))

    axis = np.linspace(-extent, extent, grid_n)
    z = np.stack(np.meshgrid(axis, axis, indexing="ij"), axis=-1).reshape(-1, 2)
    z = z[np.linalg.norm(z, axis=1) > 1e-8]
    with np.errstate(all="ignore"):
        g = _planar_grad(z, c)
        gn = np.linalg.norm(g, axis=1)
        for _ in range(max_iter):
            hxx, hxy, hyy = _planar_hess(z, c)
            det = hxx * hyy - hxy * hxy
            step = -np.stack([hyy * g[:, 0] - hxy * g[:, 1],
                              -hxy * g[:, 0] + hxx * g[:, 1]], axis=-1) / det[:, None]
            # never jump more than half way towards the singular origin
            alpha = np.minimum(1.0, 0.5 * np.linalg.norm(z, axis=1)
                               / np.linalg.norm(step, axis=1))
            new = z + alpha[:, None] * step
            new_g = _planar_grad(new, c)
            new_gn = np.linalg.norm(new_g, axis=1)
            for _ in range(30):
                worse = ~(new_gn <= gn)
                if not worse.any():
                    break
                alpha[worse] *= 0.5
                new[worse] = z[worse] + alpha[worse, None] * step[worse]
                new_g[worse] = _planar_grad(new[worse], c)
                new_gn[worse] = np.linalg.norm(new_g[worse], axis=1)
            z, g, gn = new, new_g, new_gn
            if np.all((gn < tol) | ~np.isfinite(gn)):
                break

    ok = np.isfinite(gn) & (gn < 1e-10 * max(1.0, extent))
    roots = _dedupe(z[ok], 1e-6)
    if len(roots) != 4:
        raise OracleFailureError(
            f"expected 4 equilibria at mu={mu}, found {len(roots)}", roots=roots)
    # label to match the closed-form convention: L1/L2 on the short axis
    radii = np.linalg.norm(roots, axis=1)
    near = roots[np.argsort(radii)[:2]]
    far = roots[np.argsort(radii)[2:]]

    def upper_first(pair):
        a, b = pair
        key = lambda p: (p[1], p[0])
        return (a, b) if key(a) > key(b) else (b, a)

    l1, l2 = upper_first(near)
    l3, l4 = upper_first(far)
    return EquilibriumSet(*(hill.PlanarPoint(*p) for p in (l1, l2, l3, l4)),
                          provenance="numeric", meta={"extent": extent})


def r4bp_equilibria_near_m3(mu, m3, max_iter: int = 50, tol: float = 1e-11) -> EquilibriumSet:
    """Equilibria of the full problem near the small primary.

    Damped Newton iteration on the planar full-problem gradient, written in the
    scaled frame ``q' = (q - p3) / m3**(1/3)`` and seeded at the limit points.
    Returned coordinates are scaled.
    """
    mu = _check_mu(mu, open_left=True)
    m3 = float(m3)
    if not 0.0 < m3 <= 1e-4:
        raise DomainError(f"m3 must lie in (0, 1e-4], got {m3}")
    masses = model.MassConfig.from_mu(mu, m3)
    eps = np.cbrt(m3)
    p3 = model.primary_positions(masses).p3
    origin = np.array([p3[0], p3[1], 0.0])
    limit = equilibrium_points(mu)

    def scaled_grad(s):
        q = origin + eps * np.array([s[0], s[1], 0.0])
        return model.grad_omega_full(q, masses)[:2] / eps, q

    found = []
    for name, seed in limit.points().items():
        s = seed.as_array().copy()
        g, q = scaled_grad(s)
        for _ in range(max_iter):
            h = model.hess_omega_full(q, masses)[:2, :2]
            delta = np.linalg.solve(h, -g)
            if not np.any(delta):
                break
            # damped: at most half way to m3, then backtrack on |grad|
            alpha = min(1.0, 0.5 * np.linalg.norm(s) / np.linalg.norm(delta))
            for _ in range(30):
                g_new, q_new = scaled_grad(s + alpha * delta)
                if np.linalg.norm(g_new) <= np.linalg.norm(g):
                    break
                alpha *= 0.5
            else:
                if np.linalg.norm(g) < 1e-9:
                    break  # at the rounding floor of the scaled gradient
                raise ContinuationError(
                    f"line search failed for {name} (mu={mu}, m3={m3})", seed=seed.as_array())
            s = s + alpha * delta
            g, q = g_new, q_new
            if np.linalg.norm(alpha * delta) < tol * max(1.0, np.linalg.norm(s)):
                break
        else:
            raise ContinuationError(
                f"Newton did not converge for {name} (mu={mu}, m3={m3})", seed=seed.as_array())
        found.append(hill.PlanarPoint(*s))
    return EquilibriumSet(*found, provenance="numeric", meta={"mu": mu, "m3": m3})


def scaled_distances(mu, m3) -> dict:
    """Distance from each continued full-problem point to its limit point."""
    full = r4bp_equilibria_near_m3(mu, m3).points()
    limit = equilibrium_points(mu).points()
    return {k: float(np.linalg.norm(full[k].as_array() - limit[k].as_array())) for k in limit}
