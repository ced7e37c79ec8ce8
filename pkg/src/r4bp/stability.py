"""
Linear stability of the planar libration points of the limit problem.

The linearised flow at an equilibrium has characteristic polynomial
``p(s) = s^4 + A s^2 + B`` with ``A = 4 - Oxx - Oyy`` and
``B = Oxx*Oyy - Oxy^2``; ``D = A^2 - 4B`` is its discriminant in ``s^2``.
Classification is read off the signs of ``(A, B, D)``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import equilibria, hill
from .errors import DomainError, PreconditionError, StructuralError

#: |D| below this is treated as a double root pair.
TOL_D = 1e-9


class StabilityClass(str, enum.Enum):
    CENTER_CENTER = "CenterCenter"
    SADDLE_CENTER = "SaddleCenter"
    COMPLEX_SADDLE = "ComplexSaddle"
    DEGENERATE_PAIR = "DegeneratePair"
    SADDLE_SADDLE = "SaddleSaddle"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CharacteristicCoefficients:
    A: float
    B: float

    @property
    def D(self) -> float:
        return self.A * self.A - 4.0 * self.B


@dataclass(frozen=True)
class StabilityReport:
    label: str
    point: hill.PlanarPoint
    mu: float
    coefficients: CharacteristicCoefficients
    roots: np.ndarray
    stability_class: StabilityClass


def _planar(point) -> np.ndarray:
    p = np.asarray(point.as_array() if hasattr(point, "as_array") else point, dtype=float)
    if p.shape != (2,):
        raise DomainError(f"expected a planar point, got shape {p.shape}")
    return p


def linearization(point, mu) -> np.ndarray:
    """4x4 matrix of the planar flow linearised at ``point``."""
    h = hill.hess_omega(_planar(point), mu)
    return np.array([[0.0, 0.0, 1.0, 0.0],
                     [0.0, 0.0, 0.0, 1.0],
                     [h[0, 0], h[0, 1], 0.0, 2.0],
                     [h[0, 1], h[1, 1], -2.0, 0.0]])


def characteristic_coefficients(point, mu) -> CharacteristicCoefficients:
    h = hill.hess_omega(_planar(point), mu)
    oxx, oyy, oxy = h[0, 0], h[1, 1], h[0, 1]
    return CharacteristicCoefficients(4.0 - oxx - oyy, oxx * oyy - oxy * oxy)


def charpoly_coefficients(matrix: np.ndarray) -> np.ndarray:
    """Characteristic polynomial ``s^n + c1 s^(n-1) + ... + cn`` by Faddeev-LeVerrier.

    Returns ``[1, c1, ..., cn]``.
    """
    a = np.asarray(matrix, dtype=float)
    n = a.shape[0]
    coeffs = [1.0]
    m = np.zeros_like(a)
    for k in range(1, n + 1):
        m = a @ m + coeffs[-1] * np.eye(n)
        coeffs.append(-np.trace(a @ m) / k)
    return np.array(coeffs)


def quartic_roots(coeffs: CharacteristicCoefficients) -> np.ndarray:
    """Roots of ``s^4 + A s^2 + B``, sorted by (real, imaginary) part."""
    A, B = coeffs.A, coeffs.B
    sq = np.sqrt(complex(A * A - 4.0 * B))
    roots = []
    for w in ((-A + sq) / 2.0, (-A - sq) / 2.0):
        s = np.sqrt(complex(w))
        roots += [s, -s]
    roots = np.array(roots)
    # +0.0 folds signed zeros so ordering is deterministic
    roots = roots.real + 0.0 + 1j * (roots.imag + 0.0)
    return roots[np.lexsort((roots.imag, roots.real))]


def classify_coefficients(coeffs: CharacteristicCoefficients, tol_d: float = TOL_D) -> StabilityClass:
    A, B, D = coeffs.A, coeffs.B, coeffs.D
    if B < 0:
        return StabilityClass.SADDLE_CENTER
    if D < -tol_d:
        return StabilityClass.COMPLEX_SADDLE
    if abs(D) <= tol_d:
        return StabilityClass.DEGENERATE_PAIR
    if A > 0:
        return StabilityClass.CENTER_CENTER
    return StabilityClass.SADDLE_SADDLE


def classify(point, mu, label: str = "", tol_d: float = TOL_D,
             grad_tol: float = 1e-8) -> StabilityReport:
    """Linear stability report for an equilibrium of the limit problem."""
    p = _planar(point)
    gnorm = float(np.linalg.norm(hill.grad_omega(p, mu)))
    if gnorm >= grad_tol:
        raise PreconditionError(f"point {tuple(p)} is not an equilibrium: |grad Omega| = {gnorm:.3e}")
    coeffs = characteristic_coefficients(p, mu)
    return StabilityReport(label, hill.PlanarPoint(*p), float(mu), coeffs,
                           quartic_roots(coeffs), classify_coefficients(coeffs, tol_d))


def classify_all(mu) -> dict:
    eq = equilibria.equilibrium_points(mu, require_all=False)
    return {name: classify(pt, mu, label=name) for name, pt in eq.points().items()}


def point_coefficients(label: str, mu) -> CharacteristicCoefficients:
    """Coefficients at ``L1``..``L4`` evaluated at their closed-form positions."""
    eq = equilibria.equilibrium_points(mu, require_all=label in ("L3", "L4"))
    return characteristic_coefficients(getattr(eq, label), mu)


def l3_discriminant(mu) -> float:
    return point_coefficients("L3", mu).D


@dataclass(frozen=True)
class CriticalMass:
    mu0: float
    bracket: tuple
    iterations: int


@lru_cache(maxsize=32)
def critical_mass(tol: float = 1e-12, scan: int = 200) -> CriticalMass:
    """Mass ratio where the ``L3`` discriminant changes sign.

    A uniform sign scan over ``(0, 1/2]`` locates the bracket, which is then
    bisected until its width is at most ``tol``.
    """
    if tol < 1e-14:
        raise DomainError(f"tol must be >= 1e-14, got {tol}")
    grid = np.linspace(0.0, 0.5, scan + 1)[1:]
    vals = np.array([l3_discriminant(m) for m in grid])
    change = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if len(change) == 0:
        raise StructuralError("no sign change of D(L3) on (0, 1/2]")
    i = change[0]
    lo, hi = grid[i], grid[i + 1]
    f_lo = vals[i]
    it = 0
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if mid in (lo, hi):
            break
        f_mid = l3_discriminant(mid)
        if np.sign(f_mid) == np.sign(f_lo):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        it += 1
    return CriticalMass(0.5 * (lo + hi), (float(lo), float(hi)), it)


def vertical_frequency(point) -> float:
    """Small-oscillation frequency normal to the plane, ``sqrt(1 + 1/r^3)``."""
    p = np.asarray(point.as_array() if hasattr(point, "as_array") else point, dtype=float)
    return float(np.sqrt(1.0 + hill.gravitational_kernel(p) ** 3))


def coefficient_sweep(mus) -> np.ndarray:
    """Rows ``(mu, A_L1, B_L1, D_L1, A_L3, B_L3, D_L3)``; L3 columns are NaN at mu = 0."""
    rows = []
    for mu in mus:
        c1 = point_coefficients("L1", mu)
        if mu > 0:
            c3 = point_coefficients("L3", mu)
            l3 = (c3.A, c3.B, c3.D)
        else:
            l3 = (np.nan,) * 3
        rows.append((mu, c1.A, c1.B, c1.D) + l3)
    return np.array(rows)
