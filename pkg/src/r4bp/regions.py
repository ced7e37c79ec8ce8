"""
Planar Hill's regions: where ``2*Omega(x, y, 0) - C >= 0`` motion is allowed.

:func:`region_grid` samples the zero-velocity function on a regular grid for
either the limit or the full problem; :func:`contours` extracts its zero
level with marching squares.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from . import hill, model
from .errors import DomainError

#: Grid nodes closer than this to a point mass are flagged singular.
SINGULAR_NODE_RADIUS = 1e-9


@dataclass(frozen=True)
class RegionGrid:
    """Zero-velocity function ``2*Omega - C`` sampled on a grid.

    ``values[i, j]`` belongs to ``(xs[i], ys[j])``.  Singular nodes hold NaN
    in ``values``, are marked in ``singular`` and count as allowed.
    """

    x_bounds: tuple
    y_bounds: tuple
    nx: int
    ny: int
    C: float
    values: np.ndarray
    singular: np.ndarray

    @property
    def xs(self) -> np.ndarray:
        return np.linspace(*self.x_bounds, self.nx)

    @property
    def ys(self) -> np.ndarray:
        return np.linspace(*self.y_bounds, self.ny)

    @property
    def mask(self) -> np.ndarray:
        """True where motion is allowed."""
        return self.singular | (np.nan_to_num(self.values, nan=0.0) >= 0.0)

    @property
    def cell_size(self) -> float:
        return max((self.x_bounds[1] - self.x_bounds[0]) / (self.nx - 1),
                   (self.y_bounds[1] - self.y_bounds[0]) / (self.ny - 1))


@dataclass
class ContourSet:
    polylines: list = field(default_factory=list)
    closed: list = field(default_factory=list)

    def __len__(self):
        return len(self.polylines)

    def vertices(self) -> np.ndarray:
        if not self.polylines:
            return np.zeros((0, 2))
        return np.vstack(self.polylines)


def _singular_points(problem: str, params):
    if problem == "limit":
        return np.zeros((1, 2))
    tri = model.primary_positions(params).as_array()
    return tri[params.as_array() > 0]


def region_grid(problem: str, params, C: float, bounds, nx: int, ny: int) -> RegionGrid:
    """Sample ``2*Omega - C`` on the plane ``z = 0``.

    ``problem`` is ``"limit"`` (``params`` = μ) or ``"full"`` (``params`` a
    :class:`~r4bp.model.MassConfig`); ``bounds = (xmin, xmax, ymin, ymax)``.
    """
    xmin, xmax, ymin, ymax = map(float, bounds)
    if not (xmax > xmin and ymax > ymin):
        raise DomainError(f"bounds must be non-empty intervals, got {tuple(bounds)}")
    if nx < 2 or ny < 2:
        raise DomainError(f"grid resolution must be at least 2x2, got {nx}x{ny}")
    if problem == "limit":
        params = float(hill.MassRatio(float(params)).mu)
        omega = lambda p: hill.omega_limit(p, params)
    elif problem == "full":
        if not isinstance(params, model.MassConfig):
            raise DomainError("full problem needs a MassConfig")
        omega = lambda p: model.omega_full(p, params)
    else:
        raise DomainError(f"problem must be 'limit' or 'full', got {problem!r}")

    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    pts = np.stack([X, Y, np.zeros_like(X)], axis=-1)

    sing = np.zeros(X.shape, dtype=bool)
    for s in _singular_points(problem, params):
        sing |= np.hypot(X - s[0], Y - s[1]) < SINGULAR_NODE_RADIUS
    values = np.full(X.shape, np.nan)
    values[~sing] = 2.0 * omega(pts[~sing]) - C
    return RegionGrid((xmin, xmax), (ymin, ymax), nx, ny, float(C), values, sing)


# corners: 0=(i,j) 1=(i+1,j) 2=(i+1,j+1) 3=(i,j+1)
# edges:   0=c0c1  1=c1c2    2=c3c2      3=c0c3
_CASES = {
    0: [], 15: [],
    1: [(3, 0)], 14: [(3, 0)],
    2: [(0, 1)], 13: [(0, 1)],
    4: [(1, 2)], 11: [(1, 2)],
    8: [(2, 3)], 7: [(2, 3)],
    3: [(3, 1)], 12: [(3, 1)],
    6: [(0, 2)], 9: [(0, 2)],
}
_EDGE_CORNERS = {0: (0, 1), 1: (1, 2), 2: (3, 2), 3: (0, 3)}
_CORNER_OFFSETS = ((0, 0), (1, 0), (1, 1), (0, 1))


def _edge_key(i, j, e):
    # canonical id shared by the two cells adjacent to an edge
    return {0: ("h", i, j), 1: ("v", i + 1, j), 2: ("h", i, j + 1), 3: ("v", i, j)}[e]


def _case_segments(case: int, center_inside: bool):
    if case == 5:
        return [(0, 1), (2, 3)] if center_inside else [(3, 0), (1, 2)]
    if case == 10:
        return [(3, 0), (1, 2)] if center_inside else [(0, 1), (2, 3)]
    return _CASES[case]


def contours(grid: RegionGrid) -> ContourSet:
    """Zero-level polylines of ``grid.values`` by marching squares.

    Saddle cells (cases 5 and 10) are resolved with the mean of the four
    corners; vertices are placed by linear interpolation along cell edges.
    Singular nodes act as ``+inf``.  Polylines are assembled by joining
    segments on shared edges; cells are visited in row-major order.
    """
    f = np.where(grid.singular, np.inf, grid.values)
    inside = f >= 0.0
    xs, ys = grid.xs, grid.ys

    bits = (inside[:-1, :-1].astype(int) | inside[1:, :-1] << 1
            | inside[1:, 1:] << 2 | inside[:-1, 1:] << 3)
    mixed = np.argwhere((bits != 0) & (bits != 15))

    vertex: dict = {}
    links: dict = {}

    def place(i, j, e):
        key = _edge_key(i, j, e)
        if key not in vertex:
            (a, b) = _EDGE_CORNERS[e]
            ia, ja = i + _CORNER_OFFSETS[a][0], j + _CORNER_OFFSETS[a][1]
            ib, jb = i + _CORNER_OFFSETS[b][0], j + _CORNER_OFFSETS[b][1]
            fa, fb = f[ia, ja], f[ib, jb]
            if np.isinf(fa):
                t = 1.0
            elif np.isinf(fb):
                t = 0.0
            else:
                t = min(1.0, max(0.0, fa / (fa - fb)))
            vertex[key] = np.array([xs[ia] + t * (xs[ib] - xs[ia]),
                                    ys[ja] + t * (ys[jb] - ys[ja])])
        return key

    for i, j in mixed:
        case = int(bits[i, j])
        center_inside = False
        if case in (5, 10):
            corners = [f[i, j], f[i + 1, j], f[i + 1, j + 1], f[i, j + 1]]
            center_inside = bool(np.mean(corners) >= 0.0)
        for ea, eb in _case_segments(case, center_inside):
            ka, kb = place(i, j, ea), place(i, j, eb)
            links.setdefault(ka, []).append(kb)
            links.setdefault(kb, []).append(ka)

    out = ContourSet()
    seen = set()
    # open chains start at boundary edges (one link); closed loops afterwards
    starts = [k for k in vertex if len(links[k]) == 1] + list(vertex)
    for start in starts:
        if start in seen:
            continue
        chain = [start]
        seen.add(start)
        prev, cur = None, start
        while True:
            nxt = [k for k in links[cur] if k != prev and k not in seen]
            if not nxt:
                closed = len(chain) > 2 and start in links[cur] and prev is not None
                break
            prev, cur = cur, nxt[0]
            chain.append(cur)
            seen.add(cur)
        pts = np.array([vertex[k] for k in chain])
        if closed:
            pts = np.vstack([pts, pts[:1]])
        out.polylines.append(pts)
        out.closed.append(closed)
    return out


def connected_components(grid: RegionGrid, allowed: bool = True) -> int:
    """Number of 4-connected components of the allowed (or forbidden) set."""
    mask = grid.mask if allowed else ~grid.mask
    _, n = ndimage.label(mask)
    return int(n)


def distance_to_contour(contour_set: ContourSet, point) -> float:
    """Smallest distance from ``point`` to any contour segment."""
    p = np.asarray(point, dtype=float)[:2]
    best = np.inf
    for line in contour_set.polylines:
        if len(line) == 1:
            best = min(best, float(np.linalg.norm(line[0] - p)))
            continue
        a, b = line[:-1], line[1:]
        ab = b - a
        denom = np.einsum("ij,ij->i", ab, ab)
        t = np.clip(np.einsum("ij,ij->i", p - a, ab) / np.where(denom > 0, denom, 1.0), 0.0, 1.0)
        proj = a + t[:, None] * ab
        best = min(best, float(np.min(np.linalg.norm(proj - p, axis=1))))
    return best
