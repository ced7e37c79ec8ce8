"""
Hill's regions near m3
======================

Where 2*Omega >= C the body may move.  At the L1 level the inner region
around m3 just touches the outer one.  Contours go to SVG files next to
this script.

L3 minimises Omega, so exactly at its level the forbidden set collapses
to the two points L3 and L4; slightly above it two small loops appear.
"""

from pathlib import Path

import numpy as np
from r4bp import equilibrium_points, omega_limit
from r4bp.io import contours_svg, write_text
from r4bp.regions import connected_components, contours, distance_to_contour, region_grid

mu = 0.00095
eq = equilibrium_points(mu)
here = Path(__file__).parent

for label in ("L1", "L3"):
    p = getattr(eq, label).as_array()
    C = 2 * omega_limit(p, mu)
    # a little above the level so the L3 case still shows its small loops
    grid = region_grid("limit", mu, C + 0.01, (-10, 10, -10, 10), 400, 400)
    cs = contours(grid)
    # components are counted inside the plotting window
    print(f"{label}: C = {C:.6f}, {len(cs)} contours, allowed components {connected_components(grid)},"
          f" distance to {label} {distance_to_contour(cs, p):.3f}")
    write_text(here / f"hill_region_{label}.svg", contours_svg(cs, grid))

# the allowed set is symmetric under (x, y) -> (-x, -y)
grid = region_grid("limit", mu, 4.0, (-3, 3, -3, 3), 201, 201)
print("antipodal symmetry:", np.array_equal(grid.mask, grid.mask[::-1, ::-1]))
