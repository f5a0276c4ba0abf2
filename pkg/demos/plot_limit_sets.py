"""
Limit sets in the triangle
==========================

Scaling finite systems into the triangle, sampling them back out, and the
deterministic bound on the Hausdorff error.
"""

import numpy as np

from intervalsys import make_rng
from intervalsys.core import parse_system
from intervalsys.limits import (
    cdf_sup_deviation,
    complete_tree_limit,
    hausdorff,
    is_binary_limit_mc,
    render_svg,
    sample_system,
    scale,
    spine_limit,
)

# the spine: points (i/2m, 1 - i/2m) along the anti-diagonal
K = spine_limit(64)
print(len(K), K.points[:3])

# a finite system becomes a point set; singletons land next to the diagonal
print(scale(parse_system("4:1-4,2-3")).points)

# sample 8 points from the spine and look at the tree they induce
rng = make_rng(1)
u = np.sort(rng.random(8))
I = sample_system(K, u)
print(I)

# the distance back to K is controlled by how far u is from uniform spacing
u = np.sort(rng.random(400))
print(hausdorff(scale(sample_system(K, u)), K), sum(cdf_sup_deviation(u)))

# both worked limits sample binary trees with high probability
print(is_binary_limit_mc(spine_limit(64), 20_000, 3))
print(is_binary_limit_mc(complete_tree_limit(4), 20_000, 3))

with open("complete_tree_limit.svg", "w") as fh:
    fh.write(render_svg(complete_tree_limit(5)))
