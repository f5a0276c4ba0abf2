"""
Remy trees and 231-avoiding permutations
========================================

Uniform binary trees grown one cherry at a time, uniform 231-avoiders, and
the Hausdorff distance between the two pictures.
"""

from intervalsys import make_rng
from intervalsys.core import enumerate_interval_systems, format_system, is_binary
from intervalsys.limits import hausdorff_points, render_svg, scale
from intervalsys.martin import uniformity_test
from intervalsys.processes import permutation_graph, remy_census, remy_chain, remy_tree, sample_231_avoiding

rng = make_rng(4)
for T in remy_chain(5, rng):
    print(format_system(T))

# the chain is uniform on the 14 trees with 5 leaves
trials = 50_000
counts = remy_census(5, trials, rng)
obs = [counts.get(t, 0) for t in enumerate_interval_systems(5, is_binary)]
print(len(obs), max(abs(c / trials - 1 / 14) for c in obs), uniformity_test(obs).statistic)

# a large tree and an independent 231-avoider
n = 800
tree = remy_tree(n, rng)
sigma = sample_231_avoiding(n, rng)
print(hausdorff_points(permutation_graph(sigma), scale(tree).points))

with open("remy_tree.svg", "w") as fh:
    fh.write(render_svg(scale(tree), radius=1.0))
