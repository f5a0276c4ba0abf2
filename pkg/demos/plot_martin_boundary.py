"""
Densities and the boundary
==========================

Exact densities of three-leaf trees in the spine and complete families,
next to Monte Carlo estimates from the corresponding limit sets.
"""

from intervalsys import make_rng
from intervalsys.core import parse_system
from intervalsys.limits import complete_tree_limit, spine_limit
from intervalsys.martin import boundary_law_estimate, gamma, gamma_convergence, gamma_table, spine_tree

print(gamma(parse_system("2:1-2"), parse_system("3:1-2")))
print(gamma_table(spine_tree(10), 3))

left = parse_system("3:1-2,1-3")
right = parse_system("3:1-3,2-3")
for t in (left, right):
    print(gamma_convergence("spine", t, [10, 20, 40, 80, 160]).to_csv())
    print(gamma_convergence("complete", t, [2, 3, 4, 5, 6]).to_csv())

rng = make_rng(5)
for t in (left, right):
    print(boundary_law_estimate(spine_limit(1024), t, 500_000, rng))
    print(boundary_law_estimate(complete_tree_limit(7), t, 500_000, rng))
