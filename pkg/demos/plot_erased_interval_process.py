"""
Erased-interval process
=======================

Forward simulation from a limit set, the three random carriers, and the
reconstruction of the limit from a long path.
"""

import numpy as np

from intervalsys import make_rng
from intervalsys.core import parse_system, selection_vector
from intervalsys.limits import cdf_sup_deviation, hausdorff, sample_system, scale, scale_vector, spine_limit
from intervalsys.processes import backward_chain, eta_from_u, perm_from_u, simulate_eip

# uniforms, erasers and permutations carry the same randomness
u = np.array([0.7, 0.2, 0.5])
print(eta_from_u(u), perm_from_u(u)[3])

K = spine_limit(64)
traj, u = simulate_eip(K, 20_000, make_rng(2))
for n in (10, 100, 1000, 20_000):
    I = traj[n]
    print(n, len(I), hausdorff(scale(I), K), sum(cdf_sup_deviation(np.sort(u[:n]))))

# the small systems are recovered from the big one and the permutation alone
S = perm_from_u(u)[20_000]
KN = scale(traj[20_000])
print(all(sample_system(KN, scale_vector(selection_vector(S, k), 20_000)) == traj[k] for k in range(1, 11)))

# backward from <3;[1,2]>: the edge survives one deletion with probability 1/3
rng = make_rng(3)
runs = 20_000
print(sum(bool(backward_chain(parse_system("3:1-2"), rng)[2].edges) for _ in range(runs)) / runs)
