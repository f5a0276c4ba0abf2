"""
Interval systems, deletion and subsampling
==========================================

Small finite systems, the three ways of running a deletion path, and the
linear orders that turn a hypergraph into an interval system.
"""

import itertools

from intervalsys import (
    Permutation,
    as_hypergraph,
    delete_point,
    enumerate_interval_systems,
    is_binary,
    linearize,
    parse_hypergraph,
    parse_system,
    selection_vector,
    sequential_delete,
    subsample,
)

# a system on [5] with the intervals [1,5], [2,3] and [2,5]
I = parse_system("5:1-5,2-3,2-5")
print(I)

# removing the point 2 shrinks every interval that contains it
print(delete_point(I, 2))

# keeping the points 1, 3, 4 gives a system on [3]
print(subsample(I, (1, 3, 4)))

# a permutation drives a path of deletions; the survivors are its selection vector
pi = Permutation((3, 5, 1, 4, 2))
print(sequential_delete(I, pi, 3), subsample(I, selection_vector(pi, 3)))

# 2^(n choose 2) systems on [n], and Catalan many binary trees among them
for n in range(1, 6):
    systems = list(enumerate_interval_systems(n))
    trees = [s for s in systems if is_binary(s)]
    print(n, len(systems), len(trees))

# an interval hypergraph: find an order making every edge contiguous
H = parse_hypergraph("3:{1,3}")
order, J = linearize(H)
print(order, J)
print(as_hypergraph(J))
