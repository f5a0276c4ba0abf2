"""Exhaustive exact-identity checks shared by the CLI and the test suite.

Each suite returns ``(name, cases, failures)``.
"""

from __future__ import annotations

import itertools

from .core import (
    IntervalSystem,
    Permutation,
    as_hypergraph,
    delete_point,
    enumerate_interval_systems,
    increasing_vectors,
    is_binary,
    is_interval_partition,
    is_schroeder,
    relabel_hypergraph,
    restrict_hypergraph,
    as_interval_system,
    selection_vector,
    sequential_delete,
    subsample,
)
from .limits import sample_system, scale, scale_vector


def scaling_identity(max_n: int):
    """subsample(I, j) == sample_system(scale(I), scale_vector(j))."""
    cases = fails = 0
    for n in range(1, max_n + 1):
        for system in enumerate_interval_systems(n):
            K = scale(system)
            for k in range(1, n + 1):
                for j in increasing_vectors(k, n):
                    cases += 1
                    if subsample(system, j) != sample_system(K, scale_vector(j, n)):
                        fails += 1
    return "scaling", cases, fails


def composition(n: int, pairs=None):
    """subsample(subsample(I, j), h) == subsample(I, j o h); all (m, k) unless given."""
    if pairs is None:
        pairs = [(m, k) for m in range(1, n + 1) for k in range(1, m + 1)]
    cases = fails = 0
    for system in enumerate_interval_systems(n):
        for m, k in pairs:
            for j in increasing_vectors(m, n):
                inner = subsample(system, j)
                for h in increasing_vectors(k, m):
                    cases += 1
                    if subsample(inner, h) != subsample(system, [j[i - 1] for i in h]):
                        fails += 1
    return f"composition(n={n})", cases, fails


def three_routes(max_n: int):
    """Sequential deletion, subsampling at the selection vector, and relabel-restrict-unlabel agree."""
    cases = fails = 0
    for n in range(1, max_n + 1):
        perms = [Permutation(p) for p in itertools.permutations(range(1, n + 1))]
        systems = list(enumerate_interval_systems(n))
        for pi in perms:
            for k in range(1, n + 1):
                pik_inv = pi.restrict(k).inverse()
                for system in systems:
                    cases += 1
                    r1 = sequential_delete(system, pi, k)
                    r2 = subsample(system, selection_vector(pi, k))
                    h = restrict_hypergraph(relabel_hypergraph(as_hypergraph(system), pi), k)
                    r3 = as_interval_system(relabel_hypergraph(h, pik_inv))
                    if not (r1 == r2 == r3):
                        fails += 1
    return "three-routes", cases, fails


def deletion_as_vector(max_n: int):
    """delete_point(I, k) == subsample(I, (1..k-1, k+1..n+1))."""
    cases = fails = 0
    for m in range(2, max_n + 1):
        for system in enumerate_interval_systems(m):
            for k in range(1, m + 1):
                cases += 1
                j = [i for i in range(1, m + 1) if i != k]
                if delete_point(system, k) != subsample(system, j):
                    fails += 1
    return "deletion-vector", cases, fails


def closure(max_n: int):
    """Schroeder trees, binary trees and interval partitions are closed under subsampling."""
    preds = (is_schroeder, is_binary, is_interval_partition)
    cases = fails = 0
    for n in range(1, max_n + 1):
        for system in enumerate_interval_systems(n):
            held = [p for p in preds if p(system)]
            if not held:
                continue
            for k in range(1, n + 1):
                for j in increasing_vectors(k, n):
                    cases += 1
                    sub = subsample(system, j)
                    if not all(p(sub) for p in held):
                        fails += 1
    return "closure", cases, fails


def run_all(max_n: int = 4, composition_n: int = 5):
    return [
        scaling_identity(max_n),
        composition(composition_n, [(3, 2)]) if composition_n > max_n else composition(composition_n),
        composition(max_n),
        three_routes(max_n),
        deletion_as_vector(max_n),
        closure(max_n),
    ]
