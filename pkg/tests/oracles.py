"""Slow, literal reference implementations used only by the tests."""

import itertools
from fractions import Fraction
from math import comb


def subsample_literal(n, edges, j):
    """Edge set of the sample at ``j``, straight from the case bounds with sentinels."""
    k = len(j)
    jj = [-n] + list(j) + [2 * n]
    out = set()
    for a in range(1, k + 1):
        for b in range(a + 1, k + 1):
            for A, B in edges:
                if jj[a - 1] < A <= jj[a] <= jj[b] <= B < jj[b + 1]:
                    out.add((a, b))
    return out


def delete_literal(n_plus_1, edges, k):
    """Remove ``k`` from every interval as a set, then relabel."""
    out = set()
    for A, B in edges:
        members = [v for v in range(A, B + 1) if v != k]
        members = [v - 1 if v > k else v for v in members]
        if len(members) >= 2:
            out.add((members[0], members[-1]))
    return out


def consecutive_orders(n, edges):
    """All orders of ``[n]`` in which every edge occupies consecutive positions."""
    found = []
    for order in itertools.permutations(range(1, n + 1)):
        pos = {v: i for i, v in enumerate(order)}
        if all(max(pos[v] for v in e) - min(pos[v] for v in e) + 1 == len(e) for e in edges):
            found.append(order)
    return found


def gamma_literal(target_edges, k, source_edges, n):
    if k > n:
        return Fraction(0)
    hits = sum(
        1 for j in itertools.combinations(range(1, n + 1), k)
        if subsample_literal(n, source_edges, j) == set(target_edges)
    )
    return Fraction(hits, comb(n, k))


def catalan(m):
    return comb(2 * m, m) // (m + 1)


def l1_to_diagonal_grid(x, y, steps=20001):
    """min over a fine grid of t of |x - t| + |y - t|."""
    return min(abs(x - t / (steps - 1)) + abs(y - t / (steps - 1)) for t in range(steps))


def is_231_free(line):
    n = len(line)
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                if line[k] < line[i] < line[j]:
                    return False
    return True
