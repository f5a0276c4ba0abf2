"""Randomization carriers, erased-interval processes and tree growth chains.

Three carriers describe the same exchangeable randomness: a sequence of
distinct uniforms ``U``, a consistent permutation sequence ``S`` and an eraser
sequence ``eta``. Conversions between them are exact.
"""

from __future__ import annotations

import bisect
import csv
import io
import itertools
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .core import (
    DomainError,
    IntervalHypergraph,
    IntervalSystem,
    Permutation,
    as_hypergraph,
    delete_point,
    format_system,
    is_binary,
    relabel_hypergraph,
)
from .limits import LimitSet, sample_codes, sorted_uniforms, system_from_code, pair_index


class EraserSequence(tuple):
    """``(eta_1, ..., eta_{N-1})`` with ``eta_n`` in ``[n+1]``."""

    def __new__(cls, values=()):
        values = tuple(int(v) for v in values)
        for n, e in enumerate(values, start=1):
            if not 1 <= e <= n + 1:
                raise DomainError(f"eta_{n}={e} outside [1, {n + 1}]")
        return super().__new__(cls, values)

    @property
    def N(self) -> int:
        return len(self) + 1


def u_sequence(u) -> np.ndarray:
    """Validate a vector of pairwise distinct values in [0, 1]."""
    u = np.asarray(u, dtype=float).ravel()
    if u.size == 0 or np.any((u < 0) | (u > 1)):
        raise DomainError("U-values must be a non-empty vector in [0, 1]")
    if len(np.unique(u)) != len(u):
        raise DomainError("U-values must be pairwise distinct")
    return u


class PermutationSequence:
    """Consistent ``(S_1, ..., S_N)``; only ``S_N`` is stored.

    ``S_n`` is ``S_N`` with every value above ``n`` erased from the one-line notation.
    """

    def __init__(self, last: Permutation):
        self.last = last

    @property
    def N(self) -> int:
        return self.last.n

    def __len__(self):
        return self.N

    def __getitem__(self, n: int) -> Permutation:
        """``S_n`` for ``1 <= n <= N`` (one-based)."""
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self.last.restrict(n)

    def __iter__(self):
        for n in range(1, self.N + 1):
            yield self[n]

    def __eq__(self, other):
        return isinstance(other, PermutationSequence) and self.last == other.last

    def __repr__(self):
        return f"PermutationSequence({self.last})"


def eta_from_u(u) -> EraserSequence:
    """``eta_k`` = rank of ``U_{k+1}`` among ``U_1..U_{k+1}``."""
    u = u_sequence(u)
    seen = [u[0]]
    out = []
    for v in u[1:]:
        out.append(bisect.bisect_right(seen, v) + 1)
        bisect.insort(seen, v)
    return EraserSequence(out)


def perm_from_u(u) -> PermutationSequence:
    u = u_sequence(u)
    return PermutationSequence(Permutation(tuple(np.argsort(u, kind="stable") + 1)))


def perm_from_eta(eta: Sequence[int]) -> PermutationSequence:
    """Insert ``n`` into gap ``eta_{n-1}`` of ``S_{n-1}``."""
    eta = EraserSequence(eta)
    line = [1]
    for n, e in enumerate(eta, start=2):
        line.insert(e - 1, n)
    return PermutationSequence(Permutation(tuple(line)))


def eta_from_perm(S: PermutationSequence) -> EraserSequence:
    """``eta_n`` = position of ``n+1`` in ``S_{n+1}``, read from the top down."""
    line = list(S.last.one_line)
    out = []
    for m in range(S.N, 1, -1):
        pos = line.index(m)
        out.append(pos + 1)
        del line[pos]
    return EraserSequence(reversed(out))


# ---------------------------------------------------------------------------
# erased-interval processes


class _SampledSystems:
    """Lazy ``I_n`` for a path sampled from a limit set."""

    def __init__(self, a: np.ndarray, b: np.ndarray):
        self._a = a  # (N, P) left ends per prefix length
        self._b = b

    def __len__(self):
        return self._a.shape[0]

    def __getitem__(self, i: int) -> IntervalSystem:
        n = i + 1
        a, b = self._a[i], self._b[i]
        keep = a < b
        return IntervalSystem(n, zip(a[keep].tolist(), b[keep].tolist()))


@dataclass
class EipTrajectory:
    """Path ``(I_1, ..., I_N)`` with erasers ``(eta_1, ..., eta_{N-1})``."""

    systems: Sequence[IntervalSystem]
    erasers: EraserSequence

    @property
    def N(self) -> int:
        return len(self.systems)

    def __getitem__(self, n: int) -> IntervalSystem:
        """``I_n``, one-based."""
        if not 1 <= n <= self.N:
            raise IndexError(n)
        return self.systems[n - 1]

    def check(self) -> bool:
        """Whether ``I_n = delete_point(I_{n+1}, eta_n)`` for every ``n < N``."""
        nxt = self[self.N]
        for n in range(self.N - 1, 0, -1):
            cur = self[n]
            if delete_point(nxt, self.erasers[n - 1]) != cur:
                return False
            nxt = cur
        return True

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["step", "eta", "system"])
        for n in range(1, self.N + 1):
            eta = self.erasers[n - 1] if n < self.N else ""
            w.writerow([n, eta, format_system(self[n])])
        return buf.getvalue()


def draw_u(K: LimitSet, N: int, rng) -> np.ndarray:
    """``N`` uniforms, redrawn until pairwise distinct and off every coordinate of ``K``."""
    coords = np.concatenate([K.x, K.y])
    u = rng.random(N)
    while True:
        _, first = np.unique(u, return_index=True)
        bad = np.ones(N, dtype=bool)
        bad[first] = False
        bad |= np.isin(u, coords)
        if not bad.any():
            return u
        u[bad] = rng.random(int(bad.sum()))


def simulate_eip(K: LimitSet, N: int, rng, check: bool = True):
    """Sample ``I_n = phi_n(K, sorted U_1..U_n)`` for ``n = 1..N``.

    Returns ``(trajectory, u)``. With ``check`` the deletion identity is
    verified on the whole path and a failure raises ``AssertionError``.
    """
    if N < 1:
        raise DomainError("N must be >= 1")
    u = draw_u(K, N, rng)
    P = len(K)
    a = np.empty((N, P), dtype=np.int32)
    b = np.empty((N, P), dtype=np.int32)
    step = max(1, 4_000_000 // max(P, 1))
    carry_a = np.zeros(P, dtype=np.int32)
    carry_b = np.zeros(P, dtype=np.int32)
    for s in range(0, N, step):
        blk = u[s:s + step, None]
        ca = np.cumsum(blk < K.x, axis=0, dtype=np.int32) + carry_a
        cb = np.cumsum(blk < K.y, axis=0, dtype=np.int32) + carry_b
        a[s:s + step] = ca + 1
        b[s:s + step] = cb
        carry_a, carry_b = ca[-1], cb[-1]
    traj = EipTrajectory(_SampledSystems(a, b), eta_from_u(u))
    if check and not traj.check():
        raise AssertionError("sampled path violates the deletion identity")
    return traj, u


def backward_chain(top: IntervalSystem, rng) -> EipTrajectory:
    """Uniform deletions downward from ``I_N``."""
    N = top.n
    systems: List[IntervalSystem] = [top]
    erasers = []
    cur = top
    for n in range(N - 1, 0, -1):
        e = int(rng.integers(1, n + 2))
        cur = delete_point(cur, e)
        erasers.append(e)
        systems.append(cur)
    return EipTrajectory(systems[::-1], EraserSequence(reversed(erasers)))


# ---------------------------------------------------------------------------
# Remy growth on the interval representation


def _remy_insert(edges, n: int, node: int, left: bool):
    """Graft a cherry at node ``node`` of the tree on ``[n]``.

    Nodes ``0..n-1`` are the leaves ``[j, j]``; nodes ``n..2n-2`` are the
    stored edges in canonical order. The new leaf goes left or right of the
    old subtree.
    """
    if node < n:
        a = b = node + 1
    else:
        a, b = edges[node - n]
    out = []
    for c, d in edges:
        if d < a:
            out.append((c, d))
        elif c > b:
            out.append((c + 1, d + 1))
        elif c <= a and b <= d and (c, d) != (a, b):
            out.append((c, d + 1))
        elif left:
            out.append((c + 1, d + 1))
        else:
            out.append((c, d))
    out.append((a, b + 1))
    return out


def _remy_draw(rng, n: int):
    node = int(rng.integers(0, 2 * n - 1))
    left = bool(rng.integers(0, 2))
    return node, left


def remy_step(tree: IntervalSystem, rng) -> IntervalSystem:
    """One step of the growth chain: uniform node among ``2n-1``, uniform side."""
    if not is_binary(tree):
        raise DomainError("remy_step needs a binary tree")
    n = tree.n
    node, left = _remy_draw(rng, n)
    return IntervalSystem(n + 1, _remy_insert(tree.edges, n, node, left))


def remy_chain(n: int, rng) -> List[IntervalSystem]:
    """``T_1, ..., T_n`` started from the single leaf."""
    if n < 1:
        raise DomainError("n must be >= 1")
    trees = [IntervalSystem(1)]
    edges = ()
    for m in range(1, n):
        node, left = _remy_draw(rng, m)
        edges = tuple(sorted(_remy_insert(edges, m, node, left)))
        trees.append(IntervalSystem(m + 1, edges))
    return trees


def remy_tree(n: int, rng) -> IntervalSystem:
    """Final tree of ``remy_chain`` with numpy bookkeeping; same draws, same result."""
    if n < 1:
        raise DomainError("n must be >= 1")
    A = np.empty(0, dtype=np.int64)
    B = np.empty(0, dtype=np.int64)
    for m in range(1, n):
        node, left = _remy_draw(rng, m)
        if node < m:
            a = b = node + 1
        else:
            a, b = int(A[node - m]), int(B[node - m])
        right_of = A > b
        anc = (A <= a) & (B >= b) & ~((A == a) & (B == b))
        inside = ~right_of & ~anc & (B >= a)
        shift_a = right_of | (inside & left)
        shift_b = right_of | anc | (inside & left)
        A = np.append(A + shift_a, a)
        B = np.append(B + shift_b, b + 1)
        order = np.lexsort((B, A))
        A, B = A[order], B[order]
    return IntervalSystem(n, zip(A.tolist(), B.tolist()))


def remy_census(n: int, trials: int, rng) -> dict:
    """Counts of ``T_n`` over independent chains, keyed by the final tree."""
    counts: dict = {}
    for _ in range(trials):
        edges = ()
        for m in range(1, n):
            node, left = _remy_draw(rng, m)
            edges = tuple(sorted(_remy_insert(edges, m, node, left)))
        counts[edges] = counts.get(edges, 0) + 1
    return {IntervalSystem(n, e): c for e, c in counts.items()}


# ---------------------------------------------------------------------------
# exchangeable hypergraphs


def exchangeable_hypergraph(system: IntervalSystem, S: Permutation) -> IntervalHypergraph:
    """``S(I)``: push the edges of ``I`` through the one-line notation of ``S``."""
    if S.n != system.n:
        raise DomainError("permutation size differs from the ground set")
    return relabel_hypergraph(as_hypergraph(system), S)


def subset_index(k: int) -> dict:
    """Bit position of each subset of ``[k]`` with at least two elements, keyed by its bitmask."""
    masks = [m for m in range(1 << k) if bin(m).count("1") >= 2]
    return {m: i for i, m in enumerate(masks)}


def hypergraph_code(h: IntervalHypergraph) -> int:
    idx = subset_index(h.n)
    return sum(1 << idx[sum(1 << (v - 1) for v in e)] for e in h.edges)


def hypergraph_from_code(code: int, k: int) -> IntervalHypergraph:
    edges = []
    for m, i in subset_index(k).items():
        if (int(code) >> i) & 1:
            edges.append(tuple(v + 1 for v in range(k) if (m >> v) & 1))
    return IntervalHypergraph._derived(k, edges)


def exchangeable_hypergraph_codes(K: LimitSet, U: np.ndarray) -> np.ndarray:
    """Codes of ``S_k(I_k)`` for each row of raw (unsorted, distinct) uniforms.

    ``I_k`` is sampled from the sorted row and ``S_k`` arranges the row in
    increasing order. ``k`` is limited to 5.
    """
    U = np.asarray(U, dtype=float)
    T, k = U.shape
    if k > 5:
        raise DomainError("k <= 5 supported")
    order = np.argsort(U, axis=1)  # S_k one-line, zero-based
    codes = sample_codes(K, np.take_along_axis(U, order, axis=1))
    sidx = subset_index(k)
    table = np.zeros(1 << k, dtype=np.int64)
    for m, i in sidx.items():
        table[m] = i
    out = np.zeros(T, dtype=np.int64)
    vbits = np.left_shift(1, order)  # bitmask of each S value
    for (a, b), bit in pair_index(k).items():
        present = (codes >> bit) & 1
        mask = np.bitwise_or.reduce(vbits[:, a - 1:b], axis=1)
        out |= np.where(present == 1, np.left_shift(1, table[mask]), 0)
    return out


# ---------------------------------------------------------------------------
# 231-avoiding permutations

_catalan = [1]


def catalan(m: int) -> int:
    while len(_catalan) <= m:
        j = len(_catalan)
        _catalan.append(_catalan[-1] * 2 * (2 * j - 1) // (j + 1))
    return _catalan[m]


catalan(1000)


def sample_231_avoiding(n: int, rng) -> Permutation:
    """Exactly uniform 231-avoiding permutation of ``[n]``.

    The largest value sits at position ``j`` with probability
    ``C_{j-1} C_{n-j} / C_n``; values left of it are all smaller than values
    right of it, and both sides are again uniform avoiders.
    """
    if n < 1:
        raise DomainError("n must be >= 1")
    catalan(n)
    r_src = random.Random(int(rng.integers(0, 2**63)))
    out = [0] * n
    stack = [(0, 0, n)]  # (first position, value offset, size)
    while stack:
        pos, off, m = stack.pop()
        if m == 0:
            continue
        r = r_src.randrange(_catalan[m])
        # scan the split weights from both ends; the small side is found fast
        lo_acc, hi_acc = 0, _catalan[m]
        jl, jr = 1, m
        while True:
            w = _catalan[jl - 1] * _catalan[m - jl]
            if r < lo_acc + w:
                j = jl
                break
            lo_acc += w
            jl += 1
            w = _catalan[jr - 1] * _catalan[m - jr]
            if r >= hi_acc - w:
                j = jr
                break
            hi_acc -= w
            jr -= 1
        out[pos + j - 1] = off + m
        stack.append((pos, off, j - 1))
        stack.append((pos + j, off + j - 1, m - j))
    return Permutation(tuple(out))


def contains_231(line: Sequence[int]) -> bool:
    """Brute-force pattern check, O(n^3)."""
    for i, j, k in itertools.combinations(range(len(line)), 3):
        if line[k] < line[i] < line[j]:
            return True
    return False


def permutation_graph(sigma: Permutation) -> np.ndarray:
    """Points ``(i/n, sigma(i)/n)``; a plain point set, no diagonal."""
    n = sigma.n
    i = np.arange(1, n + 1)
    return np.column_stack([i / n, np.asarray(sigma.one_line) / n])
