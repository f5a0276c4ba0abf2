"""Exact densities of small systems in large ones, and boundary experiments."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from typing import Dict, List, Sequence

import numpy as np
from scipy import stats

from .core import DomainError, IntervalSystem, UnsupportedSizeError, format_system, subsample
from .limits import LimitSet, pair_index, sample_codes, sorted_uniforms, system_code, system_from_code

GAMMA_CAP = 10**7
_CHUNK = 1 << 18
# below this many vectors a plain loop beats the array setup
_SMALL = 256


def _combinations(n: int, k: int):
    """Chunks of ``[k:n]`` as ``(m, k)`` int arrays, lexicographic."""
    it = itertools.combinations(range(1, n + 1), k)
    while True:
        flat = np.fromiter(itertools.chain.from_iterable(itertools.islice(it, _CHUNK)), dtype=np.int64)
        if flat.size == 0:
            return
        yield flat.reshape(-1, k)


def gamma_counts(source: IntervalSystem, k: int) -> Dict[IntervalSystem, int]:
    """``#{j in [k:n] : subsample(source, j) = t}`` for every reachable ``t``.

    Uses a 2D prefix sum over the edge indicator so each pair ``(a, b)`` is a
    constant-time rectangle query per vector.
    """
    n = source.n
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside [1, {n}]")
    if comb(n, k) > GAMMA_CAP:
        raise UnsupportedSizeError(f"C({n},{k}) = {comb(n, k)} exceeds the cap {GAMMA_CAP}")
    if k == 1:
        return {IntervalSystem(1): n}
    if comb(n, k) <= _SMALL:
        out: Dict[IntervalSystem, int] = {}
        for j in itertools.combinations(range(1, n + 1), k):
            t = subsample(source, j)
            out[t] = out.get(t, 0) + 1
        return out
    M = np.zeros((n + 2, n + 2), dtype=np.int64)
    for a, b in source.edges:
        M[a, b] = 1
    P = M.cumsum(axis=0).cumsum(axis=1)

    def rect(x1, x2, y1, y2):
        return P[x2, y2] - P[x1 - 1, y2] - P[x2, y1 - 1] + P[x1 - 1, y1 - 1]

    totals: Dict[int, int] = {}
    pairs = pair_index(k)
    for J in _combinations(n, k):
        m = len(J)
        ext = np.hstack([np.zeros((m, 1), dtype=np.int64), J, np.full((m, 1), n + 1, dtype=np.int64)])
        code = np.zeros(m, dtype=np.int64)
        for (a, b), bit in pairs.items():
            hit = rect(ext[:, a - 1] + 1, ext[:, a], ext[:, b], ext[:, b + 1] - 1) > 0
            code |= hit.astype(np.int64) << bit
        vals, cnt = np.unique(code, return_counts=True)
        for v, c in zip(vals.tolist(), cnt.tolist()):
            totals[v] = totals.get(v, 0) + c
    return {system_from_code(v, k): c for v, c in totals.items()}


def gamma_table(source: IntervalSystem, k: int) -> Dict[IntervalSystem, Fraction]:
    """Exact density of every reachable target on ``[k]``; unlisted targets have density 0."""
    total = comb(source.n, k)
    return {t: Fraction(c, total) for t, c in gamma_counts(source, k).items()}


def gamma(target: IntervalSystem, source: IntervalSystem) -> Fraction:
    k, n = target.n, source.n
    if k > n:
        return Fraction(0)
    return gamma_table(source, k).get(target, Fraction(0))


# ---------------------------------------------------------------------------
# tree families


def spine_tree(n: int) -> IntervalSystem:
    """Binary comb on ``[n]``; leaves split off left, right, left, ... from the root."""
    if n < 1:
        raise DomainError("n must be >= 1")
    a, b = 1, n
    edges = []
    left = True
    while a < b:
        edges.append((a, b))
        if left:
            a += 1
        else:
            b -= 1
        left = not left
    return IntervalSystem(n, edges)


def complete_tree(d: int) -> IntervalSystem:
    """Complete binary tree of height ``d`` on ``[2^d]``: all dyadic blocks of size >= 2."""
    if d < 0:
        raise DomainError("depth must be >= 0")
    edges = []
    for s in range(1, d + 1):
        w = 2**s
        edges += [(j * w + 1, (j + 1) * w) for j in range(2 ** (d - s))]
    return IntervalSystem(2**d, edges)


def family_member(family: str, size: int) -> IntervalSystem:
    """``spine`` takes the ground-set size, ``complete`` the depth."""
    if family == "spine":
        return spine_tree(size)
    if family == "complete":
        return complete_tree(size)
    raise DomainError(f"unknown family {family!r}")


@dataclass
class GammaTable:
    k: int
    target: IntervalSystem
    entries: Dict[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        if self.target.n != self.k:
            raise DomainError("target size differs from k")

    def rows(self):
        for n in sorted(self.entries):
            g = self.entries[n]
            yield n, format_system(self.target), g.numerator, g.denominator, float(g)

    def to_csv(self, header: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        if header:
            w.writerow(["n", "target", "gamma_num", "gamma_den", "gamma_float"])
        for row in self.rows():
            w.writerow([row[0], row[1], row[2], row[3], repr(row[4])])
        return buf.getvalue()


def gamma_convergence(family: str, target: IntervalSystem, sizes: Sequence[int]) -> GammaTable:
    """Exact ``gamma(target, member)`` along a family; keys are ground-set sizes."""
    table = GammaTable(target.n, target)
    for s in sizes:
        member = family_member(family, s)
        table.entries[member.n] = gamma(target, member)
    return table


# ---------------------------------------------------------------------------
# Monte Carlo


def boundary_law_estimate(K: LimitSet, target: IntervalSystem, trials: int, rng):
    """Frequency of ``target`` among ``sample_system(K, sorted k uniforms)``.

    Returns ``(estimate, half_width)`` with a 99% normal-approximation half-width.
    """
    if trials < 1:
        raise DomainError("trials must be >= 1")
    k = target.n
    if k == 1:
        return 1.0, 0.0
    codes = sample_codes(K, sorted_uniforms(rng, trials, k))
    p = float(np.mean(codes == system_code(target)))
    z = stats.norm.ppf(0.995)
    return p, float(z * np.sqrt(p * (1 - p) / trials))


@dataclass(frozen=True)
class ChiSquareReport:
    categories: int
    statistic: float
    samples: int

    @property
    def p_value(self) -> float:
        return float(stats.chi2.sf(self.statistic, self.categories - 1))

    def critical(self, alpha: float) -> float:
        return float(stats.chi2.isf(alpha, self.categories - 1))


def uniformity_test(counts) -> ChiSquareReport:
    """Pearson statistic of ``counts`` against equal cell probabilities."""
    c = np.asarray(counts, dtype=float)
    if c.size < 2 or c.sum() <= 0 or np.any(c < 0):
        raise DomainError("need at least two non-negative categories with positive total")
    exp = c.sum() / c.size
    return ChiSquareReport(int(c.size), float(((c - exp) ** 2 / exp).sum()), int(c.sum()))
