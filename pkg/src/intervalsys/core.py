"""Finite interval systems, interval hypergraphs and the operations between them.

Only non-singleton edges are stored. The empty set and all singletons are
members of every structure and stay implicit, so two values are equal exactly
when their stored edge tuples are equal.
"""

from __future__ import annotations

import itertools
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence, Tuple

# brute-force limits
LINEARIZE_MAX_N = 10
ENUMERATE_MAX_N = 7


class DomainError(ValueError):
    """Argument outside the domain of an operation."""


class UnsupportedSizeError(ValueError):
    """Input size exceeds a brute-force or enumeration cap."""


Edge = Tuple[int, int]


@dataclass(frozen=True)
class IntervalSystem:
    """Interval system on ``[n]``; ``edges`` holds the pairs ``(a, b)``, ``a < b``.

    Pairs with ``a == b`` are accepted and dropped, since singletons are
    always present.
    """

    n: int
    edges: Tuple[Edge, ...] = ()

    def __post_init__(self):
        n = self.n
        if not isinstance(n, (int,)) or n < 1:
            raise DomainError(f"ground set size must be a positive integer, got {n!r}")
        clean = set()
        for a, b in self.edges:
            a, b = int(a), int(b)
            if not 1 <= a <= b <= n:
                raise DomainError(f"[{a},{b}] is not an interval of [{n}]")
            if a < b:
                clean.add((a, b))
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @classmethod
    def trivial(cls, n: int) -> "IntervalSystem":
        return cls(n, ())

    @classmethod
    def full(cls, n: int) -> "IntervalSystem":
        return cls(n, [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)])

    def __contains__(self, edge) -> bool:
        a, b = edge
        if a == b:
            return 1 <= a <= self.n
        return (a, b) in self.edge_set

    @property
    def edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def __len__(self) -> int:
        return len(self.edges)

    def __str__(self) -> str:
        return format_system(self)


@dataclass(frozen=True)
class Permutation:
    """Bijection of ``[n]`` stored in one-line notation ``(pi(1), ..., pi(n))``."""

    one_line: Tuple[int, ...]

    def __post_init__(self):
        one_line = tuple(int(v) for v in self.one_line)
        if sorted(one_line) != list(range(1, len(one_line) + 1)):
            raise DomainError(f"{one_line} is not a permutation of [{len(one_line)}]")
        object.__setattr__(self, "one_line", one_line)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.one_line)

    def __call__(self, i: int) -> int:
        return self.one_line[i - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.n
        for i, v in enumerate(self.one_line, start=1):
            inv[v - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """``self o other``, i.e. ``i -> self(other(i))``."""
        if other.n != self.n:
            raise DomainError("permutation sizes differ")
        return Permutation(tuple(self.one_line[v - 1] for v in other.one_line))

    def restrict(self, k: int) -> "Permutation":
        """Erase ``k+1, ..., n`` from the one-line notation."""
        if not 1 <= k <= self.n:
            raise DomainError(f"cannot restrict a permutation of [{self.n}] to [{k}]")
        return Permutation(tuple(v for v in self.one_line if v <= k))

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.one_line)) + ")"


@dataclass(frozen=True)
class IntervalHypergraph:
    """Interval hypergraph on ``[n]``: edges are sorted tuples of size >= 2.

    Construction checks that some linear order makes every edge an interval,
    for ``n <= LINEARIZE_MAX_N``. Larger ``n`` needs ``unchecked=True``, which
    is recorded on the value and ignored by equality.
    """

    n: int
    edges: Tuple[Tuple[int, ...], ...] = ()
    unchecked: bool = field(default=False, compare=False)

    def __post_init__(self):
        self._normalize()
        if self.unchecked:
            return
        if self.n > LINEARIZE_MAX_N:
            raise UnsupportedSizeError(
                f"consecutive-arrangement check is limited to n <= {LINEARIZE_MAX_N}; "
                "pass unchecked=True for larger n"
            )
        if _consecutive_order(self.n, self.edges) is None:
            raise DomainError("edges admit no consecutive arrangement")

    def _normalize(self):
        n = self.n
        if not isinstance(n, int) or n < 1:
            raise DomainError(f"ground set size must be a positive integer, got {n!r}")
        clean = set()
        for e in self.edges:
            e = tuple(sorted(set(int(v) for v in e)))
            if e and not (1 <= e[0] and e[-1] <= n):
                raise DomainError(f"edge {e} is not a subset of [{n}]")
            if len(e) >= 2:
                clean.add(e)
        object.__setattr__(self, "edges", tuple(sorted(clean)))

    @classmethod
    def _derived(cls, n, edges, unchecked=False) -> "IntervalHypergraph":
        # validity follows from how the edges were produced; skip the search
        h = object.__new__(cls)
        object.__setattr__(h, "n", n)
        object.__setattr__(h, "edges", tuple(edges))
        object.__setattr__(h, "unchecked", unchecked)
        h._normalize()
        return h

    def __str__(self) -> str:
        return format_hypergraph(self)


# ---------------------------------------------------------------------------
# text formats


def format_system(system: IntervalSystem) -> str:
    return f"{system.n}:" + ",".join(f"{a}-{b}" for a, b in system.edges)


def parse_system(text: str) -> IntervalSystem:
    try:
        head, _, body = text.strip().partition(":")
        if not _:
            raise ValueError("missing ':'")
        n = int(head)
        edges = []
        if body:
            for item in body.split(","):
                a, b = item.split("-")
                edges.append((int(a), int(b)))
    except ValueError as exc:
        raise DomainError(f"cannot parse interval system {text!r}: {exc}") from None
    return IntervalSystem(n, edges)


def format_hypergraph(h: IntervalHypergraph) -> str:
    return f"{h.n}:" + ",".join("{" + ",".join(map(str, e)) + "}" for e in h.edges)


def parse_hypergraph(text: str, unchecked: bool = False) -> IntervalHypergraph:
    try:
        head, _, body = text.strip().partition(":")
        if not _:
            raise ValueError("missing ':'")
        n = int(head)
        edges = []
        body = body.strip()
        while body:
            if not body.startswith("{"):
                raise ValueError("expected '{'")
            close = body.index("}")
            edges.append(tuple(int(v) for v in body[1:close].split(",")))
            body = body[close + 1:]
            if body.startswith(","):
                body = body[1:]
                if not body:
                    raise ValueError("trailing ','")
    except ValueError as exc:
        raise DomainError(f"cannot parse hypergraph {text!r}: {exc}") from None
    return IntervalHypergraph(n, edges, unchecked=unchecked)


# ---------------------------------------------------------------------------
# interval systems


def _check_vector(j: Sequence[int], n: int) -> Tuple[int, ...]:
    j = tuple(int(v) for v in j)
    if not j:
        raise DomainError("sample vector must be non-empty")
    if len(j) > n or j[0] < 1 or j[-1] > n or any(x >= y for x, y in zip(j, j[1:])):
        raise DomainError(f"{j} is not a strictly increasing vector in [{n}]")
    return j


def delete_point(system: IntervalSystem, k: int) -> IntervalSystem:
    """Remove element ``k`` from ``[n+1]`` and close the gap."""
    m = system.n
    if m < 2:
        raise DomainError("cannot delete from an interval system on [1]")
    if not 1 <= k <= m:
        raise DomainError(f"eraser {k} outside [{m}]")
    out = []
    for a, b in system.edges:
        if k < a:
            a, b = a - 1, b - 1
        elif k <= b:
            b -= 1
        if a < b:
            out.append((a, b))
    return IntervalSystem(m - 1, out)


def subsample(system: IntervalSystem, j: Sequence[int]) -> IntervalSystem:
    """Interval system seen by the increasing sample ``j`` of ``[n]``.

    Every stored ``[A, B]`` lands on ``[a, b]`` where ``a`` indexes the first
    sampled point ``>= A`` and ``b`` the last sampled point ``<= B``.
    """
    j = _check_vector(j, system.n)
    out = []
    for A, B in system.edges:
        a = bisect_left(j, A) + 1
        b = bisect_right(j, B)
        if a < b:
            out.append((a, b))
    return IntervalSystem(len(j), out)


def selection_vector(pi: Permutation, k: int) -> Tuple[int, ...]:
    """Increasing enumeration of ``pi^{-1}([k])``."""
    if not 1 <= k <= pi.n:
        raise DomainError(f"k={k} outside [1, {pi.n}]")
    return tuple(i for i, v in enumerate(pi.one_line, start=1) if v <= k)


def eraser_sequence(pi: Permutation) -> Tuple[int, ...]:
    """Erasers ``i_m = (pi|_{m+1})^{-1}(m+1)`` for ``m = 1..n-1``."""
    line = list(pi.one_line)
    out = []
    for m in range(pi.n, 1, -1):
        pos = line.index(m)
        out.append(pos + 1)
        del line[pos]
    return tuple(reversed(out))


def sequential_delete(system: IntervalSystem, pi: Permutation, k: int) -> IntervalSystem:
    """Delete points one at a time, driven by the erasers of ``pi``."""
    n = system.n
    if pi.n != n:
        raise DomainError("permutation size differs from the ground set")
    if not 1 <= k <= n:
        raise DomainError(f"k={k} outside [1, {n}]")
    erasers = eraser_sequence(pi)
    for m in range(n - 1, k - 1, -1):
        system = delete_point(system, erasers[m - 1])
    return system


def is_schroeder(system: IntervalSystem) -> bool:
    n = system.n
    if n > 1 and (1, n) not in system.edge_set:
        return False
    edges = system.edges
    for a1, b1 in edges:
        for a2, b2 in edges:
            if a1 < a2 <= b1 and b2 > b1:
                return False
    return True


def is_binary(system: IntervalSystem) -> bool:
    if not is_schroeder(system):
        return False
    n = system.n
    edges = system.edges
    for j1, j2, j3 in itertools.combinations(range(1, n + 1), 3):
        if not any(
            (a <= j1 and j2 <= b < j3) or (j1 < a <= j2 and j3 <= b) for a, b in edges
        ):
            return False
    return True


def is_interval_partition(system: IntervalSystem) -> bool:
    edges = system.edges
    for (a1, b1), (a2, b2) in itertools.combinations(edges, 2):
        if a2 <= b1 and a1 <= b2:
            return False
    return True


def enumerate_interval_systems(
    n: int, predicate: Optional[Callable[[IntervalSystem], bool]] = None
) -> Iterator[IntervalSystem]:
    """All ``2**C(n,2)`` interval systems on ``[n]``, lexicographic in the edge list."""
    if n < 1:
        raise DomainError("n must be positive")
    if n > ENUMERATE_MAX_N:
        raise UnsupportedSizeError(f"enumeration is limited to n <= {ENUMERATE_MAX_N}")
    pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]

    def subsets(start):
        yield ()
        for i in range(start, len(pairs)):
            for rest in subsets(i + 1):
                yield (pairs[i],) + rest

    for edges in subsets(0):
        system = IntervalSystem(n, edges)
        if predicate is None or predicate(system):
            yield system


def increasing_vectors(k: int, n: int) -> Iterator[Tuple[int, ...]]:
    """All of ``[k:n]`` in lexicographic order."""
    return itertools.combinations(range(1, n + 1), k)


# ---------------------------------------------------------------------------
# hypergraphs


def as_hypergraph(system: IntervalSystem) -> IntervalHypergraph:
    return IntervalHypergraph._derived(
        system.n, [tuple(range(a, b + 1)) for a, b in system.edges]
    )


def as_interval_system(h: IntervalHypergraph) -> IntervalSystem:
    """Read a hypergraph whose edges are intervals of the natural order."""
    edges = []
    for e in h.edges:
        if e[-1] - e[0] + 1 != len(e):
            raise DomainError(f"edge {e} is not an interval of the natural order")
        edges.append((e[0], e[-1]))
    return IntervalSystem(h.n, edges)


def restrict_hypergraph(h: IntervalHypergraph, k: int) -> IntervalHypergraph:
    if not 1 <= k <= h.n:
        raise DomainError(f"k={k} outside [1, {h.n}]")
    return IntervalHypergraph._derived(
        k, [tuple(v for v in e if v <= k) for e in h.edges], h.unchecked
    )


def relabel_hypergraph(h: IntervalHypergraph, pi: Permutation) -> IntervalHypergraph:
    if pi.n != h.n:
        raise DomainError("permutation size differs from the ground set")
    line = pi.one_line
    return IntervalHypergraph._derived(
        h.n, [tuple(line[v - 1] for v in e) for e in h.edges], h.unchecked
    )


def _consecutive_order(n: int, edges: Sequence[Tuple[int, ...]]) -> Optional[Tuple[int, ...]]:
    """Lexicographically first order of ``[n]`` making every edge contiguous.

    Depth-first search over permutations, abandoning a prefix as soon as some
    edge has been entered, left, and would be re-entered.
    """
    member = [[] for _ in range(n + 1)]
    for idx, e in enumerate(edges):
        for v in e:
            member[v].append(idx)
    sizes = [len(e) for e in edges]
    placed = [0] * len(edges)
    order = []
    used = [False] * (n + 1)

    def feasible(v):
        last = order[-1] if order else None
        mine = set(member[v])
        for idx in mine:
            # an edge already entered must continue right here
            if placed[idx] and (last is None or idx not in member[last]):
                return False
        if last is not None:
            for idx in member[last]:
                # stepping out of an unfinished edge closes it for good
                if idx not in mine and placed[idx] < sizes[idx]:
                    return False
        return True

    def search():
        if len(order) == n:
            return True
        for v in range(1, n + 1):
            if used[v] or not feasible(v):
                continue
            used[v] = True
            order.append(v)
            for idx in member[v]:
                placed[idx] += 1
            if search():
                return True
            for idx in member[v]:
                placed[idx] -= 1
            order.pop()
            used[v] = False
        return False

    return tuple(order) if search() else None


def linearize(h: IntervalHypergraph) -> Optional[Tuple[Permutation, IntervalSystem]]:
    """Find ``(pi, I)`` with ``relabel(I, pi) == h``, or ``None`` if none exists."""
    if h.n > LINEARIZE_MAX_N:
        raise UnsupportedSizeError(f"linearize is limited to n <= {LINEARIZE_MAX_N}")
    order = _consecutive_order(h.n, h.edges)
    if order is None:
        return None
    pi = Permutation(order)
    position = pi.inverse().one_line
    edges = [(min(position[v - 1] for v in e), max(position[v - 1] for v in e)) for e in h.edges]
    return pi, IntervalSystem(h.n, edges)


def has_consecutive_order(n: int, edges: Iterable[Iterable[int]]) -> bool:
    """Whether the raw edge family admits a consecutive arrangement."""
    if n > LINEARIZE_MAX_N:
        raise UnsupportedSizeError(f"limited to n <= {LINEARIZE_MAX_N}")
    clean = sorted({tuple(sorted(set(e))) for e in edges if len(set(e)) >= 2})
    return _consecutive_order(n, clean) is not None


def is_hierarchy(h: IntervalHypergraph) -> bool:
    n = h.n
    if n > 1 and tuple(range(1, n + 1)) not in h.edges:
        return False
    sets = [set(e) for e in h.edges]
    for e, f in itertools.combinations(sets, 2):
        inter = e & f
        if inter and inter != e and inter != f:
            return False
    return True
