"""Limit objects in the triangle and the maps between them and finite systems.

A ``LimitSet`` stores finitely many off-diagonal points of the triangle
``{0 <= x <= y <= 1}``; the diagonal is an implicit member of every set.
Distances use the L1 ground metric, so a point ``(x, y)`` sits at distance
``y - x`` from the diagonal.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

import numpy as np
from scipy.spatial import cKDTree

from .core import DomainError, IntervalSystem, _check_vector, is_binary
from ._rng import make_rng

# slack for inequalities between sums of a few unit-interval floats
EPS = 1e-12

# point-pair count above which nearest neighbours go through a k-d tree
_KDTREE_THRESHOLD = 4_000_000


class LimitSet:
    """Finite point set in the triangle plus the implicit diagonal.

    Points are kept as a read-only ``(N, 2)`` float array, sorted and deduplicated.
    """

    __slots__ = ("points",)

    def __init__(self, points: Iterable = ()):
        pts = np.asarray(list(points) if not isinstance(points, np.ndarray) else points, dtype=float)
        if pts.size == 0:
            pts = np.empty((0, 2))
        if pts.ndim != 2 or pts.shape[1] != 2:
            raise DomainError("points must be an (N, 2) array")
        x, y = pts[:, 0], pts[:, 1]
        if not (np.all(np.isfinite(pts)) and np.all(x >= 0) and np.all(x < y) and np.all(y <= 1)):
            raise DomainError("every point must satisfy 0 <= x < y <= 1")
        pts = np.unique(pts, axis=0)
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    def __setattr__(self, name, value):
        raise AttributeError("LimitSet is immutable")

    def __len__(self):
        return len(self.points)

    def __eq__(self, other):
        return isinstance(other, LimitSet) and np.array_equal(self.points, other.points)

    def __hash__(self):
        return hash(self.points.tobytes())

    def __repr__(self):
        return f"LimitSet({self.points.tolist()!r})"

    @property
    def x(self):
        return self.points[:, 0]

    @property
    def y(self):
        return self.points[:, 1]


@dataclass(frozen=True)
class Rectangle:
    x_lo: float
    x_hi: float
    y_lo: float
    y_hi: float

    def __post_init__(self):
        vals = (self.x_lo, self.x_hi, self.y_lo, self.y_hi)
        if not all(-1 <= v <= 2 for v in vals):
            raise DomainError("rectangle bounds must lie in [-1, 2]")
        if self.x_lo > self.x_hi or self.y_lo > self.y_hi:
            raise DomainError("rectangle bounds out of order")


def ordered_sample(u: Sequence[float]) -> np.ndarray:
    """Validate a strictly increasing vector in [0, 1]."""
    u = np.asarray(u, dtype=float).ravel()
    if u.size == 0:
        raise DomainError("ordered sample must be non-empty")
    if np.any(np.diff(u) <= 0) or u[0] < 0 or u[-1] > 1:
        raise DomainError("ordered sample must be strictly increasing in [0, 1]")
    return u


# ---------------------------------------------------------------------------
# finite <-> limit


def scale(system: IntervalSystem, singletons: bool = True) -> LimitSet:
    """Embed ``I`` on ``[n]`` into the triangle via ``[a,b] -> ((a-1)/n, b/n)``.

    Singletons ``[a,a]`` belong to every interval system and land on
    ``((a-1)/n, a/n)``, a distance ``1/n`` off the diagonal. They are included
    by default; ``singletons=False`` keeps only the stored edges.
    """
    n = system.n
    pts = [((a - 1) / n, b / n) for a, b in system.edges]
    if singletons:
        pts.extend(((a - 1) / n, a / n) for a in range(1, n + 1))
    return LimitSet(pts)


def scale_vector(j: Sequence[int], n: int) -> np.ndarray:
    j = np.asarray(_check_vector(j, n), dtype=float)
    return (2 * j - 1) / (2 * n)


def cdf_sup_deviation(u: Sequence[float]) -> Tuple[float, float]:
    """Sup distance of the right- and left-continuous empirical CDFs of ``u`` to the identity.

    Both sups are attained next to a jump and coincide.
    """
    u = ordered_sample(u)
    k = len(u)
    i = np.arange(1, k + 1)
    d = float(np.max(np.maximum(np.abs(i / k - u), np.abs((i - 1) / k - u))))
    return d, d


def _edge_bounds(x, y, u):
    # a = 1 + #{u < x}, b = #{u < y}; ties with u disable the point
    a = np.searchsorted(u, x, side="left") + 1
    b = np.searchsorted(u, y, side="left")
    tie = (np.searchsorted(u, x, side="right") + 1 != a) | (np.searchsorted(u, y, side="right") != b)
    return a, b, ~tie


def sample_system(K: LimitSet, u: Sequence[float]) -> IntervalSystem:
    """``[a,b]`` is an edge iff some point lies in ``(u_{a-1}, u_a) x (u_b, u_{b+1})``.

    Sentinels are ``u_0 = -1`` and ``u_{k+1} = 2``.
    """
    u = ordered_sample(u)
    a, b, ok = _edge_bounds(K.x, K.y, u)
    keep = ok & (a < b)
    return IntervalSystem(len(u), zip(a[keep].tolist(), b[keep].tolist()))


def pair_index(k: int) -> dict:
    """Bit position of each pair ``(a, b)``, lexicographic."""
    return {p: i for i, p in enumerate(itertools.combinations(range(1, k + 1), 2))}


def system_code(system: IntervalSystem) -> int:
    idx = pair_index(system.n)
    return sum(1 << idx[e] for e in system.edges)


def system_from_code(code: int, k: int) -> IntervalSystem:
    pairs = list(itertools.combinations(range(1, k + 1), 2))
    return IntervalSystem(k, [p for i, p in enumerate(pairs) if (int(code) >> i) & 1])


def sample_codes(K: LimitSet, U: np.ndarray, chunk: int = 1 << 22) -> np.ndarray:
    """Vectorized ``sample_system`` over the rows of a sorted ``(T, k)`` array.

    Returns one bitmask per row (see ``system_code``). ``k`` is limited to 11.
    Large point sets go through open-rectangle counts on a rank grid.
    """
    U = np.asarray(U, dtype=float)
    T, k = U.shape
    if k > 11:
        raise DomainError("sample_codes supports k <= 11")
    if np.any(np.diff(U, axis=1) <= 0):
        raise DomainError("rows must be strictly increasing")
    P = len(K)
    if P == 0:
        return np.zeros(T, dtype=np.int64)
    if P > 32 and P <= _RANK_GRID_MAX:
        return _codes_rank_grid(K, U, chunk)
    return _codes_broadcast(K, U, chunk)


# points above which the (P+1)^2 rank grid is not built
_RANK_GRID_MAX = 4096


def _codes_broadcast(K, U, chunk):
    T, k = U.shape
    x, y = K.x, K.y
    P = len(x)
    out = np.zeros(T, dtype=np.int64)
    # bit position table indexed by (a, b)
    table = np.full((k + 2, k + 2), -1, dtype=np.int64)
    for (a, b), i in pair_index(k).items():
        table[a, b] = i
    rows = max(1, chunk // (k * P))
    for s in range(0, T, rows):
        Uc = U[s:s + rows, :, None]
        a = 1 + (Uc < x).sum(axis=1)
        b = (Uc < y).sum(axis=1)
        tie = ((Uc == x) | (Uc == y)).any(axis=1)
        keep = (a < b) & ~tie
        bits = np.where(keep, np.left_shift(1, np.maximum(table[a, b], 0)), 0)
        out[s:s + rows] = np.bitwise_or.reduce(bits, axis=1)
    return out


def _codes_rank_grid(K, U, chunk):
    # C[i, j] = #points among the i smallest x and the j smallest y
    T, k = U.shape
    x, y = K.x, K.y
    P = len(x)
    xs, ys = np.sort(x), np.sort(y)
    rx = np.empty(P, dtype=np.int64)
    ry = np.empty(P, dtype=np.int64)
    rx[np.argsort(x, kind="stable")] = np.arange(P)
    ry[np.argsort(y, kind="stable")] = np.arange(P)
    C = np.zeros((P + 1, P + 1), dtype=np.int32)
    np.add.at(C, (rx + 1, ry + 1), 1)
    C = C.cumsum(axis=0).cumsum(axis=1)
    out = np.zeros(T, dtype=np.int64)
    rows = max(1, chunk // (k + 2))
    for s in range(0, T, rows):
        Uc = U[s:s + rows]
        m = len(Uc)
        ext = np.hstack([np.full((m, 1), -1.0), Uc, np.full((m, 1), 2.0)])
        # open interval (lo, hi) covers sorted positions [first > lo, first >= hi)
        xr = np.searchsorted(xs, ext, side="right")
        xl = np.searchsorted(xs, ext, side="left")
        yr = np.searchsorted(ys, ext, side="right")
        yl = np.searchsorted(ys, ext, side="left")
        code = np.zeros(m, dtype=np.int64)
        for (a, b), bit in pair_index(k).items():
            i0, i1 = xr[:, a - 1], xl[:, a]
            j0, j1 = yr[:, b], yl[:, b + 1]
            cnt = C[i1, j1] - C[i0, j1] - C[i1, j0] + C[i0, j0]
            code |= (cnt > 0).astype(np.int64) << bit
        out[s:s + rows] = code
    return out


# ---------------------------------------------------------------------------
# distances


def _nearest_l1(src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    """L1 distance from each row of ``src`` to the closest row of ``dst``."""
    if len(dst) == 0:
        return np.full(len(src), np.inf)
    if len(src) * len(dst) > _KDTREE_THRESHOLD:
        d, _ = cKDTree(dst).query(src, k=1, p=1)
        return d
    out = np.empty(len(src))
    step = max(1, 2_000_000 // len(dst))
    for s in range(0, len(src), step):
        blk = src[s:s + step, None, :]
        out[s:s + step] = np.abs(blk - dst[None]).sum(axis=2).min(axis=1)
    return out


def _directed(P: np.ndarray, Q: np.ndarray) -> float:
    if len(P) == 0:
        return 0.0
    d = np.minimum(_nearest_l1(P, Q), P[:, 1] - P[:, 0])
    return float(d.max())


def hausdorff(K1: LimitSet, K2: LimitSet) -> float:
    """L1 Hausdorff distance between ``K1`` and ``K2``, diagonal included on both sides."""
    return max(_directed(K1.points, K2.points), _directed(K2.points, K1.points))


def hausdorff_points(P, Q) -> float:
    """L1 Hausdorff distance between two plain finite point sets (no diagonal)."""
    P = np.asarray(P, dtype=float).reshape(-1, 2)
    Q = np.asarray(Q, dtype=float).reshape(-1, 2)
    if len(P) == 0 or len(Q) == 0:
        if len(P) == len(Q):
            return 0.0
        raise DomainError("Hausdorff distance to an empty set is undefined")
    return float(max(_nearest_l1(P, Q).max(), _nearest_l1(Q, P).max()))


# ---------------------------------------------------------------------------
# rectangles


def intersects_closed(K: LimitSet, R: Rectangle) -> bool:
    x, y = K.x, K.y
    if np.any((R.x_lo <= x) & (x <= R.x_hi) & (R.y_lo <= y) & (y <= R.y_hi)):
        return True
    lo, hi = max(R.x_lo, R.y_lo, 0.0), min(R.x_hi, R.y_hi, 1.0)
    return lo <= hi


def intersects_open(K: LimitSet, R: Rectangle) -> bool:
    x, y = K.x, K.y
    if np.any((R.x_lo < x) & (x < R.x_hi) & (R.y_lo < y) & (y < R.y_hi)):
        return True
    lo, hi = max(R.x_lo, R.y_lo), min(R.x_hi, R.y_hi)
    # the open diagonal segment must meet [0, 1]
    return lo < hi and lo < 1 and hi > 0


# ---------------------------------------------------------------------------
# named limits and predicates


def spine_limit(m: int) -> LimitSet:
    """Anti-diagonal ``{(x, 1-x)}`` at ``x = i/(2m)``, ``i = 0..m-1``.

    The endpoint ``(0.5, 0.5)`` is on the diagonal and is not stored.
    """
    if m < 1:
        raise DomainError("resolution must be >= 1")
    x = np.arange(m) * 0.5 / m
    return LimitSet(np.column_stack([x, 1 - x]))


def complete_tree_limit(d: int) -> LimitSet:
    """Dyadic points ``(j/2^l, (j+1)/2^l)`` for levels ``l = 0..d``."""
    if d < 0:
        raise DomainError("depth must be >= 0")
    pts = []
    for level in range(d + 1):
        m = 2**level
        j = np.arange(m)
        pts.append(np.column_stack([j / m, (j + 1) / m]))
    return LimitSet(np.vstack(pts))


def is_schroeder_limit(K: LimitSet) -> bool:
    """``(0,1)`` is present and ``x1 < x2 < y1`` forces ``y2 <= y1``."""
    x, y = K.x, K.y
    if not np.any((x == 0) & (y == 1)):
        return False
    bad = (x[:, None] < x[None, :]) & (x[None, :] < y[:, None]) & (y[None, :] > y[:, None])
    return not bad.any()


def is_partition_limit(K: LimitSet) -> bool:
    """Off-diagonal points pairwise satisfy ``y <= x'`` or ``y' <= x``."""
    x, y = K.x, K.y
    ok = (y[:, None] <= x[None, :]) | (y[None, :] <= x[:, None])
    np.fill_diagonal(ok, True)
    return bool(ok.all())


def sorted_uniforms(rng, trials: int, k: int) -> np.ndarray:
    """``(trials, k)`` sorted uniforms; rows with repeated values are redrawn."""
    U = np.sort(rng.random((trials, k)), axis=1)
    bad = np.any(np.diff(U, axis=1) <= 0, axis=1)
    while bad.any():
        U[bad] = np.sort(rng.random((int(bad.sum()), k)), axis=1)
        bad = np.any(np.diff(U, axis=1) <= 0, axis=1)
    return U


def is_binary_limit_mc(K: LimitSet, trials: int, seed, threshold: float = 0.95):
    """Monte Carlo estimate of P(three sampled points give a binary tree).

    Probabilistic predicate: returns ``(estimate, estimate >= threshold)``.
    """
    if not is_schroeder_limit(K):
        raise DomainError("K must be a Schroeder limit")
    rng = make_rng(seed)
    codes = sample_codes(K, sorted_uniforms(rng, trials, 3))
    binary = [system_code(t) for t in (IntervalSystem(3, [(1, 3), (1, 2)]), IntervalSystem(3, [(1, 3), (2, 3)]))]
    assert all(is_binary(system_from_code(c, 3)) for c in binary)
    est = float(np.isin(codes, binary).mean())
    return est, est >= threshold


# ---------------------------------------------------------------------------
# file formats


def format_limitset(K: LimitSet) -> str:
    lines = [f"limitset v1 n_points={len(K)}"]
    lines += [f"{x!r} {y!r}" for x, y in K.points.tolist()]
    return "\n".join(lines) + "\n"


def parse_limitset(text: str) -> LimitSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("limitset v1 n_points="):
        raise DomainError("missing 'limitset v1' header")
    try:
        count = int(lines[0].split("=", 1)[1])
        pts = [tuple(float(v) for v in ln.split()) for ln in lines[1:]]
    except ValueError as exc:
        raise DomainError(f"bad limitset file: {exc}") from None
    if count != len(pts) or any(len(p) != 2 for p in pts):
        raise DomainError("point count does not match header")
    return LimitSet(pts)


def render_svg(K: LimitSet, size: int = 400, radius: float = 2.0, margin: int = 20) -> str:
    """Triangle, diagonal and stored points; ``x`` to the right, ``y`` upward."""
    s = size

    def px(x, y):
        return margin + x * s, margin + (1 - y) * s

    W = s + 2 * margin
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{W}" viewBox="0 0 {W} {W}">',
        f'<rect x="0" y="0" width="{W}" height="{W}" fill="white"/>',
    ]
    corners = [px(0, 0), px(0, 1), px(1, 1)]
    out.append(
        '<polygon points="' + " ".join(f"{a:.3f},{b:.3f}" for a, b in corners)
        + '" fill="#f4f4f4" stroke="black" stroke-width="1"/>'
    )
    (x0, y0), (x1, y1) = px(0, 0), px(1, 1)
    out.append(f'<line x1="{x0:.3f}" y1="{y0:.3f}" x2="{x1:.3f}" y2="{y1:.3f}" stroke="red" stroke-width="2"/>')
    for x, y in K.points.tolist():
        cx, cy = px(x, y)
        out.append(f'<circle cx="{cx:.3f}" cy="{cy:.3f}" r="{radius}" fill="red"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
