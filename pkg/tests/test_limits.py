import itertools

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from intervalsys.core import DomainError, IntervalSystem, is_schroeder, parse_system, selection_vector, subsample, Permutation
from intervalsys.limits import (
    LimitSet,
    Rectangle,
    cdf_sup_deviation,
    complete_tree_limit,
    format_limitset,
    hausdorff,
    hausdorff_points,
    intersects_closed,
    intersects_open,
    is_binary_limit_mc,
    is_partition_limit,
    is_schroeder_limit,
    parse_limitset,
    render_svg,
    sample_codes,
    sample_system,
    scale,
    scale_vector,
    sorted_uniforms,
    spine_limit,
    system_code,
    system_from_code,
)
from intervalsys.martin import spine_tree
from intervalsys.processes import perm_from_u
from intervalsys import identities, make_rng

from oracles import l1_to_diagonal_grid


def pts(K):
    return [tuple(p) for p in K.points.tolist()]


unit = st.floats(0, 1, allow_nan=False)


@st.composite
def limit_sets(draw, max_points=8):
    raw = draw(st.lists(st.tuples(unit, unit), max_size=max_points))
    return LimitSet([(min(a, b), max(a, b)) for a, b in raw if a != b])


@st.composite
def ordered_samples(draw, max_k=12):
    vals = draw(st.lists(unit, min_size=1, max_size=max_k, unique=True))
    return np.array(sorted(vals))


def sample_literal(K, u):
    k = len(u)
    uu = [-1.0] + list(u) + [2.0]
    out = set()
    for x, y in K.points.tolist():
        for a in range(1, k + 1):
            for b in range(a + 1, k + 1):
                if uu[a - 1] < x < uu[a] and uu[b] < y < uu[b + 1]:
                    out.add((a, b))
    return out


# ---------------------------------------------------------------- types


def test_limitset_canonical():
    K = LimitSet([(0.5, 1.0), (0.0, 1.0), (0.5, 1.0)])
    assert pts(K) == [(0.0, 1.0), (0.5, 1.0)]
    assert K == LimitSet([(0.0, 1.0), (0.5, 1.0)])
    assert len(LimitSet()) == 0


@pytest.mark.parametrize("bad", [[(0.5, 0.5)], [(0.6, 0.4)], [(-0.1, 0.5)], [(0.2, 1.1)], [(0.1, np.nan)]])
def test_limitset_rejects(bad):
    with pytest.raises(DomainError):
        LimitSet(bad)


def test_rectangle_bounds():
    Rectangle(-1, 0.2, 0.5, 2)
    with pytest.raises(DomainError):
        Rectangle(0.3, 0.2, 0, 1)
    with pytest.raises(DomainError):
        Rectangle(-1.5, 0.2, 0, 1)


# ---------------------------------------------------------------- scale


def test_scale_edges_only():
    assert pts(scale(parse_system("2:1-2"), singletons=False)) == [(0.0, 1.0)]
    assert pts(scale(parse_system("4:2-3"), singletons=False)) == [(0.25, 0.75)]
    assert len(scale(parse_system("5:"), singletons=False)) == 0


def test_scale_with_singletons():
    assert pts(scale(parse_system("2:1-2"))) == [(0.0, 0.5), (0.0, 1.0), (0.5, 1.0)]
    # a trivial system lands within 1/n of the diagonal
    K = scale(parse_system("4:"))
    assert hausdorff(K, LimitSet()) == pytest.approx(0.25)


def test_scale_vector_examples():
    np.testing.assert_allclose(scale_vector((1, 3), 4), [0.125, 0.625])
    np.testing.assert_allclose(scale_vector((5,), 5), [0.9])
    np.testing.assert_allclose(scale_vector(range(1, 7), 6), (2 * np.arange(1, 7) - 1) / 12)
    with pytest.raises(DomainError):
        scale_vector((3, 2), 4)


# ---------------------------------------------------------------- hausdorff


def test_hausdorff_examples():
    assert hausdorff(LimitSet([(0.2, 0.8)]), LimitSet()) == pytest.approx(0.6)
    assert hausdorff(LimitSet([(0, 1)]), LimitSet([(0, 0.5)])) == pytest.approx(0.5)
    K = spine_limit(16)
    assert hausdorff(K, K) == 0


def test_hausdorff_points_plain():
    assert hausdorff_points([(0, 0)], [(0.25, 0.5)]) == pytest.approx(0.75)
    with pytest.raises(DomainError):
        hausdorff_points([(0, 0)], [])


def test_point_to_diagonal_matches_grid_minimum():
    for x, y in [(0.2, 0.8), (0.0, 1.0), (0.35, 0.4), (0.5, 0.75)]:
        assert hausdorff(LimitSet([(x, y)]), LimitSet()) == pytest.approx(l1_to_diagonal_grid(x, y), abs=1e-4)


def _hausdorff_dense(K1, K2, steps=2001):
    # diagonal replaced by an explicit fine grid on both sides
    t = np.linspace(0, 1, steps)
    diag = np.column_stack([t, t])
    A = np.vstack([K1.points, diag])
    B = np.vstack([K2.points, diag])
    d = np.abs(A[:, None, :] - B[None, :, :]).sum(axis=2)
    return max(d.min(axis=1).max(), d.min(axis=0).max())


@settings(max_examples=60, deadline=None)
@given(limit_sets(), limit_sets())
def test_hausdorff_matches_dense_diagonal(K1, K2):
    assert abs(hausdorff(K1, K2) - _hausdorff_dense(K1, K2)) <= 2e-3


@given(limit_sets(), limit_sets(), limit_sets())
def test_hausdorff_metric_axioms(A, B, C):
    dab = hausdorff(A, B)
    assert dab >= 0
    assert dab == hausdorff(B, A)
    assert hausdorff(A, A) == 0
    assert hausdorff(A, C) <= dab + hausdorff(B, C) + 1e-12
    if dab == 0:
        # equal represented sets: off-diagonal points coincide
        assert A == B


def test_hausdorff_kdtree_path_agrees():
    rng = np.random.default_rng(5)
    raw = np.sort(rng.random((3000, 2)), axis=1)
    P = LimitSet(raw)
    Q = LimitSet(np.sort(rng.random((2500, 2)), axis=1))
    small = LimitSet(raw[:40])
    from intervalsys import limits

    fast = hausdorff(P, Q)
    old = limits._KDTREE_THRESHOLD
    limits._KDTREE_THRESHOLD = 10**12
    try:
        assert fast == pytest.approx(hausdorff(P, Q), abs=1e-12)
        slow_small = hausdorff(small, Q)
    finally:
        limits._KDTREE_THRESHOLD = old
    limits._KDTREE_THRESHOLD = 1
    try:
        assert hausdorff(small, Q) == pytest.approx(slow_small, abs=1e-12)
    finally:
        limits._KDTREE_THRESHOLD = old


# ---------------------------------------------------------------- sampling


def test_sample_system_examples():
    K = LimitSet([(0.1, 0.9)])
    assert sample_system(K, (0.2, 0.5, 0.95)) == parse_system("3:1-2")
    assert sample_system(LimitSet(), (0.1, 0.4, 0.8)) == parse_system("3:")
    for k in (1, 2, 5):
        u = np.linspace(0.1, 0.9, k)
        assert sample_system(LimitSet([(0, 1)]), u) == IntervalSystem(k, [(1, k)] if k > 1 else [])


def test_sample_system_rejects_unsorted():
    with pytest.raises(DomainError):
        sample_system(LimitSet(), (0.5, 0.2))
    with pytest.raises(DomainError):
        sample_system(LimitSet(), (0.2, 0.2))


def test_sample_system_tie_disables_point():
    # u_2 == x: the point lies on a rectangle edge, not in any open rectangle
    assert sample_system(LimitSet([(0.4, 0.9)]), (0.1, 0.4, 0.5, 0.6)) == parse_system("4:")


@settings(max_examples=300)
@given(limit_sets(), ordered_samples())
def test_sample_system_matches_literal(K, u):
    assert set(sample_system(K, u).edges) == sample_literal(K, u)


@settings(max_examples=100)
@given(limit_sets(12), st.integers(1, 6), st.integers(1, 200), st.integers(0, 2**32))
def test_sample_codes_agree(K, k, T, seed):
    U = sorted_uniforms(np.random.default_rng(seed), T, k)
    codes = sample_codes(K, U, chunk=1000)
    for row, c in zip(U[:25], codes[:25]):
        assert system_from_code(c, k) == sample_system(K, row)


@settings(max_examples=30, deadline=None)
@given(st.integers(33, 400), st.integers(1, 7), st.integers(0, 2**32))
def test_rank_grid_path_matches_sample_system(P, k, seed):
    rng = np.random.default_rng(seed)
    # coarse grid coordinates force shared x and y values and ties with u
    pts = np.sort(rng.integers(0, 41, size=(P, 2)), axis=1) / 40
    K = LimitSet(pts[pts[:, 0] < pts[:, 1]])
    assume(len(K) > 32)
    U = np.sort(rng.integers(0, 41, size=(400, k)) / 40, axis=1)
    U = U[np.all(np.diff(U, axis=1) > 0, axis=1)]
    assume(len(U) > 0)
    codes = sample_codes(K, U)
    for row, c in zip(U[:60], codes[:60]):
        assert system_from_code(c, k) == sample_system(K, row)


def test_system_code_round_trip():
    for k in (1, 2, 3, 4):
        for s in itertools.islice(__import__("intervalsys").enumerate_interval_systems(k), 70):
            assert system_from_code(system_code(s), k) == s


def test_scaling_identity_exhaustive():
    name, cases, fails = identities.scaling_identity(5)
    assert fails == 0 and cases > 30000


def test_scaling_identity_random_large():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        n = int(rng.integers(6, 30))
        pairs = [(a, b) for a in range(1, n + 1) for b in range(a + 1, n + 1)]
        take = rng.random(len(pairs)) < rng.random()
        I = IntervalSystem(n, [p for p, t in zip(pairs, take) if t])
        k = int(rng.integers(1, n + 1))
        j = tuple(sorted(rng.choice(np.arange(1, n + 1), size=k, replace=False).tolist()))
        assert subsample(I, j) == sample_system(scale(I), scale_vector(j, n))
        # the identity also holds with edges only: singleton points never form edges
        assert subsample(I, j) == sample_system(scale(I, singletons=False), scale_vector(j, n))


@settings(max_examples=150)
@given(limit_sets(10), st.lists(unit, min_size=1, max_size=8, unique=True), st.data())
def test_nesting_identity(K, raw, data):
    # ties with a coordinate of K have probability zero and break the identity
    assume(not set(raw) & set(K.points.ravel().tolist()))
    n = len(raw)
    k = data.draw(st.integers(1, n))
    S = perm_from_u(raw).last
    big = sample_system(K, sorted(raw))
    assert sample_system(K, sorted(raw[:k])) == subsample(big, selection_vector(S, k))


# ---------------------------------------------------------------- cdf deviation


def test_cdf_deviation_examples():
    assert cdf_sup_deviation([0.5]) == (0.5, 0.5)
    assert cdf_sup_deviation([0.25, 0.75]) == (0.25, 0.25)
    for k in (1, 3, 10):
        d = cdf_sup_deviation((2 * np.arange(1, k + 1) - 1) / (2 * k))
        assert d == pytest.approx((1 / (2 * k), 1 / (2 * k)))


@given(ordered_samples())
def test_cdf_deviation_against_grid(u):
    # sup over a grid that contains every jump point, on both sides of each jump
    k = len(u)
    grid = np.unique(np.concatenate([u, np.nextafter(u, -1), np.linspace(0, 1, 501)]))
    grid = grid[(grid >= 0) & (grid <= 1)]
    F = np.searchsorted(u, grid, side="right") / k
    Fm = np.searchsorted(u, grid, side="left") / k
    dp, dm = cdf_sup_deviation(u)
    assert np.max(np.abs(F - grid)) <= dp + 1e-12
    assert np.max(np.abs(Fm - grid)) <= dm + 1e-12
    assert dp <= max(np.max(np.abs(F - grid)), np.max(np.abs(Fm - grid))) + 1e-9


@settings(max_examples=400)
@given(limit_sets(20), ordered_samples(50))
def test_deterministic_hausdorff_bound(K, u):
    # off the null set where some u_i equals a coordinate of K
    assume(not set(u.tolist()) & set(K.points.ravel().tolist()))
    dp, dm = cdf_sup_deviation(u)
    assert hausdorff(scale(sample_system(K, u)), K) <= dp + dm + 1e-12


def test_bound_needs_singleton_points():
    # with stored edges only, a trivial sample sits at distance 0.73 from K
    K = LimitSet([(0.26, 0.99)])
    u = (0.25, 0.75)
    dp, dm = cdf_sup_deviation(u)
    assert sample_system(K, u) == parse_system("2:")
    assert hausdorff(scale(sample_system(K, u), singletons=False), K) == pytest.approx(0.73)
    assert hausdorff(scale(sample_system(K, u)), K) <= dp + dm


# ---------------------------------------------------------------- rectangles


def test_intersection_examples():
    K = LimitSet([(0.1, 0.9)])
    R = Rectangle(0.1, 0.2, 0.5, 0.9)
    assert intersects_closed(K, R) and not intersects_open(K, R)
    assert intersects_closed(LimitSet(), Rectangle(0.2, 0.4, 0.3, 0.5))
    assert intersects_open(LimitSet(), Rectangle(0.2, 0.4, 0.3, 0.5))
    E = Rectangle(0.1, 0.2, 0.5, 0.9)
    assert not intersects_closed(LimitSet(), E) and not intersects_open(LimitSet(), E)


def test_intersection_sentinels():
    # diagonal is only present on [0, 1]
    assert not intersects_closed(LimitSet(), Rectangle(-1, -0.5, -1, -0.5))
    assert intersects_closed(LimitSet(), Rectangle(-1, 0, -1, 0))
    assert not intersects_open(LimitSet(), Rectangle(-1, 0, -1, 0))
    assert intersects_open(LimitSet([(0.3, 0.7)]), Rectangle(-1, 0.4, 0.6, 2))


@given(limit_sets(), st.lists(st.floats(-1, 2), min_size=4, max_size=4))
def test_open_hit_implies_closed_hit(K, b):
    R = Rectangle(min(b[0], b[1]), max(b[0], b[1]), min(b[2], b[3]), max(b[2], b[3]))
    if intersects_open(K, R):
        assert intersects_closed(K, R)


def test_boundary_hits_have_measure_zero():
    rng = np.random.default_rng(3)
    K = LimitSet(np.sort(rng.random((10, 2)), axis=1))
    patterns = list(itertools.combinations(range(12), 4))
    bad = 0
    for _ in range(5000):
        u = np.concatenate([[-1.0], np.sort(rng.random(10)), [2.0]])
        j1, j2, j3, j4 = patterns[rng.integers(len(patterns))]
        R = Rectangle(u[j1], u[j2], u[j3], u[j4])
        bad += intersects_closed(K, R) and not intersects_open(K, R)
    assert bad == 0


# ---------------------------------------------------------------- named limits


def test_spine_limit():
    assert pts(spine_limit(1)) == [(0.0, 1.0)]
    assert pts(spine_limit(2)) == [(0.0, 1.0), (0.25, 0.75)]
    K = spine_limit(64)
    assert len(K) == 64 and np.allclose(K.x + K.y, 1)


def test_complete_tree_limit():
    assert pts(complete_tree_limit(1)) == [(0.0, 0.5), (0.0, 1.0), (0.5, 1.0)]
    assert pts(complete_tree_limit(0)) == [(0.0, 1.0)]
    assert len(complete_tree_limit(5)) == 63


def test_spine_tree_scales_close_to_spine_limit():
    K = spine_limit(500)
    d = [hausdorff(scale(spine_tree(n)), K) for n in (10, 40, 160)]
    assert d[0] > d[1] > d[2]
    assert d[2] < 0.02


def test_schroeder_limit_examples():
    assert is_schroeder_limit(spine_limit(8))
    assert not is_schroeder_limit(LimitSet())
    assert not is_schroeder_limit(LimitSet([(0, 1), (0.2, 0.4), (0.3, 0.6)]))
    assert is_schroeder_limit(complete_tree_limit(4))


def test_partition_limit_examples():
    assert is_partition_limit(LimitSet([(0, 0.3), (0.3, 0.5), (0.6, 1)]))
    assert not is_partition_limit(LimitSet([(0, 0.4), (0.3, 0.5)]))
    assert is_partition_limit(LimitSet())


@settings(max_examples=150)
@given(limit_sets(), ordered_samples(9))
def test_schroeder_limits_sample_schroeder_trees(K, u):
    K = LimitSet(np.vstack([K.points, [[0.0, 1.0]]]))
    assume(is_schroeder_limit(K))
    assume(not set(u.tolist()) & set(K.points.ravel().tolist()))
    assert is_schroeder(sample_system(K, u))


def test_binary_limit_mc():
    est, ok = is_binary_limit_mc(complete_tree_limit(4), 10_000, seed=1)
    assert ok and est > 0.99
    est, ok = is_binary_limit_mc(LimitSet([(0, 1)]), 10_000, seed=1)
    assert est == 0 and not ok
    est, ok = is_binary_limit_mc(spine_limit(64), 10_000, seed=1)
    assert ok
    with pytest.raises(DomainError):
        is_binary_limit_mc(LimitSet(), 10, seed=1)


# ---------------------------------------------------------------- files


def test_limitset_text_round_trip():
    K = LimitSet([(0.1, 0.9), (1 / 3, 2 / 3)])
    text = format_limitset(K)
    assert text.splitlines()[0] == "limitset v1 n_points=2"
    assert parse_limitset(text) == K
    assert format_limitset(parse_limitset(text)) == text


@pytest.mark.parametrize("text", ["", "limitset v1 n_points=2\n0.1 0.2\n", "bogus\n", "limitset v1 n_points=1\n0.1\n"])
def test_limitset_parse_errors(text):
    with pytest.raises(DomainError):
        parse_limitset(text)


def test_svg_render():
    svg = render_svg(complete_tree_limit(2), radius=3)
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert svg.count("<circle") == 7 and 'r="3"' in svg
    assert "<polygon" in svg and "<line" in svg
