import math

import numpy as np
import pytest

import betaplurality as bp
from betaplurality.decision import (
    build_competitor_samples,
    build_index,
    marked_ball_query,
)

SQRT3 = math.sqrt(3.0)


def test_depth_counts_conservation(equilateral, eq_center, make_voters):
    rng = np.random.default_rng(0)
    for _ in range(50):
        V = make_voters(int(rng.integers(1, 25)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0, 1, 2)))
        q = bp.Point(tuple(rng.uniform(0, 1, 2)))
        dc = bp.depth_at(V, p, float(rng.uniform(0.1, 1.0)), q)
        assert dc.inside + dc.on + dc.outside == dc.n == V.n


def test_depth_at_equilateral(equilateral, eq_center):
    # a competitor at an edge midpoint wins the two adjacent voters at 0.87
    q = bp.Point.of(1.0, 0.0)
    dc = bp.depth_at(equilateral, eq_center, 0.87, q)
    assert dc.inside == 2 and dc.outside == 1
    assert dc.advantage == 1


def test_exact_decide_equilateral(equilateral, eq_center):
    assert bp.exact_decide_2d(equilateral, eq_center, 0.86).is_yes
    v = bp.exact_decide_2d(equilateral, eq_center, 0.87)
    assert not v.is_yes
    assert v.witness is not None and v.advantage >= 1
    # the witness is a genuine certificate
    dc = bp.depth_at(equilateral, eq_center, 0.87, v.witness)
    assert dc.advantage == v.advantage


def test_exact_decide_witness_certificates(make_voters):
    rng = np.random.default_rng(9)
    for _ in range(40):
        V = make_voters(int(rng.integers(3, 20)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0, 1, 2)))
        v = bp.exact_decide_2d(V, p, float(rng.uniform(0.75, 1.0)))
        if not v.is_yes:
            assert bp.depth_at(V, p, 1.0, v.witness).n == V.n  # shape check
            assert v.advantage >= 1


def test_exact_beta_bracket_equilateral(equilateral, eq_center):
    br = bp.exact_beta_of_point_2d(equilateral, eq_center, tol=1e-9)
    assert abs(br.mid - SQRT3 / 2) < 1e-8
    assert br.width <= 1e-9 * 1.001


def test_exact_beta_single_and_degenerate():
    V1 = bp.VoterSet.from_array([[0.5, 0.5]])
    assert bp.exact_beta_of_point_2d(V1, bp.Point.of(0.5, 0.5)).lo == 1.0
    # three coincident voters away from p: p loses at every beta
    V = bp.VoterSet.from_array([[1, 1], [1, 1], [1, 1]])
    br = bp.exact_beta_of_point_2d(V, bp.Point.of(0, 0))
    assert br.degenerate and br.lo == 0.0


def test_similarity_invariance(make_voters):
    V = make_voters(9, seed=4)
    p = bp.Point.of(0.4, 0.6)
    base = bp.exact_beta_of_point_2d(V, p, tol=1e-7)
    c, s = math.cos(0.7), math.sin(0.7)
    R = np.array([[c, -s], [s, c]])
    A = (V.array @ R.T) * 3.5 + np.array([10.0, -2.0])
    q = bp.Point(tuple((R @ p.array) * 3.5 + np.array([10.0, -2.0])))
    moved = bp.exact_beta_of_point_2d(bp.VoterSet.from_array(A), q, tol=1e-7)
    assert abs(moved.lo - base.lo) <= 2e-7


def test_monotonicity_exact(make_voters):
    rng = np.random.default_rng(12)
    for _ in range(30):
        V = make_voters(int(rng.integers(3, 15)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0, 1, 2)))
        b1, b2 = sorted(rng.uniform(0.4, 1.0, 2))
        if bp.exact_decide_2d(V, p, b2).is_yes:
            assert bp.exact_decide_2d(V, p, b1).is_yes


def test_sample_count_matches_formula():
    V = bp.VoterSet.from_array([[0.0, 0.0], [1.0, 0.0]])
    p = bp.Point.of(0.25, 0.1)
    Q = build_competitor_samples(V, p, 0.9, 0.5)
    assert Q.shape == (96, 2)  # 48 sphere points per voter


def test_samples_on_shrunk_spheres():
    V = bp.VoterSet.from_array([[0.0, 0.0], [2.0, 1.0], [0.3, 0.3]])
    p = bp.Point.of(0.3, 0.3)  # coincides with the third voter
    beta, eps = 0.8, 0.2
    Q = build_competitor_samples(V, p, beta, eps)
    dist = np.linalg.norm(V.array - p.array, axis=1)
    off = 0
    for i in range(V.n):
        if dist[i] == 0.0:
            assert (Q[off] == V.array[i]).all()
            off += 1
            continue
        R = (1 - eps / 2) * beta * dist[i]
        k = 0
        while off + k < len(Q) and abs(np.linalg.norm(Q[off + k] - V.array[i]) - R) < 1e-9 * max(R, 1):
            k += 1
        assert k > 0
        off += k
    assert off == len(Q)


def _per_point_totals(idx):
    totals = np.array(idx.exact_counts, copy=True)
    stack = [(idx.root, 0)]
    while stack:
        nd, acc = stack.pop()
        acc += nd.counter
        if nd.is_leaf:
            totals[idx.perm[nd.start : nd.end]] += acc
        else:
            stack.extend(((nd.left, acc), (nd.right, acc)))
    return totals


def test_marked_ball_query_sandwich():
    rng = np.random.default_rng(5)
    Q = rng.uniform(0, 1, (200, 3))
    for _ in range(25):
        idx = build_index(Q)
        c = rng.uniform(0, 1, 3)
        r = float(rng.uniform(0.05, 0.6))
        eps = float(rng.choice([0.05, 0.2, 0.5]))
        marked_ball_query(idx, c, r, eps)
        totals = _per_point_totals(idx)
        d = np.linalg.norm(Q - c, axis=1)
        # every point inside the ball is counted; nothing outside the
        # fuzzy ball ever is
        assert (totals[d <= r] == 1).all()
        assert (totals[d > (1 + eps) * r * (1 + 1e-9)] == 0).all()


def test_marked_ball_query_extremes():
    rng = np.random.default_rng(6)
    Q = rng.uniform(0, 1, (64, 2))
    idx = build_index(Q)
    marked_ball_query(idx, [0.5, 0.5], 10.0, 0.2)  # covers everything
    I, _ = idx.max_count()
    assert I == 1
    idx.reset()
    marked_ball_query(idx, [2.0, 2.0], 0.0, 0.2)  # empty ball
    I, _ = idx.max_count()
    assert I == 0


def test_approx_decide_examples(equilateral, eq_center):
    assert bp.approx_decide(equilateral, eq_center, 0.8, 0.05).is_yes
    assert not bp.approx_decide(equilateral, eq_center, 0.95, 0.05).is_yes
    V1 = bp.VoterSet.from_array([[0.1, 0.2, 0.3]])
    assert bp.approx_decide(V1, bp.Point.of(0.1, 0.2, 0.3), 1.0, 0.5).is_yes


def test_approx_decide_validation(equilateral, eq_center):
    with pytest.raises(ValueError):
        bp.approx_decide(equilateral, eq_center, 0.9, 0.9)
    with pytest.raises(ValueError):
        bp.approx_decide(equilateral, eq_center, 0.3, 0.2)


def test_approx_beta_of_point(equilateral, eq_center):
    br = bp.approx_beta_of_point(equilateral, eq_center, 0.1)
    assert br.lo >= 0.9 * SQRT3 / 2 - 0.05 / math.sqrt(2) - 1e-12
    assert br.width <= 0.05 / math.sqrt(2) + 1e-12
    V1 = bp.VoterSet.from_array([[1.0, 2.0]])
    assert bp.approx_beta_of_point(V1, bp.Point.of(1, 2), 0.2).lo == 1.0
    V2 = bp.VoterSet.from_array([[1.0, 2.0], [1.0, 2.0]])
    assert bp.approx_beta_of_point(V2, bp.Point.of(1, 2), 0.2).lo == 1.0


def test_approx_beta_degenerate_flag():
    V = bp.VoterSet.from_array([[1, 1], [1, 1], [1, 1]])
    br = bp.approx_beta_of_point(V, bp.Point.of(0, 0), 0.2)
    assert br.degenerate and br.hi == pytest.approx(1 / math.sqrt(2))


def test_sandwich_small(make_voters):
    rng = np.random.default_rng(21)
    for _ in range(40):
        V = make_voters(int(rng.integers(3, 12)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0, 1, 2)))
        beta = float(rng.uniform(1 / math.sqrt(2), 1.0))
        eps = float(rng.choice([0.05, 0.2, 0.5]))
        got = bp.approx_decide(V, p, beta, eps)
        if bp.exact_decide_2d(V, p, beta).is_yes:
            assert got.is_yes
        if not bp.exact_decide_2d(V, p, (1 - eps) * beta).is_yes:
            assert not got.is_yes
