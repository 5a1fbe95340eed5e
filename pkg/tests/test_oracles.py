import math

import numpy as np
import pytest

import betaplurality as bp
from betaplurality.oracles import oracle_best_point, oracle_decide

SQRT3 = math.sqrt(3.0)


def test_oracle_decide_equilateral(equilateral, eq_center):
    assert oracle_decide(equilateral, eq_center, 0.5).is_yes
    v = oracle_decide(equilateral, eq_center, 0.87)
    assert not v.is_yes and v.witness is not None and v.advantage >= 1


def test_oracle_decide_validation(equilateral, eq_center):
    with pytest.raises(ValueError):
        oracle_decide(equilateral, eq_center, 0.0)
    with pytest.raises(ValueError):
        oracle_decide(equilateral, eq_center, 0.5, grid_res=4)
    with pytest.raises(ValueError):
        oracle_decide(equilateral, bp.Point.of(1.0), 0.5)
    V4 = bp.VoterSet.from_array(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        oracle_decide(V4, bp.Point.of(0, 0, 0, 0), 0.5, grid_res=200)


def test_oracle_decide_agrees_with_exact(make_voters):
    rng = np.random.default_rng(77)
    for _ in range(30):
        V = make_voters(int(rng.integers(3, 10)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0.2, 0.8, 2)))
        br = bp.exact_beta_of_point_2d(V, p, tol=1e-6)
        beta = float(rng.uniform(0.3, 1.0))
        if abs(beta - br.mid) < 1e-2:
            continue  # skip the band where grid resolution decides ties
        assert oracle_decide(V, p, beta).is_yes == (beta < br.mid)


def test_oracle_decide_monotone(make_voters):
    rng = np.random.default_rng(13)
    for _ in range(15):
        V = make_voters(int(rng.integers(3, 8)), seed=int(rng.integers(1 << 30)))
        p = bp.Point(tuple(rng.uniform(0, 1, 2)))
        b1, b2 = sorted(rng.uniform(0.3, 1.0, 2))
        if oracle_decide(V, p, b2, grid_res=60).is_yes:
            assert oracle_decide(V, p, b1, grid_res=60).is_yes


def test_oracle_best_point_equilateral(equilateral, eq_center):
    res = oracle_best_point(equilateral)
    assert abs(res.beta_hat - SQRT3 / 2) < 1e-3
    assert bp.distance(res.point, eq_center) < 1e-2


def test_oracle_best_point_tiny():
    V1 = bp.VoterSet.from_array([[2.0, 7.0]])
    r1 = oracle_best_point(V1)
    assert r1.point.coords == (2.0, 7.0) and r1.beta_hat == 1.0
    V2 = bp.VoterSet.from_array([[0.0, 0.0], [1.0, 1.0]])
    r2 = oracle_best_point(V2)
    assert r2.beta_hat > 0.99  # either voter is unbeatable with n = 2


def test_oracle_best_point_validation(equilateral):
    with pytest.raises(ValueError):
        oracle_best_point(bp.VoterSet.from_array(np.zeros((2, 3))))
    with pytest.raises(ValueError):
        oracle_best_point(equilateral, point_grid_res=4)


def test_oracle_best_point_beats_median(make_voters):
    for seed in (1, 2, 3):
        V = make_voters(9, seed=seed)
        res = oracle_best_point(V)
        med = bp.exact_beta_of_point_2d(V, bp.median_point(V), tol=1e-6)
        assert res.beta_hat >= med.lo - 1e-6
        assert res.beta_hat >= SQRT3 / 2 - 1e-3
