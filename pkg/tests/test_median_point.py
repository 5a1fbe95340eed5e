import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import betaplurality as bp
from betaplurality.median_point import median_select


def test_median_select_basics():
    assert median_select([3.0]) == 3.0
    assert median_select([1, 2, 3]) == 2.0
    assert median_select([1, 2, 3, 4]) == 2.0  # lower median on even length
    assert median_select([5, 5, 1]) == 5.0
    with pytest.raises(ValueError):
        median_select([])


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_median_select_is_rank_statistic(xs):
    got = median_select(xs)
    assert got == sorted(xs)[(len(xs) - 1) // 2]


def test_median_point_coordinates():
    V = bp.VoterSet.from_array([[0, 5], [2, 1], [1, 3]])
    assert bp.median_point(V).coords == (1.0, 3.0)


def test_median_point_balances_axis_hyperplanes(make_voters):
    for seed in range(10):
        V = make_voters(int(np.random.default_rng(seed).integers(1, 30)), d=3, seed=seed)
        m = bp.median_point(V)
        for ax in range(3):
            assert (V.array[:, ax] > m[ax]).sum() <= V.n / 2
            assert (V.array[:, ax] < m[ax]).sum() <= V.n / 2


@pytest.mark.parametrize("seed", range(8))
def test_median_point_guarantee_planar(seed, make_voters):
    """The coordinate-median point carries an advantage factor >= 1/sqrt(2)."""
    V = make_voters(int(np.random.default_rng(seed).integers(1, 60)), seed=seed)
    m = bp.median_point(V)
    beta = (1.0 / math.sqrt(2.0)) * (1.0 - 1e-9)
    assert bp.exact_decide_2d(V, m, beta).is_yes


def test_median_point_linear_runtime_shape(make_voters):
    # not a benchmark: just check it happily digests a large instance
    V = make_voters(200_000, d=4, seed=1)
    m = bp.median_point(V)
    assert m.dim == 4
