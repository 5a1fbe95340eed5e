import math

import numpy as np
import pytest

import betaplurality as bp

SQRT3 = math.sqrt(3.0)


@pytest.fixture
def equilateral() -> bp.VoterSet:
    """The side-2 equilateral triangle with optimum sqrt(3)/2 at its center."""
    return bp.VoterSet.from_array([[0.0, 0.0], [2.0, 0.0], [1.0, SQRT3]])


@pytest.fixture
def eq_center() -> bp.Point:
    return bp.Point.of(1.0, 1.0 / SQRT3)


@pytest.fixture
def make_voters():
    """Factory for random uniform voter sets with a per-call seed."""

    def make(n: int, d: int = 2, seed: int = 0, scale: float = 1.0) -> bp.VoterSet:
        rng = np.random.default_rng(seed)
        return bp.VoterSet.from_array(scale * rng.uniform(0.0, 1.0, (n, d)))

    return make
