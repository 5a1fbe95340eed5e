"""Coordinate-wise median construction.

The point whose i-th coordinate is a (lower) median of the voters' i-th
coordinates makes every axis-parallel hyperplane through it balanced, which
guarantees an advantage factor of at least 1/sqrt(d). Runs in O(n) per axis.
"""
import numpy as np

from .geometry_core import Point, VoterSet


def median_select(values) -> float:
    """Lower median of a nonempty sequence (rank ceil(k/2), 1-indexed)."""
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("median of empty sequence")
    k = (values.size - 1) // 2
    return float(np.partition(values, k)[k])


def median_point(V: VoterSet) -> Point:
    """The coordinate-wise lower-median point of the voter set."""
    return Point(tuple(median_select(V.array[:, i]) for i in range(V.dim)))
