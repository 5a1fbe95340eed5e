"""Brute-force reference implementations, deliberately simple and slow.

oracle_decide searches competitors on a dense lattice (plus the planar
canonical points) with plain numpy; oracle_best_point maximizes beta over a
point lattice with one refinement pass. Both are meant for desk-size
instances and cross-validation, not production use.
"""
from __future__ import annotations

import math

import numpy as np

from .geometry_core import Point, VoterSet
from .decision import (
    BetaBracket,
    Verdict,
    canonical_competitors,
    exact_beta_of_point_2d,
)
from .kernels import decide_many

_TIE_RTOL = 1e-12
_MAX_LATTICE = 2e7


def _lattice(lo: np.ndarray, hi: np.ndarray, res: int) -> np.ndarray:
    axes = [np.linspace(lo[k], hi[k], res) for k in range(len(lo))]
    grids = np.meshgrid(*axes, indexing="ij")
    return np.column_stack([g.ravel() for g in grids])


def _advantages(V: VoterSet, rad: np.ndarray, qs: np.ndarray) -> np.ndarray:
    """Advantage (wins minus losses) of every competitor in qs, ties within
    the relative band counting for neither side."""
    adv = np.empty(qs.shape[0], dtype=np.int64)
    chunk = max(1, int(2e6 // max(V.n, 1)))
    for s in range(0, qs.shape[0], chunk):
        block = qs[s : s + chunk]
        d = np.linalg.norm(block[:, None, :] - V.array[None, :, :], axis=2)
        on = np.abs(d - rad[None, :]) <= _TIE_RTOL * np.maximum(d, rad[None, :])
        inside = (d < rad[None, :]) & ~on
        outside = (d > rad[None, :]) & ~on
        adv[s : s + chunk] = inside.sum(axis=1) - outside.sum(axis=1)
    return adv


def oracle_decide(V: VoterSet, p: Point, beta: float, grid_res: int = 200) -> Verdict:
    """Dense competitor search: no iff some lattice (or planar canonical)
    competitor has positive advantage."""
    if grid_res < 8:
        raise ValueError("grid_res must be >= 8")
    if p.dim != V.dim:
        raise ValueError("dimension mismatch")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta={beta} outside (0, 1]")
    if grid_res ** V.dim > _MAX_LATTICE:
        raise ValueError("lattice too large for this dimension/resolution")
    rad = beta * np.linalg.norm(V.array - p.array, axis=1)
    all_pts = np.vstack([V.array, p.array[None, :]])
    lo = all_pts.min(axis=0)
    hi = all_pts.max(axis=0)
    mid = 0.5 * (lo + hi)
    half = np.maximum(0.75 * (hi - lo), 1e-9)  # 1.5x the bounding box
    qs = _lattice(mid - half, mid + half, grid_res)
    if V.dim == 2:
        qs = np.vstack([qs, canonical_competitors(V, p, beta)])
    adv = _advantages(V, rad, qs)
    best = int(np.argmax(adv))
    best_adv = int(adv[best])
    if best_adv >= 1:
        return Verdict("no", Point(tuple(qs[best])), best_adv)
    return Verdict("yes", None, best_adv)


def _ladder_best(vx, vy, pts: np.ndarray, start: float, steps) -> tuple[np.ndarray, float]:
    """First point (in input order) surviving the highest beta level of an
    ascending multi-resolution ladder of exact decisions (exact decisions are
    monotone in beta, so coarse-to-fine refinement is lossless)."""
    active = pts
    passed = -math.inf
    for step in steps:
        lvl = passed if passed > -math.inf else start - step
        while lvl < 1.0 - 1e-12:
            nxt = min(lvl + step, 1.0)
            ok = decide_many(vx, vy, active[:, 0], active[:, 1], nxt).astype(bool)
            if not ok.any():
                break
            active = active[ok]
            passed = nxt
            lvl = nxt
    return active[0], passed


def oracle_best_point(V: VoterSet, point_grid_res: int = 48, beta_tol: float = 1e-9):
    """Maximize beta(p, V) over a hull-covering lattice, refine once around
    the winner and return the winner's exact beta bracket. Intended for
    planar instances with n <= 15."""
    from .approx_best import BestPointResult

    if V.dim != 2:
        raise ValueError("oracle_best_point is planar")
    if point_grid_res < 8:
        raise ValueError("point_grid_res must be >= 8")
    if V.n == 1:
        p = Point(tuple(V.array[0]))
        return BestPointResult(p, 1.0, BetaBracket(1.0, 1.0))
    vx = np.ascontiguousarray(V.array[:, 0])
    vy = np.ascontiguousarray(V.array[:, 1])
    lo = V.array.min(axis=0)
    hi = V.array.max(axis=0)
    coarse = _lattice(lo, hi, point_grid_res)
    coarse = np.vstack([coarse, V.array])
    q1, lvl1 = _ladder_best(vx, vy, coarse, 0.5, (0.02, 0.005))
    spacing = (hi - lo) / max(point_grid_res - 1, 1)
    spacing = np.maximum(spacing, beta_tol)
    fine = _lattice(q1 - spacing, q1 + spacing, 2 * point_grid_res + 1)
    start = max(0.5, (lvl1 if lvl1 > -math.inf else 0.5) - 0.02)
    q2, _ = _ladder_best(vx, vy, fine, start, (0.002, 2.5e-4))
    bracket = exact_beta_of_point_2d(V, Point(tuple(q2)), tol=beta_tol)
    return BestPointResult(Point(tuple(q2)), bracket.lo, bracket)
