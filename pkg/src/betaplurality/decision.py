"""Deciding whether p is a β-plurality point.

Exact in the plane: the best competitor lies in an open cell of maximum depth
of the arrangement of open disks B(v, β|pv|), and that maximum is found by an
angular sweep along every circle (see kernels). The answer is yes iff
2 * maxdepth <= n.

Approximate in any dimension: sample competitors on spheres around each voter,
index them in a box-decomposition tree with per-node counters, and run one
fuzzy ball query per voter; the maximum root-to-leaf counter sum approximates
the best competitor's win count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from . import kernels
from .geometry_core import Point, VoterSet, sphere_cover

TIE_RTOL = 1e-12
_LEAF_SIZE = 32
_MAX_SAMPLE_POINTS = 2e7


@dataclass(frozen=True)
class DepthCounts:
    inside: int
    on: int
    outside: int

    @property
    def n(self) -> int:
        return self.inside + self.on + self.outside

    @property
    def advantage(self) -> int:
        return self.inside - self.outside


@dataclass(frozen=True)
class Verdict:
    answer: str  # "yes" | "no"
    witness: Optional[Point]
    advantage: int

    @property
    def is_yes(self) -> bool:
        return self.answer == "yes"


@dataclass(frozen=True)
class BetaBracket:
    lo: float
    hi: float
    degenerate: bool = False

    @property
    def width(self) -> float:
        return self.hi - self.lo

    @property
    def mid(self) -> float:
        return 0.5 * (self.lo + self.hi)


def _radii(V: VoterSet, p: Point, beta: float) -> np.ndarray:
    diff = V.array - p.array
    return beta * np.hypot(diff[:, 0], diff[:, 1]) if V.dim == 2 else beta * np.linalg.norm(diff, axis=1)


def depth_at(V: VoterSet, p: Point, beta: float, q: Point, rtol: float = TIE_RTOL) -> DepthCounts:
    """Count voters strictly won / tied / strictly lost by competitor q."""
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta={beta} outside (0, 1]")
    if p.dim != V.dim or q.dim != V.dim:
        raise ValueError("dimension mismatch")
    rad = _radii(V, p, beta)
    dist = np.linalg.norm(V.array - q.array, axis=1)
    on = np.abs(dist - rad) <= rtol * np.maximum(rad, dist)
    inside = (dist < rad) & ~on
    outside = (dist > rad) & ~on
    return DepthCounts(int(inside.sum()), int(on.sum()), int(outside.sum()))


def _circle_intersections(cx, cy, rad):
    """All pairwise intersection points of the circles (cx_i, cy_i, rad_i)."""
    pts = []
    n = len(cx)
    for i in range(n):
        for j in range(i + 1, n):
            dx, dy = cx[j] - cx[i], cy[j] - cy[i]
            D = math.hypot(dx, dy)
            ri, rj = rad[i], rad[j]
            if D == 0.0 or D > ri + rj or D < abs(ri - rj):
                continue
            a = (D * D + ri * ri - rj * rj) / (2.0 * D)
            h2 = ri * ri - a * a
            h = math.sqrt(h2) if h2 > 0.0 else 0.0
            mx, my = cx[i] + a * dx / D, cy[i] + a * dy / D
            pts.append((mx + h * dy / D, my - h * dx / D))
            pts.append((mx - h * dy / D, my + h * dx / D))
    return pts


def canonical_competitors(V: VoterSet, p: Point, beta: float) -> np.ndarray:
    """Circle intersection points, voter positions and p, each together with 8
    compass perturbations at a diameter-relative radius."""
    rad = _radii(V, p, beta)
    cx, cy = V.array[:, 0], V.array[:, 1]
    base = list(zip(cx, cy)) + [(p[0], p[1])] + _circle_intersections(cx, cy, rad)
    base = np.asarray(base, dtype=float)
    delta = 1e-7 * max(V.diameter, 1e-9)
    offs = [(0.0, 0.0)]
    for k in range(8):
        a = k * math.pi / 4.0
        offs.append((delta * math.cos(a), delta * math.sin(a)))
    return (base[:, None, :] + np.asarray(offs)[None, :, :]).reshape(-1, 2)


def _witness_from_sweep(V, p, beta, depth, circle, angle, tol):
    """Concrete competitor realizing the sweep's maximum depth, validated by
    depth_at; falls back to canonical-point enumeration on small instances."""
    n = V.n
    target = max(1, 2 * depth - n)
    rad = _radii(V, p, beta)
    best_q, best_adv = None, -(n + 1)
    if circle >= 0:
        cxi, cyi, ri = V.array[circle, 0], V.array[circle, 1], rad[circle]
        for eta in (1e-7, 1e-9, 1e-11, 1e-13):
            q = Point((cxi + ri * (1.0 - eta) * math.cos(angle),
                       cyi + ri * (1.0 - eta) * math.sin(angle)))
            adv = depth_at(V, p, beta, q).advantage
            if adv > best_adv:
                best_q, best_adv = q, adv
            if adv >= target:
                return q, adv
    if n <= 256:
        cand = canonical_competitors(V, p, beta)
        adv, idx = kernels.max_advantage_points(
            V.array[:, 0], V.array[:, 1], rad, cand[:, 0], cand[:, 1], TIE_RTOL
        )
        if adv > best_adv:
            best_q, best_adv = Point(tuple(cand[idx])), int(adv)
    return best_q, best_adv


def exact_decide_2d(V: VoterSet, p: Point, beta: float, tol: float = 1e-12) -> Verdict:
    """Exact planar decision: yes iff no competitor wins strictly more voters
    than p at advantage factor beta."""
    if V.dim != 2 or p.dim != 2:
        raise ValueError("exact_decide_2d is planar")
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta={beta} outside (0, 1]")
    rad = _radii(V, p, beta)
    depth, circle, angle = kernels.depth_sweep(V.array[:, 0], V.array[:, 1], rad, tol)
    n = V.n
    if 2 * depth <= n:
        return Verdict("yes", None, 2 * depth - n)
    q, adv = _witness_from_sweep(V, p, beta, depth, circle, angle, tol)
    return Verdict("no", q, adv)


def exact_beta_of_point_2d(V: VoterSet, p: Point, tol: float = 1e-9) -> BetaBracket:
    """Bisection bracket for beta(p, V) = sup{beta : decision yes}."""
    if tol <= 0.0:
        raise ValueError("tol must be positive")
    if exact_decide_2d(V, p, 1.0).is_yes:
        return BetaBracket(1.0, 1.0)
    hi = 1.0
    lo = None
    from .median_point import median_point

    if p.coords == median_point(V).coords:
        floor = 1.0 / math.sqrt(2.0)
        if exact_decide_2d(V, p, floor).is_yes:
            lo = floor
    if lo is None:
        probe = 0.5
        while probe > tol:
            if exact_decide_2d(V, p, probe).is_yes:
                lo = probe
                break
            hi = probe
            probe *= 0.5
        else:
            return BetaBracket(0.0, hi, degenerate=True)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        if exact_decide_2d(V, p, mid).is_yes:
            lo = mid
        else:
            hi = mid
    return BetaBracket(lo, hi)


# ---------------------------------------------------------------------------
# Sampled approximate decision
# ---------------------------------------------------------------------------


def build_competitor_samples(V: VoterSet, p: Point, beta: float, eps: float) -> np.ndarray:
    """Competitor sample set Q: for each voter v, points on the sphere of
    radius (1 - eps/2) * beta * |pv| around v at covering radius
    (eps / (4 sqrt(d))) * |pv|; voters coinciding with p contribute themselves.
    Returns an (m, d) array."""
    d = V.dim
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps={eps} outside (0, 1/2]")
    if beta < (1.0 - 1e-3) / math.sqrt(d) - 1e-12:
        raise ValueError(f"beta={beta} below 1/sqrt(d)")
    rel = eps / (4.0 * math.sqrt(d) * (1.0 - eps / 2.0) * beta)
    cover = sphere_cover(d, rel)  # raises when the cover itself is infeasible
    if cover.shape[0] * V.n > _MAX_SAMPLE_POINTS:
        raise ValueError(
            f"competitor sampling needs ~{cover.shape[0] * V.n:.2g} points "
            f"(n={V.n}, d={d}, eps={eps:g}); refusing to build it"
        )
    dist = np.linalg.norm(V.array - p.array, axis=1)
    chunks = []
    for i in range(V.n):
        if dist[i] == 0.0:
            chunks.append(V.array[i : i + 1])
        else:
            R = (1.0 - eps / 2.0) * beta * dist[i]
            chunks.append(V.array[i] + R * cover)
    return np.vstack(chunks)


class _Node:
    __slots__ = ("lo", "hi", "start", "end", "left", "right", "counter")

    def __init__(self, lo, hi, start, end):
        self.lo = lo
        self.hi = hi
        self.start = start
        self.end = end
        self.left = None
        self.right = None
        self.counter = 0

    @property
    def is_leaf(self):
        return self.left is None


class ApproxIndex:
    """Median-split box decomposition over the sample points, with a counter
    per node and exact per-point tallies at the leaves."""

    def __init__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.size == 0:
            raise ValueError("empty sample set")
        self.points = points
        self.perm = np.arange(points.shape[0])
        self.exact_counts = np.zeros(points.shape[0], dtype=np.int64)
        self.root = self._build(0, points.shape[0], points.min(axis=0), points.max(axis=0))

    def _build(self, start, end, lo, hi):
        node = _Node(lo.copy(), hi.copy(), start, end)
        if end - start <= _LEAF_SIZE:
            return node
        idx = self.perm[start:end]
        sub = self.points[idx]
        spread = sub.max(axis=0) - sub.min(axis=0)
        if float(spread.max()) == 0.0:
            return node
        axis = int(np.argmax(spread))
        coords = sub[:, axis]
        k = (end - start) // 2
        order = np.argpartition(coords, k - 1)
        self.perm[start:end] = idx[order]
        split = float(coords[order[:k]].max())
        mx = float(coords.max())
        if split >= mx:
            # median ties with the maximum: split below the largest value
            split = float(coords[coords < mx].max())
            below = coords <= split
            self.perm[start:end] = np.concatenate([idx[below], idx[~below]])
            k = int(below.sum())
        llo, lhi = lo.copy(), hi.copy()
        rlo, rhi = lo.copy(), hi.copy()
        lhi[axis] = split
        rlo[axis] = split
        node.left = self._build(start, start + k, llo, lhi)
        node.right = self._build(start + k, end, rlo, rhi)
        return node

    @property
    def size(self) -> int:
        count = 0
        stack = [self.root]
        while stack:
            nd = stack.pop()
            count += 1
            if not nd.is_leaf:
                stack.extend((nd.left, nd.right))
        return count

    @property
    def depth(self) -> int:
        best = 0
        stack = [(self.root, 1)]
        while stack:
            nd, dep = stack.pop()
            best = max(best, dep)
            if not nd.is_leaf:
                stack.extend(((nd.left, dep + 1), (nd.right, dep + 1)))
        return best

    def reset(self):
        self.exact_counts[:] = 0
        stack = [self.root]
        while stack:
            nd = stack.pop()
            nd.counter = 0
            if not nd.is_leaf:
                stack.extend((nd.left, nd.right))

    def max_count(self):
        """Maximum over sample points of (root-to-leaf counter sum + exact
        tallies); returns (count, point_index)."""
        best, best_idx = -1, -1
        stack = [(self.root, 0)]
        while stack:
            nd, acc = stack.pop()
            acc += nd.counter
            if nd.is_leaf:
                idx = self.perm[nd.start : nd.end]
                totals = acc + self.exact_counts[idx]
                k = int(np.argmax(totals)) if idx.size else 0
                if idx.size and totals[k] > best:
                    best, best_idx = int(totals[k]), int(idx[k])
            else:
                stack.extend(((nd.left, acc), (nd.right, acc)))
        return best, best_idx


def build_index(Q) -> ApproxIndex:
    return ApproxIndex(Q)


def marked_ball_query(index: ApproxIndex, center, r: float, eps: float) -> None:
    """Increment counters on disjoint canonical nodes covering the ball
    s(center, r), never reaching outside s(center, (1+eps) r); points at leaf
    nodes are tested exactly against r."""
    if r < 0.0:
        raise ValueError("radius must be nonnegative")
    c = np.asarray(center.coords if isinstance(center, Point) else center, dtype=float)
    thr = (1.0 + eps) * r
    pts = index.points
    stack = [index.root]
    while stack:
        nd = stack.pop()
        clamped = np.minimum(np.maximum(c, nd.lo), nd.hi)
        dmin = float(np.linalg.norm(c - clamped))
        if dmin > r:
            continue
        far = np.maximum(np.abs(c - nd.lo), np.abs(c - nd.hi))
        if float(np.linalg.norm(far)) <= thr:
            nd.counter += 1
            continue
        if nd.is_leaf:
            idx = index.perm[nd.start : nd.end]
            dist = np.linalg.norm(pts[idx] - c, axis=1)
            hit = dist <= r * (1.0 + 1e-9)
            index.exact_counts[idx[hit]] += 1
        else:
            stack.append(nd.left)
            stack.append(nd.right)


def approx_decide(V: VoterSet, p: Point, beta: float, eps: float) -> Verdict:
    """eps-approximate decision in any dimension: yes whenever p is a
    beta-plurality point, no whenever p is not a (1-eps)beta-plurality point."""
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps={eps} outside (0, 1/2]")
    d = V.dim
    # the sample-spacing bound needs beta >= 1/sqrt(d); a hair of relative
    # slack keeps decisions at (1/sqrt(d))(1 - 1e-3) legal
    if beta < (1.0 - 1e-3) / math.sqrt(d) - 1e-12 or beta > 1.0 + 1e-12:
        raise ValueError(f"beta={beta} outside [1/sqrt(d), 1]")
    beta = min(beta, 1.0)
    Q = build_competitor_samples(V, p, beta, eps)
    index = build_index(Q)
    dist = np.linalg.norm(V.array - p.array, axis=1)
    for i in range(V.n):
        if dist[i] == 0.0:
            continue  # this voter can never be strictly won by any competitor
        marked_ball_query(index, V.array[i], (1.0 - eps / 4.0) * beta * dist[i], eps / 4.0)
    C, qi = index.max_count()
    C = max(C, 0)
    n = V.n
    if 2 * C <= n:
        return Verdict("yes", None, 2 * C - n)
    witness = Point(tuple(Q[qi]))
    adv = depth_at(V, p, beta, witness).advantage
    return Verdict("no", witness, adv)


def approx_beta_of_point(V: VoterSet, p: Point, eps: float) -> BetaBracket:
    """Binary search of the eps/2-approximate decision over [1/sqrt(d), 1]."""
    if not 0.0 < eps <= 0.5:
        raise ValueError(f"eps={eps} outside (0, 1/2]")
    d = V.dim
    floor = 1.0 / math.sqrt(d)
    eps2 = eps / 2.0
    if approx_decide(V, p, 1.0, eps2).is_yes:
        return BetaBracket(1.0, 1.0)
    if not approx_decide(V, p, floor, eps2).is_yes:
        return BetaBracket(0.0, floor, degenerate=True)
    lo, hi = floor, 1.0
    target = (eps / 2.0) / math.sqrt(d)
    while hi - lo > target:
        mid = 0.5 * (lo + hi)
        if approx_decide(V, p, mid, eps2).is_yes:
            lo = mid
        else:
            hi = mid
    return BetaBracket(lo, hi)
