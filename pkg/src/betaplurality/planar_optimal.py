"""Planar points with advantage factor at least sqrt(3)/2.

Three balanced lines at mutual angle pi/3 that pass through a common point
certify beta(p, V) >= sqrt(3)/2 at their intersection. Two solvers:

* concurrent_triple_bisection: the concurrency defect of the triple changes
  sign as the orientation sweeps (0, pi/3); bisect on the sign, then snap to
  the exact root of the closed-form concurrency equation once the three
  pivot voters are stable.

* concurrent_triple_fast: the dual-plane algorithm. Voters map to lines
  y = a x + b; balanced lines of orientation theta map to points of the
  median level at abscissa cot(theta). The solver maintains one trapezoid
  per orientation branch, repeatedly halves the biggest one with a 1/2-
  cutting, and binary-searches the level/boundary crossing abscissas by the
  primal concurrency sign. O(n log n) up to the final constant-size solve.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .geometry_core import (
    Line2,
    Point,
    VoterSet,
    balanced_line_with_pivot,
    reduce_to_odd,
    side_of,
    Side,
)

SQRT3 = math.sqrt(3.0)
INV_SQRT3 = 1.0 / SQRT3
PI3 = math.pi / 3.0
_INF = math.inf

# dual-plane x-intervals of the three orientation branches
_BRANCH_BOUNDS = ((INV_SQRT3, _INF), (-INV_SQRT3, INV_SQRT3), (-_INF, -INV_SQRT3))


class DegeneracyError(RuntimeError):
    """The randomized cutting failed to verify within its retry budget."""


@dataclass(frozen=True)
class DualLine:
    """Dual of the voter (a, b): the line y = a x + b."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ValueError("non-finite dual line")

    def value(self, x: float) -> float:
        return self.a * x + self.b


@dataclass
class Trapezoid:
    """A vertical trapezoid in the dual plane: an x-range bounded below and
    above by dual lines (None = unbounded), the set of lines crossing its
    interior and the count of lines passing entirely below."""

    x_lo: float
    x_hi: float
    bottom: Optional[DualLine]
    top: Optional[DualLine]
    crossing_lines: np.ndarray
    below_count: int

    @property
    def x_range(self):
        return (self.x_lo, self.x_hi)


@dataclass(frozen=True)
class BalancedTriple:
    lines: tuple[Line2, Line2, Line2]
    point: Point
    theta_bar: float


# ---------------------------------------------------------------------------
# Primal-side helpers
# ---------------------------------------------------------------------------


def _wrap_orientation(theta: float) -> float:
    t = math.fmod(theta, math.pi)
    if t < 0.0:
        t += math.pi
    return t if t < math.pi else 0.0


def _triple_lines_pivots(W: VoterSet, theta: float):
    out = []
    for k in range(3):
        out.append(balanced_line_with_pivot(W, _wrap_orientation(theta + k * PI3)))
    return out


def _intersect(l1: Line2, l2: Line2) -> Point:
    n1x, n1y = l1.normal
    n2x, n2y = l2.normal
    det = n1x * n2y - n1y * n2x
    c1, c2 = l1.offset, l2.offset
    return Point(((c1 * n2y - c2 * n1y) / det, (n1x * c2 - n2x * c1) / det))


def _defect_sign(W: VoterSet, theta: float) -> int:
    """Sign of the concurrency defect: side of p23 relative to directed l1."""
    (l1, _), (l2, _), (l3, _) = _triple_lines_pivots(W, theta)
    p23 = _intersect(l2, l3)
    side = side_of(l1, p23)
    if side is Side.ON:
        return 0
    return 1 if side is Side.LEFT else -1


def _triple_at(W: VoterSet, theta: float) -> BalancedTriple:
    theta = theta % PI3
    lp = _triple_lines_pivots(W, theta)
    lines = tuple(l for l, _ in lp)
    # intersect the best-conditioned pair (they all meet at 60 degrees)
    point = _intersect(lines[0], lines[1])
    return BalancedTriple(lines, point, theta)


def triple_defect(triple: BalancedTriple) -> float:
    """Largest distance from the common point to any of the three lines."""
    worst = 0.0
    for ln in triple.lines:
        nx, ny = ln.normal
        worst = max(worst, abs(nx * triple.point[0] + ny * triple.point[1] - ln.offset))
    return worst


def _concurrency_root(v0, v1, v2) -> float:
    """Orientation theta at which the balanced lines pivoting on v0, v1, v2
    (at offsets 0, pi/3, 2pi/3) are concurrent: the root of an equation
    A cos(theta) + B sin(theta) = 0."""
    A = 0.0
    B = 0.0
    for k, (v, sgn) in enumerate(zip((v0, v1, v2), (1.0, -1.0, 1.0))):
        phi = k * PI3
        c, s = math.cos(phi), math.sin(phi)
        A += sgn * (v[0] * c + v[1] * s)
        B += sgn * (-v[0] * s + v[1] * c)
    if A == 0.0 and B == 0.0:
        return 0.0  # concurrent at every orientation
    return math.atan2(-A, B) % math.pi


def _refine_and_snap(W: VoterSet, lo: float, hi: float, s_lo: int, tol_theta: float) -> BalancedTriple:
    """Bisect the defect sign over [lo, hi] and finish with the closed-form
    concurrency solve once the pivot voters are stable."""
    tol = max(tol_theta, 1e-13)
    for _ in range(90):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        s = _defect_sign(W, mid)
        if s == 0:
            return _triple_at(W, mid)
        if s == s_lo:
            lo = mid
        else:
            hi = mid
    scale = max(W.diameter, 1e-12)
    mid = 0.5 * (lo + hi)
    best = _triple_at(W, mid)
    for _ in range(4):
        pivots = [p for _, p in _triple_lines_pivots(W, mid)]
        theta = _concurrency_root(*(W.array[p] for p in pivots))
        slack = 4.0 * (hi - lo) + 1e-12
        cand = None
        for shift in (0.0, -math.pi, math.pi):
            t = theta + shift
            if lo - slack <= t <= hi + slack:
                cand = t
                break
        if cand is None:
            break
        cand = min(max(cand, 0.0), PI3)
        snapped = _triple_at(W, cand)
        if triple_defect(snapped) < triple_defect(best):
            best = snapped
        if triple_defect(best) <= 1e-11 * scale:
            return best
        mid = cand
    return best


def concurrent_triple_bisection(V: VoterSet, tol_theta: float = 1e-12) -> BalancedTriple:
    """Concurrent balanced triple via sign bisection on the orientation."""
    if V.dim != 2:
        raise ValueError("balanced triples are planar")
    W = reduce_to_odd(V)
    s0 = _defect_sign(W, 0.0)
    if s0 == 0:
        return _triple_at(W, 0.0)
    s1 = _defect_sign(W, PI3)
    if s1 == 0:
        return _triple_at(W, PI3)
    lo, hi = 0.0, PI3
    if s1 == s0:
        # theory guarantees opposite endpoint signs; rescue numerically
        # degenerate instances with a coarse scan
        found = False
        prev = s0
        for k in range(1, 257):
            t = PI3 * k / 256.0
            s = _defect_sign(W, t)
            if s == 0:
                return _triple_at(W, t)
            if s != prev:
                lo, hi, s0 = PI3 * (k - 1) / 256.0, t, prev
                found = True
                break
        if not found:
            raise DegeneracyError("no concurrency sign change found")
    return _refine_and_snap(W, lo, hi, s0, tol_theta)


# ---------------------------------------------------------------------------
# Dual-plane machinery
# ---------------------------------------------------------------------------


def _as_arrays(lines) -> tuple[np.ndarray, np.ndarray]:
    A = np.fromiter((l.a for l in lines), dtype=float, count=len(lines))
    B = np.fromiter((l.b for l in lines), dtype=float, count=len(lines))
    return A, B


def _le_at(a, b, ab, bb, x):
    """Vectorized test: line (a, b) lies at or below line (ab, bb) at x,
    where x may be +-infinity."""
    if x == _INF:
        return (a < ab) | ((a == ab) & (b <= bb))
    if x == -_INF:
        return (a > ab) | ((a == ab) & (b <= bb))
    return a * x + b <= ab * x + bb


def _ge_at(a, b, ab, bb, x):
    if x == _INF:
        return (a > ab) | ((a == ab) & (b >= bb))
    if x == -_INF:
        return (a < ab) | ((a == ab) & (b >= bb))
    return a * x + b >= ab * x + bb


def _classify(A, B, idx, bottom, top, xl, xr):
    """Split the lines `idx` into (below, above, crossing) relative to the
    band [bottom, top] over [xl, xr]."""
    a, b = A[idx], B[idx]
    if bottom is not None:
        below = _le_at(a, b, bottom.a, bottom.b, xl) & _le_at(a, b, bottom.a, bottom.b, xr)
    else:
        below = np.zeros(idx.size, dtype=bool)
    if top is not None:
        above = _ge_at(a, b, top.a, top.b, xl) & _ge_at(a, b, top.a, top.b, xr)
        above &= ~below
    else:
        above = np.zeros(idx.size, dtype=bool)
    crossing = ~(below | above)
    return idx[below], idx[above], idx[crossing]


def _interior_point(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a):
        return b - 1.0
    if math.isinf(b):
        return a + 1.0
    return 0.5 * (a + b)


def median_level_point(Vstar: Sequence[DualLine], x: float, below_offset: int = 0,
                       total: Optional[int] = None) -> Point:
    """Point of the median level at abscissa x, by rank selection among the
    given lines; below_offset lines are known to pass below them all."""
    if len(Vstar) == 0:
        raise ValueError("empty line set")
    A, B = _as_arrays(Vstar)
    if total is None:
        total = below_offset + len(Vstar)
    k = (total - 1) // 2 - below_offset
    if not 0 <= k < len(Vstar):
        raise ValueError("median rank falls outside the given line set")
    vals = A * x + B
    return Point((x, float(np.partition(vals, k)[k])))


def _level_value(A, B, k, x) -> float:
    vals = A * x + B
    return float(np.partition(vals, k)[k])


def _clip_to_band(ae, be, trap: Trapezoid):
    """x-interval of [trap.x_lo, trap.x_hi] where the line (ae, be) lies
    inside the trapezoid's vertical band; None when empty."""
    xl, xr = trap.x_lo, trap.x_hi
    for bound, lower in ((trap.bottom, True), (trap.top, False)):
        if bound is None:
            continue
        da = ae - bound.a
        db = be - bound.b
        if da == 0.0:
            if (db < 0.0) if lower else (db > 0.0):
                return None
            continue
        t = -db / da
        if lower:  # need e - bound >= 0
            if da > 0.0:
                xl = max(xl, t)
            else:
                xr = min(xr, t)
        else:
            if da > 0.0:
                xr = min(xr, t)
            else:
                xl = max(xl, t)
    if xl >= xr:
        return None
    return xl, xr


def _edge_crossings(A, B, k_global, below_offset, ae, be, xl, xr, S):
    """Abscissas in (xl, xr) where the median level crosses the line
    (ae, be); S = the only lines able to cross it in that range."""
    aS, bS = A[S], B[S]
    diff = aS - ae
    nz = diff != 0.0
    t = (be - bS[nz]) / diff[nz]
    keep = (t > xl) & (t < xr)
    t = t[keep]
    sl = diff[nz][keep]
    order = np.argsort(t, kind="stable")
    t = t[order]
    sl = sl[order]
    first = t[0] if t.size else xr
    x_eval = _interior_point(xl, min(first, xr))
    vals = A * x_eval + B
    ev = ae * x_eval + be
    cnt_lt = below_offset + int(np.count_nonzero(vals < ev))
    cnt_le = below_offset + int(np.count_nonzero(vals <= ev))

    def state(lt, le):
        if le <= k_global:
            return 1  # level above the edge
        if lt >= k_global + 1:
            return -1
        return 0

    prev = state(cnt_lt, cnt_le)
    out = []
    i = 0
    m = t.size
    while i < m:
        j = i
        while j < m and t[j] == t[i]:
            j += 1
        for u in range(i, j):
            if sl[u] > 0.0:
                cnt_lt -= 1
                cnt_le -= 1
            else:
                cnt_lt += 1
                cnt_le += 1
        cur = state(cnt_lt, cnt_le)
        if cur != prev:
            out.append(float(t[i]))
            prev = cur
        i = j
    return out


def _decompose(A, B, cell: Trapezoid, sample) -> list[Trapezoid]:
    """Vertical trapezoidal decomposition of `cell` by the sampled lines."""
    xs = set()
    samp = [(float(A[i]), float(B[i])) for i in sample]
    samp = sorted(set(samp))
    bounds = [b for b in (cell.bottom, cell.top) if b is not None]
    for i in range(len(samp)):
        ai, bi = samp[i]
        for aj, bj in samp[i + 1 :]:
            if ai != aj:
                t = (bj - bi) / (ai - aj)
                if cell.x_lo < t < cell.x_hi:
                    xs.add(t)
        for bd in bounds:
            if ai != bd.a:
                t = (bd.b - bi) / (ai - bd.a)
                if cell.x_lo < t < cell.x_hi:
                    xs.add(t)
    cuts = [cell.x_lo] + sorted(xs) + [cell.x_hi]
    out = []
    for u, v in zip(cuts[:-1], cuts[1:]):
        if u >= v:
            continue
        xm = _interior_point(u, v)
        inside = []
        for a, b in samp:
            y = a * xm + b
            if cell.bottom is not None and y <= cell.bottom.value(xm):
                continue
            if cell.top is not None and y >= cell.top.value(xm):
                continue
            inside.append((y, a, b))
        inside.sort()
        seq = [cell.bottom] + [DualLine(a, b) for _, a, b in inside] + [cell.top]
        for lo_b, hi_b in zip(seq[:-1], seq[1:]):
            below, above, crossing = _classify(A, B, cell.crossing_lines, lo_b, hi_b, u, v)
            out.append(
                Trapezoid(u, v, lo_b, hi_b, crossing, cell.below_count + below.size)
            )
    return out


def build_cutting(lines: Sequence[DualLine], cell: Trapezoid, r: int = 2,
                  seed: int = 0, _arrays=None) -> list[Trapezoid]:
    """(1/r)-cutting of `cell` for its crossing lines: a partition into
    trapezoids each crossed by at most |crossing|/r lines. Randomized sample
    with deterministic verification and retry."""
    if r != 2:
        raise ValueError("this implementation fixes r = 2")
    A, B = _arrays if _arrays is not None else _as_arrays(lines)
    S = np.asarray(cell.crossing_lines)
    m = S.size
    if m <= 1:
        return [cell]
    rng = np.random.default_rng(seed)
    for attempt in range(64):
        s = min(m, 6 + 2 * (attempt // 8))
        sample = rng.choice(S, size=s, replace=False)
        cells = _decompose(A, B, cell, sample)
        if all(2 * c.crossing_lines.size <= m for c in cells):
            return cells
    raise DegeneracyError(f"no verified 1/2-cutting after 64 attempts (m={m})")


def median_level_crossings(cells: Sequence[Trapezoid], Vstar: Sequence[DualLine],
                           below_offset: int = 0, total: Optional[int] = None,
                           _arrays=None) -> list[Point]:
    """All points where the median level crosses the boundary edges of the
    given trapezoids."""
    A, B = _arrays if _arrays is not None else _as_arrays(Vstar)
    if total is None:
        total = below_offset + len(A)
    k_global = (total - 1) // 2
    k_loc = k_global - below_offset
    pts: dict[tuple[float, float], None] = {}
    for c in cells:
        for xb in (c.x_lo, c.x_hi):
            if not math.isfinite(xb):
                continue
            val = _level_value(A, B, k_loc, xb)
            if c.bottom is not None and val < c.bottom.value(xb):
                continue
            if c.top is not None and val > c.top.value(xb):
                continue
            pts[(xb, val)] = None
        for e in (c.bottom, c.top):
            if e is None:
                continue
            for t in _edge_crossings(A, B, k_global, below_offset, e.a, e.b,
                                     c.x_lo, c.x_hi, c.crossing_lines):
                pts[(t, e.value(t))] = None
    return [Point(p) for p in pts]


# ---------------------------------------------------------------------------
# The recursive dual solver
# ---------------------------------------------------------------------------


def _phi_endpoint(x: float, lower: bool) -> float:
    """Map a branch-i abscissa endpoint to the corresponding branch-(i+1)
    endpoint (the orientation shift theta -> theta + pi/3 on cot scale)."""
    if math.isinf(x):
        return INV_SQRT3
    den = SQRT3 * x + 1.0
    if den == 0.0:
        return -_INF if lower else _INF
    return (x - SQRT3) / den


def _theta_of(x: float, branch: int) -> float:
    t = math.atan2(1.0, x) - branch * PI3
    return min(max(t, 0.0), PI3)


def _restrict(A, B, trap: Trapezoid, xl: float, xr: float) -> Trapezoid:
    nxl = max(trap.x_lo, xl)
    nxr = min(trap.x_hi, xr)
    if nxl > nxr:
        nxl = nxr = 0.5 * (nxl + nxr)
    below, above, crossing = _classify(A, B, trap.crossing_lines, trap.bottom, trap.top, nxl, nxr)
    return Trapezoid(nxl, nxr, trap.bottom, trap.top, crossing, trap.below_count + below.size)


def concurrent_triple_fast(V: VoterSet) -> BalancedTriple:
    """Concurrent balanced triple via the dual median-level algorithm."""
    if V.dim != 2:
        raise ValueError("balanced triples are planar")
    W = reduce_to_odd(V)
    n = W.n
    if n < 32:
        # constant-size instances: the sweep solver is simpler and exact
        return concurrent_triple_bisection(W)
    s0 = _defect_sign(W, 0.0)
    if s0 == 0:
        return _triple_at(W, 0.0)
    s1 = _defect_sign(W, PI3)
    if s1 == 0:
        return _triple_at(W, PI3)
    if s1 == s0:
        return concurrent_triple_bisection(W)
    A = np.ascontiguousarray(W.array[:, 0])
    B = np.ascontiguousarray(W.array[:, 1])
    duals = [DualLine(float(a), float(b)) for a, b in zip(A, B)]
    k_global = (n - 1) // 2
    traps = [
        Trapezoid(b_lo, b_hi, None, None, np.arange(n), 0)
        for b_lo, b_hi in _BRANCH_BOUNDS
    ]
    # sign bookkeeping: theta endpoints carry fixed signs s_lo (theta low,
    # i.e. large abscissa on branch 1) and s_hi
    s_theta_lo, s_theta_hi = s0, s1
    seed = 0x5EED
    for _ in range(300):
        sizes = [t.crossing_lines.size for t in traps]
        istar = int(np.argmax(sizes))
        m = sizes[istar]
        if m <= 4:
            break
        T = traps[istar]
        cells = build_cutting(duals, T, 2, seed=seed, _arrays=(A, B))
        seed += 1
        xs = set()
        edges = set()
        for c in cells:
            for xb in (c.x_lo, c.x_hi):
                if math.isfinite(xb) and T.x_lo < xb < T.x_hi:
                    xs.add(float(xb))
            for e in (c.bottom, c.top):
                if e is not None:
                    edges.add((e.a, e.b))
        for ae, be in edges:
            clip = _clip_to_band(ae, be, T)
            if clip is None:
                continue
            for t in _edge_crossings(A, B, k_global, 0, ae, be, clip[0], clip[1],
                                     T.crossing_lines):
                if T.x_lo < t < T.x_hi:
                    xs.add(t)
        X = sorted(xs)
        # binary search: x_lo end of T corresponds to the high-theta end
        s_left = s_theta_hi
        lo_i, hi_i = -1, len(X)
        exact = None
        while hi_i - lo_i > 1:
            mid = (lo_i + hi_i) // 2
            s = _defect_sign(W, _theta_of(X[mid], istar))
            if s == 0:
                exact = X[mid]
                break
            if s == s_left:
                lo_i = mid
            else:
                hi_i = mid
        if exact is not None:
            return _triple_at(W, _theta_of(exact, istar))
        xL = X[lo_i] if lo_i >= 0 else T.x_lo
        xR = X[hi_i] if hi_i < len(X) else T.x_hi
        # cell of the cutting containing the level over (xL, xR)
        xe = _interior_point(xL, xR)
        ye = _level_value(A, B, k_global, xe)
        chosen = None
        for c in cells:
            if not (c.x_lo <= xe <= c.x_hi):
                continue
            if c.bottom is not None and ye < c.bottom.value(xe):
                continue
            if c.top is not None and ye > c.top.value(xe):
                continue
            chosen = c
            break
        if chosen is None:  # numerical boundary tie: keep the old bounds
            chosen = T
        traps[istar] = _restrict(A, B, chosen, xL, xR)
        rng = (traps[istar].x_lo, traps[istar].x_hi)
        j = istar
        for _step in range(2):
            mapped = (_phi_endpoint(rng[0], True), _phi_endpoint(rng[1], False))
            j = (j + 1) % 3
            blo, bhi = _BRANCH_BOUNDS[j]
            mapped = (max(mapped[0], blo), min(mapped[1], bhi))
            traps[j] = _restrict(A, B, traps[j], mapped[0], mapped[1])
            rng = (traps[j].x_lo, traps[j].x_hi)
    th_lo = _theta_of(traps[0].x_hi, 0)
    th_hi = _theta_of(traps[0].x_lo, 0)
    if th_lo > th_hi:
        th_lo, th_hi = th_hi, th_lo
    return _refine_and_snap(W, th_lo, th_hi, s_theta_lo, 1e-13)


def planar_point(V: VoterSet) -> Point:
    """A point with beta(p, V) >= sqrt(3)/2, via the fast solver with the
    bisection solver as fallback."""
    try:
        triple = concurrent_triple_fast(V)
    except DegeneracyError:
        triple = concurrent_triple_bisection(V)
    return triple.point
