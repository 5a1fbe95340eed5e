"""Approximating the best achievable advantage factor beta(V).

Candidates come from exponential grids: around each voter, cones of opening
eps/(2 sqrt(d)) that contain another voter spawn spheres at geometrically
spaced radii; the grid vertices are the intersections of the cone-frame rays
with those spheres. Some candidate is then guaranteed to carry a beta within
(1 - eps/2) of the optimum, and deciding each candidate to precision eps/2
yields a point p with beta(p, V) >= (1 - eps) * beta(V).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .geometry_core import (
    Cone,
    Point,
    VoterSet,
    cone_membership_margin,
    cone_partition,
)
from .decision import BetaBracket, approx_beta_of_point, approx_decide
from .kernels import decide_many

_BOUNDARY_MARGIN = 1e-12
_MAX_GRID_POINTS = 5e7


@dataclass
class ExpGrid:
    """Exponential grid of one voter: qualifying cones, their shell radii and
    the resulting vertex cloud (center first, exact duplicates removed)."""

    center: Point
    center_index: int
    cones: list[Cone]
    d_C: list[float]
    radii: list[np.ndarray]
    vertices: np.ndarray  # (m, d) float; row 0 is the center
    provenance: np.ndarray  # (m, 2) int: (cone index, shell index); (-1, -1) = center
    rotation: np.ndarray  # frame rotation (canonical -> world)

    @property
    def vertex_points(self) -> list[Point]:
        return [Point(tuple(row)) for row in self.vertices]


@dataclass
class CandidateSet:
    """P = union of the per-voter grids, globally deduplicated by exact
    coordinate equality (keeping the first occurrence)."""

    coords: np.ndarray  # (m, d)
    provenance: np.ndarray  # (m, 3) int: (voter, cone, shell); cone = shell = -1 for centers

    @property
    def size(self) -> int:
        return int(self.coords.shape[0])

    @property
    def points(self) -> list[Point]:
        return [Point(tuple(row)) for row in self.coords]


@dataclass(frozen=True)
class BestPointResult:
    point: Point
    beta_hat: float
    bracket: BetaBracket


def _shell_radii(eps: float, d_C: float) -> np.ndarray:
    """Radii (1+eps/4)^k * eps * d_C for k = 0..K, spanning eps*d_C to >= d_C/eps."""
    K = int(math.ceil(math.log(1.0 / eps**2) / math.log1p(eps / 4.0)))
    return eps * d_C * (1.0 + eps / 4.0) ** np.arange(K + 1)


def _random_rotation(d: int, rng: np.random.Generator) -> np.ndarray:
    q, r = np.linalg.qr(rng.standard_normal((d, d)))
    return q * np.sign(np.diag(r))


def _frame_rays(cones: list[Cone], d: int) -> np.ndarray:
    """The extreme rays of the cone frame, as unit row vectors."""
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        k = len(cones)
        ang = 2.0 * math.pi * np.arange(k) / k
        return np.column_stack([np.cos(ang), np.sin(ang)])
    seen = {}
    for c in cones:
        _, face_axis, sign, idx, m = c.rep
        h = 2.0 / m
        other = [k for k in range(d) if k != face_axis]
        for corner in range(1 << (d - 1)):
            v = np.empty(d)
            v[face_axis] = sign
            for t, k in enumerate(other):
                v[k] = -1.0 + (idx[t] + (1.0 if (corner >> t) & 1 else 0.0)) * h
            u = v / np.linalg.norm(v)
            seen[tuple(np.round(u, 12))] = u
    return np.array(list(seen.values()))


def _assign_cones(cones, dirs: np.ndarray, d: int):
    """Cone index and boundary margin per unit direction (canonical frame)."""
    if d == 2:
        k = len(cones)
        w = 2.0 * math.pi / k
        ang = np.mod(np.arctan2(dirs[:, 1], dirs[:, 0]), 2.0 * math.pi)
        idx = np.minimum((ang // w).astype(int), k - 1)
        margin = np.minimum(ang - idx * w, (idx + 1) * w - ang)
        return idx, margin
    idx = np.empty(len(dirs), dtype=int)
    margin = np.empty(len(dirs))
    for t, u in enumerate(dirs):
        best, best_m = -1, -math.inf
        for ci, c in enumerate(cones):
            mg = cone_membership_margin(c, u)
            if mg > best_m:
                best, best_m = ci, mg
        idx[t] = best
        margin[t] = best_m
    return idx, margin


def exponential_grid(V: VoterSet, i: int, eps: float) -> ExpGrid:
    """The exponential grid of voter i at accuracy eps."""
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must be in (0, 1/2]")
    d = V.dim
    vi = V.array[i]
    diffs = V.array - vi
    dist = np.linalg.norm(diffs, axis=1)
    noncoinc = np.nonzero(dist > 0.0)[0]
    opening = eps / (2.0 * math.sqrt(d))
    frame = cone_partition(d, opening)
    rays = _frame_rays(frame, d)
    rotation = np.eye(d)
    if noncoinc.size:
        dirs_world = diffs[noncoinc] / dist[noncoinc, None]
        for attempt in range(8):
            if attempt:
                rotation = _random_rotation(d, np.random.default_rng(1000003 * (i + 1) + attempt))
            dirs = dirs_world @ rotation  # world -> canonical frame coordinates
            assign, margin = _assign_cones(frame, dirs, d)
            if float(margin.min()) >= _BOUNDARY_MARGIN or attempt == 7:
                break
    else:
        assign = np.empty(0, dtype=int)

    cones: list[Cone] = []
    d_Cs: list[float] = []
    radii: list[np.ndarray] = []
    blocks = [vi[None, :]]
    provs = [np.array([[-1, -1]], dtype=np.int64)]
    rays_world = rays @ rotation.T
    est = 0.0
    for ci in sorted(set(int(a) for a in assign)):
        members = noncoinc[assign == ci]
        dC = float(dist[members].min())
        rr = _shell_radii(eps, dC)
        est += rr.size * len(rays_world)
        if est > _MAX_GRID_POINTS:
            raise ValueError(
                f"exponential grid of voter {i} at eps={eps:g} needs more than "
                f"{_MAX_GRID_POINTS:.0e} vertices; refusing to build it"
            )
        cone = Cone(Point(tuple(vi)), frame[ci].axis, frame[ci].half_angle, frame[ci].rep)
        k = len(cones)
        cones.append(cone)
        d_Cs.append(dC)
        radii.append(rr)
        verts = (vi[None, None, :] + rr[:, None, None] * rays_world[None, :, :]).reshape(-1, d)
        prov = np.empty((verts.shape[0], 2), dtype=np.int64)
        prov[:, 0] = k
        prov[:, 1] = np.repeat(np.arange(rr.size), len(rays_world))
        blocks.append(verts)
        provs.append(prov)
    vertices = np.vstack(blocks)
    provenance = np.vstack(provs)
    _, first = np.unique(vertices, axis=0, return_index=True)
    keep = np.sort(first)
    return ExpGrid(
        center=Point(tuple(vi)),
        center_index=i,
        cones=cones,
        d_C=d_Cs,
        radii=radii,
        vertices=vertices[keep],
        provenance=provenance[keep],
        rotation=rotation,
    )


def candidate_set(V: VoterSet, eps: float) -> CandidateSet:
    """The full candidate set P, with per-point provenance."""
    blocks = []
    provs = []
    for i in range(V.n):
        g = exponential_grid(V, i, eps)
        p3 = np.empty((g.vertices.shape[0], 3), dtype=np.int64)
        p3[:, 0] = i
        p3[:, 1:] = g.provenance
        blocks.append(g.vertices)
        provs.append(p3)
    coords = np.vstack(blocks)
    prov = np.vstack(provs)
    _, first = np.unique(coords, axis=0, return_index=True)
    keep = np.sort(first)
    return CandidateSet(coords[keep], prov[keep])


def candidate_count(V: VoterSet, eps: float) -> int:
    """|P| without materializing P.

    Within one voter, two vertices coincide exactly when they share a ray and
    a shell radius, so the per-voter grid size is (#distinct radii) x (#rays)
    plus the center; cross-voter coincidences are not discounted (they are
    measure-zero and the materialized path only removes exact duplicates).
    """
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must be in (0, 1/2]")
    d = V.dim
    opening = eps / (2.0 * math.sqrt(d))
    frame = cone_partition(d, opening)
    n_rays = len(_frame_rays(frame, d))
    total = 0
    for i in range(V.n):
        vi = V.array[i]
        diffs = V.array - vi
        dist = np.linalg.norm(diffs, axis=1)
        noncoinc = np.nonzero(dist > 0.0)[0]
        total += 1  # the center
        if noncoinc.size == 0:
            continue
        dirs = diffs[noncoinc] / dist[noncoinc, None]
        assign, _ = _assign_cones(frame, dirs, d)
        all_radii = [
            _shell_radii(eps, float(dist[noncoinc[assign == ci]].min()))
            for ci in set(int(a) for a in assign)
        ]
        total += int(np.unique(np.concatenate(all_radii)).size) * n_rays
    return total


# ---------------------------------------------------------------------------
# The maximization
# ---------------------------------------------------------------------------


def _bisect_grid_2d(vx, vy, px, py, lo_j: int, L: int, tol: float) -> int:
    """Largest grid index j with an exact yes at j * 2^-L, given yes at lo_j."""
    step = 2.0**-L
    hi_j = 1 << L
    if decide_many(vx, vy, px, py, hi_j * step, tol)[0]:
        return hi_j
    while hi_j - lo_j > 1:
        mid = (lo_j + hi_j) // 2
        if decide_many(vx, vy, px, py, mid * step, tol)[0]:
            lo_j = mid
        else:
            hi_j = mid
    return lo_j


def _approx_best_2d(V: VoterSet, eps: float) -> BestPointResult:
    """Planar path: the per-candidate searches run the exact planar decider
    on a shared dyadic beta grid fine enough for the eps/2 decision budget."""
    eps_half = eps / 2.0
    vx = np.ascontiguousarray(V.array[:, 0])
    vy = np.ascontiguousarray(V.array[:, 1])
    L = int(math.ceil(math.log2(2.0 * math.sqrt(2.0) / eps_half)))
    step = 2.0**-L
    tol = 1e-12
    # beta(V) >= sqrt(3)/2 in the plane, and some candidate attains
    # (1 - eps/2) of beta(V): candidates failing an exact decision below that
    # floor can never be optimal.
    floor_j = max(0, int(math.floor((1.0 - eps_half) * (math.sqrt(3.0) / 2.0) / step)) - 1)
    best_j: Optional[int] = None
    best_point: Optional[np.ndarray] = None
    for i in range(V.n):
        g = exponential_grid(V, i, eps_half)
        pts = g.vertices
        thresh_j = floor_j if best_j is None else max(floor_j, best_j + 1)
        ok = decide_many(vx, vy, pts[:, 0], pts[:, 1], thresh_j * step, tol)
        for t in np.nonzero(ok)[0]:
            px, py = pts[t, 0], pts[t, 1]
            cur_j = floor_j if best_j is None else max(floor_j, best_j + 1)
            if cur_j > thresh_j and not decide_many(vx, vy, px, py, cur_j * step, tol)[0]:
                continue
            j = _bisect_grid_2d(vx, vy, px, py, cur_j, L, tol)
            if best_j is None or j > best_j:
                best_j = j
                best_point = pts[t].copy()
    if best_j is None:
        # numerically conservative fallback: evaluate the voters themselves
        for i in range(V.n):
            j = 0
            while j < (1 << L) and decide_many(
                vx, vy, V.array[i, 0], V.array[i, 1], (j + 1) * step, tol
            )[0]:
                j += 1
            if best_j is None or j > best_j:
                best_j, best_point = j, V.array[i].copy()
    lo = min(best_j * step, 1.0)
    hi = min((best_j + 1) * step, 1.0)
    bracket = BetaBracket(lo, hi)
    return BestPointResult(Point(tuple(best_point)), bracket.lo, bracket)


def _approx_best_general(V: VoterSet, eps: float) -> BestPointResult:
    eps_half = eps / 2.0
    d = V.dim
    # the sampled decision is only defined for beta >= 1/sqrt(d), so screen
    # there; the coordinate-median seed below certifies at least that level,
    # which already meets (1 - eps) * beta(V) whenever beta(V) is close to it
    floor = 1.0 / math.sqrt(d)
    from .median_point import median_point

    best: Optional[BestPointResult] = None
    for p in [median_point(V)] + [Point(tuple(row)) for row in V.array]:
        bracket = approx_beta_of_point(p=p, V=V, eps=eps_half)
        if best is None or bracket.lo > best.bracket.lo:
            best = BestPointResult(p, bracket.lo, bracket)
    cand = np.unique(
        np.vstack([exponential_grid(V, i, eps_half).vertices for i in range(V.n)]),
        axis=0,
    )
    # sound pre-screen against the incumbent: a voter-competitor that beats
    # the candidate outright at the incumbent's certified level proves the
    # candidate can never improve on it
    VV = np.linalg.norm(V.array[:, None, :] - V.array[None, :, :], axis=2)
    chunk = max(1, int(2e6 // max(V.n * V.n, 1)))
    half_n = V.n / 2.0
    for s in range(0, cand.shape[0], chunk):
        block = cand[s : s + chunk]
        lvl = max(floor, best.bracket.lo)
        dp = np.linalg.norm(block[:, None, :] - V.array[None, :, :], axis=2)
        wins = (VV[None, :, :] < lvl * dp[:, None, :]).sum(axis=2)
        for t in np.nonzero(wins.max(axis=1) <= half_n)[0]:
            p = Point(tuple(block[t]))
            screen = max(floor, best.bracket.lo)
            if not approx_decide(V, p, screen, eps_half).is_yes:
                continue
            bracket = approx_beta_of_point(p=p, V=V, eps=eps_half)
            if bracket.lo > best.bracket.lo:
                best = BestPointResult(p, bracket.lo, bracket)
    return best


def approx_best_point(V: VoterSet, eps: float) -> BestPointResult:
    """A point p with beta(p, V) >= (1 - eps) * beta(V), drawn from the
    candidate set; ties between equally good candidates go to the first one
    generated (voter order, then grid order)."""
    if not 0.0 < eps <= 0.5:
        raise ValueError("eps must be in (0, 1/2]")
    if V.n == 1:
        p = Point(tuple(V.array[0]))
        return BestPointResult(p, 1.0, BetaBracket(1.0, 1.0))
    if V.dim == 2:
        return _approx_best_2d(V, eps)
    return _approx_best_general(V, eps)
