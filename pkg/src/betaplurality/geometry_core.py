"""Shared geometric primitives: points, voter multisets, planar lines, cones,
sphere coverings and the robust predicates used by every solver in the package.

All types are immutable values; every function here is pure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property

import numpy as np

# Comparisons of two distances are done with this relative tolerance;
# equality within the band counts as a tie.
TIE_RTOL = 1e-12

# side_of falls back to exact rational arithmetic below this relative margin.
SIDE_RTOL = 1e-9


class Side(Enum):
    LEFT = "left"
    ON = "on"
    RIGHT = "right"


@dataclass(frozen=True)
class Point:
    """A location in R^d (voter, candidate or competitor)."""

    coords: tuple[float, ...]

    def __post_init__(self):
        coords = tuple(float(c) for c in self.coords)
        if len(coords) < 1:
            raise ValueError("a point needs at least one coordinate")
        if not all(math.isfinite(c) for c in coords):
            raise ValueError(f"non-finite coordinate in {coords}")
        object.__setattr__(self, "coords", coords)

    @staticmethod
    def of(*coords: float) -> "Point":
        return Point(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def __getitem__(self, i: int) -> float:
        return self.coords[i]

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)


class VoterSet:
    """A dimension-tagged multiset of voter points.

    Duplicates are allowed; the input order is the deterministic tie-break key
    used everywhere (median picks, the even-n voter deletion, ...).
    """

    def __init__(self, dim: int, coords: np.ndarray):
        coords = np.asarray(coords, dtype=float)
        if coords.ndim != 2 or coords.shape[1] != dim:
            raise ValueError(f"expected an (n, {dim}) coordinate array")
        if coords.shape[0] < 1:
            raise ValueError("a voter set needs at least one voter")
        if dim < 1:
            raise ValueError("dimension must be >= 1")
        if not np.isfinite(coords).all():
            raise ValueError("non-finite voter coordinate")
        self._dim = int(dim)
        self._coords = coords
        self._coords.setflags(write=False)

    @classmethod
    def from_points(cls, points) -> "VoterSet":
        points = list(points)
        if not points:
            raise ValueError("a voter set needs at least one voter")
        dim = points[0].dim
        if any(p.dim != dim for p in points):
            raise ValueError("voters of mixed dimension")
        return cls(dim, np.array([p.coords for p in points], dtype=float))

    @classmethod
    def from_array(cls, coords) -> "VoterSet":
        coords = np.asarray(coords, dtype=float)
        return cls(coords.shape[1], coords)

    @property
    def dim(self) -> int:
        return self._dim

    @property
    def n(self) -> int:
        return self._coords.shape[0]

    @property
    def array(self) -> np.ndarray:
        return self._coords

    @cached_property
    def voters(self) -> tuple[Point, ...]:
        return tuple(Point(tuple(row)) for row in self._coords)

    @cached_property
    def diameter(self) -> float:
        """Diagonal of the bounding box: a cheap 1..sqrt(d) proxy for the true
        diameter, used only to scale tolerances."""
        span = self._coords.max(axis=0) - self._coords.min(axis=0)
        return float(np.linalg.norm(span))

    def __eq__(self, other):
        return (
            isinstance(other, VoterSet)
            and self._dim == other._dim
            and self._coords.shape == other._coords.shape
            and bool((self._coords == other._coords).all())
        )

    def __repr__(self):
        return f"VoterSet(dim={self._dim}, n={self.n})"

    def drop_last(self) -> "VoterSet":
        """The deterministic even-n reduction: delete the voter with the
        largest input index. Scoped to balanced-line computations."""
        if self.n < 2:
            raise ValueError("cannot drop a voter from a singleton set")
        return VoterSet(self._dim, self._coords[:-1])


def reduce_to_odd(V: VoterSet) -> VoterSet:
    return V.drop_last() if V.n % 2 == 0 else V


@dataclass(frozen=True)
class Line2:
    """A planar line given by its orientation angle (counterclockwise from the
    positive y-axis, in [0, pi)) and a point on it."""

    theta: float
    anchor: Point

    def __post_init__(self):
        if not (0.0 <= self.theta < math.pi):
            raise ValueError(f"theta={self.theta} outside [0, pi)")
        if self.anchor.dim != 2:
            raise ValueError("anchor must be planar")

    @property
    def direction(self) -> tuple[float, float]:
        return (-math.sin(self.theta), math.cos(self.theta))

    @property
    def normal(self) -> tuple[float, float]:
        return (math.cos(self.theta), math.sin(self.theta))

    @property
    def offset(self) -> float:
        """Signed offset c with the line being {x : <x, normal> = c}."""
        nx, ny = self.normal
        return nx * self.anchor[0] + ny * self.anchor[1]


@dataclass(frozen=True)
class Cone:
    """A cone with apex, central axis and a half-angle bound; `rep` carries the
    exact membership region used by the partition (angular sector in the plane,
    projected cube-face cell in higher dimension, half-line for d = 1)."""

    apex: Point
    axis: tuple[float, ...]
    half_angle: float
    rep: tuple = None

    def __post_init__(self):
        a = np.asarray(self.axis, dtype=float)
        if abs(np.linalg.norm(a) - 1.0) > 1e-12:
            raise ValueError("axis must be a unit vector")
        if self.half_angle <= 0:
            raise ValueError("half_angle must be positive")

    def contains_direction(self, u) -> bool:
        return cone_membership_margin(self, u) >= 0.0

    @property
    def dim(self) -> int:
        return self.apex.dim


def distance(a: Point, b: Point) -> float:
    """Euclidean distance between two points of equal dimension."""
    if a.dim != b.dim:
        raise ValueError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return math.dist(a.coords, b.coords)


def _median_order_index(values: np.ndarray) -> int:
    """Index of the lower-median element, ties broken by input position."""
    n = len(values)
    k = (n - 1) // 2
    med = np.partition(values, k)[k]
    return int(np.nonzero(values == med)[0][0])


def balanced_line_with_pivot(V: VoterSet, theta: float) -> tuple[Line2, int]:
    """Balanced line of orientation theta together with the index (into the
    odd-reduced voter list) of the voter it pivots on."""
    if V.dim != 2:
        raise ValueError("balanced lines are planar")
    W = reduce_to_odd(V)
    nx, ny = math.cos(theta), math.sin(theta)
    proj = W.array[:, 0] * nx + W.array[:, 1] * ny
    pivot = _median_order_index(proj)
    anchor = Point(tuple(W.array[pivot]))
    return Line2(theta % math.pi, anchor), pivot


def balanced_line(V: VoterSet, theta: float) -> Line2:
    """The unique balanced line of orientation theta (after the deterministic
    odd-n reduction): the line through the median of the voters projected onto
    the direction orthogonal to the line."""
    return balanced_line_with_pivot(V, theta)[0]


def _exact_cross_sign(dx: float, dy: float, wx: float, wy: float) -> int:
    cross = Fraction(dx) * Fraction(wy) - Fraction(dy) * Fraction(wx)
    if cross > 0:
        return 1
    if cross < 0:
        return -1
    return 0


def side_of(line: Line2, p: Point, tol_rel: float = SIDE_RTOL) -> Side:
    """Classify p against the directed line (direction = orientation angle).

    Near-zero cross products (relative to the point's offset scale) are
    re-evaluated with exact rational arithmetic over the double inputs.
    """
    if p.dim != 2:
        raise ValueError("side_of is planar")
    dx, dy = line.direction
    wx = p[0] - line.anchor[0]
    wy = p[1] - line.anchor[1]
    cross = dx * wy - dy * wx
    scale = math.hypot(wx, wy)
    if abs(cross) <= tol_rel * max(scale, 1e-300):
        sign = _exact_cross_sign(dx, dy, wx, wy)
        if sign == 0 or abs(cross) <= 1e-15 * max(scale, 1e-300):
            # Exact zero, or so close that the double inputs cannot support a
            # meaningful sign: treat as on the line.
            return Side.ON
        return Side.LEFT if sign > 0 else Side.RIGHT
    return Side.LEFT if cross > 0 else Side.RIGHT


# ---------------------------------------------------------------------------
# Cone partitions of R^d
# ---------------------------------------------------------------------------


def _face_cell_axis(d: int, face_axis: int, sign: int, idx: np.ndarray, m: int):
    """Unit axis and half-angle of the cube-face cell cone."""
    h = 2.0 / m
    center = np.empty(d)
    other = [k for k in range(d) if k != face_axis]
    center[face_axis] = sign
    for t, k in enumerate(other):
        center[k] = -1.0 + (idx[t] + 0.5) * h
    axis = center / np.linalg.norm(center)
    # worst corner of the cell
    worst = 0.0
    for corner in range(1 << (d - 1)):
        c = center.copy()
        for t, k in enumerate(other):
            c[k] = -1.0 + (idx[t] + (1.0 if (corner >> t) & 1 else 0.0)) * h
        u = c / np.linalg.norm(c)
        worst = max(worst, math.acos(np.clip(np.dot(axis, u), -1.0, 1.0)))
    return tuple(axis), max(worst, 1e-9)


def cone_partition(d: int, opening: float) -> list[Cone]:
    """Partition R^d into cones with apex at the origin such that any two
    directions in one cone subtend an angle of at most `opening`.

    d = 1 gives the two half-lines, d = 2 equal angular sectors, and d >= 3 a
    grid on the faces of the unit cube projected to the sphere.
    """
    if d >= 2 and not (0.0 < opening < math.pi / 2):
        raise ValueError("opening must be in (0, pi/2)")
    origin = Point(tuple([0.0] * d))
    if d == 1:
        return [
            Cone(origin, (1.0,), opening / 2, rep=("halfline", 1)),
            Cone(origin, (-1.0,), opening / 2, rep=("halfline", -1)),
        ]
    if d == 2:
        k = max(4, int(math.ceil(2 * math.pi / opening)))
        w = 2 * math.pi / k
        cones = []
        for i in range(k):
            a = i * w
            mid = a + w / 2
            cones.append(
                Cone(
                    origin,
                    (math.cos(mid), math.sin(mid)),
                    w / 2,
                    rep=("sector", a, a + w),
                )
            )
        return cones
    # d >= 3: chord bound |u - u'| <= h*sqrt(d-1) on a face cell, and
    # angle <= 1.11 * chord for chords below ~1.
    m = max(1, int(math.ceil(2.3 * math.sqrt(d - 1) / opening)))
    cones = []
    for face_axis in range(d):
        for sign in (1, -1):
            for flat in range(m ** (d - 1)):
                idx = np.empty(d - 1, dtype=int)
                f = flat
                for t in range(d - 1):
                    idx[t] = f % m
                    f //= m
                axis, half = _face_cell_axis(d, face_axis, sign, idx, m)
                cones.append(
                    Cone(
                        origin,
                        axis,
                        min(half, opening / 2),
                        rep=("face", face_axis, sign, tuple(idx), m),
                    )
                )
    return cones


def cone_membership_margin(cone: Cone, u) -> float:
    """Signed relative margin of direction u w.r.t. the cone's region:
    positive inside, negative outside, near zero on the boundary."""
    u = np.asarray(u, dtype=float)
    norm = np.linalg.norm(u)
    if norm == 0.0:
        return -1.0
    u = u / norm
    kind = cone.rep[0]
    if kind == "halfline":
        return float(u[0] * cone.rep[1])
    if kind == "sector":
        _, a0, a1 = cone.rep
        ang = math.atan2(u[1], u[0]) % (2 * math.pi)
        for shift in (0.0, 2 * math.pi, -2 * math.pi):
            t = ang + shift
            if a0 - 1e-9 <= t <= a1 + 1e-9:
                return min(t - a0, a1 - t)
        return -min(abs(ang - a0) % (2 * math.pi), abs(a1 - ang) % (2 * math.pi))
    # cube-face cell
    _, face_axis, sign, idx, m = cone.rep
    h = 2.0 / m
    vals = np.abs(u)
    if u[face_axis] * sign <= 0:
        return -1.0
    top = vals[face_axis]
    rest = np.delete(vals, face_axis)
    face_margin = (top - rest.max()) if rest.size else top
    x = u / (u[face_axis] * sign)  # scale so the face coordinate is +-1
    other = [k for k in range(u.size) if k != face_axis]
    cell_margin = math.inf
    for t, k in enumerate(other):
        lo = -1.0 + idx[t] * h
        hi = lo + h
        cell_margin = min(cell_margin, x[k] - lo, hi - x[k])
    return float(min(face_margin, cell_margin))


def find_cone(cones: list[Cone], u) -> int:
    """Index of a cone whose region contains direction u (-1 if none)."""
    best, best_m = -1, -math.inf
    for i, c in enumerate(cones):
        mgn = cone_membership_margin(c, u)
        if mgn >= 0.0:
            return i
        if mgn > best_m:
            best, best_m = i, mgn
    return best if best_m > -1e-12 else -1


# ---------------------------------------------------------------------------
# Sphere coverings
# ---------------------------------------------------------------------------


def sphere_cover(d: int, covering_radius: float) -> np.ndarray:
    """Unit vectors such that every point of the unit (d-1)-sphere is within
    `covering_radius` (Euclidean) of one of them. Returns an (m, d) array."""
    if covering_radius <= 0:
        raise ValueError("covering_radius must be positive")
    if d == 1:
        return np.array([[1.0], [-1.0]])
    if d == 2:
        half = min(1.0, covering_radius / 2.0)
        k = max(1, int(math.ceil(2 * math.pi / (2 * math.asin(half)))))
        ang = 2 * math.pi * np.arange(k) / k
        return np.column_stack([np.cos(ang), np.sin(ang)])
    m = int(math.ceil(math.sqrt(d - 1) / covering_radius)) + 1
    est = 2 * d * m ** (d - 1)
    if est > 5e7:
        raise ValueError(
            f"sphere cover of dimension {d} at radius {covering_radius:g} "
            f"needs ~{est:.2g} points; refusing to build it"
        )
    ticks = np.linspace(-1.0, 1.0, m)
    grids = np.meshgrid(*([ticks] * (d - 1)), indexing="ij")
    flat = np.column_stack([g.ravel() for g in grids])
    pts = []
    for axis in range(d):
        for sign in (1.0, -1.0):
            face = np.empty((flat.shape[0], d))
            other = [k for k in range(d) if k != axis]
            face[:, axis] = sign
            face[:, other] = flat
            pts.append(face)
    pts = np.vstack(pts)
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return np.unique(pts, axis=0)


# ---------------------------------------------------------------------------
# Convex hull membership
# ---------------------------------------------------------------------------


def _hull_2d_exact(coords: np.ndarray):
    """Monotone-chain hull over exact rationals; returns hull vertices as
    Fractions, counterclockwise."""
    pts = sorted({(Fraction(x), Fraction(y)) for x, y in coords})
    if len(pts) <= 2:
        return pts

    def cross(o, a, b):
        return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])

    lower = []
    for p in pts:
        while len(lower) >= 2 and cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper = []
    for p in reversed(pts):
        while len(upper) >= 2 and cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def in_convex_hull(V: VoterSet, p: Point) -> bool:
    """Closed-hull membership: exact for d <= 2, a linear feasibility test
    (scipy) for d >= 3."""
    if p.dim != V.dim:
        raise ValueError("dimension mismatch")
    if V.dim == 1:
        xs = V.array[:, 0]
        return bool(xs.min() <= p[0] <= xs.max())
    if V.dim == 2:
        hull = _hull_2d_exact(V.array)
        q = (Fraction(p[0]), Fraction(p[1]))
        if len(hull) == 1:
            return q == hull[0]
        if len(hull) == 2:
            a, b = hull
            cr = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
            if cr != 0:
                return False
            dot = (q[0] - a[0]) * (b[0] - a[0]) + (q[1] - a[1]) * (b[1] - a[1])
            l2 = (b[0] - a[0]) ** 2 + (b[1] - a[1]) ** 2
            return 0 <= dot <= l2
        for i in range(len(hull)):
            a = hull[i]
            b = hull[(i + 1) % len(hull)]
            cr = (b[0] - a[0]) * (q[1] - a[1]) - (b[1] - a[1]) * (q[0] - a[0])
            if cr < 0:
                return False
        return True
    from scipy.optimize import linprog

    n, d = V.array.shape
    A_eq = np.vstack([V.array.T, np.ones(n)])
    b_eq = np.append(p.array, 1.0)
    res = linprog(np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs")
    return bool(res.status == 0)
