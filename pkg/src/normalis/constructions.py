"""Point-set generators: extremal planar sets and extremal sphere sets."""

from __future__ import annotations

import itertools
import logging
import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .exceptions import (
    BadParameter,
    DegenerateHull,
    DuplicateAngle,
    InfeasibleSideLength,
    NoTriangularFace,
)
from .geometry import PointSet, Space, Tolerance, tangent_basis
from .spherical import delaunay_tiling, hull_faces

log = logging.getLogger(__name__)

GOLDEN_ANGLE = math.pi * (3.0 - math.sqrt(5.0))
MAX_HALVINGS = 60


def _plane(X, tol=None) -> PointSet:
    return PointSet.from_array(np.asarray(X, dtype=float), Space.PLANE, tol)


def _sphere(X, tol=None) -> PointSet:
    return PointSet.from_array(np.asarray(X, dtype=float), Space.SPHERE, tol)


# ------------------------------------------------------------------- plane


def regular_polygon(n: int) -> PointSet:
    """Regular ``n``-gon with unit circumradius, first vertex at angle ``pi/n``."""
    if int(n) != n or n < 3:
        raise BadParameter(f"regular_polygon needs an integer n >= 3, got {n!r}")
    n = int(n)
    th = math.pi / n + 2 * math.pi * np.arange(n) / n
    return _plane(np.c_[np.cos(th), np.sin(th)])


def planar_odd_extremal(n: int) -> PointSet:
    """Odd ``n``: a regular ``(n-1)``-gon plus its centre (``n = 3`` gives a
    triangle).  Attains ``3 * (n // 2)`` double normals."""
    if int(n) != n or n < 3 or n % 2 == 0:
        raise BadParameter(f"planar_odd_extremal needs an odd n >= 3, got {n!r}")
    n = int(n)
    if n == 3:
        return regular_polygon(3)
    P = regular_polygon(n - 1).points
    return _plane(np.vstack([P, [0.0, 0.0]]))


def symmetric_circle_set(angles, degrees: bool = True) -> PointSet:
    """Points ``+-(cos t, sin t)`` on the unit circle for each angle ``t``."""
    th = np.asarray(list(angles), dtype=float).ravel()
    if th.size == 0:
        raise BadParameter("at least one angle is required")
    if degrees:
        th = np.radians(th)
    red = np.mod(th, math.pi)
    for i, j in itertools.combinations(range(len(red)), 2):
        gap = abs(red[i] - red[j])
        if min(gap, math.pi - gap) < 1e-12:
            raise DuplicateAngle(f"angles {th[i]!r} and {th[j]!r} coincide modulo pi")
    U = np.c_[np.cos(th), np.sin(th)]
    return _plane(np.vstack([U, -U]))


def seven_point_example() -> PointSet:
    """Seven points (labelled a..g) with 9 double normals that are not of
    the "polygon plus one point" type.

    ``abde`` and ``bcfg`` are rectangles; the double-normal edges are
    ad, ae, bd, be, bf, bg, cf, cg and dg.
    """
    return _plane(
        [(-1, 0), (0, 0), (0.4, -0.96), (0, -2.75), (-1, -2.75), (-2, -1.96), (-2.4, -1)]
    )


SEVEN_POINT_LABELS = "abcdefg"


# ------------------------------------------------------------------ sphere


def cube_vertices() -> PointSet:
    return _sphere(np.array(list(itertools.product((-1.0, 1.0), repeat=3))) / math.sqrt(3))


def octahedron_vertices() -> PointSet:
    return _sphere(np.vstack([np.eye(3), -np.eye(3)]))


def rhombicuboctahedron_vertices() -> PointSet:
    """All permutations of ``(+-1, +-1, +-(1 + sqrt 2))``, normalised."""
    s = 1 + math.sqrt(2)
    pts = set()
    for signs in itertools.product((-1.0, 1.0), repeat=3):
        base = (signs[0], signs[1], signs[2] * s)
        pts.update(itertools.permutations(base))
    X = np.array(sorted(pts))
    return _sphere(X / np.linalg.norm(X, axis=1)[:, None])


def five_point_strict(offset_deg: float = 5.0) -> PointSet:
    """Three equidistant points on the equator and two points on the meridian
    through the third one, at latitudes ``+-offset_deg``."""
    if not 0 < offset_deg < 30:
        raise BadParameter("offset_deg must lie in (0, 30)")
    az = np.radians([0.0, 120.0, 240.0])
    ring = np.c_[np.cos(az), np.sin(az), np.zeros(3)]
    d = math.radians(offset_deg)
    p3 = ring[2]
    p4 = math.cos(d) * p3 + math.sin(d) * np.array([0.0, 0.0, 1.0])
    p5 = math.cos(d) * p3 - math.sin(d) * np.array([0.0, 0.0, 1.0])
    return _sphere(np.vstack([ring, p4, p5]))


@dataclass(frozen=True)
class LayeredParams:
    """``k`` (even, >= 4) sides of the innermost ring, ``m`` (>= 1) rings per
    hemisphere, ``c`` the common chord length (auto-selected when ``None``)."""

    k: int
    m: int
    c: float | None = None

    def __post_init__(self):
        if int(self.k) != self.k or self.k < 4 or self.k % 2:
            raise BadParameter(f"k must be an even integer >= 4, got {self.k!r}")
        if int(self.m) != self.m or self.m < 1:
            raise BadParameter(f"m must be an integer >= 1, got {self.m!r}")
        if self.c is not None and not self.c > 0:
            raise BadParameter(f"c must be positive, got {self.c!r}")

    @property
    def n_points(self) -> int:
        return 2 * (2**self.m - 1) * self.k

    @property
    def c_max(self) -> float:
        """Chord length at which the outermost ring reaches the equator."""
        return 2 * math.sin(math.pi / (2 ** (self.m - 1) * self.k))

    def ring_sizes(self) -> list[int]:
        return [2**i * self.k for i in range(self.m)]

    def polar_angles(self, c: float | None = None) -> list[float]:
        c = self.c if c is None else c
        out = []
        for size in self.ring_sizes():
            arg = c / (2 * math.sin(math.pi / size))
            if arg >= 1:
                raise InfeasibleSideLength(f"chord {c} too long for a {size}-gon on the sphere")
            out.append(math.asin(arg))
        if out[-1] >= math.pi / 2:
            raise InfeasibleSideLength("outermost ring reaches the equator")
        return out

    def expected_census(self) -> dict[int, int]:
        k, m = self.k, self.m
        census = Counter({3: 2 * (2 ** (m - 1) - 1) * k, 4: (2**m + 2 ** (m - 1) - 2) * k})
        census[k] += 2
        return {s: v for s, v in sorted(census.items()) if v}

    def expected_edges(self) -> int:
        return self.k * (2 ** (self.m + 2) + 2 ** (self.m - 1) - 6)

    def expected_double_normals(self) -> int:
        return (2 ** (self.m + 3) + 2 ** (self.m - 1) - 10) * self.k


def _layered_points(params: LayeredParams, c: float) -> np.ndarray:
    rho = params.polar_angles(c)
    rings, offset = [], 0.0
    for i, size in enumerate(params.ring_sizes()):
        if i > 0:
            offset += math.pi / size
        az = offset + 2 * math.pi * np.arange(size) / size
        r = math.sin(rho[i])
        rings.append(np.c_[r * np.cos(az), r * np.sin(az), np.full(size, math.cos(rho[i]))])
    north = np.vstack(rings)
    return np.vstack([north, -north])


def _is_rectangle(P: np.ndarray, eps: float) -> bool:
    d1 = np.linalg.norm(P[0] - P[2])
    d2 = np.linalg.norm(P[1] - P[3])
    s = [np.linalg.norm(P[i] - P[(i + 1) % 4]) for i in range(4)]
    return abs(d1 - d2) <= eps and abs(s[0] - s[2]) <= eps and abs(s[1] - s[3]) <= eps


def layered_census_ok(params: LayeredParams, V: PointSet) -> bool:
    """Hull faces are exactly two ``k``-gons, the expected number of
    triangles and rectangles, and nothing else."""
    try:
        faces = hull_faces(V)
    except DegenerateHull:
        return False
    census = dict(sorted(Counter(len(f.vertices) for f in faces).items()))
    if census != params.expected_census():
        return False
    eps = V.tol.concyclic_eps
    kgons = 0
    for f in faces:
        if len(f.vertices) == 4 and params.k != 4:
            if not _is_rectangle(V.points[list(f.vertices)], eps):
                return False
        if len(f.vertices) == params.k:
            kgons += 1
    if params.k == 4:
        return all(_is_rectangle(V.points[list(f.vertices)], eps) for f in faces if len(f.vertices) == 4)
    return kgons == 2


def layered_construction(params: LayeredParams, tol: Tolerance | None = None) -> PointSet:
    """Rings of regular ``2^i k``-gons around the north pole with a common
    chord length, plus all antipodes; ``2 (2^m - 1) k`` points.

    Each ring is rotated by half its own step against the previous one so
    that the bands between rings alternate triangles and rectangles.  When
    ``params.c`` is ``None`` the chord is halved from ``c_max / 2`` until the
    hull has the expected face structure.
    """
    if params.c is not None:
        V = _sphere(_layered_points(params, params.c), tol)
        return V
    c = params.c_max
    for _ in range(MAX_HALVINGS):
        c /= 2
        try:
            V = _sphere(_layered_points(params, c), tol)
        except InfeasibleSideLength:
            continue
        if layered_census_ok(params, V):
            return V
        log.debug("chord %g fails the face census for k=%d m=%d", c, params.k, params.m)
    raise InfeasibleSideLength(
        f"no chord length passed the face census after {MAX_HALVINGS} halvings (k={params.k}, m={params.m})"
    )


# ----------------------------------------------------------------- padding


def _inner_distance(P: np.ndarray, x: np.ndarray) -> float:
    """Angular distance from ``x`` to the nearest side circle of polygon ``P``."""
    best = math.inf
    for i in range(len(P)):
        nrm = np.cross(P[i], P[(i + 1) % len(P)])
        nrm /= np.linalg.norm(nrm)
        best = min(best, math.asin(min(1.0, abs(float(nrm @ x)))))
    return best


def _spiral(center: np.ndarray, radius: float, count: int) -> np.ndarray:
    e1, e2 = tangent_basis(center)
    out = []
    for j in range(count):
        r = radius * math.sqrt(j / count)
        phi = j * GOLDEN_ANGLE
        out.append(math.cos(r) * center + math.sin(r) * (math.cos(phi) * e1 + math.sin(phi) * e2))
    return np.array(out)


def pad_with_interior_points(V, count: int, face_size: int = 3) -> PointSet:
    """Insert ``count`` points inside one Delaunay face with ``face_size``
    vertices (a triangle by default).

    The points lie on a golden-angle spiral around the face's normalised
    vertex centroid, within a third of that centroid's distance to the
    nearest side.  The face with the largest such clearance is used.
    """
    V = V if isinstance(V, PointSet) else _sphere(V)
    if int(count) != count or count < 1:
        raise BadParameter(f"count must be a positive integer, got {count!r}")
    tiling = delaunay_tiling(V)
    X = V.points
    best = None
    for f in tiling.faces:
        if len(f) != face_size:
            continue
        P = X[list(f)]
        cen = P.sum(axis=0)
        cen /= np.linalg.norm(cen)
        d = _inner_distance(P, cen)
        if best is None or d > best[0] + 1e-12:
            best = (d, cen)
    if best is None:
        raise NoTriangularFace(f"the Delaunay tiling has no face with {face_size} vertices")
    d, cen = best
    new = _spiral(cen, d / 3, int(count))
    return V.with_points(np.vstack([X, new]))


# ------------------------------------------------------------ near extremal


def near_extremal_params(n: int) -> LayeredParams:
    if int(n) != n or n < 16:
        raise BadParameter(f"near_extremal needs an integer n >= 16, got {n!r}")
    n = int(n)
    m = int(math.floor(0.5 * math.log2(n) - 1))
    k = 2 * (n // (4 * (2**m - 1)))
    return LayeredParams(k=k, m=m)


def near_extremal(n: int) -> PointSet:
    """Exactly ``n`` points on the sphere with ``17/4 n - O(sqrt n)`` double
    normals: a layered set with ring parameters derived from ``n`` and the
    missing points packed into one Delaunay face.

    A triangle receives the extra points when one exists.  With a single
    ring per hemisphere there are no triangles and the points go into one
    of the two ``k``-gon caps instead.
    """
    params = near_extremal_params(n)
    V = layered_construction(params)
    missing = int(n) - V.n
    if missing == 0:
        return V
    if params.m >= 2:
        return pad_with_interior_points(V, missing)
    return pad_with_interior_points(V, missing, face_size=params.k)
