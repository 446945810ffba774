"""Point sets, tolerance policy and the basic predicates.

Everything downstream is built from three classifications:

* :func:`slab_classify` -- position of a point relative to the closed slab
  spanned by a pair ``p, q`` (the double-normal condition),
* :func:`minor_cap_classify` -- position of a sphere point relative to the
  minor spherical cap having the chord ``ab`` as a diameter,
* :func:`arc_cross` -- interior intersection of two minor great-circle arcs.

Batch versions (``slab_coordinates``, ``cap_excess``) evaluate the same
formulas over all pairs at once with numpy; the scalar functions are the
reference contract.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field, replace

import numpy as np
from sklearn.utils import check_array

from .exceptions import (
    AntipodalPair,
    CollinearArcs,
    DegeneratePair,
    DuplicatePoint,
    NotUnitNorm,
    WrongSpace,
)

MACHINE_EPS = float(np.finfo(float).eps)
TOL_ENV_VAR = "NORMALIS_TOL"


class Space(str, enum.Enum):
    PLANE = "plane"
    SPACE3 = "space3"
    SPHERE = "sphere"

    @property
    def dim(self) -> int:
        return 2 if self is Space.PLANE else 3


class SlabPosition(enum.Enum):
    INTERIOR = "interior"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


class CapPosition(enum.Enum):
    INSIDE_OPEN = "inside_open"
    ON_BOUNDARY = "on_boundary"
    OUTSIDE = "outside"


def _default_boundary_eps() -> float:
    raw = os.environ.get(TOL_ENV_VAR)
    return float(raw) if raw else 1e-9


@dataclass(frozen=True)
class Tolerance:
    """Tolerance policy shared by all predicates.

    ``boundary_eps`` is relative: slab positions are measured in units of
    ``|q - p|`` and cap excesses in units of ``|a + b|**2``.  The environment
    variable ``NORMALIS_TOL`` overrides its default.
    """

    boundary_eps: float = field(default_factory=_default_boundary_eps)
    unit_norm: float = 1e-6
    concyclic_eps: float = 1e-7

    def __post_init__(self):
        for name in ("boundary_eps", "unit_norm", "concyclic_eps"):
            value = getattr(self, name)
            if not np.isfinite(value) or value <= 0:
                raise ValueError(f"{name} must be a positive finite number, got {value!r}")
        if self.boundary_eps < 1e3 * MACHINE_EPS:
            raise ValueError(
                f"boundary_eps={self.boundary_eps!r} is below 1e3 * machine epsilon"
            )

    def with_overrides(self, **kwargs) -> "Tolerance":
        return replace(self, **{k: float(v) for k, v in kwargs.items() if v is not None})


def as_space(space) -> Space:
    if isinstance(space, Space):
        return space
    try:
        return Space(str(space).lower())
    except ValueError:
        raise WrongSpace(f"unknown space {space!r}; expected plane, space3 or sphere") from None


def check_points(X, space=None, tol: Tolerance | None = None):
    """Validate a coordinate array and return ``(array, space)``.

    ``space=None`` infers plane/space3 from the column count.  Sphere inputs
    within ``tol.unit_norm`` of unit length are renormalised, others rejected.
    """
    tol = tol or Tolerance()
    X = check_array(X, dtype=np.float64, ensure_min_samples=1, copy=True)
    if space is None:
        space = Space.PLANE if X.shape[1] == 2 else Space.SPACE3
    space = as_space(space)
    if X.shape[1] != space.dim:
        raise WrongSpace(f"{space.value} points need {space.dim} coordinates, got {X.shape[1]}")
    if space is Space.SPHERE:
        norms = np.linalg.norm(X, axis=1)
        bad = np.flatnonzero(np.abs(norms - 1.0) > tol.unit_norm)
        if bad.size:
            i = int(bad[0])
            raise NotUnitNorm(f"point {i} has norm {norms[i]!r}, not within {tol.unit_norm} of 1")
        X /= norms[:, None]
    return X, space


def _check_distinct(X: np.ndarray, tol: Tolerance) -> None:
    if len(X) < 2:
        return
    diff = X[:, None, :] - X[None, :, :]
    d2 = np.einsum("ijk,ijk->ij", diff, diff)
    scale = max(1.0, float(np.sqrt(d2.max())))
    np.fill_diagonal(d2, np.inf)
    i, j = np.unravel_index(np.argmin(d2), d2.shape)
    if np.sqrt(d2[i, j]) <= tol.boundary_eps * scale:
        raise DuplicatePoint(f"points {min(i, j)} and {max(i, j)} coincide")


@dataclass(frozen=True, eq=False)
class PointSet:
    """An ordered, duplicate-free set of points; the index is the vertex id."""

    points: np.ndarray
    space: Space
    tol: Tolerance = field(default_factory=Tolerance)

    def __post_init__(self):
        self.points.setflags(write=False)

    @classmethod
    def from_array(cls, X, space=None, tol: Tolerance | None = None) -> "PointSet":
        tol = tol or Tolerance()
        X, space = check_points(X, space, tol)
        _check_distinct(X, tol)
        return cls(X, space, tol)

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    def with_points(self, X) -> "PointSet":
        return PointSet.from_array(X, self.space, self.tol)

    def antipodal_index(self) -> np.ndarray:
        """Index of ``-x`` in the set for each ``x``, or -1 when absent."""
        X = self.points
        s = np.linalg.norm(X[:, None, :] + X[None, :, :], axis=2)
        out = np.full(len(X), -1, dtype=int)
        i, j = np.nonzero(s <= self.tol.boundary_eps)
        out[i] = j
        return out


def _vec(p) -> np.ndarray:
    return np.asarray(p, dtype=float)


def slab_classify(p, q, x, tol: Tolerance | None = None) -> SlabPosition:
    """Position of ``x`` relative to the closed slab between the hyperplanes
    through ``p`` and ``q`` perpendicular to ``pq``."""
    tol = tol or Tolerance()
    p, q, x = _vec(p), _vec(q), _vec(x)
    d = q - p
    dd = float(d @ d)
    if np.sqrt(dd) <= tol.boundary_eps * max(1.0, float(np.abs(p).max())):
        raise DegeneratePair("p and q coincide")
    t = float((x - p) @ d) / dd
    eps = tol.boundary_eps
    if abs(t) <= eps or abs(t - 1.0) <= eps:
        return SlabPosition.ON_BOUNDARY
    if 0.0 < t < 1.0:
        return SlabPosition.INTERIOR
    return SlabPosition.OUTSIDE


def _cap_excess(a, b, x):
    return x @ (a + b) - (1.0 + a @ b)


def minor_cap_classify(a, b, x, tol: Tolerance | None = None) -> CapPosition:
    """Position of ``x`` relative to the minor cap whose boundary circle has
    the chord ``ab`` as a diameter (all three points on the unit sphere)."""
    tol = tol or Tolerance()
    a, b, x = _vec(a), _vec(b), _vec(x)
    s2 = float((a + b) @ (a + b))
    if np.sqrt(s2) <= tol.boundary_eps:
        raise AntipodalPair("a and b are antipodal")
    if np.linalg.norm(a - b) <= tol.boundary_eps:
        raise DegeneratePair("a and b coincide")
    e = float(_cap_excess(a, b, x))
    if abs(e) <= tol.boundary_eps * s2:
        return CapPosition.ON_BOUNDARY
    return CapPosition.INSIDE_OPEN if e > 0 else CapPosition.OUTSIDE


def _strictly_inside_arc(a, b, n, s, eps) -> bool:
    # s is interior to the minor arc a->b (unit normal n = a x b / |a x b|)
    return float(np.cross(a, s) @ n) > eps and float(np.cross(s, b) @ n) > eps


def arc_cross(a, b, c, d, tol: Tolerance | None = None):
    """Interior intersection of the minor arcs ``ab`` and ``cd``, or ``None``.

    Touching at an endpoint is not a crossing.  Raises :class:`CollinearArcs`
    when both arcs lie on one great circle and overlap in more than a point.
    """
    tol = tol or Tolerance()
    a, b, c, d = (_vec(v) for v in (a, b, c, d))
    for u, v in ((a, b), (c, d)):
        if np.linalg.norm(u + v) <= tol.boundary_eps:
            raise AntipodalPair("arc endpoints are antipodal")
    eps = tol.boundary_eps
    n1 = np.cross(a, b)
    n2 = np.cross(c, d)
    n1 /= np.linalg.norm(n1)
    n2 /= np.linalg.norm(n2)
    line = np.cross(n1, n2)
    norm = np.linalg.norm(line)
    if norm <= eps:
        # same great circle: overlap of more than a point means an interior
        # point of one arc is interior to the other
        if (
            _strictly_inside_arc(a, b, n1, c, eps)
            or _strictly_inside_arc(a, b, n1, d, eps)
            or _strictly_inside_arc(c, d, n2, a, eps)
            or _strictly_inside_arc(c, d, n2, b, eps)
            or (np.allclose(a, c) and np.allclose(b, d))
            or (np.allclose(a, d) and np.allclose(b, c))
        ):
            raise CollinearArcs("arcs lie on one great circle and overlap")
        return None
    s = line / norm
    for cand in (s, -s):
        if _strictly_inside_arc(a, b, n1, cand, eps) and _strictly_inside_arc(c, d, n2, cand, eps):
            return cand
    return None


# ---------------------------------------------------------------- batch forms


def pair_indices(n: int):
    return np.triu_indices(n, k=1)


def slab_coordinates(X: np.ndarray, I: np.ndarray, J: np.ndarray) -> np.ndarray:
    """Normalised positions ``t[k, x] = (x - p).(q - p) / |q - p|^2`` with
    ``p = X[I[k]]``, ``q = X[J[k]]``; the slab is ``0 <= t <= 1``."""
    P = X[I]
    D = X[J] - P
    dd = np.einsum("ij,ij->i", D, D)
    T = (X @ D.T).T - np.einsum("ij,ij->i", P, D)[:, None]
    return T / dd[:, None]


def cap_excess(X: np.ndarray, I: np.ndarray, J: np.ndarray, Y: np.ndarray | None = None):
    """Cap excess ``e[k, x] = y.(a + b) - (1 + a.b)`` for pairs ``a = X[I[k]]``,
    ``b = X[J[k]]`` and test points ``Y`` (default ``X``), together with the
    per-pair scale ``|a + b|^2`` that the boundary tolerance is relative to."""
    Y = X if Y is None else Y
    A, B = X[I], X[J]
    S = A + B
    E = (Y @ S.T).T - (1.0 + np.einsum("ij,ij->i", A, B))[:, None]
    return E, np.einsum("ij,ij->i", S, S)


def spherical_angle(at, u, v) -> float:
    """Angle at sphere point ``at`` between the great-circle arcs to ``u`` and ``v``."""
    at, u, v = _vec(at), _vec(u), _vec(v)
    tu = u - (u @ at) * at
    tv = v - (v @ at) * at
    cos = tu @ tv / (np.linalg.norm(tu) * np.linalg.norm(tv))
    return float(np.arccos(np.clip(cos, -1.0, 1.0)))


def spherical_triangle_area(a, b, c) -> float:
    num = abs(float(a @ np.cross(b, c)))
    den = 1.0 + float(a @ b) + float(b @ c) + float(c @ a)
    return 2.0 * float(np.arctan2(num, den))


def spherical_polygon_area(P: np.ndarray) -> float:
    """Area of a convex spherical polygon given by its vertex cycle."""
    return sum(spherical_triangle_area(P[0], P[i], P[i + 1]) for i in range(1, len(P) - 1))


def point_on_arc_interior(a, b, x, tol: Tolerance) -> bool:
    n = np.cross(a, b)
    n /= np.linalg.norm(n)
    if abs(float(x @ n)) > tol.boundary_eps:
        return False
    return _strictly_inside_arc(a, b, n, x, tol.boundary_eps)


def tangent_basis(v: np.ndarray):
    """Orthonormal ``(e1, e2)`` spanning the tangent plane at ``v`` with
    ``e1 x e2 = v`` (counter-clockwise seen from outside the sphere)."""
    helper = np.array([1.0, 0.0, 0.0]) if abs(v[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - (helper @ v) * v
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(v, e1)
