"""Double-normal, strict double-normal and diameter graphs in R^2 and R^3,
plus the planar structural audits (collinearity, rectangles, rightmost
edges and the red/blue decomposition)."""

from __future__ import annotations

import enum
import logging
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .exceptions import TooFewPoints, WrongSpace
from .geometry import PointSet, Space, Tolerance, pair_indices, slab_coordinates
from .graph import GeoGraph

logger = logging.getLogger(__name__)

_CHUNK = 4_000_000  # max pair x point entries evaluated at once


class Mode(str, enum.Enum):
    WEAK = "weak"
    STRICT = "strict"


def as_mode(mode) -> Mode:
    return mode if isinstance(mode, Mode) else Mode(str(mode).lower())


def _as_pointset(V, space=None, tol=None) -> PointSet:
    if isinstance(V, PointSet):
        return V
    return PointSet.from_array(V, space, tol)


def hull_boundary_mask(X: np.ndarray, tol: Tolerance) -> np.ndarray:
    """Points lying on the boundary of ``conv X``.

    Every endpoint of a double-normal pair minimises a linear functional over
    the set, so it lies on the boundary.  Falls back to all points when the
    hull is not full-dimensional.
    """
    try:
        hull = ConvexHull(X)
    except (QhullError, ValueError):
        return np.ones(len(X), dtype=bool)
    scale = max(1.0, float(np.abs(X).max()))
    dist = X @ hull.equations[:, :-1].T + hull.equations[:, -1]
    return (np.abs(dist) <= tol.boundary_eps * scale).any(axis=1)


def double_normal_graph(V, mode="weak", *, use_hull: bool = False) -> GeoGraph:
    """Double-normal graph of ``V`` (a :class:`PointSet` or coordinate array).

    A pair ``{p, q}`` is joined when every other point lies in the closed
    slab between the hyperplanes through ``p`` and ``q`` perpendicular to
    ``pq`` (``mode="weak"``), or strictly inside it (``mode="strict"``).
    Sphere point sets are treated as subsets of R^3.
    """
    V = _as_pointset(V)
    mode = as_mode(mode)
    if V.n < 2:
        raise TooFewPoints("a double-normal graph needs at least 2 points")
    X = V.points
    eps = V.tol.boundary_eps
    I, J = pair_indices(V.n)
    if use_hull:
        keep = hull_boundary_mask(X, V.tol)
        sel = keep[I] & keep[J]
        I, J = I[sel], J[sel]
    step = max(1, _CHUNK // max(V.n, 1))
    edges = []
    for s in range(0, len(I), step):
        i, j = I[s : s + step], J[s : s + step]
        T = slab_coordinates(X, i, j)
        if mode is Mode.WEAK:
            ok = ((T >= -eps) & (T <= 1.0 + eps)).all(axis=1)
        else:
            rows = np.arange(len(i))
            T[rows, i] = 0.5
            T[rows, j] = 0.5
            ok = ((T > eps) & (T < 1.0 - eps)).all(axis=1)
        edges.extend(zip(i[ok].tolist(), j[ok].tolist()))
    return GeoGraph(V.n, tuple(edges), V.space)


def diameter_graph(V) -> GeoGraph:
    """Pairs realising the maximum distance (relative tolerance on squared
    distances)."""
    V = _as_pointset(V)
    if V.n < 2:
        raise TooFewPoints("a diameter graph needs at least 2 points")
    X = V.points
    I, J = pair_indices(V.n)
    D = X[I] - X[J]
    d2 = np.einsum("ij,ij->i", D, D)
    ok = d2 >= d2.max() * (1.0 - V.tol.boundary_eps)
    return GeoGraph(V.n, tuple(zip(I[ok].tolist(), J[ok].tolist())), V.space)


# ------------------------------------------------------------ planar audits


@dataclass
class StructureReport:
    claim_results: dict = field(default_factory=dict)
    red_edges: list = field(default_factory=list)
    blue_edges: list = field(default_factory=list)
    rightmost_edge: dict = field(default_factory=dict)
    violations: list = field(default_factory=list)
    diagnostics: list = field(default_factory=list)
    colors: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.claim_results.values())

    def fail(self, claim: str, witness) -> None:
        self.claim_results[claim] = False
        self.violations.append((claim, witness))

    def to_dict(self) -> dict:
        return {
            "claims": dict(self.claim_results),
            "red_edges": [list(e) for e in self.red_edges],
            "blue_edges": [list(e) for e in self.blue_edges],
            "rightmost_edge": {str(k): list(v) for k, v in sorted(self.rightmost_edge.items())},
            "violations": [[c, repr(w)] for c, w in self.violations],
            "diagnostics": list(self.diagnostics),
        }


class _Planar:
    """Tolerance-aware planar primitives over a fixed coordinate array."""

    def __init__(self, X: np.ndarray, tol: Tolerance):
        self.X = X
        self.eps = tol.boundary_eps
        self.concyclic = tol.concyclic_eps

    def orient(self, a: int, b: int, c: int) -> int:
        X = self.X
        u, v = X[b] - X[a], X[c] - X[a]
        cr = u[0] * v[1] - u[1] * v[0]
        if abs(cr) <= self.eps * math.hypot(*u) * math.hypot(*v):
            return 0
        return 1 if cr > 0 else -1

    def param(self, a: int, b: int, c: int) -> float:
        u, v = self.X[b] - self.X[a], self.X[c] - self.X[a]
        return float(u @ v / (u @ u))

    def in_relint(self, x: int, a: int, b: int) -> bool:
        if x in (a, b) or self.orient(a, b, x) != 0:
            return False
        t = self.param(a, b, x)
        return self.eps < t < 1.0 - self.eps

    def on_segment(self, x: int, a: int, b: int) -> bool:
        if x in (a, b):
            return True
        return self.in_relint(x, a, b)

    def cross(self, e, f) -> bool:
        """Segments share a point interior to both."""
        a, b = e
        c, d = f
        o1, o2 = self.orient(a, b, c), self.orient(a, b, d)
        o3, o4 = self.orient(c, d, a), self.orient(c, d, b)
        if o1 == o2 == o3 == o4 == 0:
            # collinear: overlap of interiors
            return any(self.in_relint(p, *q) for p, q in ((c, e), (d, e), (a, f), (b, f))) or {a, b} == {c, d}
        return o1 * o2 < 0 and o3 * o4 < 0

    def intersect(self, e, f) -> bool:
        """Closed segments share any point."""
        a, b = e
        c, d = f
        if {a, b} & {c, d}:
            return True
        if self.cross(e, f):
            return True
        return any(self.on_segment(p, *q) for p, q in ((c, e), (d, e), (a, f), (b, f)))

    def is_rectangle_pair(self, e, f) -> bool:
        """``e`` and ``f`` are opposite sides of a rectangle."""
        X, tol = self.X, self.concyclic
        a, b = e
        c, d = f
        u = X[b] - X[a]
        scale = float(u @ u)
        for p, q in ((c, d), (d, c)):
            # a-b and p-q parallel and equal, a->p perpendicular to a->b
            if np.linalg.norm((X[q] - X[p]) - u) <= tol * math.sqrt(scale) and abs(
                float((X[p] - X[a]) @ u)
            ) <= tol * scale:
                return True
        return False

    def max_angular_gap(self, x: int, others) -> float:
        d = self.X[list(others)] - self.X[x]
        ang = np.sort(np.arctan2(d[:, 1], d[:, 0]))
        if len(ang) == 1:
            return 2 * math.pi
        gaps = np.diff(np.concatenate([ang, [ang[0] + 2 * math.pi]]))
        return float(gaps.max())

    def outside_hull_of(self, x: int, others) -> bool:
        """``x`` is not in the closed convex hull of ``others``."""
        return self.max_angular_gap(x, others) > math.pi + self.eps


def _require_plane(V: PointSet) -> None:
    if V.space is not Space.PLANE:
        raise WrongSpace(f"planar audit requested for {V.space.value} points")


def audit_basic_claims(V, G: GeoGraph | None = None) -> StructureReport:
    """Check the five elementary properties of a planar double-normal drawing.

    ``collinear_edges``: no two edges on one line; ``vertex_in_edge``: a
    vertex interior to an edge has degree <= 1 and its edge is perpendicular;
    ``disjoint_rectangle``: disjoint edges are opposite rectangle sides;
    ``neighbour_hull``: no vertex lies in the hull of its neighbours;
    ``hull_vertex``: non-isolated vertices are extreme points of the set.
    """
    V = _as_pointset(V, Space.PLANE)
    _require_plane(V)
    G = G if G is not None else double_normal_graph(V, Mode.WEAK)
    pl = _Planar(V.points, V.tol)
    X = V.points
    rep = StructureReport()
    for claim in ("collinear_edges", "vertex_in_edge", "disjoint_rectangle", "neighbour_hull", "hull_vertex"):
        rep.claim_results[claim] = True
    edges = list(G.edges)
    adj = G.adjacency()

    for k, e in enumerate(edges):
        for f in edges[k + 1 :]:
            if pl.orient(*e, f[0]) == 0 and pl.orient(*e, f[1]) == 0:
                rep.fail("collinear_edges", (e, f))
            if not pl.intersect(e, f) and not pl.is_rectangle_pair(e, f):
                rep.fail("disjoint_rectangle", (e, f))

    for x in range(V.n):
        for e in edges:
            if pl.in_relint(x, *e):
                nb = adj[x]
                if len(nb) > 1:
                    rep.fail("vertex_in_edge", (x, e, tuple(nb)))
                elif nb:
                    v = nb[0]
                    u, w = X[e[1]] - X[e[0]], X[v] - X[x]
                    if abs(float(u @ w)) > V.tol.concyclic_eps * np.linalg.norm(u) * np.linalg.norm(w):
                        rep.fail("vertex_in_edge", (x, e, (v,)))

    others = np.arange(V.n)
    for x in range(V.n):
        if not adj[x]:
            continue
        if len(adj[x]) > 1 and not pl.outside_hull_of(x, adj[x]):
            rep.fail("neighbour_hull", (x, tuple(adj[x])))
        if V.n > 2 and not pl.outside_hull_of(x, others[others != x]):
            rep.fail("hull_vertex", x)
    return rep


def rightmost_edges(V: PointSet, G: GeoGraph, report: StructureReport | None = None) -> dict:
    """Map each non-isolated vertex ``x`` to its rightmost edge ``(x, y)``:
    no other neighbour of ``x`` lies strictly right of the directed line
    ``x -> y``.  Exists whenever ``x`` is outside the hull of its neighbours."""
    pl = _Planar(V.points, V.tol)
    out = {}
    for x, nb in enumerate(G.adjacency()):
        if not nb:
            continue
        cands = [y for y in nb if all(pl.orient(x, y, z) >= 0 for z in nb if z != y)]
        if not cands:
            if report is not None:
                report.fail("rightmost_exists", x)
            continue
        if len(cands) > 1:
            far = max(cands, key=lambda y: float(np.sum((V.points[y] - V.points[x]) ** 2)))
            msg = f"rightmost-edge tie at vertex {x}: {cands}, chose {far}"
            logger.warning(msg)
            if report is not None:
                report.diagnostics.append(msg)
            cands = [far]
        out[x] = (x, cands[0])
    return out


def red_blue_decomposition(V, G: GeoGraph | None = None) -> StructureReport:
    """Colour each vertex's rightmost edge red and the rest blue, then check
    that blue edges form a matching, pairwise cross, and cross every red edge
    they share no endpoint with; also ``|E| = |R| + |B| <= n + n/2``."""
    V = _as_pointset(V, Space.PLANE)
    _require_plane(V)
    G = G if G is not None else double_normal_graph(V, Mode.WEAK)
    pl = _Planar(V.points, V.tol)
    rep = StructureReport()
    for claim in ("rightmost_exists", "blue_matching", "blue_pairwise_cross", "blue_red_cross", "count_bound"):
        rep.claim_results[claim] = True
    rep.rightmost_edge = rightmost_edges(V, G, rep)
    red = sorted({tuple(sorted(e)) for e in rep.rightmost_edge.values()})
    blue = [e for e in G.edges if e not in set(red)]
    rep.red_edges, rep.blue_edges = red, blue

    seen: dict[int, tuple] = {}
    for e in blue:
        for v in e:
            if v in seen:
                rep.fail("blue_matching", (seen[v], e))
            seen[v] = e
    for k, e in enumerate(blue):
        for f in blue[k + 1 :]:
            if not set(e) & set(f) and not pl.cross(e, f):
                rep.fail("blue_pairwise_cross", (e, f))
        for r in red:
            if not set(e) & set(r) and not pl.cross(e, r):
                rep.fail("blue_red_cross", (e, r))
    if not (len(G.edges) == len(red) + len(blue) and 2 * len(G.edges) <= 3 * V.n):
        rep.fail("count_bound", (len(red), len(blue), V.n))
    rep.colors = {e: "red" for e in red} | {e: "blue" for e in blue}
    return rep


# --------------------------------------------------------------- estimators


class DoubleNormalGraph(BaseEstimator):
    """Estimator wrapper around :func:`double_normal_graph`.

    Parameters
    ----------
    mode : {"weak", "strict"}
    space : {"plane", "space3", "sphere"} or None
        ``None`` infers plane or space3 from the number of columns.
    boundary_eps : float or None
        Overrides the default relative boundary tolerance.
    use_hull : bool
        Restrict candidate endpoints to hull-boundary points.

    Attributes
    ----------
    graph_ : GeoGraph
    edges_ : ndarray of shape (n_edges, 2)
    n_edges_ : int
    """

    def __init__(self, mode="weak", space=None, boundary_eps=None, use_hull=False):
        self.mode = mode
        self.space = space
        self.boundary_eps = boundary_eps
        self.use_hull = use_hull

    def _tolerance(self) -> Tolerance:
        return Tolerance().with_overrides(boundary_eps=self.boundary_eps)

    def fit(self, X, y=None):
        self.points_ = PointSet.from_array(X, self.space, self._tolerance())
        self.graph_ = double_normal_graph(self.points_, self.mode, use_hull=self.use_hull)
        self.edges_ = np.array(self.graph_.edges, dtype=int).reshape(-1, 2)
        self.n_edges_ = self.graph_.n_edges
        return self

    def fit_predict(self, X, y=None):
        """Return the edge array."""
        return self.fit(X).edges_

    def score(self, X=None, y=None):
        check_is_fitted(self, "graph_")
        return float(self.n_edges_)


class DiameterGraph(BaseEstimator):
    """Estimator wrapper around :func:`diameter_graph`; same attributes as
    :class:`DoubleNormalGraph`."""

    def __init__(self, space=None, boundary_eps=None):
        self.space = space
        self.boundary_eps = boundary_eps

    _tolerance = DoubleNormalGraph._tolerance
    score = DoubleNormalGraph.score

    def fit(self, X, y=None):
        self.points_ = PointSet.from_array(X, self.space, self._tolerance())
        self.graph_ = diameter_graph(self.points_)
        self.edges_ = np.array(self.graph_.edges, dtype=int).reshape(-1, 2)
        self.n_edges_ = self.graph_.n_edges
        return self
