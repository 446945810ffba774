"""Gabriel graphs, Delaunay tilings and double-normal counts on the unit sphere.

The Delaunay tiling is obtained by centrally projecting the outside faces of
the 3D convex hull.  The hull itself comes from Qhull; its triangulated
facets are merged back into planar polygons here.
"""

from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull, QhullError
from sklearn.base import BaseEstimator

from .double_normal import Mode, as_mode, double_normal_graph
from .exceptions import (
    CollinearArcs,
    DegenerateHull,
    EmbeddingError,
    LiftMismatch,
    NotAnEquivalence,
    ReductionInvariantViolated,
    TooFewPoints,
    WrongSpace,
)
from .geometry import (
    PointSet,
    Space,
    Tolerance,
    arc_cross,
    cap_excess,
    pair_indices,
    point_on_arc_interior,
    spherical_polygon_area,
    tangent_basis,
)
from .graph import GeoGraph


def _sphere_set(V, tol=None) -> PointSet:
    if isinstance(V, PointSet):
        if V.space is not Space.SPHERE:
            raise WrongSpace(f"expected sphere points, got {V.space.value}")
        return V
    return PointSet.from_array(V, Space.SPHERE, tol)


# ------------------------------------------------------------ Gabriel graphs


def _gabriel_edges(X: np.ndarray, tol: Tolerance, strict: bool):
    n = len(X)
    I, J = pair_indices(n)
    E, S = cap_excess(X, I, J)
    eps = tol.boundary_eps
    thresh = eps * S[:, None]
    if strict:
        rows = np.arange(len(I))
        E[rows, I] = -np.inf
        E[rows, J] = -np.inf
        ok = (E < -thresh).all(axis=1)
    else:
        ok = (E <= thresh).all(axis=1)
    ok &= np.sqrt(S) > eps
    return list(zip(I[ok].tolist(), J[ok].tolist()))


def weak_gabriel(V) -> GeoGraph:
    """Join non-antipodal ``a, b`` when no point lies in the open minor cap
    with diameter ``ab``."""
    V = _sphere_set(V)
    if V.n < 2:
        raise TooFewPoints("a Gabriel graph needs at least 2 points")
    return GeoGraph(V.n, tuple(_gabriel_edges(V.points, V.tol, strict=False)), Space.SPHERE)


def strict_gabriel(V) -> GeoGraph:
    """As :func:`weak_gabriel`, but points on the cap boundary (other than
    ``a`` and ``b``) also block the edge."""
    V = _sphere_set(V)
    if V.n < 2:
        raise TooFewPoints("a Gabriel graph needs at least 2 points")
    return GeoGraph(V.n, tuple(_gabriel_edges(V.points, V.tol, strict=True)), Space.SPHERE)


# ------------------------------------------------------------------ the hull


@dataclass(frozen=True)
class HullFace:
    vertices: tuple[int, ...]  # counter-clockwise seen from outside
    normal: np.ndarray
    offset: float  # hull lies in normal . x <= offset


def _face_cycle(tris, normal) -> tuple[int, ...]:
    directed = set()
    for a, b, c in tris:
        directed |= {(a, b), (b, c), (c, a)}
    boundary = {u: v for u, v in directed if (v, u) not in directed}
    start = min(boundary)
    cycle = [start]
    while True:
        nxt = boundary[cycle[-1]]
        if nxt == start:
            break
        cycle.append(nxt)
        if len(cycle) > len(boundary):
            raise DegenerateHull("facet boundary is not a simple cycle")
    if len(cycle) != len(boundary):
        raise DegenerateHull("merged facet has a disconnected boundary")
    k = cycle.index(min(cycle))
    return tuple(cycle[k:] + cycle[:k])


def hull_faces(V) -> list[HullFace]:
    """Faces of ``conv V`` with coplanar facets merged into polygons.

    A flat (coplanar) input yields a single polygon whose normal points away
    from the origin; a flat input whose plane contains the origin raises
    :class:`DegenerateHull`.
    """
    V = V if isinstance(V, PointSet) else PointSet.from_array(V, Space.SPACE3)
    X = V.points
    if V.n < 3:
        raise TooFewPoints("a hull needs at least 3 points")
    scale = max(1.0, float(np.abs(X).max()))
    ctr = X.mean(axis=0)
    _, sv, vt = np.linalg.svd(X - ctr)
    if sv[-1] <= V.tol.concyclic_eps * scale:
        normal = vt[-1]
        offset = float(normal @ ctr)
        if abs(offset) <= V.tol.boundary_eps * scale:
            raise DegenerateHull("points are coplanar with the origin (one great circle)")
        if offset < 0:
            normal, offset = -normal, -offset
        e1, e2 = tangent_basis(normal)
        ang = np.arctan2((X - ctr) @ e2, (X - ctr) @ e1)
        cyc = [int(i) for i in np.argsort(ang)]
        k = cyc.index(min(cyc))
        return [HullFace(tuple(cyc[k:] + cyc[:k]), normal, offset)]
    try:
        hull = ConvexHull(X)
    except QhullError as exc:  # pragma: no cover - guarded by the rank test
        raise DegenerateHull(str(exc)) from exc
    missing = set(range(V.n)) - set(hull.vertices.tolist())
    if missing:
        raise DegenerateHull(f"points {sorted(missing)} are not hull vertices")
    m = len(hull.simplices)
    parent = list(range(m))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    eq = hull.equations
    ceps = V.tol.concyclic_eps * scale
    for i in range(m):
        for j in hull.neighbors[i]:
            if j > i and eq[i, :3] @ eq[j, :3] > 0:
                far = np.abs(X[hull.simplices[j]] @ eq[i, :3] + eq[i, 3]).max()
                if far <= ceps:
                    parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(m):
        groups.setdefault(find(i), []).append(i)
    faces = []
    for members in groups.values():
        tris = []
        normal = eq[members, :3].mean(axis=0)
        normal /= np.linalg.norm(normal)
        for i in members:
            a, b, c = (int(v) for v in hull.simplices[i])
            if np.cross(X[b] - X[a], X[c] - X[a]) @ normal < 0:
                b, c = c, b
            tris.append((a, b, c))
        cyc = _face_cycle(tris, normal)
        offset = float(np.mean(X[list(cyc)] @ normal))
        faces.append(HullFace(cyc, normal, offset))
    faces.sort(key=lambda f: f.vertices)
    return faces


# ------------------------------------------------------------ Delaunay tiling


class OriginCase(str, enum.Enum):
    INTERIOR_OF_HULL = "interior_of_hull"  # (a) tiles the whole sphere
    IN_FACE_RELINT = "in_face_relint"  # (b) a hemisphere
    IN_EDGE_RELINT = "in_edge_relint"  # (c) a lune
    OUTSIDE_HULL = "outside_hull"  # (d) smallest spherical polygon containing V


@dataclass
class Tiling:
    vertices: PointSet
    faces: list[tuple[int, ...]]
    edges: tuple[tuple[int, int], ...]
    origin_case: OriginCase
    face_census: dict[int, int]
    hull: list[HullFace] = field(default_factory=list)
    origin_flagged: bool = False

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def face_areas(self) -> list[float]:
        X = self.vertices.points
        return [spherical_polygon_area(X[list(f)]) for f in self.faces]

    def total_area(self) -> float:
        return float(sum(self.face_areas()))

    def graph(self) -> GeoGraph:
        return GeoGraph(self.vertices.n, self.edges, Space.SPHERE)

    def to_dict(self) -> dict:
        return {
            "origin_case": self.origin_case.value,
            "origin_flagged": self.origin_flagged,
            "faces": [list(f) for f in self.faces],
            "edges": [list(e) for e in self.edges],
            "face_census": {str(k): v for k, v in sorted(self.face_census.items())},
        }


def _cycle_edges(cycle):
    return [tuple(sorted((cycle[i], cycle[(i + 1) % len(cycle)]))) for i in range(len(cycle))]


def delaunay_tiling(V) -> Tiling:
    """Central projection of the outside edges and faces of ``conv V``.

    A face is outside when its plane has positive offset from the origin;
    an edge is outside when it bounds at least one outside face.
    """
    V = _sphere_set(V)
    if V.n < 3:
        raise TooFewPoints("a Delaunay tiling needs at least 3 points")
    faces = hull_faces(V)
    eps = V.tol.boundary_eps
    offs = np.array([f.offset for f in faces])
    flagged = bool(np.any((np.abs(offs) <= eps) & (offs != 0.0)))
    if len(faces) == 1 or (offs < -eps).any():
        case = OriginCase.OUTSIDE_HULL
    else:
        on = int((np.abs(offs) <= eps).sum())
        if on == 0:
            case = OriginCase.INTERIOR_OF_HULL
        elif on == 1:
            case = OriginCase.IN_FACE_RELINT
        elif on == 2:
            case = OriginCase.IN_EDGE_RELINT
        else:
            raise DegenerateHull(f"origin lies on {on} hull facets")
    outside = [f for f in faces if f.offset > eps]
    edges = sorted({e for f in outside for e in _cycle_edges(f.vertices)})
    census = Counter(len(f.vertices) for f in outside)
    return Tiling(
        vertices=V,
        faces=[f.vertices for f in outside],
        edges=tuple(edges),
        origin_case=case,
        face_census=dict(sorted(census.items())),
        hull=faces,
        origin_flagged=flagged,
    )


# ---------------------------------------------------------- crossing classes


def _arc_normals(X, edges):
    A = X[[e[0] for e in edges]]
    B = X[[e[1] for e in edges]]
    N = np.cross(A, B)
    return N / np.linalg.norm(N, axis=1)[:, None]


def crossing_pairs(X: np.ndarray, edges, tol: Tolerance) -> list[tuple[int, int]]:
    """Index pairs ``(k, l)`` of arcs that cross in their interiors.

    A vectorised sign test on the great-circle planes filters candidates and
    :func:`arc_cross` decides each one.
    """
    edges = list(edges)
    if len(edges) < 2:
        return []
    eps = tol.boundary_eps
    N = _arc_normals(X, edges)
    side = N @ X.T
    side[np.abs(side) <= eps] = 0.0
    E = np.array(edges)
    s0 = side[:, E[:, 0]]
    s1 = side[:, E[:, 1]]
    sep = (s0 * s1) < 0  # sep[k, l]: arc l straddles the circle of arc k
    cand = np.argwhere(np.triu(sep & sep.T, k=1))
    out = []
    for k, l in cand:
        a, b = edges[k]
        c, d = edges[l]
        if arc_cross(X[a], X[b], X[c], X[d], tol) is not None:
            out.append((int(k), int(l)))
    return out


@dataclass
class CrossingReport:
    points: PointSet
    edges: tuple[tuple[int, int], ...]
    classes: list[list[tuple[int, int]]]
    polygons: list[tuple[int, ...]]  # one per class of size >= 2, same order
    g_census: dict[int, int]
    polygon_claim_ok: bool = True
    polygon_claim_violations: list = field(default_factory=list)

    @property
    def crossing_classes(self):
        return [c for c in self.classes if len(c) >= 2]

    def to_dict(self) -> dict:
        return {
            "classes": [[list(e) for e in c] for c in self.classes],
            "polygons": [list(p) for p in self.polygons],
            "g_census": {str(k): v for k, v in sorted(self.g_census.items())},
            "polygon_claim_ok": self.polygon_claim_ok,
        }


def _arc_midpoint_and_length(X, e):
    a, b = X[e[0]], X[e[1]]
    m = a + b
    return m / np.linalg.norm(m), float(np.arctan2(np.linalg.norm(np.cross(a, b)), a @ b))


def _polygon_around(X, center, verts) -> tuple[int, ...]:
    e1, e2 = tangent_basis(center)
    ang = {v: math.atan2(float(X[v] @ e2), float(X[v] @ e1)) for v in verts}
    cyc = sorted(verts, key=ang.__getitem__)
    k = cyc.index(min(cyc))
    return tuple(cyc[k:] + cyc[:k])


def crossing_classes(G: GeoGraph, V) -> CrossingReport:
    """Partition the arcs of a weak Gabriel graph into crossing classes.

    Arcs in one class must pairwise cross at a common midpoint and have equal
    length; otherwise :class:`NotAnEquivalence` is raised.  Each class of two
    or more arcs yields the crossing polygon whose diagonals are those arcs.
    """
    V = _sphere_set(V)
    X, tol = V.points, V.tol
    edges = list(G.edges)
    parent = list(range(len(edges)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    crossing = set(crossing_pairs(X, edges, tol))
    for k, l in crossing:
        parent[find(k)] = find(l)
    groups: dict[int, list[int]] = {}
    for k in range(len(edges)):
        groups.setdefault(find(k), []).append(k)
    classes, polygons = [], []
    ceps = tol.concyclic_eps
    for members in sorted(groups.values(), key=lambda ms: edges[ms[0]]):
        classes.append([edges[k] for k in members])
        if len(members) < 2:
            continue
        m0, l0 = _arc_midpoint_and_length(X, edges[members[0]])
        for k in members[1:]:
            m, length = _arc_midpoint_and_length(X, edges[k])
            if np.linalg.norm(m - m0) > ceps or abs(length - l0) > ceps:
                raise NotAnEquivalence(
                    f"arcs {edges[members[0]]} and {edges[k]} cross-connected but differ "
                    f"(midpoint gap {np.linalg.norm(m - m0):.3g}, length gap {abs(length - l0):.3g})"
                )
        for i, k in enumerate(members):
            for l in members[i + 1 :]:
                if (min(k, l), max(k, l)) not in crossing:
                    raise NotAnEquivalence(f"arcs {edges[k]} and {edges[l]} share a class but do not cross")
        verts = sorted({v for k in members for v in edges[k]})
        if len(verts) != 2 * len(members):
            raise NotAnEquivalence(f"crossing arcs {classes[-1]} share endpoints")
        polygons.append(_polygon_around(X, m0, verts))
    g_census = dict(sorted(Counter(len(p) for p in polygons).items()))
    rep = CrossingReport(V, tuple(edges), classes, polygons, g_census)
    _check_polygon_intersections(rep)
    return rep


def _check_polygon_intersections(rep: CrossingReport) -> None:
    X, tol = rep.points.points, rep.points.tol
    polys = rep.polygons
    for i, P in enumerate(polys):
        for Q in polys[i + 1 :]:
            shared = set(P) & set(Q)
            ok = len(shared) <= 2
            if ok and len(shared) == 2:
                ok = set(map(tuple, map(sorted, [shared]))) <= set(_cycle_edges(P)) & set(_cycle_edges(Q))
            if ok:
                for e in _cycle_edges(P):
                    for f in _cycle_edges(Q):
                        if set(e) & set(f):
                            continue
                        try:
                            hit = arc_cross(X[e[0]], X[e[1]], X[f[0]], X[f[1]], tol)
                        except CollinearArcs:
                            hit = True
                        if hit is not None:
                            ok = False
            if not ok:
                rep.polygon_claim_ok = False
                rep.polygon_claim_violations.append((P, Q))


# ----------------------------------------------------------------- G' and Euler


def _vertices_on_arcs(X, edges, tol):
    """(vertex, edge) pairs with the vertex interior to the edge's arc."""
    if not edges:
        return []
    N = _arc_normals(X, edges)
    side = np.abs(N @ X.T)
    out = []
    for k, x in np.argwhere(side <= tol.boundary_eps):
        a, b = edges[k]
        if x in (a, b):
            continue
        if point_on_arc_interior(X[a], X[b], X[x], tol):
            out.append((int(x), edges[k]))
    return out


def reduce_to_gprime(G: GeoGraph, report: CrossingReport, V=None) -> GeoGraph:
    """Replace every class of crossing arcs by the sides of its crossing
    polygon, then verify the result is embedded (no crossings, no vertex
    interior to an arc)."""
    V = _sphere_set(V) if V is not None else report.points
    X, tol = V.points, V.tol
    removed = {e for c in report.crossing_classes for e in c}
    added = {e for P in report.polygons for e in _cycle_edges(P)}
    edges = sorted((set(G.edges) - removed) | added)
    try:
        crosses = crossing_pairs(X, edges, tol)
    except CollinearArcs as exc:
        raise ReductionInvariantViolated(f"overlapping arcs in G': {exc}") from exc
    if crosses:
        k, l = crosses[0]
        raise ReductionInvariantViolated("G' has crossing arcs", witness=(edges[k], edges[l]))
    on = _vertices_on_arcs(X, edges, tol)
    if on:
        raise ReductionInvariantViolated("a vertex lies inside an arc of G'", witness=on[0])
    return GeoGraph(G.n, tuple(edges), Space.SPHERE)


def rotation_system(X: np.ndarray, G: GeoGraph) -> list[list[int]]:
    """Neighbours of each vertex sorted counter-clockwise (seen from outside)
    by the direction of the outgoing arc."""
    rot = []
    for v, nb in enumerate(G.adjacency()):
        if not nb:
            rot.append([])
            continue
        e1, e2 = tangent_basis(X[v])
        ang = [math.atan2(float(X[w] @ e2), float(X[w] @ e1)) for w in nb]
        rot.append([nb[i] for i in np.argsort(ang, kind="stable")])
    return rot


def face_walks(rot: list[list[int]]) -> list[list[tuple[int, int]]]:
    """Boundary walks (lists of darts) with the face on the left of each dart."""
    pos = [{w: i for i, w in enumerate(r)} for r in rot]
    unused = {(u, v) for u, r in enumerate(rot) for v in r}
    walks = []
    while unused:
        start = min(unused)
        walk, dart = [], start
        while True:
            if dart not in unused:
                raise EmbeddingError(f"face walk revisits dart {dart}")
            unused.discard(dart)
            walk.append(dart)
            u, v = dart
            r = rot[v]
            w = r[(pos[v][u] - 1) % len(r)]
            dart = (v, w)
            if dart == start:
                break
        walks.append(walk)
    return walks


def _slerp_path(X, walk, steps=8):
    pts = []
    for u, v in walk:
        a, b = X[u], X[v]
        for s in np.linspace(0.0, 1.0, steps, endpoint=False):
            p = (1 - s) * a + s * b
            pts.append(p / np.linalg.norm(p))
    return np.array(pts)


def _winding(X, walk, x, q) -> int:
    """Winding number of the walk around ``x`` after stereographic projection
    from ``q`` (orientation as seen from outside the sphere at ``-q``)."""
    e1, e2 = tangent_basis(-q)

    def proj(P):
        P = np.atleast_2d(P)
        d = 1.0 - P @ q
        S = (P - np.outer(P @ q, q)) / d[:, None]
        return np.c_[S @ e1, S @ e2]

    path = proj(_slerp_path(X, walk)) - proj(x)[0]
    ang = np.arctan2(path[:, 1], path[:, 0])
    turn = np.diff(np.concatenate([ang, ang[:1]]))
    turn = (turn + np.pi) % (2 * np.pi) - np.pi
    return int(round(turn.sum() / (2 * np.pi)))


def _locate(X, walks, x) -> int:
    """Index (into ``walks``) of the face of one connected component that
    contains the sphere point ``x``."""
    if len(walks) == 1:
        return 0
    u, v = walks[0][0]
    mid = X[u] + X[v]
    mid /= np.linalg.norm(mid)
    left = np.cross(X[u], X[v])
    left /= np.linalg.norm(left)
    q = mid + 1e-5 * left
    q /= np.linalg.norm(q)
    for i, w in enumerate(walks):
        if _winding(X, w, x, q) == 1:
            return i
    return 0


@dataclass
class EulerAudit:
    n_vertices: int
    n_edges: int
    n_faces: int
    components: int
    f_census: dict[int, int]
    g_census: dict[int, int]
    slacks: dict[str, float]
    checks: dict[str, bool]

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "V": self.n_vertices,
            "E'": self.n_edges,
            "F": self.n_faces,
            "components": self.components,
            "f_census": {str(k): v for k, v in sorted(self.f_census.items())},
            "g_census": {str(k): v for k, v in sorted(self.g_census.items())},
            "slacks": self.slacks,
            "checks": self.checks,
        }


def embedded_faces(X: np.ndarray, G: GeoGraph) -> list[int]:
    """Sizes (edge-side counts) of the faces of an embedded graph on the sphere."""
    rot = rotation_system(X, G)
    walks = face_walks(rot)
    if not walks:
        return [0]
    comp_of = {}
    for c, comp in enumerate(G.components()):
        for v in comp:
            comp_of[v] = c
    by_comp: dict[int, list[int]] = {}
    for i, w in enumerate(walks):
        by_comp.setdefault(comp_of[w[0][0]], []).append(i)
    comps = sorted(by_comp)
    parent = list(range(len(walks)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    if len(comps) > 1:
        rep_vertex = {c: walks[by_comp[c][0]][0][0] for c in comps}
        loc = {}
        for a in comps:
            ws = [walks[i] for i in by_comp[a]]
            for b in comps:
                if a != b:
                    loc[b, a] = by_comp[a][_locate(X, ws, X[rep_vertex[b]])]
        for a in comps:
            for b in comps:
                if a < b and all(loc[a, c] == loc[b, c] for c in comps if c not in (a, b)):
                    parent[find(loc[b, a])] = find(loc[a, b])
    sizes: dict[int, int] = {}
    for i, w in enumerate(walks):
        r = find(i)
        sizes[r] = sizes.get(r, 0) + len(w)
    return list(sizes.values())


def euler_audit(Gp: GeoGraph, V, report: CrossingReport | None = None) -> EulerAudit:
    """Face census of the embedded graph ``Gp`` and the counting relations
    around it: ``2|E'| = sum i f_i``, ``|V| - |E'| + F = 1 + c'``,
    ``|E'| <= 3|V| - 6 - f_4 - 2 f_5 - ...``, ``g_i <= f_i`` and
    ``4 g_4 + 6 g_6 + ... <= 3|V|``."""
    V = _sphere_set(V)
    faces = embedded_faces(V.points, Gp)
    f = dict(sorted(Counter(faces).items()))
    g = dict(report.g_census) if report is not None else {}
    n, e = V.n, Gp.n_edges
    comps = len(Gp.components())
    F = len(faces)
    heavy = sum((i - 3) * c for i, c in f.items() if i >= 4)
    slacks = {
        "incidence": float(sum(i * c for i, c in f.items()) - 2 * e),
        "euler": float(n - e + F - (1 + comps)),
        "edge_bound": float(3 * n - 6 - heavy - e),
        "g_le_f": float(min([f.get(i, 0) - c for i, c in g.items()], default=0)),
        "polygon_incidence": float(3 * n - sum(i * c for i, c in g.items())),
        "g4_bound": 0.75 * n - g.get(4, 0),
    }
    checks = {
        "incidence": slacks["incidence"] == 0,
        "euler": slacks["euler"] == 0,
        "edge_bound": slacks["edge_bound"] >= 0 or e < 2,
        "g_le_f": slacks["g_le_f"] >= 0,
        "polygon_incidence": slacks["polygon_incidence"] >= 0,
        "g4_bound": slacks["g4_bound"] >= 0,
    }
    if report is not None:
        original = len(report.edges)
        recovered = e + sum((i // 2) * c for i, c in g.items())
        slacks["edge_recovery"] = float(recovered - original)
        checks["edge_recovery"] = recovered >= original
    if not (checks["incidence"] and checks["euler"]):
        raise EmbeddingError(f"face walk inconsistent: slacks {slacks}")
    return EulerAudit(n, e, F, comps, f, g, slacks, checks)


# --------------------------------------------------- double normals via the lift


@dataclass
class LiftResult:
    count: int
    graph: GeoGraph  # double-normal graph on V (direct slab enumeration)
    union: PointSet  # V u V'
    in_v: np.ndarray  # mask over union
    in_vprime: np.ndarray
    lift_e1: GeoGraph  # on the union
    lift_e2: tuple[tuple[int, int], ...]  # E1 restricted to V n V'
    n_common: int  # |V n V'|
    count_via_lift: int
    mode: Mode = Mode.WEAK

    def to_dict(self) -> dict:
        return {
            "mode": self.mode.value,
            "N": self.count,
            "E1": self.lift_e1.n_edges,
            "E2": len(self.lift_e2),
            "V_cap_Vprime": self.n_common,
            "N_via_lift": self.count_via_lift,
        }


def antipodal_union(V: PointSet):
    """``(V u V', in_V, in_V', prime)`` where ``prime[i]`` is the union index
    of ``-V[i]``."""
    anti = V.antipodal_index()
    pts = [p for p in V.points]
    prime = np.empty(V.n, dtype=int)
    for i in range(V.n):
        if anti[i] >= 0:
            prime[i] = anti[i]
        else:
            prime[i] = len(pts)
            pts.append(-V.points[i])
    U = PointSet(np.array(pts), Space.SPHERE, V.tol)
    in_v = np.zeros(U.n, dtype=bool)
    in_v[: V.n] = True
    in_vp = np.zeros(U.n, dtype=bool)
    in_vp[prime] = True
    return U, in_v, in_vp, prime


def sphere_double_normals(V, mode="weak") -> LiftResult:
    """Count double-normal pairs of a sphere set two independent ways.

    Route one enumerates slabs directly.  Route two builds ``V u V'`` and
    takes the Gabriel edges (weak or strict per ``mode``) joining ``V`` to
    ``V'``; then ``2N = |E1| + |E2| + |V n V'|``.  Disagreement raises
    :class:`LiftMismatch`.
    """
    V = _sphere_set(V)
    mode = as_mode(mode)
    if V.n < 2:
        raise TooFewPoints("need at least 2 points")
    G = double_normal_graph(V, mode)
    U, in_v, in_vp, prime = antipodal_union(V)
    common = in_v & in_vp
    if mode is Mode.WEAK:
        gab = _gabriel_edges(U.points, U.tol, strict=False)
        e1 = [(u, w) for u, w in gab if (in_v[u] and in_vp[w]) or (in_v[w] and in_vp[u])]
        e2 = [(u, w) for u, w in e1 if common[u] and common[w]]
    else:
        gab = _gabriel_edges(U.points, U.tol, strict=True)
        only_v, only_vp = in_v & ~in_vp, in_vp & ~in_v
        e1 = [(u, w) for u, w in gab if (only_v[u] and only_vp[w]) or (only_v[w] and only_vp[u])]
        e2 = []
    n_common = int(common.sum())
    twice = len(e1) + len(e2) + n_common
    lift = GeoGraph(U.n, tuple(e1), Space.SPHERE)
    if twice % 2 or twice // 2 != G.n_edges:
        expected = set()
        for x, y in G.edges:
            if prime[y] != x:
                expected.add(tuple(sorted((x, int(prime[y])))))
                expected.add(tuple(sorted((y, int(prime[x])))))
        if mode is Mode.STRICT:
            expected = {e for e in expected if not (common[e[0]] or common[e[1]])}
        raise LiftMismatch(
            f"direct count {G.n_edges} != lift count {twice / 2}",
            diagnostic={
                "missing_from_lift": sorted(expected - set(lift.edges)),
                "extra_in_lift": sorted(set(lift.edges) - expected),
                "E1": len(e1),
                "E2": len(e2),
                "V_cap_Vprime": n_common,
            },
        )
    return LiftResult(G.n_edges, G, U, in_v, in_vp, lift, tuple(e2), n_common, twice // 2, mode)


# --------------------------------------------------------------- estimators


class SphericalGabrielGraph(BaseEstimator):
    """Weak (default) or strict Gabriel graph of points on the unit sphere.

    Attributes: ``points_``, ``graph_``, ``edges_``, ``n_edges_``.
    """

    def __init__(self, strict=False, boundary_eps=None):
        self.strict = strict
        self.boundary_eps = boundary_eps

    def fit(self, X, y=None):
        tol = Tolerance().with_overrides(boundary_eps=self.boundary_eps)
        self.points_ = PointSet.from_array(X, Space.SPHERE, tol)
        self.graph_ = strict_gabriel(self.points_) if self.strict else weak_gabriel(self.points_)
        self.edges_ = np.array(self.graph_.edges, dtype=int).reshape(-1, 2)
        self.n_edges_ = self.graph_.n_edges
        return self

    def fit_predict(self, X, y=None):
        return self.fit(X).edges_


class SphericalDelaunay(BaseEstimator):
    """Delaunay tiling of points on the unit sphere via the convex hull.

    Attributes: ``tiling_``, ``faces_``, ``edges_``, ``face_census_``,
    ``origin_case_``.
    """

    def __init__(self, boundary_eps=None):
        self.boundary_eps = boundary_eps

    def fit(self, X, y=None):
        tol = Tolerance().with_overrides(boundary_eps=self.boundary_eps)
        self.tiling_ = delaunay_tiling(PointSet.from_array(X, Space.SPHERE, tol))
        self.faces_ = list(self.tiling_.faces)
        self.edges_ = np.array(self.tiling_.edges, dtype=int).reshape(-1, 2)
        self.face_census_ = dict(self.tiling_.face_census)
        self.origin_case_ = self.tiling_.origin_case
        return self

    def transform(self, X=None):
        """Face-size census as a ``(1, max_size + 1)`` count vector."""
        census = self.face_census_
        out = np.zeros((1, max(census, default=0) + 1), dtype=int)
        for k, v in census.items():
            out[0, k] = v
        return out


class SphereDoubleNormals(BaseEstimator):
    """Double-normal count of a sphere set, cross-checked by the antipodal lift.

    Attributes: ``lift_`` (:class:`LiftResult`), ``count_``, ``graph_``.
    """

    def __init__(self, mode="weak", boundary_eps=None):
        self.mode = mode
        self.boundary_eps = boundary_eps

    def fit(self, X, y=None):
        tol = Tolerance().with_overrides(boundary_eps=self.boundary_eps)
        self.lift_ = sphere_double_normals(PointSet.from_array(X, Space.SPHERE, tol), self.mode)
        self.count_ = self.lift_.count
        self.graph_ = self.lift_.graph
        return self

    def score(self, X=None, y=None):
        return float(self.count_)
