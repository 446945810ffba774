"""The acceptance battery run by ``normalis verify --suite``."""

from __future__ import annotations

import math
import time
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import constructions as C
from .exceptions import BoundViolation, DegenerateHull
from .double_normal import Mode, double_normal_graph, red_blue_decomposition
from .geometry import PointSet, Space
from .spherical import (
    crossing_classes,
    crossing_pairs,
    delaunay_tiling,
    sphere_double_normals,
    strict_gabriel,
    weak_gabriel,
)
from .verify import Theorem, bound_formula, check_bound, oracle_double_normals, random_search

NEAR_EXTREMAL_C = 16.0
LAYERED_CASES = ((4, 1), (4, 2), (4, 3), (6, 2), (6, 3), (8, 2))
SEVEN_POINT_EDGES = {"ad", "ae", "bd", "be", "bf", "bg", "cf", "cg", "dg"}


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool = True
    failures: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    seconds: float = 0.0

    def check(self, ok: bool, what: str) -> None:
        if not ok:
            self.passed = False
            self.failures.append(what)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        extra = f" -- {'; '.join(self.failures[:3])}" if self.failures else ""
        return f"[{status}] {self.number:2d}. {self.title} ({self.seconds:.1f}s){extra}"

    def to_dict(self) -> dict:
        return {
            "criterion": self.number,
            "title": self.title,
            "passed": self.passed,
            "failures": self.failures,
            "notes": self.notes,
            "seconds": round(self.seconds, 3),
        }


def random_plane_sets(count: int, seed: int = 0, n_max: int = 14):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(3, n_max + 1))
        yield PointSet.from_array(rng.random((n, 2)), Space.PLANE)


def random_sphere_sets(count: int, seed: int = 0, n_min: int = 4, n_max: int = 14):
    rng = np.random.default_rng(seed)
    for _ in range(count):
        n = int(rng.integers(n_min, n_max + 1))
        X = rng.standard_normal((n, 3))
        yield PointSet.from_array(X / np.linalg.norm(X, axis=1)[:, None], Space.SPHERE)


def _n_dn(V, mode="weak") -> int:
    return double_normal_graph(V, mode).n_edges


def criterion_1() -> CriterionResult:
    r = CriterionResult(1, "regular n-gons attain 3n/2")
    for n in (4, 6, 8, 12, 20, 50):
        N = _n_dn(C.regular_polygon(n))
        r.check(N == 3 * n // 2, f"n={n}: N={N}")
    return r


def criterion_2() -> CriterionResult:
    r = CriterionResult(2, "odd planar extremal sets and the seven-point example")
    for n in (5, 7, 9, 21):
        N = _n_dn(C.planar_odd_extremal(n))
        r.check(N == 3 * (n // 2), f"n={n}: N={N}")
    G = double_normal_graph(C.seven_point_example())
    got = {C.SEVEN_POINT_LABELS[i] + C.SEVEN_POINT_LABELS[j] for i, j in G.edges}
    r.check(got == SEVEN_POINT_EDGES, f"seven-point edges {sorted(got)}")
    return r


def criterion_3(count: int = 1000) -> CriterionResult:
    r = CriterionResult(3, "planar bound sweep with oracle agreement")
    for k, V in enumerate(random_plane_sets(count, seed=3)):
        weak, strict = double_normal_graph(V), double_normal_graph(V, Mode.STRICT)
        r.check(weak.n_edges <= 3 * (V.n // 2), f"set {k}: N={weak.n_edges} n={V.n}")
        r.check(strict.n_edges <= V.n, f"set {k}: N'={strict.n_edges} n={V.n}")
        r.check(weak.edges == oracle_double_normals(V, "weak").edges, f"set {k}: weak oracle mismatch")
        r.check(strict.edges == oracle_double_normals(V, "strict").edges, f"set {k}: strict oracle mismatch")
    return r


def criterion_4(count: int = 1000) -> CriterionResult:
    r = CriterionResult(4, "sphere strict bound 2n-2")
    for k, V in enumerate(random_sphere_sets(count, seed=4)):
        N = _n_dn(V, Mode.STRICT)
        r.check(N <= 2 * V.n - 2, f"set {k}: N'={N} n={V.n}")
    N5 = sphere_double_normals(C.five_point_strict(), "strict").count
    r.check(N5 == 8, f"five-point strict N={N5}")
    return r


def criterion_5(count: int = 1000) -> CriterionResult:
    r = CriterionResult(5, "sphere weak bound 17n/4-6 and its equality cases")
    for name, V, want in (("cube", C.cube_vertices(), 28), ("rhombicuboctahedron", C.rhombicuboctahedron_vertices(), 96)):
        rep = check_bound(V, Theorem.T3)
        r.check(rep.observed == want and rep.equality, f"{name}: N={rep.observed}")
        r.check(bool(rep.characterization_holds), f"{name}: characterization {rep.characterization}")
    for k, V in enumerate(random_sphere_sets(count, seed=5, n_min=8)):
        N = _n_dn(V)
        r.check(N <= bound_formula(Theorem.T3, V.n), f"set {k}: N={N} n={V.n}")
    return r


def _generated_sphere_sets():
    yield C.cube_vertices()
    yield C.octahedron_vertices()
    yield C.rhombicuboctahedron_vertices()
    yield C.five_point_strict()
    for k, m in LAYERED_CASES:
        yield C.layered_construction(C.LayeredParams(k, m))


def criterion_6(count: int = 1000) -> CriterionResult:
    r = CriterionResult(6, "weak Gabriel graphs have at most 15n/4-6 edges")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        sets = list(_generated_sphere_sets()) + list(random_sphere_sets(count, seed=6, n_min=2))
        for k, V in enumerate(sets):
            E = weak_gabriel(V).n_edges
            r.check(E <= bound_formula(Theorem.GABRIEL, V.n), f"set {k}: |E|={E} n={V.n}")
    E = weak_gabriel(C.cube_vertices()).n_edges
    r.check(E == 24, f"cube: |E|={E}")
    return r


def criterion_7() -> CriterionResult:
    r = CriterionResult(7, "layered construction counts and face census")
    for k, m in LAYERED_CASES:
        p = C.LayeredParams(k, m)
        V = C.layered_construction(p)
        r.check(V.n == 2 * (2**m - 1) * k, f"({k},{m}): |V|={V.n}")
        N = oracle_double_normals(V).n_edges
        want = bound_formula(Theorem.T3, V.n) + 6 - Fraction(3 * k, 2)
        r.check(N == want, f"({k},{m}): N={N}, want {want}")
        T = delaunay_tiling(V)
        r.check(V.n - T.n_edges + sum(T.face_census.values()) == 2, f"({k},{m}): Euler")
        if k > 4:
            r.check(T.face_census == p.expected_census(), f"({k},{m}): census {T.face_census}")
            r.check(T.n_edges == p.expected_edges(), f"({k},{m}): e={T.n_edges}")
    return r


def criterion_8(c_const: float = NEAR_EXTREMAL_C) -> CriterionResult:
    r = CriterionResult(8, "padding and near-extremal sets")
    base = C.layered_construction(C.LayeredParams(4, 2))
    for extra in range(1, 5):
        N = _n_dn(C.pad_with_interior_points(base, extra))
        r.check(N >= 90, f"layered(4,2)+{extra}: N={N}")
    for n in (16, 24, 100):
        p = C.near_extremal_params(n)
        V = C.near_extremal(n)
        N = _n_dn(V)
        r.check(V.n == n, f"n={n}: got {V.n} points")
        r.check(n - p.n_points < 2 * math.sqrt(n), f"n={n}: gap {n - p.n_points}")
        r.check(N >= 17 / 4 * n - c_const * math.sqrt(n), f"n={n}: N={N}")
        r.notes.append(f"n={n}: N={N}, (17n/4 - N)/sqrt(n) = {(17 / 4 * n - N) / math.sqrt(n):.2f}")
    return r


def _structural_sphere(V: PointSet, r: CriterionResult, tag: str) -> None:
    X, tol = V.points, V.tol
    S = strict_gabriel(V)
    r.check(not crossing_pairs(X, S.edges, tol), f"{tag}: strict Gabriel arcs cross")
    W = weak_gabriel(V)
    rep = crossing_classes(W, V)  # re-verifies midpoints and lengths
    for cls in rep.crossing_classes:
        mids = [(X[a] + X[b]) / np.linalg.norm(X[a] + X[b]) for a, b in cls]
        lens = [math.acos(max(-1.0, min(1.0, float(X[a] @ X[b])))) for a, b in cls]
        r.check(max(np.linalg.norm(m - mids[0]) for m in mids) <= 1e-7, f"{tag}: midpoints differ")
        r.check(max(lens) - min(lens) <= 1e-7, f"{tag}: lengths differ")
    try:
        T = delaunay_tiling(V)
    except DegenerateHull:
        T = None
    if T is not None:
        both = sorted(set(W.edges) | set(T.edges))
        gab, til = set(W.edges), set(T.edges)
        for a, b in crossing_pairs(X, both, tol):
            e, f = both[a], both[b]
            r.check(not ((e in gab and f in til) or (e in til and f in gab)), f"{tag}: {e} crosses tiling edge {f}")
    for mode in ("weak", "strict"):
        L = sphere_double_normals(V, mode)
        r.check(2 * L.count == L.lift_e1.n_edges + len(L.lift_e2) + L.n_common, f"{tag}: lift identity ({mode})")


def criterion_9(count: int = 200) -> CriterionResult:
    r = CriterionResult(9, "structural invariants")
    plane = [C.regular_polygon(n) for n in (3, 4, 8, 9)] + [C.planar_odd_extremal(9), C.seven_point_example()]
    plane += list(random_plane_sets(count, seed=9))
    for k, V in enumerate(plane):
        rep = red_blue_decomposition(V)
        for claim in ("blue_matching", "blue_pairwise_cross"):
            r.check(rep.claim_results.get(claim, False), f"plane set {k}: {claim}")
    sphere = list(_generated_sphere_sets()) + list(random_sphere_sets(count, seed=9))
    for k, V in enumerate(sphere):
        _structural_sphere(V, r, f"sphere set {k}")
    return r


def criterion_10(seeds: int = 100) -> CriterionResult:
    r = CriterionResult(10, "annealing search sanity")
    st = random_search("plane", 8, 20000, seed=1)
    r.check(st.best_n == 12, f"plane n=8: best {st.best_n}")
    st = random_search("sphere", 8, 50000, seed=1)
    r.check(st.best_n == 28, f"sphere n=8: best {st.best_n}")
    for seed in range(seeds):
        space = "plane" if seed % 2 == 0 else "sphere"
        n = 5 + seed % 4 if space == "plane" else 8
        try:
            random_search(space, n, 2, seed=seed)
        except BoundViolation as exc:
            r.check(False, f"seed {seed}: {exc}")
    return r


def run_suite(quick: bool = False) -> list[CriterionResult]:
    count = 100 if quick else 1000
    jobs = [
        criterion_1,
        criterion_2,
        lambda: criterion_3(count),
        lambda: criterion_4(count),
        lambda: criterion_5(count),
        lambda: criterion_6(count),
        criterion_7,
        criterion_8,
        lambda: criterion_9(count // 5),
        lambda: criterion_10(20 if quick else 100),
    ]
    out = []
    for job in jobs:
        t = time.perf_counter()
        res = job()
        res.seconds = time.perf_counter() - t
        out.append(res)
    return out
