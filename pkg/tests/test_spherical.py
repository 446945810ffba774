import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from normalis import (
    DegenerateHull,
    OriginCase,
    PointSet,
    SphereDoubleNormals,
    SphericalDelaunay,
    SphericalGabrielGraph,
    Space,
    crossing_classes,
    delaunay_tiling,
    euler_audit,
    reduce_to_gprime,
    sphere_double_normals,
    strict_gabriel,
    weak_gabriel,
)
from normalis import constructions as C
from normalis.spherical import crossing_pairs, embedded_faces, hull_faces


def sphere(X):
    X = np.asarray(X, dtype=float)
    return PointSet.from_array(X / np.linalg.norm(X, axis=1)[:, None], Space.SPHERE)


def random_sphere(rng, n):
    return sphere(rng.standard_normal((n, 3)))


TWO = sphere([[1, 0, 0], [0, 1, 0]])


def test_gabriel_examples(cube, octahedron):
    assert weak_gabriel(octahedron).n_edges == 12
    assert weak_gabriel(cube).n_edges == 24
    assert weak_gabriel(TWO).n_edges == 1
    assert strict_gabriel(cube).n_edges == 12
    assert strict_gabriel(octahedron).n_edges == 12
    assert strict_gabriel(TWO).n_edges == 1


def test_antipodal_pairs_never_joined(octahedron):
    anti = octahedron.antipodal_index()
    for i, j in weak_gabriel(octahedron).edges:
        assert anti[i] != j


def test_strict_gabriel_of_antipodal_pair_plus_point():
    V = sphere([[0, 0, 1], [0, 0, -1], [1, 0, 0]])
    G = strict_gabriel(V)
    assert G.edges == ((0, 2), (1, 2))
    assert G.degrees().tolist() == [1, 1, 2]


def test_strict_subset_of_weak(rng):
    for _ in range(30):
        V = random_sphere(rng, 12)
        assert strict_gabriel(V).issubset(weak_gabriel(V))


def test_hull_faces(cube):
    faces = hull_faces(cube)
    assert sorted(len(f.vertices) for f in faces) == [4] * 6
    for f in faces:
        assert f.offset > 0
        assert np.allclose(cube.points[list(f.vertices)] @ f.normal, f.offset)


def test_tiling_cube_and_octahedron(cube, octahedron):
    T = delaunay_tiling(cube)
    assert T.face_census == {4: 6}
    assert T.n_edges == 12
    assert T.origin_case is OriginCase.INTERIOR_OF_HULL
    assert T.total_area() == pytest.approx(4 * np.pi)
    T = delaunay_tiling(octahedron)
    assert T.face_census == {3: 8} and T.n_edges == 12
    assert T.origin_case is OriginCase.INTERIOR_OF_HULL


def test_tiling_layered_six_three():
    T = delaunay_tiling(C.layered_construction(C.LayeredParams(6, 3)))
    assert T.face_census == {3: 36, 4: 60, 6: 2}
    assert T.n_edges == 180


def test_tiling_origin_cases():
    # four points in a small cap: origin outside the hull
    V = sphere([[0.1, 0, 1], [-0.1, 0, 1], [0, 0.1, 1], [0, -0.1, 1]])
    T = delaunay_tiling(V)
    assert T.origin_case is OriginCase.OUTSIDE_HULL
    # a tetrahedron with one face through the origin
    V = sphere([[1, 0, 0], [-0.5, 0.8, 0], [-0.5, -0.8, 0], [0, 0, 1]])
    assert delaunay_tiling(V).origin_case is OriginCase.IN_FACE_RELINT
    # an edge through the origin
    V = sphere([[1, 0, 0], [-1, 0, 0], [0, 1, 1], [0, 1, -1], [0.2, 1, 0]])
    assert delaunay_tiling(V).origin_case is OriginCase.IN_EDGE_RELINT


def test_tiling_great_circle_is_degenerate():
    a = np.linspace(0, 2 * np.pi, 6, endpoint=False)
    with pytest.raises(DegenerateHull):
        delaunay_tiling(sphere(np.c_[np.cos(a), np.sin(a), np.zeros(6)]))


def test_crossing_classes_cube(cube):
    rep = crossing_classes(weak_gabriel(cube), cube)
    assert len(rep.crossing_classes) == 6
    assert all(len(c) == 2 for c in rep.crossing_classes)
    assert all(len(p) == 4 for p in rep.polygons)
    assert rep.g_census.get(4) == 6
    assert rep.polygon_claim_ok


def test_crossing_classes_octahedron(octahedron):
    rep = crossing_classes(weak_gabriel(octahedron), octahedron)
    assert len(rep.classes) == 12
    assert not rep.crossing_classes and not rep.polygons


def test_single_edge_class():
    rep = crossing_classes(weak_gabriel(TWO), TWO)
    assert rep.classes == [[(0, 1)]]


def test_gprime_and_audit_cube(cube):
    G = weak_gabriel(cube)
    rep = crossing_classes(G, cube)
    Gp = reduce_to_gprime(G, rep)
    assert Gp.n_edges == 12
    assert Gp == delaunay_tiling(cube).graph()
    audit = euler_audit(Gp, cube, rep)
    assert audit.passed, audit.checks
    assert audit.n_faces == 6


def test_gprime_layered_cube_is_delaunay():
    V = C.layered_construction(C.LayeredParams(4, 1))
    G = weak_gabriel(V)
    Gp = reduce_to_gprime(G, crossing_classes(G, V))
    assert Gp == delaunay_tiling(V).graph()


def test_gprime_identity_without_crossings(octahedron):
    G = weak_gabriel(octahedron)
    assert reduce_to_gprime(G, crossing_classes(G, octahedron)) == G


def test_embedded_faces_octahedron(octahedron):
    sizes = embedded_faces(octahedron.points, weak_gabriel(octahedron))
    assert sorted(sizes) == [3] * 8


def test_euler_audit_random(rng):
    for _ in range(20):
        V = random_sphere(rng, int(rng.integers(5, 16)))
        G = weak_gabriel(V)
        rep = crossing_classes(G, V)
        audit = euler_audit(reduce_to_gprime(G, rep), V, rep)
        assert audit.passed, audit.checks


def test_lift_cube(cube):
    L = sphere_double_normals(cube)
    assert L.count == 28 == L.count_via_lift
    assert L.n_common == 8
    assert L.lift_e1.n_edges == 24 and len(L.lift_e2) == 24
    assert sphere_double_normals(cube, "strict").count == 4


def test_lift_identity_random(rng):
    for _ in range(40):
        V = random_sphere(rng, int(rng.integers(4, 14)))
        for mode in ("weak", "strict"):
            L = sphere_double_normals(V, mode)
            assert L.count == L.count_via_lift
            assert 2 * L.count == L.lift_e1.n_edges + len(L.lift_e2) + L.n_common


def test_lift_rhombicuboctahedron():
    assert sphere_double_normals(C.rhombicuboctahedron_vertices()).count == 96


def test_estimators(cube):
    est = SphericalGabrielGraph().fit(cube.points)
    assert est.n_edges_ == 24
    assert SphericalGabrielGraph(strict=True).fit_predict(cube.points).shape == (12, 2)
    d = SphericalDelaunay().fit(cube.points)
    assert d.transform().tolist() == [[0, 0, 0, 0, 6]]
    assert SphereDoubleNormals().fit(cube.points).score() == 28.0
    assert SphericalGabrielGraph(boundary_eps=1e-8).get_params() == {"strict": False, "boundary_eps": 1e-8}


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_rotation_invariance(seed):
    rng = np.random.default_rng(seed)
    V = random_sphere(rng, 10)
    R = Rotation.random(random_state=seed).as_matrix()
    W = sphere(V.points @ R.T)
    assert weak_gabriel(V) == weak_gabriel(W)
    assert strict_gabriel(V) == strict_gabriel(W)
    assert delaunay_tiling(V).graph() == delaunay_tiling(W).graph()
    assert sphere_double_normals(V).count == sphere_double_normals(W).count


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_gabriel_never_crosses_tiling(seed):
    V = random_sphere(np.random.default_rng(seed), 12)
    gab, til = set(weak_gabriel(V).edges), set(delaunay_tiling(V).edges)
    both = sorted(gab | til)
    for a, b in crossing_pairs(V.points, both, V.tol):
        e, f = both[a], both[b]
        assert not ((e in gab and f in til) or (e in til and f in gab))
