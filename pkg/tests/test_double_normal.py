import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from sklearn.base import clone

from normalis import (
    DiameterGraph,
    DoubleNormalGraph,
    Mode,
    PointSet,
    TooFewPoints,
    WrongSpace,
    audit_basic_claims,
    diameter_graph,
    double_normal_graph,
    oracle_double_normals,
    red_blue_decomposition,
)
from normalis import constructions as C

TRIANGLE = C.regular_polygon(3)
SQUARE = C.regular_polygon(4)


def test_octagon_has_twelve(octagon):
    assert double_normal_graph(octagon).n_edges == 12


def test_cube_all_pairs(cube):
    G = double_normal_graph(cube)
    assert G.n_edges == 28


def test_triangle_strict():
    assert double_normal_graph(TRIANGLE, Mode.STRICT).n_edges == 3


def test_seven_point_set():
    G = double_normal_graph(C.seven_point_example())
    assert G.n_edges == 9


def test_square_strict_is_diagonals():
    # the other two corners sit on the slab boundary of every side
    assert double_normal_graph(SQUARE, "strict").edges == ((0, 2), (1, 3))


@pytest.mark.parametrize("V, want", [(TRIANGLE, 3), (SQUARE, 2), (C.regular_polygon(5), 5)])
def test_diameter_graph(V, want):
    assert diameter_graph(V).n_edges == want


def test_diameter_pairs_are_strict_double_normals(rng):
    for _ in range(50):
        V = PointSet.from_array(rng.random((int(rng.integers(3, 12)), 2)))
        assert diameter_graph(V).issubset(double_normal_graph(V, "strict"))


def test_strict_subset_of_weak(rng):
    for _ in range(50):
        V = PointSet.from_array(rng.random((10, 2)))
        assert double_normal_graph(V, "strict").issubset(double_normal_graph(V))


def test_hull_accelerator_agrees(rng):
    for n in (5, 9, 14):
        for _ in range(20):
            V = PointSet.from_array(rng.random((n, 2)))
            assert double_normal_graph(V, use_hull=True) == double_normal_graph(V)
    V = C.planar_odd_extremal(9)
    assert double_normal_graph(V, use_hull=True) == double_normal_graph(V)


def test_too_few_points():
    with pytest.raises(TooFewPoints):
        double_normal_graph(np.array([[0.0, 0.0]]))


def test_boundary_band_counts_near_ties():
    # perturb the square so a corner lies 1e-12 outside the slab
    X = SQUARE.points.copy()
    X[0] *= 1 + 1e-13
    assert double_normal_graph(X).n_edges == 6


@pytest.mark.parametrize("V", [C.regular_polygon(8), C.seven_point_example()], ids=["octagon", "seven"])
def test_basic_claims(V):
    rep = audit_basic_claims(V)
    assert rep.passed, rep.violations


def test_red_blue_octagon(octagon):
    rep = red_blue_decomposition(octagon)
    assert rep.passed
    assert len(rep.red_edges) == 8
    assert len(rep.blue_edges) == 4


def test_red_blue_triangle():
    rep = red_blue_decomposition(TRIANGLE)
    assert rep.passed
    assert len(rep.red_edges) == 3 and not rep.blue_edges


def test_red_blue_rejects_sphere(cube):
    with pytest.raises(WrongSpace):
        red_blue_decomposition(cube)


def test_random_claims_hold(rng):
    for _ in range(100):
        V = PointSet.from_array(rng.random((10, 2)))
        assert audit_basic_claims(V).passed
        assert red_blue_decomposition(V).passed


def test_convex_position_claims(rng):
    for _ in range(30):
        a = np.sort(rng.uniform(0, 2 * np.pi, 8))
        V = PointSet.from_array(np.c_[np.cos(a), 1.5 * np.sin(a)])
        assert red_blue_decomposition(V).passed


def test_estimator_api(octagon):
    est = DoubleNormalGraph(mode="weak")
    edges = est.fit_predict(octagon.points)
    assert edges.shape == (12, 2)
    assert est.score() == 12.0
    assert clone(est).get_params() == {"mode": "weak", "space": None, "boundary_eps": None, "use_hull": False}
    assert DiameterGraph().fit(octagon.points).n_edges_ == 4


points2 = st.lists(
    st.tuples(st.integers(-20, 20), st.integers(-20, 20)), min_size=3, max_size=12, unique=True
)


@settings(max_examples=150, deadline=None)
@given(points2, st.sampled_from(["weak", "strict"]))
def test_fast_path_equals_oracle_on_lattice(pts, mode):
    # lattice points exercise exact boundary ties
    V = PointSet.from_array(np.array(pts, dtype=float))
    assert double_normal_graph(V, mode) == oracle_double_normals(V, mode)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**31 - 1), st.floats(0, 2 * np.pi))
def test_invariant_under_similarity(seed, theta):
    X = np.random.default_rng(seed).random((9, 2))
    R = np.array([[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]])
    Y = 3.7 * X @ R.T + np.array([5.0, -2.0])
    assert double_normal_graph(X) == double_normal_graph(Y)
