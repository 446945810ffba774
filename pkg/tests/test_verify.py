import warnings
from fractions import Fraction

import numpy as np
import pytest

from normalis import (
    AnnealingSearch,
    BoundViolation,
    OutOfStatedRange,
    PointSet,
    Space,
    Theorem,
    Tolerance,
    WrongSpace,
    bound_formula,
    check_bound,
    double_normal_graph,
    oracle_double_normals,
    random_search,
    sphere_double_normals,
)
from normalis import constructions as C
from normalis.verify import diameter_bound


@pytest.mark.parametrize(
    "theorem, n, want",
    [
        ("t1", 8, 12),
        ("t1", 7, 9),
        ("t1s", 9, 9),
        ("t2", 4, 6),
        ("t3", 24, 96),
        ("t3", 8, 28),
        ("t3", 10, Fraction(73, 2)),
        ("gabriel", 8, 24),
        ("t1-strict", 5, 5),
    ],
)
def test_bound_formula(theorem, n, want):
    got = bound_formula(theorem, n)
    assert isinstance(got, Fraction)
    assert got == want


def test_bound_formula_out_of_range_warns():
    with pytest.warns(OutOfStatedRange):
        assert bound_formula(Theorem.T3, 6) == Fraction(51, 2) - 6
    with pytest.warns(OutOfStatedRange):
        bound_formula("t1", 2)


def test_diameter_bound():
    assert diameter_bound(2, 7) == 7
    assert diameter_bound(3, 7) == 12


def test_octagon_t1(octagon):
    rep = check_bound(octagon, "t1")
    assert rep.verdict == "pass" and rep.equality
    assert rep.characterization == {"concyclic": True, "centrally_symmetric": True}
    assert rep.characterization_holds


def test_cube_t3(cube):
    rep = check_bound(cube, Theorem.T3)
    assert rep.verdict == "pass" and rep.equality
    ch = rep.characterization
    assert ch["centrally_symmetric"]
    assert ch["n_rectangles"] == 6 and ch["n_triangles"] == 0
    assert ch["three_rectangles_per_vertex"] and ch["triangles_acute"]
    assert rep.characterization_holds


def test_rhombicuboctahedron_t3():
    rep = check_bound(C.rhombicuboctahedron_vertices(), "t3")
    assert rep.observed == 96 and rep.equality and rep.characterization_holds


def test_layered_equality_only_for_k4():
    for m in (1, 2, 3):
        rep = check_bound(C.layered_construction(C.LayeredParams(4, m)), "t3")
        assert rep.equality and rep.characterization_holds
    rep = check_bound(C.layered_construction(C.LayeredParams(6, 2)), "t3")
    assert rep.verdict == "pass" and not rep.equality


def test_odd_polygon_is_not_equality_for_t1():
    rep = check_bound(C.regular_polygon(9), "t1")
    assert rep.verdict == "pass" and not rep.equality


def test_cube_gabriel(cube):
    rep = check_bound(cube, "gabriel")
    assert rep.observed == 24 and rep.equality and rep.characterization_holds


def test_octahedron_is_not_asserted(octahedron):
    rep = check_bound(octahedron, "t3")
    assert rep.observed == 15
    assert rep.verdict == "not-asserted" and rep.passed


def test_wrong_space(octagon, cube):
    with pytest.raises(WrongSpace):
        check_bound(octagon, "t3")
    with pytest.raises(WrongSpace):
        check_bound(cube, "t1")


def test_random_planar_sets_pass(rng):
    for _ in range(200):
        V = PointSet.from_array(rng.random((10, 2)))
        for th in ("t1", "t1s"):
            assert check_bound(V, th).verdict == "pass"
    V = PointSet.from_array(np.random.default_rng(11).random((11, 2)))
    assert check_bound(V, "t1").verdict == "pass"


def test_random_sphere_sets_pass(rng):
    for _ in range(100):
        X = rng.standard_normal((int(rng.integers(8, 15)), 3))
        V = PointSet.from_array(X / np.linalg.norm(X, axis=1)[:, None], Space.SPHERE)
        for th in ("t2", "t3", "gabriel"):
            assert check_bound(V, th).verdict == "pass"


def test_report_serialises(cube):
    d = check_bound(cube, "t3").to_dict()
    assert d["bound"] == 28 and d["verdict"] == "pass" and d["witness"] is None
    assert "equality" in check_bound(cube, "t3").summary()


def test_oracle_examples(octagon, cube):
    assert oracle_double_normals(octagon).n_edges == 12
    assert oracle_double_normals(cube).n_edges == 28
    assert oracle_double_normals(octagon.points.tolist()).n_edges == 12


def test_oracle_equivalence_sweep(rng):
    for space in (Space.PLANE, Space.SPHERE):
        for _ in range(300):
            n = int(rng.integers(3, 15))
            X = rng.random((n, 2)) if space is Space.PLANE else rng.standard_normal((n, 3))
            if space is Space.SPHERE:
                X /= np.linalg.norm(X, axis=1)[:, None]
            V = PointSet.from_array(X, space)
            for mode in ("weak", "strict"):
                fast = double_normal_graph(V, mode) if space is Space.PLANE else sphere_double_normals(V, mode).graph
                assert fast == oracle_double_normals(V, mode)


def test_search_examples():
    assert random_search("plane", 3, 100, seed=1).best_n == 3
    assert random_search("plane", 7, 20000, seed=1).best_n == 9


def test_search_reproducible():
    a = random_search("sphere", 7, 8, seed=4, stop_at_bound=False)
    b = random_search("sphere", 7, 8, seed=4, stop_at_bound=False)
    assert a.best_n == b.best_n and a.history == b.history
    assert np.array_equal(a.best_points, b.best_points)
    assert a.to_dict() == b.to_dict()


def test_search_best_points_are_valid():
    st = random_search("sphere", 6, 6, seed=2, stop_at_bound=False)
    V = PointSet.from_array(st.best_points, Space.SPHERE)
    assert double_normal_graph(V).n_edges == st.best_n


def test_search_aborts_on_violation():
    # a huge band counts every pair, which breaks the planar bound for n = 5
    with pytest.raises(BoundViolation) as info:
        random_search("plane", 5, 10, seed=0, tol=Tolerance(boundary_eps=10.0))
    assert info.value.witness["seed"] == 0
    assert len(info.value.witness["points"]) == 5


def test_search_parameters():
    with pytest.raises(WrongSpace):
        random_search("space3", 5, 10)
    with pytest.raises(ValueError):
        random_search("plane", 2, 10)
    with pytest.raises(ValueError):
        random_search("plane", 5, 0)


def test_annealing_estimator():
    est = AnnealingSearch(space="plane", n=6, budget=500, seed=3)
    assert est.get_params()["budget"] == 500
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        est.fit()
    assert est.best_n_ == 9 and est.score() == 9.0
    assert est.best_points_.shape == (6, 2)
