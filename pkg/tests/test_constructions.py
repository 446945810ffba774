import math

import numpy as np
import pytest

from normalis import (
    BadParameter,
    DuplicateAngle,
    InfeasibleSideLength,
    NoTriangularFace,
    Space,
    delaunay_tiling,
    double_normal_graph,
    oracle_double_normals,
    sphere_double_normals,
)
from normalis import constructions as C


def N(V, mode="weak"):
    return double_normal_graph(V, mode).n_edges


@pytest.mark.parametrize("n, want", [(3, 3), (4, 6), (8, 12), (12, 18)])
def test_regular_polygon(n, want):
    V = C.regular_polygon(n)
    assert V.n == n and V.space is Space.PLANE
    assert np.allclose(np.linalg.norm(V.points, axis=1), 1.0)
    assert N(V) == want


@pytest.mark.parametrize("n, want", [(3, 3), (7, 9), (9, 12), (21, 30)])
def test_planar_odd_extremal(n, want):
    V = C.planar_odd_extremal(n)
    assert V.n == n
    assert N(V) == want


def test_bad_polygon_sizes():
    with pytest.raises(BadParameter):
        C.regular_polygon(2)
    with pytest.raises(BadParameter):
        C.planar_odd_extremal(6)


@pytest.mark.parametrize("angles, n, want", [((0, 45, 90, 135), 8, 12), ((0, 10, 75), 6, 9), ((0,), 2, 1)])
def test_symmetric_circle_set(angles, n, want):
    V = C.symmetric_circle_set(angles)
    assert V.n == n
    assert N(V) == want


def test_symmetric_circle_duplicate():
    with pytest.raises(DuplicateAngle):
        C.symmetric_circle_set([0, 180])


def test_seven_point_edges():
    V = C.seven_point_example()
    got = {C.SEVEN_POINT_LABELS[i] + C.SEVEN_POINT_LABELS[j] for i, j in double_normal_graph(V).edges}
    assert got == {"ad", "ae", "bd", "be", "bf", "bg", "cf", "cg", "dg"}


def test_cube_and_rhombicuboctahedron(cube):
    assert cube.n == 8 and N(cube) == 28
    assert (cube.antipodal_index() >= 0).all()
    R = C.rhombicuboctahedron_vertices()
    assert R.n == 24 and N(R) == 96


@pytest.mark.parametrize("offset", [5.0, 1.0])
def test_five_point_strict(offset):
    V = C.five_point_strict(offset)
    assert V.n == 5
    assert sphere_double_normals(V, "strict").count == 8
    assert N(V) >= 8


@pytest.mark.parametrize("k, m", [(4, 1), (4, 2), (6, 1), (6, 2), (6, 3), (8, 2), (10, 2), (12, 1)])
def test_layered_counts(k, m):
    p = C.LayeredParams(k, m)
    V = C.layered_construction(p)
    assert V.n == p.n_points == 2 * (2**m - 1) * k
    T = delaunay_tiling(V)
    assert T.face_census == p.expected_census()
    assert T.n_edges == p.expected_edges()
    assert oracle_double_normals(V).n_edges == p.expected_double_normals()
    assert 4 * p.expected_double_normals() == 17 * V.n - 6 * k


def test_layered_six_three_is_348():
    V = C.layered_construction(C.LayeredParams(6, 3))
    assert V.n == 84 and N(V) == 348


def test_layered_parameters():
    with pytest.raises(BadParameter):
        C.LayeredParams(5, 1)
    with pytest.raises(BadParameter):
        C.LayeredParams(4, 0)
    p = C.LayeredParams(6, 2, c=10.0)
    with pytest.raises(InfeasibleSideLength):
        p.polar_angles()
    angles = C.LayeredParams(6, 3).polar_angles(0.1)
    assert angles == sorted(angles) and angles[-1] < math.pi / 2


def test_padding_keeps_most_pairs():
    base = C.layered_construction(C.LayeredParams(4, 2))
    for extra in range(1, 5):
        V = C.pad_with_interior_points(base, extra)
        assert V.n == 24 + extra
        assert np.allclose(V.points[:24], base.points)
        assert N(V) == 93


def test_padding_layered_six_two():
    V = C.pad_with_interior_points(C.layered_construction(C.LayeredParams(6, 2)), 3)
    assert N(V) == 141
    assert N(V) >= (17 * 36 // 4 - 9) - 6


def test_padding_needs_a_triangle(cube):
    with pytest.raises(NoTriangularFace):
        C.pad_with_interior_points(cube, 1)
    assert C.pad_with_interior_points(cube, 2, face_size=4).n == 10


@pytest.mark.parametrize("n, k, m, pts, want", [(16, 8, 1, 16, 56), (24, 12, 1, 24, 84), (100, 16, 2, 96, 371)])
def test_near_extremal(n, k, m, pts, want):
    p = C.near_extremal_params(n)
    assert (p.k, p.m, p.n_points) == (k, m, pts)
    V = C.near_extremal(n)
    assert V.n == n
    assert oracle_double_normals(V).n_edges == want


def test_near_extremal_small_n():
    with pytest.raises(BadParameter):
        C.near_extremal(10)


def test_padding_zero_points_rejected():
    with pytest.raises(BadParameter):
        C.pad_with_interior_points(C.layered_construction(C.LayeredParams(4, 2)), 0)
