"""The ten acceptance criteria at full size.

Each test runs one criterion from :mod:`normalis.suite`, prints a
``[PASS]``/``[FAIL]`` line and fails on any recorded violation.  The lines are
repeated in the terminal summary.
"""

import time

import pytest

from normalis import suite
from normalis.constructions import LayeredParams, layered_construction
from normalis.verify import oracle_double_normals

from conftest import record_acceptance

FULL = 1000


def run(job, *args, max_seconds=None):
    t = time.perf_counter()
    res = job(*args)
    res.seconds = time.perf_counter() - t
    if max_seconds is not None:
        res.check(res.seconds < max_seconds, f"took {res.seconds:.1f}s, limit {max_seconds}s")
    line = res.line()
    record_acceptance(line)
    print(line)
    for note in res.notes:
        print("   ", note)
    return res


def test_criterion_1_regular_polygons():
    res = run(suite.criterion_1, max_seconds=1.0)
    assert res.passed, res.failures


def test_criterion_2_odd_extremal_and_seven_points():
    res = run(suite.criterion_2)
    assert res.passed, res.failures


def test_criterion_3_planar_sweep():
    res = run(suite.criterion_3, FULL)
    assert res.passed, res.failures


def test_criterion_4_sphere_strict():
    res = run(suite.criterion_4, FULL)
    assert res.passed, res.failures


def test_criterion_5_sphere_weak():
    res = run(suite.criterion_5, FULL)
    assert res.passed, res.failures


def test_criterion_6_gabriel():
    res = run(suite.criterion_6, FULL)
    assert res.passed, res.failures


def test_criterion_7_layered():
    res = run(suite.criterion_7)
    # largest case on its own against the time limit
    t = time.perf_counter()
    V = layered_construction(LayeredParams(6, 3))
    N = oracle_double_normals(V).n_edges
    elapsed = time.perf_counter() - t
    assert (V.n, N) == (84, 348)
    assert elapsed < 30.0
    assert res.passed, res.failures


def test_criterion_8_padding():
    res = run(suite.criterion_8)
    assert res.passed, res.failures


def test_criterion_9_structural():
    res = run(suite.criterion_9, FULL // 5)
    assert res.passed, res.failures


@pytest.mark.slow
def test_criterion_10_search():
    res = run(suite.criterion_10, 100)
    assert res.passed, res.failures
