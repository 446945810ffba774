import numpy as np
import pytest

from normalis import constructions as C

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(line: str) -> None:
    _ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split(".")[0].split()[-1])):
            terminalreporter.write_line(line)


@pytest.fixture
def octagon():
    return C.regular_polygon(8)


@pytest.fixture
def cube():
    return C.cube_vertices()


@pytest.fixture
def octahedron():
    return C.octahedron_vertices()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
