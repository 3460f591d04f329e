import itertools
import math
import sys

import numpy as np
import pytest

from packing_cell.solids import icosahedron_vertices

SQRT2 = math.sqrt(2.0)


@pytest.fixture
def cube_corners():
    return np.array(list(itertools.product((-1.0, 1.0), repeat=3)))


@pytest.fixture
def icosahedron():
    return icosahedron_vertices(2.0)


@pytest.fixture
def fpi_basis():
    return np.array([[SQRT2, SQRT2, 0.0], [SQRT2, 0.0, SQRT2], [0.0, SQRT2, SQRT2]])


@pytest.fixture
def fpii_basis():
    return np.array([[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [1.0, 1.0, SQRT2]])


def random_rotation(rng):
    q, r = np.linalg.qr(rng.normal(size=(3, 3)))
    q = q * np.sign(np.diag(r))
    if np.linalg.det(q) < 0:
        q[:, 0] = -q[:, 0]
    return q


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for k in sorted(results):
            terminalreporter.write_line(results[k])
