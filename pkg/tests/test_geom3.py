import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate
from scipy.spatial import ConvexHull as ScipyHull

from packing_cell.errors import DegenerateInput, InfeasibleInterior, Unbounded
from packing_cell.geom3 import (
    ConvexPolyhedron,
    Halfspace,
    as_vec3,
    convex_hull,
    determinant3,
    halfspace_intersection,
    polyhedron_volume,
    triangle_solid_angle,
)

from conftest import random_rotation

DODECA_CELL_VOLUME = 2 * (15 + 7 * math.sqrt(5)) / ((25 + 11 * math.sqrt(5)) / 10) ** 1.5


def cube_halfspaces(half=1.0):
    return [Halfspace(n, half) for n in np.vstack([np.eye(3), -np.eye(3)])]


# -- primitives --------------------------------------------------------------


def test_vec3_rejects_non_finite():
    with pytest.raises(ValueError):
        as_vec3([0.0, np.nan, 1.0])
    with pytest.raises(ValueError):
        as_vec3([1.0, 2.0])


def test_halfspace_normal_must_be_unit():
    with pytest.raises(ValueError):
        Halfspace([2.0, 0.0, 0.0], 1.0)
    h = Halfspace.from_plane([2.0, 0.0, 0.0], 4.0)
    assert np.allclose(h.normal, [1, 0, 0]) and h.offset == 2.0


def test_determinant_examples(fpi_basis):
    assert determinant3(*np.eye(3)) == 1.0
    assert abs(abs(determinant3(*fpi_basis)) - 4 * math.sqrt(2)) < 1e-12
    e1, e2 = np.eye(3)[:2]
    assert determinant3(e1, e2, e1 + e2) == 0.0


# -- hull --------------------------------------------------------------------


def test_hull_cube(cube_corners):
    cube = convex_hull(cube_corners)
    assert (cube.n_vertices, cube.n_edges, cube.n_faces) == (8, 12, 6)
    assert polyhedron_volume(cube) == pytest.approx(8.0, abs=1e-12)


def test_hull_drops_interior_and_boundary_points(cube_corners):
    extra = np.array([[0, 0, 0], [1, 0, 0], [1, 1, 0], [0.3, -0.2, 0.1]])
    cube = convex_hull(np.vstack([cube_corners, extra]))
    assert cube.n_vertices == 8
    assert polyhedron_volume(cube) == pytest.approx(8.0, abs=1e-12)


def test_hull_icosahedron(icosahedron):
    ico = convex_hull(icosahedron)
    assert (ico.n_vertices, ico.n_edges, ico.n_faces) == (12, 30, 20)


def test_hull_faces_are_canonical_and_outward(cube_corners):
    cube = convex_hull(cube_corners)
    for face, (normal, offset) in zip(cube.faces, cube.face_planes()):
        assert face[0] == min(face)
        assert offset > 0  # origin inside, so outward normals have positive offset


@pytest.mark.parametrize(
    "points",
    [
        [[0, 0, 0], [1, 0, 0], [0, 1, 0]],
        [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 1, 0], [2, 3, 0]],
        [[0, 0, 0], [1, 1, 1], [2, 2, 2], [3, 3, 3]],
        [[1, 1, 1]] * 5,
    ],
)
def test_hull_degenerate(points):
    with pytest.raises(DegenerateInput):
        convex_hull(np.array(points, dtype=float))


def test_polyhedron_rejects_broken_topology(cube_corners):
    cube = convex_hull(cube_corners)
    with pytest.raises(DegenerateInput):
        ConvexPolyhedron(cube.vertices, cube.faces[:-1])
    flipped = (tuple(reversed(cube.faces[0])),) + cube.faces[1:]
    with pytest.raises(DegenerateInput):
        ConvexPolyhedron(cube.vertices, flipped)


@settings(max_examples=60, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(4, 80), shape=st.sampled_from(["ball", "sphere", "box"]))
def test_hull_matches_scipy(seed, n, shape):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(n, 3))
    if shape == "sphere":
        pts /= np.linalg.norm(pts, axis=1)[:, None]
    elif shape == "box":
        pts = rng.uniform(-2, 2, size=(n, 3))
    ours = convex_hull(pts)
    ref = ScipyHull(pts)
    assert ours.n_vertices - ours.n_edges + ours.n_faces == 2
    assert polyhedron_volume(ours) == pytest.approx(ref.volume, rel=1e-9)
    ref_vertices = {tuple(np.round(pts[i], 12)) for i in ref.vertices}
    assert {tuple(np.round(v, 12)) for v in ours.vertices} == ref_vertices


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(4, 50))
def test_hull_idempotent(seed, n):
    pts = np.random.default_rng(seed).normal(size=(n, 3))
    first = convex_hull(pts)
    second = convex_hull(first.vertices)
    assert np.abs(first.vertices - second.vertices).max() <= 1e-9
    assert first.faces == second.faces


# -- halfspace intersection --------------------------------------------------


def test_intersection_cube():
    cube = halfspace_intersection(cube_halfspaces(), [0, 0, 0])
    assert cube.n_faces == 6
    assert polyhedron_volume(cube) == pytest.approx(8.0, abs=1e-12)


def test_intersection_redundant_constraint():
    hs = cube_halfspaces() + [Halfspace([1.0, 0.0, 0.0], 3.0)]
    cube = halfspace_intersection(hs, [0.2, -0.1, 0.4])
    assert cube.n_faces == 6
    assert polyhedron_volume(cube) == pytest.approx(8.0, abs=1e-12)


def test_intersection_dodecahedron(icosahedron):
    hs = [Halfspace.from_plane(v, np.linalg.norm(v) * 1.0) for v in icosahedron]
    dodeca = halfspace_intersection(hs, [0, 0, 0])
    assert (dodeca.n_vertices, dodeca.n_edges, dodeca.n_faces) == (20, 30, 12)
    assert polyhedron_volume(dodeca) == pytest.approx(DODECA_CELL_VOLUME, abs=1e-9)


def test_intersection_touching_constraint_is_dropped():
    # Plane through a cube corner only: contributes no facet.
    hs = cube_halfspaces() + [Halfspace.from_plane([1, 1, 1], 3.0)]
    cube = halfspace_intersection(hs, [0, 0, 0])
    assert cube.n_faces == 6 and cube.n_vertices == 8


def test_intersection_unbounded():
    with pytest.raises(Unbounded):
        halfspace_intersection(cube_halfspaces()[:5], [0, 0, 0])
    slab = [Halfspace([0, 0, 1.0], 1.0), Halfspace([0, 0, -1.0], 1.0), Halfspace([1.0, 0, 0], 1.0), Halfspace([0, 1.0, 0], 1.0)]
    with pytest.raises(Unbounded):
        halfspace_intersection(slab, [0, 0, 0])


def test_intersection_infeasible_interior():
    with pytest.raises(InfeasibleInterior):
        halfspace_intersection(cube_halfspaces(), [1.0, 0, 0])
    with pytest.raises(InfeasibleInterior):
        halfspace_intersection(cube_halfspaces(), [5.0, 0, 0])


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(6, 40))
def test_duality_round_trip(seed, n):
    rng = np.random.default_rng(seed)
    normals = rng.normal(size=(n, 3))
    hs = [Halfspace.from_plane(v, rng.uniform(0.5, 2.0) * np.linalg.norm(v)) for v in normals]
    hs += cube_halfspaces(3.0)
    cell = halfspace_intersection(hs, [0, 0, 0])
    again = halfspace_intersection(cell.halfspaces(), cell.vertices.mean(axis=0))
    assert polyhedron_volume(again) == pytest.approx(polyhedron_volume(cell), abs=1e-9)
    assert cell.n_vertices - cell.n_edges + cell.n_faces == 2


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(6, 30))
def test_adding_constraint_never_increases_volume(seed, n):
    rng = np.random.default_rng(seed)
    hs = [Halfspace.from_plane(v, 1.0 * np.linalg.norm(v)) for v in rng.normal(size=(n, 3))] + cube_halfspaces(2.0)
    base = polyhedron_volume(halfspace_intersection(hs, [0, 0, 0]))
    extra = Halfspace.from_plane(rng.normal(size=3), rng.uniform(0.2, 3.0))
    cut = polyhedron_volume(halfspace_intersection(hs + [extra], [0, 0, 0]))
    assert cut <= base + 1e-12


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_parallelepiped_volume_matches_determinant(seed):
    basis = np.random.default_rng(seed).uniform(-2, 2, size=(3, 3))
    det = determinant3(*basis)
    if abs(det) < 0.05:
        return
    corners = np.array(list(itertools.product((0, 1), repeat=3)), float) @ basis
    assert polyhedron_volume(convex_hull(corners)) == pytest.approx(abs(det), abs=1e-9)


# -- solid angles -------------------------------------------------------------


def solid_angle_by_quadrature(apex, a, b, c):
    """Integrate the flux of r/|r|^3 through the flat triangle abc."""
    apex, a, b, c = (np.asarray(x, float) for x in (apex, a, b, c))
    n = np.cross(b - a, c - a)
    jac = np.linalg.norm(n)
    n = n / jac

    def integrand(t, s):
        p = a + s * (b - a) + t * (c - a)
        r = p - apex
        return abs(r @ n) / np.linalg.norm(r) ** 3 * jac

    val, _ = integrate.dblquad(integrand, 0, 1, 0, lambda s: 1 - s, epsabs=1e-13, epsrel=1e-13)
    return val


REGULAR_TET = np.array([[0.0, 0.0, 0.0], [2.0, 0.0, 0.0], [1.0, math.sqrt(3), 0.0], [1.0, 1 / math.sqrt(3), 2 * math.sqrt(2 / 3)]])


def test_regular_tetrahedron_angle_oracle():
    # independent route: quadrature of the projected triangle
    assert solid_angle_by_quadrature(*REGULAR_TET) == pytest.approx(math.acos(23 / 27), abs=1e-9)


def test_solid_angle_examples():
    e1, e2, e3 = np.eye(3)
    assert triangle_solid_angle([0, 0, 0], e1, e2, e3) == pytest.approx(math.pi / 2, abs=1e-12)
    assert triangle_solid_angle([0, 0, 0], e2, e1, e3) == triangle_solid_angle([0, 0, 0], e1, e2, e3)
    angles = [triangle_solid_angle(REGULAR_TET[k], *np.delete(REGULAR_TET, k, axis=0)) for k in range(4)]
    assert angles[0] == pytest.approx(0.551286, abs=1e-6)
    assert max(angles) - min(angles) <= 1e-12
    assert angles[0] == pytest.approx(math.acos(23 / 27), abs=1e-12)


def test_solid_angle_degenerate():
    with pytest.raises(DegenerateInput):
        triangle_solid_angle([0, 0, 0], [1, 0, 0], [2, 0, 0], [3, 0, 0])
    with pytest.raises(DegenerateInput):
        triangle_solid_angle([0, 0, 0], [0, 0, 0], [0, 1, 0], [0, 0, 1])


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_solid_angle_rotation_invariant_and_additive(seed):
    rng = np.random.default_rng(seed)
    apex, a, b, c = rng.normal(size=(4, 3))
    if min(np.linalg.norm(x - apex) for x in (a, b, c)) < 0.1:
        return
    if np.linalg.norm(np.cross(b - a, c - a)) < 0.1 or abs(np.cross(b - a, c - a) @ (a - apex)) < 0.05:
        return
    omega = triangle_solid_angle(apex, a, b, c)
    assert 0 < omega < 2 * math.pi
    rot = random_rotation(rng)
    shift = rng.normal(size=3)
    assert triangle_solid_angle(rot @ apex + shift, rot @ a + shift, rot @ b + shift, rot @ c + shift) == pytest.approx(
        omega, abs=1e-10
    )
    m = 0.5 * (b + c)
    split = triangle_solid_angle(apex, a, b, m) + triangle_solid_angle(apex, a, m, c)
    assert split == pytest.approx(omega, abs=1e-10)
    assert solid_angle_by_quadrature(apex, a, b, c) == pytest.approx(omega, rel=1e-6, abs=1e-8)
