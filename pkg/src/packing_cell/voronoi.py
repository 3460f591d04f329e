"""Voronoi cells of finite configurations and of lattices, plus facet reports."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import CenterOutside, OverlappingSpheres
from .geom3 import (
    ALG_EPS,
    EPS,
    ConvexPolyhedron,
    Halfspace,
    as_points,
    as_vec3,
    halfspace_intersection,
    polyhedron_volume,
)
from .lattice import Lattice, coefficient_bounds, coefficient_box, reciprocal_lattice, shortest_vector_norm

FACET_CLASSES = ("rhombus", "regular-pentagon", "other-quad", "other")


def bisector_halfspaces(center, others) -> list[Halfspace]:
    """Halfspaces ``{p : |p - center| <= |p - x|}`` for each ``x`` in ``others``."""
    c = as_vec3(center)
    out = []
    for x in as_points(others):
        d = x - c
        out.append(Halfspace.from_plane(d, float(d @ c) + 0.5 * float(d @ d)))
    return out


def voronoi_cell(center, others, *, min_distance: float | None = 2.0) -> ConvexPolyhedron:
    """Region of points at least as close to ``center`` as to any of ``others``.

    ``min_distance`` enforces the packing condition (pass ``None`` to skip it,
    e.g. for reciprocal lattices).  Raises :class:`~packing_cell.errors.Unbounded`
    when the other points do not surround the center.
    """
    c = as_vec3(center)
    pts = as_points(others)
    if len(pts) == 0:
        raise ValueError("voronoi_cell needs at least one other point")
    if min_distance is not None:
        dmin = float(np.linalg.norm(pts - c, axis=1).min())
        if dmin < min_distance - EPS:
            raise OverlappingSpheres(f"a point lies {dmin:.6g} from the center")
    return halfspace_intersection(bisector_halfspaces(c, pts), c)


def _circumradius(cell: ConvexPolyhedron, center=np.zeros(3)) -> float:
    return float(np.linalg.norm(cell.vertices - center, axis=1).max())


def _shell_cell(lat: Lattice, k: int, radius: float | None, min_distance) -> ConvexPolyhedron:
    pts = coefficient_box([k, k, k]) @ lat.basis
    if radius is not None:
        pts = pts[np.linalg.norm(pts, axis=1) <= radius + EPS]
    return voronoi_cell(np.zeros(3), pts, min_distance=min_distance)


def voronoi_shell_volumes(lat: Lattice, shells: int) -> list[float]:
    """Cell volume using every lattice point in the box ``|z_i| <= k``, k = 1..shells."""
    return [polyhedron_volume(_shell_cell(lat, k, None, None)) for k in range(1, shells + 1)]


def voronoi_cell_lattice(lat: Lattice, *, check_packing: bool = True, max_shells: int = 60) -> ConvexPolyhedron:
    """Voronoi cell of the origin in ``lat``.

    Lattice points are taken from coefficient boxes ``|z_i| <= k`` of growing
    size.  The loop stops once one more shell leaves the volume unchanged
    within 1e-12 *and* the box holds every lattice point within twice the
    cell's circumradius (no point outside that ball can cut the cell), so a
    badly reduced basis cannot stop it early.
    """
    if check_packing:
        r = shortest_vector_norm(lat)
        if r < 2.0 - EPS:
            raise OverlappingSpheres(f"shortest lattice vector {r:.6g} < 2")
    cell = _shell_cell(lat, 1, None, None)
    volume = polyhedron_volume(cell)
    for k in range(2, max_shells + 1):
        nxt = _shell_cell(lat, k, 2.0 * _circumradius(cell), None)
        nxt_volume = polyhedron_volume(nxt)
        covered = coefficient_bounds(lat, 2.0 * _circumradius(nxt)).max() <= k
        if covered and abs(nxt_volume - volume) <= ALG_EPS:
            return nxt
        cell, volume = nxt, nxt_volume
    raise RuntimeError(f"cell did not stabilise within {max_shells} shells")


def brillouin_zone(lat: Lattice, *, two_pi: bool = False) -> ConvexPolyhedron:
    """Voronoi cell of the origin in the reciprocal lattice."""
    rec = reciprocal_lattice(lat)
    if two_pi:
        rec = rec.scaled(2.0 * math.pi)
    return voronoi_cell_lattice(rec, check_packing=False)


@dataclass(frozen=True, eq=False)
class CellReport:
    cell: ConvexPolyhedron
    volume: float
    inradius: float
    circumradius: float
    facet_count: int
    facet_classes: Counter

    def to_dict(self) -> dict:
        return {
            "volume": self.volume,
            "inradius": self.inradius,
            "circumradius": self.circumradius,
            "vertices": self.cell.n_vertices,
            "edges": self.cell.n_edges,
            "facet_count": self.facet_count,
            "facet_classes": dict(sorted(self.facet_classes.items())),
        }


def _classify_polygon(verts: np.ndarray) -> str:
    n = len(verts)
    sides = np.linalg.norm(np.roll(verts, -1, axis=0) - verts, axis=1)
    equal_sides = sides.max() - sides.min() <= EPS
    if n == 4:
        return "rhombus" if equal_sides else "other-quad"
    if n == 5 and equal_sides:
        prev, nxt = np.roll(verts, 1, axis=0) - verts, np.roll(verts, -1, axis=0) - verts
        cosines = np.einsum("ij,ij->i", prev, nxt) / (
            np.linalg.norm(prev, axis=1) * np.linalg.norm(nxt, axis=1)
        )
        angles = np.arccos(np.clip(cosines, -1.0, 1.0))
        if angles.max() - angles.min() <= EPS:
            return "regular-pentagon"
    return "other"


def classify_facets(cell: ConvexPolyhedron, center=(0.0, 0.0, 0.0)) -> CellReport:
    """Facet taxonomy and radii of ``cell`` about ``center``.

    Squares count as rhombi.  Quadrilaterals are planar by construction
    (every face of a :class:`ConvexPolyhedron` is checked on creation).
    """
    c = as_vec3(center)
    distances = [d - float(n @ c) for n, d in cell.face_planes()]
    if min(distances) <= EPS:
        raise CenterOutside("center is not strictly inside the cell")
    classes = Counter(_classify_polygon(cell.face_vertices(k)) for k in range(cell.n_faces))
    return CellReport(
        cell=cell,
        volume=polyhedron_volume(cell),
        inradius=min(distances),
        circumradius=_circumradius(cell, c),
        facet_count=cell.n_faces,
        facet_classes=classes,
    )
