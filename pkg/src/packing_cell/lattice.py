"""Lattices, fundamental parallelepipeds, tessellation tetrahedra, densities.

A lattice is stored as a 3x3 array whose *rows* are the basis vectors.
Packings use unit spheres, so a lattice is a valid packing when its shortest
nonzero vector has length at least 2.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateInput, EdgeTooShort, OverlappingSpheres, SphereCrossesFace
from .geom3 import EPS, ConvexPolyhedron, as_points, convex_hull, determinant3, triangle_solid_angle

SQRT2 = math.sqrt(2.0)
SPHERE_VOLUME = 4.0 * math.pi / 3.0


@dataclass(frozen=True, eq=False)
class Lattice:
    """Integer combinations of three linearly independent basis rows."""

    basis: np.ndarray

    def __post_init__(self):
        b = np.array(self.basis, dtype=float)
        if b.shape != (3, 3) or not np.all(np.isfinite(b)):
            raise ValueError("lattice basis must be a finite 3x3 array")
        if abs(determinant3(*b)) <= EPS:
            raise DegenerateInput("lattice basis vectors are linearly dependent")
        b.setflags(write=False)
        object.__setattr__(self, "basis", b)

    @property
    def det(self) -> float:
        return determinant3(*self.basis)

    @property
    def covolume(self) -> float:
        return abs(self.det)

    def scaled(self, factor: float) -> "Lattice":
        return Lattice(self.basis * factor)

    def points(self, coeffs) -> np.ndarray:
        return np.asarray(coeffs, dtype=float) @ self.basis


def lattice_fcc() -> Lattice:
    """The fcc lattice with nearest-neighbour distance 2 ("hexagonal" basis)."""
    return Lattice([[SQRT2, SQRT2, 0.0], [SQRT2, 0.0, SQRT2], [0.0, SQRT2, SQRT2]])


def lattice_fcc_square() -> Lattice:
    """The same fcc lattice through its square-layer basis."""
    return Lattice([[2.0, 0.0, 0.0], [0.0, 2.0, 0.0], [1.0, 1.0, SQRT2]])


def coefficient_bounds(lat: Lattice, radius: float) -> np.ndarray:
    # Coefficient i of v equals v . b_i for the dual basis b_i, so
    # |v| <= radius forces |z_i| <= radius * |b_i|.
    dual = np.linalg.inv(lat.basis).T
    return np.ceil(radius * np.linalg.norm(dual, axis=1) + 1e-12).astype(int)


def coefficient_box(bounds) -> np.ndarray:
    """All integer triples with ``|z_i| <= bounds[i]``, zero excluded."""
    axes = [np.arange(-int(b), int(b) + 1) for b in bounds]
    grid = np.stack(np.meshgrid(*axes, indexing="ij"), axis=-1).reshape(-1, 3)
    return grid[np.any(grid != 0, axis=1)]


def lattice_points_within(lat: Lattice, radius: float) -> np.ndarray:
    """Nonzero lattice points of norm at most ``radius`` (plus EPS), by norm."""
    coeffs = coefficient_box(coefficient_bounds(lat, radius))
    pts = coeffs @ lat.basis
    norms = np.linalg.norm(pts, axis=1)
    keep = norms <= radius + EPS
    order = np.lexsort((*coeffs[keep].T[::-1], norms[keep]))
    return pts[keep][order]


def shortest_vector_norm(lat: Lattice) -> float:
    """Length of the shortest nonzero lattice vector, by brute-force enumeration.

    The box ``|z_i| <= max(3, ceil(r * |b_i|))`` with ``r = min |a_i|`` and
    ``b_i`` the dual basis contains every vector no longer than ``r``, hence a
    minimiser.
    """
    r = float(np.linalg.norm(lat.basis, axis=1).min())
    bounds = np.maximum(3, coefficient_bounds(lat, r))
    pts = coefficient_box(bounds) @ lat.basis
    return float(np.sqrt(np.einsum("ij,ij->i", pts, pts).min()))


def shortest_vectors(lat: Lattice) -> np.ndarray:
    """Every lattice vector whose norm equals the minimum within EPS."""
    r = shortest_vector_norm(lat)
    pts = lattice_points_within(lat, r)
    return pts[np.linalg.norm(pts, axis=1) <= r + EPS]


def rescale_to_packing(lat: Lattice) -> Lattice:
    """Scale so the shortest nonzero vector has length exactly 2."""
    return lat.scaled(2.0 / shortest_vector_norm(lat))


def lattice_catalog() -> dict[str, Lattice]:
    """sc, bcc and fcc, each scaled so touching spheres sit at distance 2."""
    sc = rescale_to_packing(Lattice(np.eye(3)))
    bcc = rescale_to_packing(Lattice([[-1.0, 1.0, 1.0], [1.0, -1.0, 1.0], [1.0, 1.0, -1.0]]))
    return {"sc": sc, "bcc": bcc, "fcc": lattice_fcc()}


def random_packing_lattices(count: int, seed: int) -> list[Lattice]:
    """Seeded random lattices rescaled to shortest vector 2.

    Entries are uniform on [-1, 1]; bases with ``|det| < 0.1`` are redrawn.
    """
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        b = rng.uniform(-1.0, 1.0, size=(3, 3))
        if abs(np.linalg.det(b)) < 0.1:
            continue
        out.append(rescale_to_packing(Lattice(b)))
    return out


def packing_density(lat: Lattice) -> float:
    """Fraction of space covered by unit spheres centered at the lattice points."""
    r = shortest_vector_norm(lat)
    if r < 2.0 - EPS:
        raise OverlappingSpheres(f"shortest lattice vector {r:.6g} < 2")
    return SPHERE_VOLUME / lat.covolume


def fundamental_parallelepiped(lat: Lattice) -> ConvexPolyhedron:
    corners = np.array(list(itertools.product((0.0, 1.0), repeat=3))) @ lat.basis
    return convex_hull(corners)


def reciprocal_lattice(lat: Lattice) -> Lattice:
    """Dual basis with ``a_i . b_j = delta_ij`` (no 2*pi factor)."""
    return Lattice(np.linalg.inv(lat.basis).T)


# ---------------------------------------------------------------------------
# tessellation tetrahedra


class TetrahedronKind(enum.Enum):
    REGULAR = "regular"
    OCTAHEDRAL = "octahedral"
    OTHER = "other"


def _edge_lengths(verts: np.ndarray) -> np.ndarray:
    return np.array(sorted(np.linalg.norm(verts[i] - verts[j]) for i, j in itertools.combinations(range(4), 2)))


def _reference_octahedral_edges() -> np.ndarray:
    a1, a2, a3 = lattice_fcc_square().basis
    return _edge_lengths(np.array([np.zeros(3), a1, a2, a3]))


def classify_tetrahedron(verts) -> TetrahedronKind:
    edges = _edge_lengths(as_points(verts))
    if edges[-1] - edges[0] <= EPS:
        return TetrahedronKind.REGULAR
    if np.abs(edges - _reference_octahedral_edges()).max() <= EPS:
        return TetrahedronKind.OCTAHEDRAL
    return TetrahedronKind.OTHER


@dataclass(frozen=True, eq=False)
class TessellationTetrahedron:
    vertices: np.ndarray
    kind: TetrahedronKind

    def __post_init__(self):
        v = np.array(as_points(self.vertices))
        if v.shape != (4, 3):
            raise ValueError("a tetrahedron has exactly four vertices")
        if self.volume_of(v) <= EPS:
            raise DegenerateInput("tetrahedron has zero volume")
        v.setflags(write=False)
        object.__setattr__(self, "vertices", v)

    @staticmethod
    def volume_of(v: np.ndarray) -> float:
        return abs(determinant3(v[1] - v[0], v[2] - v[0], v[3] - v[0])) / 6.0

    @classmethod
    def from_vertices(cls, verts) -> "TessellationTetrahedron":
        return cls(np.asarray(verts, dtype=float), classify_tetrahedron(verts))

    @property
    def volume(self) -> float:
        return self.volume_of(self.vertices)

    @property
    def edge_lengths(self) -> np.ndarray:
        return _edge_lengths(self.vertices)


def tessellation_tetrahedra(lat: Lattice) -> list[TessellationTetrahedron]:
    """Split the fundamental parallelepiped into six tetrahedra of equal volume.

    The corners at 0 and at ``a1 + a2 + a3`` are cut off; what remains is an
    (affine) octahedron, which is split into four tetrahedra around its
    shortest diagonal.  For the fcc bases this yields two regular and four
    octahedral tetrahedra.
    """
    a1, a2, a3 = lat.basis
    a = (a1, a2, a3)
    top = a1 + a2 + a3
    zero = np.zeros(3)
    tets = [[zero, a1, a2, a3]]

    # Diagonal k joins a_k to a_i + a_j; ties go to the lowest k.
    diag_len = [np.linalg.norm(a[k] - (top - a[k])) for k in range(3)]
    k = min(range(3), key=lambda m: (diag_len[m] - min(diag_len) > EPS, m))
    i, j = (m for m in range(3) if m != k)
    tip, tail = a[k], top - a[k]
    ring = [a[i], a[i] + a[k], a[j] + a[k], a[j]]
    for m in range(4):
        tets.append([tip, tail, ring[m], ring[(m + 1) % 4]])

    tets.append([top, top - a1, top - a2, top - a3])
    return [TessellationTetrahedron.from_vertices(t) for t in tets]


def tetrahedron_sphere_coverage(tet: TessellationTetrahedron) -> float:
    """Fraction of ``tet`` covered by unit spheres centered at its vertices.

    Each sphere meets the tetrahedron in a cone sector whose volume is the
    vertex solid angle over 4*pi times the sphere volume.  This is exact as
    long as no two spheres overlap and no sphere reaches the opposite face.
    """
    v = tet.vertices
    if tet.edge_lengths[0] < 2.0 - EPS:
        raise EdgeTooShort(f"shortest edge {tet.edge_lengths[0]:.6g} < 2")
    total_angle = 0.0
    for k in range(4):
        rest = [v[m] for m in range(4) if m != k]
        normal = np.cross(rest[1] - rest[0], rest[2] - rest[0])
        height = abs(float((v[k] - rest[0]) @ normal)) / np.linalg.norm(normal)
        if height < 1.0 - EPS:
            raise SphereCrossesFace(f"vertex {k} lies {height:.6g} < 1 from its opposite face")
        total_angle += triangle_solid_angle(v[k], *rest)
    return (total_angle / (4.0 * math.pi)) * SPHERE_VOLUME / tet.volume
