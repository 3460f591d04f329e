"""Regular-solid closed forms and the two 1+12 kissing configurations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveEdge, OverlappingSpheres
from .geom3 import ALG_EPS, EPS, as_points, polyhedron_volume
from .lattice import SPHERE_VOLUME, lattice_fcc, shortest_vectors
from .voronoi import voronoi_cell

SQRT5 = math.sqrt(5.0)
PHI = (1.0 + SQRT5) / 2.0

# inradius / edge of the regular dodecahedron
_DODECA_IN = 0.5 * math.sqrt((25.0 + 11.0 * SQRT5) / 10.0)


def _positive(x: float, what: str = "edge") -> float:
    x = float(x)
    if not x > 0.0:
        raise NonPositiveEdge(f"{what} must be positive, got {x}")
    return x


def dodecahedron_volume(a: float) -> float:
    a = _positive(a)
    return a**3 / 4.0 * (15.0 + 7.0 * SQRT5)


def dodecahedron_inradius(a: float) -> float:
    return _positive(a) * _DODECA_IN


def dodecahedron_edge_from_inradius(rho: float) -> float:
    return _positive(rho, "inradius") / _DODECA_IN


def icosahedron_circumradius(a: float) -> float:
    return _positive(a) / 4.0 * math.sqrt(10.0 + 2.0 * SQRT5)


def icosahedron_inradius(a: float) -> float:
    return _positive(a) / 12.0 * math.sqrt(3.0) * (3.0 + SQRT5)


def icosahedron_edge_from_circumradius(radius: float) -> float:
    return 4.0 * _positive(radius, "radius") / math.sqrt(10.0 + 2.0 * SQRT5)


@dataclass(frozen=True)
class TetrahedronMetrics:
    """Base edge, base area, height and volume of a tetrahedron with a regular base."""

    base_edge: float
    base_area: float
    height: float
    volume: float

    def __post_init__(self):
        if abs(self.volume - self.base_area * self.height / 3.0) > ALG_EPS:
            raise ValueError("volume must equal base_area * height / 3")

    @classmethod
    def from_base_and_height(cls, a: float, h: float) -> "TetrahedronMetrics":
        area = math.sqrt(3.0) / 4.0 * a * a
        return cls(a, area, h, area * h / 3.0)


def regular_tetrahedron_metrics(a: float) -> TetrahedronMetrics:
    a = _positive(a)
    return TetrahedronMetrics.from_base_and_height(a, a * math.sqrt(6.0) / 3.0)


@dataclass(frozen=True, eq=False)
class SphereConfiguration:
    """Finite set of unit-sphere centers; ``centers[0]`` is the central sphere."""

    centers: np.ndarray

    def __post_init__(self):
        c = np.array(as_points(self.centers))
        diff = c[:, None, :] - c[None, :, :]
        dist = np.linalg.norm(diff, axis=-1)
        np.fill_diagonal(dist, np.inf)
        if len(c) > 1 and dist.min() < 2.0 - EPS:
            raise OverlappingSpheres(f"two centers are {dist.min():.6g} apart")
        c.setflags(write=False)
        object.__setattr__(self, "centers", c)

    @property
    def center(self) -> np.ndarray:
        return self.centers[0]

    @property
    def neighbours(self) -> np.ndarray:
        return self.centers[1:]


def icosahedron_vertices(circumradius: float = 2.0) -> np.ndarray:
    """(0, +-1, +-phi) and cyclic permutations, scaled to the given circumradius."""
    base = []
    for s1, s2 in itertools.product((1.0, -1.0), repeat=2):
        v = np.array([0.0, s1, s2 * PHI])
        base.extend([v, np.roll(v, 1), np.roll(v, 2)])
    return np.array(base) * (circumradius / math.sqrt(1.0 + PHI * PHI))


def icosahedral_configuration() -> SphereConfiguration:
    """Central sphere at the origin, 12 touching spheres on icosahedron vertices (1-5-5-1)."""
    return SphereConfiguration(np.vstack([np.zeros(3), icosahedron_vertices(2.0)]))


def fcc_kissing_configuration() -> SphereConfiguration:
    """Central sphere plus its 12 fcc nearest neighbours (3-6-3)."""
    return SphereConfiguration(np.vstack([np.zeros(3), shortest_vectors(lattice_fcc())]))


def icosahedral_base_face(config: SphereConfiguration | None = None) -> np.ndarray:
    """Three mutually adjacent outer centers, the lexicographically smallest triple."""
    outer = (config or icosahedral_configuration()).neighbours
    dist = np.linalg.norm(outer[:, None] - outer[None, :], axis=-1)
    np.fill_diagonal(dist, np.inf)
    edge = dist.min()
    for tri in itertools.combinations(range(len(outer)), 3):
        if all(abs(dist[i, j] - edge) <= EPS for i, j in itertools.combinations(tri, 2)):
            return outer[list(tri)]
    raise RuntimeError("no face found among the outer centers")


def icosahedral_tetrahedron() -> TetrahedronMetrics:
    """Apex at the central sphere, base on three neighbouring touching spheres.

    The metrics come from the closed forms; the height is cross-checked
    against the distance from the origin to the constructed base plane.
    """
    a = icosahedron_edge_from_circumradius(2.0)
    metrics = TetrahedronMetrics.from_base_and_height(a, icosahedron_inradius(a))

    base = icosahedral_base_face()
    normal = np.cross(base[1] - base[0], base[2] - base[0])
    plane_distance = abs(float(base[0] @ normal)) / float(np.linalg.norm(normal))
    if abs(plane_distance - metrics.height) > ALG_EPS:
        raise RuntimeError(f"height mismatch: closed form {metrics.height!r}, geometry {plane_distance!r}")
    return metrics


def local_density(config: SphereConfiguration) -> float:
    """Sphere volume over the volume of the central sphere's Voronoi cell."""
    cell = voronoi_cell(config.center, config.neighbours)
    return SPHERE_VOLUME / polyhedron_volume(cell)
