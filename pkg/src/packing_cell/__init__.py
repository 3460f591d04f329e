"""Voronoi cells, lattice packings and tetrahedral decompositions of sphere packings."""

from .errors import (
    CenterOutside,
    DegenerateInput,
    EdgeTooShort,
    InfeasibleInterior,
    NonPositiveEdge,
    OverlappingSpheres,
    PackingCellError,
    SphereCrossesFace,
    Unbounded,
)
from .geom3 import (
    EPS,
    ConvexPolyhedron,
    Halfspace,
    convex_hull,
    determinant3,
    halfspace_intersection,
    polyhedron_volume,
    triangle_solid_angle,
)
from .lattice import (
    Lattice,
    TessellationTetrahedron,
    TetrahedronKind,
    fundamental_parallelepiped,
    lattice_catalog,
    lattice_fcc,
    lattice_fcc_square,
    packing_density,
    reciprocal_lattice,
    shortest_vector_norm,
    tessellation_tetrahedra,
    tetrahedron_sphere_coverage,
)
from .oracle import McEstimate, mc_sphere_coverage, mc_volume_membership
from .solids import (
    SphereConfiguration,
    TetrahedronMetrics,
    dodecahedron_edge_from_inradius,
    dodecahedron_inradius,
    dodecahedron_volume,
    fcc_kissing_configuration,
    icosahedral_configuration,
    icosahedral_tetrahedron,
    icosahedron_circumradius,
    icosahedron_inradius,
    local_density,
    regular_tetrahedron_metrics,
)
from .voronoi import CellReport, brillouin_zone, classify_facets, voronoi_cell, voronoi_cell_lattice

__version__ = "0.1.0"
