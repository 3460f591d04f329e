"""Exception types raised by the geometry, lattice and cell routines."""


class PackingCellError(ValueError):
    """Base class for every typed failure in this package."""


class DegenerateInput(PackingCellError):
    """Points or vectors are affinely dependent (coplanar, collinear, coincident)."""


class Unbounded(PackingCellError):
    """A halfspace system (or a Voronoi configuration) does not bound a finite cell."""


class InfeasibleInterior(PackingCellError):
    """The supplied interior point does not strictly satisfy every constraint."""


class OverlappingSpheres(PackingCellError):
    """Two centers are closer than 2, so unit spheres would overlap."""


class EdgeTooShort(PackingCellError):
    """A tetrahedron edge is shorter than 2; vertex spheres would overlap."""


class SphereCrossesFace(PackingCellError):
    """A vertex sphere pokes through the opposite face of its tetrahedron."""


class CenterOutside(PackingCellError):
    """The reference center is not strictly inside the polyhedron."""


class NonPositiveEdge(PackingCellError):
    """A length argument of a closed-form solid formula is not positive."""
