"""Monte-Carlo volume and coverage estimators.

These never touch the polyhedron kernel: membership is decided directly from
the defining inequalities (distance comparisons, barycentric coordinates),
so they serve as an independent check on everything built by ``geom3``.

Random numbers come from PCG64.  A run is split into fixed-size blocks and
block ``i`` draws from ``SeedSequence(seed).spawn(...)[i]``, so the result
depends only on ``(seed, samples)`` and not on how blocks are scheduled.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .geom3 import as_points, as_vec3
from .lattice import Lattice, lattice_points_within

BLOCK_SIZE = 1 << 16
MIN_SAMPLES = 10_000

Predicate = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.samples <= 0 or self.std_error < 0:
            raise ValueError("invalid Monte-Carlo estimate")

    def z_score(self, value: float) -> float:
        if self.std_error == 0.0:
            return 0.0 if value == self.mean else math.inf
        return abs(value - self.mean) / self.std_error

    def agrees(self, value: float, sigmas: float = 4.0) -> bool:
        return self.z_score(value) <= sigmas


def _block_streams(seed: int, samples: int):
    n_blocks = -(-samples // BLOCK_SIZE)
    children = np.random.SeedSequence(seed).spawn(n_blocks)
    sizes = [BLOCK_SIZE] * (n_blocks - 1) + [samples - BLOCK_SIZE * (n_blocks - 1)]
    return list(zip(children, sizes))


def _count_hits(seed: int, samples: int, draw: Callable, workers: int) -> int:
    def run(block):
        child, size = block
        return int(np.count_nonzero(draw(np.random.Generator(np.random.PCG64(child)), size)))

    blocks = _block_streams(seed, samples)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            counts = list(pool.map(run, blocks))
    else:
        counts = [run(b) for b in blocks]
    return sum(counts)


def mc_volume_membership(
    predicate: Predicate,
    bounding_box,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
) -> McEstimate:
    """Rejection-sampling volume of ``{p : predicate(p)}`` inside an axis box.

    ``predicate`` takes an ``(n, 3)`` array and returns a boolean mask;
    ``bounding_box`` is ``(lower, upper)``.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    lo, hi = (as_vec3(b) for b in bounding_box)
    if np.any(hi <= lo):
        raise ValueError("bounding box must have positive extent on every axis")
    box_volume = float(np.prod(hi - lo))

    def draw(rng, size):
        return predicate(lo + (hi - lo) * rng.random((size, 3)))

    p = _count_hits(seed, samples, draw, workers) / samples
    return McEstimate(box_volume * p, box_volume * math.sqrt(p * (1.0 - p) / samples), samples, seed)


def mc_sphere_coverage(tet, samples: int, seed: int, *, workers: int = 1) -> McEstimate:
    """Fraction of a tetrahedron within distance 1 of one of its vertices.

    ``tet`` is anything with a ``vertices`` attribute, or a (4, 3) array.
    Points are uniform in the tetrahedron via sorted-uniform barycentrics.
    """
    if samples < MIN_SAMPLES:
        raise ValueError(f"need at least {MIN_SAMPLES} samples")
    verts = as_points(getattr(tet, "vertices", tet))

    def draw(rng, size):
        u = np.sort(rng.random((size, 3)), axis=1)
        w = np.diff(u, axis=1, prepend=0.0, append=1.0)
        pts = w @ verts
        d2 = ((pts[:, None, :] - verts[None, :, :]) ** 2).sum(axis=-1)
        return d2.min(axis=1) <= 1.0

    p = _count_hits(seed, samples, draw, workers) / samples
    return McEstimate(p, math.sqrt(p * (1.0 - p) / samples), samples, seed)


# ---------------------------------------------------------------------------
# membership predicates


def voronoi_membership(center, others) -> Predicate:
    """Points at least as close to ``center`` as to every point of ``others``."""
    c = as_vec3(center)
    xs = as_points(others)
    # |p - c|^2 <= |p - x|^2  <=>  2 p.(x - c) <= |x|^2 - |c|^2
    dirs = 2.0 * (xs - c)
    rhs = (xs * xs).sum(axis=1) - float(c @ c)

    def predicate(pts):
        return np.all(pts @ dirs.T <= rhs, axis=1)

    return predicate


def lattice_cell_bound(lat: Lattice) -> float:
    """Radius of a ball about the origin containing the lattice's Voronoi cell.

    Nearest-plane rounding reaches a lattice point within
    ``sqrt(sum |a*_i|^2) / 2`` of any point (``a*_i`` the Gram-Schmidt vectors).
    """
    r = np.linalg.qr(lat.basis.T, mode="r")
    return 0.5 * float(np.sqrt((np.diag(r) ** 2).sum()))


def lattice_voronoi_membership(lat: Lattice):
    """(predicate, bounding box) for the Voronoi cell of the lattice origin."""
    radius = lattice_cell_bound(lat)
    neighbours = lattice_points_within(lat, 2.0 * radius)
    box = (-radius * np.ones(3), radius * np.ones(3))
    return voronoi_membership(np.zeros(3), neighbours), box


def parallelepiped_membership(basis):
    """(predicate, bounding box) for ``{sum l_i a_i : 0 <= l_i <= 1}``."""
    b = np.asarray(basis, dtype=float)
    inv = np.linalg.inv(b)
    corners = np.array([[i, j, k] for i in (0, 1) for j in (0, 1) for k in (0, 1)], float) @ b

    def predicate(pts):
        lam = pts @ inv
        return np.all((lam >= 0.0) & (lam <= 1.0), axis=1)

    return predicate, (corners.min(axis=0), corners.max(axis=0))


def tetrahedron_membership(vertices):
    """(predicate, bounding box) for the tetrahedron spanned by four points."""
    v = as_points(vertices)
    inv = np.linalg.inv(v[1:] - v[0])

    def predicate(pts):
        lam = (pts - v[0]) @ inv
        return np.all(lam >= 0.0, axis=1) & (lam.sum(axis=1) <= 1.0)

    return predicate, (v.min(axis=0), v.max(axis=0))
