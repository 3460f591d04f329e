"""Convex-polyhedron kernel in three dimensions.

Points are plain ``numpy`` arrays of shape ``(3,)`` (or ``(n, 3)`` for point
sets).  Everything here is a pure function of its inputs; the two value types,
:class:`Halfspace` and :class:`ConvexPolyhedron`, are frozen and hold
read-only arrays.

The hull is built by incremental insertion with per-face outside (conflict)
sets, followed by a pass that merges coplanar triangles into polygonal faces.
Halfspace intersections go through the classic point/plane duality: after
moving the interior point to the origin each constraint ``n . p <= d`` becomes
the dual point ``n / d``, the dual points are hulled, and each dual face
yields one primal vertex.
"""

from __future__ import annotations

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateInput, InfeasibleInterior, Unbounded

# Predicate tolerance (coplanarity, dedup, redundancy) and the tighter one
# used for algebraic identities.
EPS = 1e-9
ALG_EPS = 1e-12


def as_vec3(p) -> np.ndarray:
    """Return ``p`` as a finite float array of shape (3,)."""
    arr = np.asarray(p, dtype=float)
    if arr.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"non-finite coordinates: {arr}")
    return arr


def as_points(points) -> np.ndarray:
    arr = np.asarray(points, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise ValueError(f"expected an (n, 3) point array, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("non-finite coordinates in point set")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=float)
    arr.setflags(write=False)
    return arr


def _scale_tol(points: np.ndarray) -> float:
    return EPS * max(1.0, float(np.abs(points).max(initial=0.0)))


def determinant3(a1, a2, a3) -> float:
    """Signed triple product ``a1 . (a2 x a3)``."""
    return float(np.dot(as_vec3(a1), np.cross(as_vec3(a2), as_vec3(a3))))


@dataclass(frozen=True, eq=False)
class Halfspace:
    """The closed halfspace ``{p : normal . p <= offset}`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        n = as_vec3(self.normal)
        if abs(np.linalg.norm(n) - 1.0) > ALG_EPS:
            raise ValueError("Halfspace normal must have unit length; use Halfspace.from_plane")
        if not math.isfinite(self.offset):
            raise ValueError("Halfspace offset must be finite")
        object.__setattr__(self, "normal", _frozen(n))
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_plane(cls, normal, offset: float) -> "Halfspace":
        """Build from an arbitrary-length normal, rescaling the offset to match."""
        n = as_vec3(normal)
        length = float(np.linalg.norm(n))
        if length == 0.0:
            raise DegenerateInput("zero normal")
        return cls(n / length, offset / length)

    def slack(self, p) -> float:
        return self.offset - float(np.dot(self.normal, p))

    def contains(self, p, tol: float = EPS) -> bool:
        return self.slack(p) >= -tol


def _newell_normal(verts: np.ndarray) -> np.ndarray:
    # Twice the vector area of a planar polygon.
    return np.cross(verts, np.roll(verts, -1, axis=0)).sum(axis=0)


def _canonical_cycle(cycle: Sequence[int]) -> tuple[int, ...]:
    k = int(np.argmin(cycle))
    return tuple(int(i) for i in (*cycle[k:], *cycle[:k]))


@dataclass(frozen=True, eq=False)
class ConvexPolyhedron:
    """Bounded convex polyhedron as vertices plus counter-clockwise face cycles.

    Face cycles are counter-clockwise seen from outside and start at their
    smallest vertex index.  Construction validates the Euler characteristic,
    edge manifoldness, face planarity and convexity; a violation raises
    :class:`DegenerateInput`.
    """

    vertices: np.ndarray
    faces: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        verts = as_points(self.vertices)
        faces = tuple(_canonical_cycle(f) for f in self.faces)
        object.__setattr__(self, "vertices", _frozen(verts))
        object.__setattr__(self, "faces", faces)
        self._validate()

    def _validate(self) -> None:
        verts, faces = self.vertices, self.faces
        n = len(verts)
        if n < 4 or len(faces) < 4:
            raise DegenerateInput("a polyhedron needs at least 4 vertices and 4 faces")
        directed = set()
        for face in faces:
            if len(face) < 3 or len(set(face)) != len(face):
                raise DegenerateInput(f"malformed face {face}")
            if min(face) < 0 or max(face) >= n:
                raise DegenerateInput(f"face {face} indexes outside the vertex list")
            for u, v in zip(face, face[1:] + face[:1]):
                if (u, v) in directed:
                    raise DegenerateInput(f"directed edge {(u, v)} appears twice")
                directed.add((u, v))
        if any((v, u) not in directed for u, v in directed):
            raise DegenerateInput("an edge is not shared by exactly two faces")
        used = {i for f in faces for i in f}
        if len(used) != n:
            raise DegenerateInput("vertex list contains unused points")
        n_edges = len(directed) // 2
        if n - n_edges + len(faces) != 2:
            raise DegenerateInput("Euler characteristic is not 2")

        tol = _scale_tol(verts)
        for face, (normal, offset) in zip(faces, self.face_planes()):
            if np.abs(verts[list(face)] @ normal - offset).max() > tol:
                raise DegenerateInput(f"face {face} is not planar")
            if (verts @ normal - offset).max() > tol:
                raise DegenerateInput(f"vertices lie outside the plane of face {face}")

    @property
    def n_vertices(self) -> int:
        return len(self.vertices)

    @property
    def n_faces(self) -> int:
        return len(self.faces)

    @property
    def edges(self) -> list[tuple[int, int]]:
        out = set()
        for f in self.faces:
            for u, v in zip(f, f[1:] + f[:1]):
                out.add((min(u, v), max(u, v)))
        return sorted(out)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def face_vertices(self, k: int) -> np.ndarray:
        return self.vertices[list(self.faces[k])]

    def face_planes(self) -> list[tuple[np.ndarray, float]]:
        """Outward unit normal and offset of every face (best-fit via Newell)."""
        planes = []
        for f in self.faces:
            fv = self.vertices[list(f)]
            nrm = _newell_normal(fv)
            length = np.linalg.norm(nrm)
            if length == 0.0:
                raise DegenerateInput(f"face {f} has zero area")
            nrm = nrm / length
            planes.append((nrm, float(fv.mean(axis=0) @ nrm)))
        return planes

    def halfspaces(self) -> list[Halfspace]:
        return [Halfspace(n, d) for n, d in self.face_planes()]

    def contains(self, p, tol: float = EPS) -> bool:
        p = as_vec3(p)
        return all(float(n @ p) <= d + tol for n, d in self.face_planes())

    def volume(self) -> float:
        return polyhedron_volume(self)


def polyhedron_volume(poly: ConvexPolyhedron) -> float:
    """Volume by the divergence theorem, each face fanned into triangles."""
    total = 0.0
    for f in poly.faces:
        fv = poly.vertices[list(f)]
        v0 = fv[0]
        for v1, v2 in zip(fv[1:-1], fv[2:]):
            area_vec = 0.5 * np.cross(v1 - v0, v2 - v0)
            centroid = (v0 + v1 + v2) / 3.0
            total += float(centroid @ area_vec) / 3.0
    return total


def triangle_solid_angle(apex, a, b, c) -> float:
    """Solid angle (steradians) subtended at ``apex`` by the triangle ``abc``.

    Uses the arctangent form of the spherical excess,
    ``tan(omega/2) = |r_a . (r_b x r_c)| / (|r_a||r_b||r_c| + (r_a . r_b)|r_c| + ...)``,
    with the absolute value making the result independent of vertex order.
    """
    apex = as_vec3(apex)
    ra, rb, rc = (as_vec3(x) - apex for x in (a, b, c))
    la, lb, lc = (float(np.linalg.norm(r)) for r in (ra, rb, rc))
    scale = max(la, lb, lc)
    if min(la, lb, lc) <= EPS * max(1.0, scale):
        raise DegenerateInput("triangle vertex coincides with the apex")
    if np.linalg.norm(np.cross(rb - ra, rc - ra)) <= EPS * max(1.0, scale) ** 2:
        raise DegenerateInput("triangle vertices are collinear")
    numer = abs(float(ra @ np.cross(rb, rc)))
    denom = la * lb * lc + float(ra @ rb) * lc + float(ra @ rc) * lb + float(rb @ rc) * la
    if numer <= EPS * scale**3 and denom < 0.0:
        raise DegenerateInput("apex lies on the triangle")
    return 2.0 * math.atan2(numer, denom)


# ---------------------------------------------------------------------------
# convex hull


def _dedup_points(points: np.ndarray, tol: float) -> tuple[np.ndarray, np.ndarray]:
    """Merge points closer than ``tol``; returns (unique points, index map).

    Points are snapped to a grid of pitch ``tol`` and only compared against
    the neighbouring cells, so the pass is linear for well-spread input.
    """
    buckets: dict[tuple[int, int, int], list[int]] = defaultdict(list)
    keep: list[int] = []
    mapping = np.empty(len(points), dtype=int)
    offsets = [(i, j, k) for i in (-1, 0, 1) for j in (-1, 0, 1) for k in (-1, 0, 1)]
    for idx, p in enumerate(points):
        key = tuple(int(x) for x in np.floor(p / tol))
        found = -1
        for off in offsets:
            cell = (key[0] + off[0], key[1] + off[1], key[2] + off[2])
            for u in buckets.get(cell, ()):
                if np.linalg.norm(points[keep[u]] - p) <= tol:
                    found = u
                    break
            if found >= 0:
                break
        if found < 0:
            found = len(keep)
            keep.append(idx)
            buckets[key].append(found)
        mapping[idx] = found
    return points[keep], mapping


class _Face:
    __slots__ = ("verts", "normal", "offset", "outside")

    def __init__(self, pts: np.ndarray, a: int, b: int, c: int):
        self.verts = (a, b, c)
        n = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        self.normal = n / np.linalg.norm(n)
        self.offset = float(self.normal @ pts[a])
        self.outside: list[int] = []

    def dist(self, p: np.ndarray) -> float:
        return float(self.normal @ p) - self.offset

    def edges(self):
        a, b, c = self.verts
        return ((a, b), (b, c), (c, a))


def _initial_simplex(pts: np.ndarray, tol: float) -> list[int]:
    i0 = int(np.argmin(pts[:, 0]))
    d = np.linalg.norm(pts - pts[i0], axis=1)
    i1 = int(np.argmax(d))
    if d[i1] <= tol:
        raise DegenerateInput("all points coincide")
    u = (pts[i1] - pts[i0]) / d[i1]
    d = np.linalg.norm(np.cross(pts - pts[i0], u), axis=1)
    i2 = int(np.argmax(d))
    if d[i2] <= tol:
        raise DegenerateInput("points are collinear")
    n = np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0])
    n /= np.linalg.norm(n)
    d = (pts - pts[i0]) @ n
    i3 = int(np.argmax(np.abs(d)))
    if abs(d[i3]) <= tol:
        raise DegenerateInput("points are coplanar")
    return [i0, i1, i2, i3]


def _hull_triangles(pts: np.ndarray, tol: float) -> list[_Face]:
    simplex = _initial_simplex(pts, tol)
    inner = pts[simplex].mean(axis=0)
    faces: dict[int, _Face] = {}
    edge_map: dict[tuple[int, int], int] = {}
    next_id = 0

    def add_face(a, b, c) -> int:
        nonlocal next_id
        f = _Face(pts, a, b, c)
        faces[next_id] = f
        for e in f.edges():
            edge_map[e] = next_id
        next_id += 1
        return next_id - 1

    i0, i1, i2, i3 = simplex
    for a, b, c in ((i0, i1, i2), (i0, i3, i1), (i1, i3, i2), (i2, i3, i0)):
        f = _Face(pts, a, b, c)
        if f.dist(inner) > 0:
            b, c = c, b
        add_face(a, b, c)

    in_simplex = set(simplex)
    for q in range(len(pts)):
        if q in in_simplex:
            continue
        for fid, f in faces.items():
            if f.dist(pts[q]) > tol:
                f.outside.append(q)
                break

    while True:
        start = next((fid for fid, f in faces.items() if f.outside), None)
        if start is None:
            break
        f0 = faces[start]
        p = max(f0.outside, key=lambda q: f0.dist(pts[q]))
        pp = pts[p]

        visible = {start}
        stack = [start]
        horizon: list[tuple[int, int]] = []
        while stack:
            fid = stack.pop()
            for u, v in faces[fid].edges():
                nb = edge_map[(v, u)]
                if nb in visible:
                    continue
                if faces[nb].dist(pp) > tol:
                    visible.add(nb)
                    stack.append(nb)
                else:
                    horizon.append((u, v))

        orphans: list[int] = []
        for fid in visible:
            f = faces.pop(fid)
            orphans.extend(q for q in f.outside if q != p)
            for e in f.edges():
                if edge_map.get(e) == fid:
                    del edge_map[e]
        new_ids = [add_face(u, v, p) for u, v in horizon]
        for q in orphans:
            for fid in new_ids:
                if faces[fid].dist(pts[q]) > tol:
                    faces[fid].outside.append(q)
                    break

    return list(faces.values())


def _polygon_2d_hull(coords: np.ndarray, tol: float) -> list[int]:
    """Counter-clockwise strict hull (collinear points dropped) of 2D points."""
    order = sorted(range(len(coords)), key=lambda i: (coords[i][0], coords[i][1]))

    def keep_turn(o, a, b) -> bool:
        oa, ob = coords[a] - coords[o], coords[b] - coords[o]
        cross = oa[0] * ob[1] - oa[1] * ob[0]
        return cross > tol * max(np.linalg.norm(ob), 1.0)

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and not keep_turn(lower[-2], lower[-1], i):
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and not keep_turn(upper[-2], upper[-1], i):
            upper.pop()
        upper.append(i)
    return lower[:-1] + upper[:-1]


def _merge_coplanar(pts: np.ndarray, tris: list[_Face], tol: float) -> list[list[int]]:
    parent = list(range(len(tris)))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    owner = {}
    for k, t in enumerate(tris):
        for e in t.edges():
            owner[e] = k
    for k, t in enumerate(tris):
        for u, v in t.edges():
            j = owner[(v, u)]
            other = tris[j]
            apex_j = next(x for x in other.verts if x not in (u, v))
            apex_k = next(x for x in t.verts if x not in (u, v))
            if abs(t.dist(pts[apex_j])) <= tol and abs(other.dist(pts[apex_k])) <= tol:
                parent[find(j)] = find(k)

    groups: dict[int, list[int]] = defaultdict(list)
    for k in range(len(tris)):
        groups[find(k)].append(k)

    polygons = []
    for members in groups.values():
        normal = np.zeros(3)
        verts: set[int] = set()
        for k in members:
            t = tris[k]
            a, b, c = (pts[i] for i in t.verts)
            normal += np.cross(b - a, c - a)
            verts.update(t.verts)
        normal /= np.linalg.norm(normal)
        ids = sorted(verts)
        helper = np.eye(3)[int(np.argmin(np.abs(normal)))]
        u = np.cross(normal, helper)
        u /= np.linalg.norm(u)
        w = np.cross(normal, u)
        coords = np.stack([pts[ids] @ u, pts[ids] @ w], axis=1)
        ring = _polygon_2d_hull(coords, tol)
        polygons.append([ids[i] for i in ring])
    return polygons


def convex_hull(points: Iterable) -> ConvexPolyhedron:
    """Convex hull of a 3D point set with coplanar facets merged.

    Interior points, points on a face or on an edge are not hull vertices.
    Vertices keep the relative order of their first appearance in ``points``.
    Raises :class:`DegenerateInput` for fewer than four points or a
    coplanar/collinear set.
    """
    pts = as_points(list(points) if not isinstance(points, np.ndarray) else points)
    if len(pts) < 4:
        raise DegenerateInput("a 3D hull needs at least 4 points")
    tol = _scale_tol(pts)
    uniq, _ = _dedup_points(pts, tol)
    if len(uniq) < 4:
        raise DegenerateInput("fewer than 4 distinct points")
    tris = _hull_triangles(uniq, tol)
    polygons = _merge_coplanar(uniq, tris, tol)
    used = sorted({i for poly in polygons for i in poly})
    remap = {old: new for new, old in enumerate(used)}
    faces = [tuple(remap[i] for i in poly) for poly in polygons]
    faces.sort(key=lambda f: sorted(f))
    return ConvexPolyhedron(uniq[used], tuple(faces))


def halfspace_intersection(constraints: Sequence[Halfspace], interior) -> ConvexPolyhedron:
    """Bounded polytope ``{p : n_k . p <= d_k for all k}`` via the dual hull.

    ``interior`` must satisfy every constraint with slack above :data:`EPS`.
    Redundant constraints (including ones touching the polytope only in a
    vertex or an edge) produce no facet.
    """
    center = as_vec3(interior)
    if len(constraints) < 4:
        raise Unbounded("fewer than 4 halfspaces cannot bound a polytope")
    normals = np.array([h.normal for h in constraints])
    slack = np.array([h.offset for h in constraints]) - normals @ center
    if slack.min() <= EPS:
        raise InfeasibleInterior(f"interior point violates a constraint (min slack {slack.min():.3g})")

    dual = normals / slack[:, None]
    try:
        dual_hull = convex_hull(dual)
    except DegenerateInput as exc:
        raise Unbounded(f"dual points are degenerate: {exc}") from exc

    tol = _scale_tol(dual_hull.vertices)
    primal_pts = []
    incident: dict[int, list[int]] = defaultdict(list)
    for k, (n, d) in enumerate(dual_hull.face_planes()):
        if d <= tol:
            raise Unbounded("origin of the dual is not strictly inside the dual hull")
        primal_pts.append(n / d)
        for v in dual_hull.faces[k]:
            incident[v].append(k)

    primal = np.array(primal_pts)
    primal, vmap = _dedup_points(primal, _scale_tol(primal))

    faces = []
    for v, dual_faces in sorted(incident.items()):
        ids = sorted({int(vmap[k]) for k in dual_faces})
        if len(ids) < 3:
            continue
        nrm = dual_hull.vertices[v] / np.linalg.norm(dual_hull.vertices[v])
        ring = primal[ids]
        mid = ring.mean(axis=0)
        helper = np.eye(3)[int(np.argmin(np.abs(nrm)))]
        u = np.cross(nrm, helper)
        u /= np.linalg.norm(u)
        w = np.cross(nrm, u)
        ang = np.arctan2((ring - mid) @ w, (ring - mid) @ u)
        faces.append(tuple(ids[i] for i in np.argsort(ang, kind="stable")))
    faces.sort(key=lambda f: sorted(f))
    return ConvexPolyhedron(primal + center, tuple(faces))
