"""OFF mesh export/import for convex polyhedra."""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .geom3 import ConvexPolyhedron


def format_off(poly: ConvexPolyhedron) -> str:
    lines = ["OFF", f"{poly.n_vertices} {poly.n_faces} {poly.n_edges}"]
    # repr() gives the shortest string that round-trips the double exactly.
    lines += [" ".join(repr(float(x)) for x in v) for v in poly.vertices]
    lines += [" ".join(str(i) for i in (len(f), *f)) for f in poly.faces]
    return "\n".join(lines) + "\n"


def write_off(poly: ConvexPolyhedron, path) -> None:
    Path(path).write_text(format_off(poly))


def parse_off(text: str) -> tuple[np.ndarray, list[tuple[int, ...]], int]:
    """Return (vertices, faces, declared edge count) from OFF text."""
    rows = [ln.split("#", 1)[0].split() for ln in text.splitlines()]
    rows = [r for r in rows if r]
    if not rows or rows[0] != ["OFF"]:
        raise ValueError("missing OFF header")
    n_v, n_f, n_e = (int(x) for x in rows[1])
    verts = np.array([[float(x) for x in r] for r in rows[2 : 2 + n_v]])
    faces = []
    for r in rows[2 + n_v : 2 + n_v + n_f]:
        n = int(r[0])
        faces.append(tuple(int(x) for x in r[1 : 1 + n]))
    return verts, faces, n_e


def read_off(path) -> ConvexPolyhedron:
    verts, faces, _ = parse_off(Path(path).read_text())
    return ConvexPolyhedron(verts, tuple(faces))
