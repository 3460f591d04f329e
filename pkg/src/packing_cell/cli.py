"""``packing-cell`` command-line interface.

Exit codes: 0 success, 1 verification mismatch, 2 invalid input,
3 geometric degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .errors import DegenerateInput, InfeasibleInterior, OverlappingSpheres, PackingCellError, Unbounded
from .geom3 import ConvexPolyhedron
from .lattice import Lattice, lattice_catalog, packing_density, shortest_vector_norm
from .off import write_off
from .oracle import MIN_SAMPLES
from .report import build_report, format_checks, run_checks
from .solids import fcc_kissing_configuration, icosahedral_configuration
from .voronoi import brillouin_zone, classify_facets, voronoi_cell, voronoi_cell_lattice

EXIT_OK, EXIT_MISMATCH, EXIT_INPUT, EXIT_DEGENERATE = 0, 1, 2, 3

CONFIGS = {"icosahedral": icosahedral_configuration, "fcc-kissing": fcc_kissing_configuration}


class InputError(Exception):
    pass


def _lattice_from_args(args) -> Lattice:
    if args.basis is not None:
        if args.lattice is not None:
            raise InputError("give either a lattice name or --basis, not both")
        try:
            return Lattice([args.basis[0:3], args.basis[3:6], args.basis[6:9]])
        except (DegenerateInput, ValueError) as exc:
            raise InputError(f"invalid basis: {exc}") from exc
    catalog = lattice_catalog()
    if args.lattice not in catalog:
        raise InputError(f"unknown lattice {args.lattice!r}; choose from {', '.join(catalog)} or pass --basis")
    return catalog[args.lattice]


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_cell(cell: ConvexPolyhedron, out: str, extra: dict) -> None:
    write_off(cell, out)
    summary = {**extra, **classify_facets(cell).to_dict()}
    Path(out).with_suffix(".json").write_text(json.dumps(summary, indent=2) + "\n")


def cmd_report(args) -> int:
    report = build_report()
    text = report.to_text() if args.pretty else json.dumps(report.to_dict(), indent=2) + "\n"
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_MISMATCH


def cmd_voronoi(args) -> int:
    if args.config is not None:
        if args.lattice is not None or args.basis is not None:
            raise InputError("--config cannot be combined with a lattice")
        config = CONFIGS[args.config]()
        cell = voronoi_cell(config.center, config.neighbours)
        source = {"config": args.config}
    else:
        lat = _lattice_from_args(args)
        cell = voronoi_cell_lattice(lat)
        source = {"lattice": args.lattice or "basis", "basis": lat.basis.tolist()}
    _write_cell(cell, args.out, source)
    return EXIT_OK


def cmd_brillouin(args) -> int:
    lat = _lattice_from_args(args)
    cell = brillouin_zone(lat, two_pi=args.two_pi)
    _write_cell(cell, args.out, {"lattice": args.lattice or "basis", "two_pi": args.two_pi})
    return EXIT_OK


def cmd_density(args) -> int:
    lat = _lattice_from_args(args)
    density = packing_density(lat)
    record = {"density": density, "det": lat.covolume, "shortest_vector": shortest_vector_norm(lat)}
    if args.json:
        sys.stdout.write(json.dumps(record) + "\n")
    else:
        sys.stdout.write(
            f"density {density:.6f}  det {record['det']:.6g}  shortest_vector {record['shortest_vector']:.6g}\n"
        )
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < MIN_SAMPLES:
        raise InputError(f"--samples must be at least {MIN_SAMPLES}")
    results = run_checks(args.samples, args.seed, workers=args.workers)
    sys.stdout.write(f"samples {args.samples}  seed {args.seed}  band {4.0:g} sigma\n")
    sys.stdout.write(format_checks(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_MISMATCH


def _add_lattice_args(p: argparse.ArgumentParser, required_out: bool) -> None:
    p.add_argument("lattice", nargs="?", help="catalog lattice: sc, bcc or fcc")
    p.add_argument("--basis", nargs=9, type=float, metavar="X", help="three basis vectors, row by row")
    if required_out:
        p.add_argument("--out", required=True, help="OFF output path; a .json summary is written alongside")
        p.add_argument("--format", choices=["off"], default="off")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="packing-cell", description="Voronoi cells and densities of sphere packings.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("report", help="reproduce the reference constants as a JSON document")
    p.add_argument("--pretty", action="store_true", help="human-readable table instead of JSON")
    p.add_argument("--out", help="write to this file instead of stdout")
    p.set_defaults(func=cmd_report)

    p = sub.add_parser("voronoi", help="export a Voronoi cell as OFF")
    _add_lattice_args(p, required_out=True)
    p.add_argument("--config", choices=sorted(CONFIGS), help="finite 1+12 configuration instead of a lattice")
    p.set_defaults(func=cmd_voronoi)

    p = sub.add_parser("density", help="packing density of a lattice")
    _add_lattice_args(p, required_out=False)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_density)

    p = sub.add_parser("brillouin", help="export the Brillouin zone (reciprocal Voronoi cell) as OFF")
    _add_lattice_args(p, required_out=True)
    p.add_argument("--two-pi", action="store_true", help="use the physics convention a_i . b_j = 2 pi delta_ij")
    p.set_defaults(func=cmd_brillouin)

    p = sub.add_parser("verify", help="cross-check constructed volumes against Monte-Carlo estimates")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, OverlappingSpheres) as exc:
        print(f"packing-cell: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (Unbounded, InfeasibleInterior, DegenerateInput) as exc:
        print(f"packing-cell: geometric degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PackingCellError as exc:
        print(f"packing-cell: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
