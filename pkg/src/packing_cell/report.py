"""Reproduction report and Monte-Carlo verification table."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .geom3 import polyhedron_volume
from .lattice import (
    SPHERE_VOLUME,
    TetrahedronKind,
    fundamental_parallelepiped,
    lattice_fcc,
    lattice_fcc_square,
    packing_density,
    tessellation_tetrahedra,
    tetrahedron_sphere_coverage,
)
from .solids import (
    dodecahedron_edge_from_inradius,
    fcc_kissing_configuration,
    icosahedral_configuration,
    icosahedral_tetrahedron,
    regular_tetrahedron_metrics,
)
from .voronoi import voronoi_cell, voronoi_cell_lattice

REPORT_TOLERANCE = 1e-4
SIGMAS = 4.0


def sig6(x: float) -> float:
    """Round to 6 significant digits."""
    return float(f"{x:.6g}")


@dataclass(frozen=True)
class ReportRow:
    closed_form: str
    value: float
    reference_value: float

    @property
    def abs_error(self) -> float:
        return abs(self.value - self.reference_value)

    def to_dict(self) -> dict:
        return {
            "closed_form": self.closed_form,
            "value": sig6(self.value),
            "reference_value": self.reference_value,
            "abs_error": sig6(self.abs_error),
        }


@dataclass
class ReferenceReport:
    rows: dict[str, ReportRow] = field(default_factory=dict)
    ico_volume: float = 0.0
    regular_volume: float = 0.0

    @property
    def verdict_holds(self) -> bool:
        return self.ico_volume > self.regular_volume

    @property
    def ok(self) -> bool:
        return self.verdict_holds and all(r.abs_error < REPORT_TOLERANCE for r in self.rows.values())

    def to_dict(self) -> dict:
        out: dict = {name: row.to_dict() for name, row in self.rows.items()}
        out["verdict"] = {
            "inequality": "icosahedral_tetrahedron_volume > regular_tetrahedron_volume",
            "icosahedral_tetrahedron_volume": sig6(self.ico_volume),
            "regular_tetrahedron_volume": sig6(self.regular_volume),
            "margin": sig6(self.ico_volume - self.regular_volume),
            "holds": self.verdict_holds,
        }
        return out

    def to_text(self) -> str:
        width = max(len(n) for n in self.rows)
        lines = []
        for name, row in self.rows.items():
            lines.append(
                f"{name:<{width}}: {sig6(row.value):<10g} ref {row.reference_value:<10g} "
                f"|err| {row.abs_error:.2e}   {row.closed_form}"
            )
        margin = self.ico_volume - self.regular_volume
        verdict = "holds" if self.verdict_holds else "FAILS"
        lines.append(
            f"verdict: icosahedral tetrahedron {sig6(self.ico_volume):g} > regular tetrahedron "
            f"{sig6(self.regular_volume):g} (margin {sig6(margin):g}) {verdict}"
        )
        return "\n".join(lines) + "\n"


def build_report() -> ReferenceReport:
    fcc = lattice_fcc()
    tets = tessellation_tetrahedra(fcc)
    regular = next(t for t in tets if t.kind is TetrahedronKind.REGULAR)
    octahedral = next(t for t in tets if t.kind is TetrahedronKind.OCTAHEDRAL)
    ico = icosahedral_configuration()
    dodeca_volume = polyhedron_volume(voronoi_cell(ico.center, ico.neighbours))
    ico_tet = icosahedral_tetrahedron()
    reg_tet = regular_tetrahedron_metrics(2.0)

    rows = {
        "fpi_volume": ReportRow("4*sqrt(2)", polyhedron_volume(fundamental_parallelepiped(fcc)), 5.65685),
        "fpii_volume": ReportRow(
            "4*sqrt(2)", polyhedron_volume(fundamental_parallelepiped(lattice_fcc_square())), 5.65685
        ),
        "tiii_volume": ReportRow("(1/6)*4*sqrt(2)", regular.volume, 0.94281),
        "tiv_volume": ReportRow("(1/6)*4*sqrt(2)", octahedral.volume, 0.94281),
        "fcc_density": ReportRow("pi/(3*sqrt(2))", packing_density(fcc), 0.74048),
        "fcc_voronoi_volume": ReportRow("4*sqrt(2)", polyhedron_volume(voronoi_cell_lattice(fcc)), 5.65685),
        "dodecahedral_cell_volume": ReportRow(
            "2*(15+7*sqrt(5))/sqrt((25+11*sqrt(5))/10)^3", dodeca_volume, 5.55029
        ),
        "dodecahedron_edge": ReportRow("2/sqrt((25+11*sqrt(5))/10)", dodecahedron_edge_from_inradius(1.0), 0.898056),
        "dodecahedral_density": ReportRow("(4*pi/3)/v(V_dodecahedron)", SPHERE_VOLUME / dodeca_volume, 0.754697),
        "icosahedral_edge": ReportRow("8/sqrt(10+2*sqrt(5))", ico_tet.base_edge, 2.1029),
        "icosahedral_height": ReportRow(
            "2*sqrt(3)*(3+sqrt(5))/(3*sqrt(10+2*sqrt(5)))", ico_tet.height, 1.58931
        ),
        "icosahedral_base_area": ReportRow("(sqrt(3)/4)*a^2", ico_tet.base_area, 1.91491),
        "icosahedral_tetrahedron_volume": ReportRow("(1/3)*A*h", ico_tet.volume, 1.01446),
        "regular_tetrahedron_volume": ReportRow("(2/3)*sqrt(2)", reg_tet.volume, 0.94281),
    }
    return ReferenceReport(rows, ico_tet.volume, regular.volume)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class CheckResult:
    name: str
    kernel: float
    estimate: oracle.McEstimate

    @property
    def z(self) -> float:
        return self.estimate.z_score(self.kernel)

    @property
    def passed(self) -> bool:
        return self.z <= SIGMAS


def _check_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1, np.uint64)[0])


def run_checks(samples: int, seed: int, *, coverage_samples: int | None = None, workers: int = 1) -> list[CheckResult]:
    """Every kernel volume and coverage value checked against its oracle."""
    coverage_samples = coverage_samples or samples
    jobs = []

    for name, lat in (("fpi_volume", lattice_fcc()), ("fpii_volume", lattice_fcc_square())):
        pred, box = oracle.parallelepiped_membership(lat.basis)
        jobs.append((name, polyhedron_volume(fundamental_parallelepiped(lat)), pred, box))

    tets = tessellation_tetrahedra(lattice_fcc())
    for k, tet in enumerate(tets):
        pred, box = oracle.tetrahedron_membership(tet.vertices)
        jobs.append((f"fcc_tetrahedron_{k}_{tet.kind.value}", tet.volume, pred, box))

    fcc = lattice_fcc()
    pred, box = oracle.lattice_voronoi_membership(fcc)
    jobs.append(("fcc_voronoi_volume", polyhedron_volume(voronoi_cell_lattice(fcc)), pred, box))

    for name, config, half in (
        ("fcc_kissing_cell_volume", fcc_kissing_configuration(), oracle.lattice_cell_bound(fcc)),
        ("dodecahedral_cell_volume", icosahedral_configuration(), 1.3),
    ):
        pred = oracle.voronoi_membership(config.center, config.neighbours)
        box = (-half * np.ones(3), half * np.ones(3))
        jobs.append((name, polyhedron_volume(voronoi_cell(config.center, config.neighbours)), pred, box))

    results = []
    for idx, (name, kernel, pred, box) in enumerate(jobs):
        est = oracle.mc_volume_membership(pred, box, samples, _check_seed(seed, idx), workers=workers)
        results.append(CheckResult(name, kernel, est))

    seen = set()
    for tet in tets:
        if tet.kind in seen:
            continue
        seen.add(tet.kind)
        idx = len(results)
        est = oracle.mc_sphere_coverage(tet, coverage_samples, _check_seed(seed, idx), workers=workers)
        results.append(CheckResult(f"coverage_{tet.kind.value}", tetrahedron_sphere_coverage(tet), est))
    return results


def format_checks(results: list[CheckResult]) -> str:
    width = max(len(r.name) for r in results)
    head = f"{'check':<{width}}  {'kernel':>12}  {'monte-carlo':>12}  {'std-err':>10}  {'z':>6}  result"
    lines = [head, "-" * len(head)]
    for r in results:
        lines.append(
            f"{r.name:<{width}}  {r.kernel:>12.6f}  {r.estimate.mean:>12.6f}  "
            f"{r.estimate.std_error:>10.2e}  {r.z:>6.2f}  {'PASS' if r.passed else 'FAIL'}"
        )
    n_pass = sum(r.passed for r in results)
    lines.append(f"{n_pass}/{len(results)} checks passed")
    return "\n".join(lines) + "\n"
