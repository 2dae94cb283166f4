"""Report serialization: versioned JSON schema, CSV projections, graph hashes.

Reports are byte-deterministic for identical inputs, flags, and seeds: keys
are sorted and every float is rounded to 12 significant digits before
serialization.  The top-level schema (version 1) always carries the keys
{meta, records, certificates, harnack, stability}; unused sections are null.
"""

from __future__ import annotations

import csv
import hashlib
import json
from importlib import metadata

from .graphs import AuditRow, ScaleRecord, WeightedGraph, format_edgelist
from .inequalities import Certificate, CoiResult, HarnackReport, PoincareResult
from .laplace import DIRECT_LIMIT, SOLVE_TOL
from .mc import ExitSample
from .stability import StabilityReport

SCHEMA_VERSION = 1


def tool_version() -> str:
    try:
        return metadata.version("harnacklab")
    except metadata.PackageNotFoundError:
        return "0.0.0+uninstalled"


def graph_hash(g: WeightedGraph) -> str:
    return hashlib.sha256(format_edgelist(g).encode("utf-8")).hexdigest()


def _round_floats(obj, digits: int = 12):
    if isinstance(obj, float):
        return float(f"{obj:.{digits}g}")
    if isinstance(obj, dict):
        return {k: _round_floats(v, digits) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v, digits) for v in obj]
    return obj


def render_report(report: dict) -> str:
    return json.dumps(_round_floats(report), indent=2, sort_keys=True) + "\n"


def base_report(g: WeightedGraph, subcommand: str, parameters: dict,
                seed: int | None, threads: int) -> dict:
    return {
        "meta": {
            "schema": SCHEMA_VERSION,
            "tool": "harnacklab",
            "version": tool_version(),
            "subcommand": subcommand,
            "parameters": parameters,
            "graph_hash": graph_hash(g),
            "solver": {"direct_limit": DIRECT_LIMIT, "tolerance": SOLVE_TOL},
            "seed": seed,
            "threads": threads,
        },
        "records": None,
        "certificates": None,
        "harnack": None,
        "stability": None,
    }


# -- row converters ----------------------------------------------------------

def scale_record_row(rec: ScaleRecord) -> dict:
    return {
        "center": rec.center,
        "radius": rec.radius,
        "volume": rec.volume,
        "capacity": rec.capacity,
        "killed_capacity": rec.killed_capacity,
        "scale": rec.scale,
        "killed_scale": rec.killed_scale,
        "truncation_radius": rec.truncation_radius,
        "kill_factor": rec.kill_factor,
        "comparability_worst": rec.comparability_worst,
    }


def audit_row(row: AuditRow) -> dict:
    return {
        "radius": row.radius,
        "v_doubling": row.v_doubling,
        "c_growth": row.c_growth,
        "e_growth": row.e_growth,
        "covering_m": row.covering_m,
        "volume_r": row.volume_r,
        "volume_2r": row.volume_2r,
    }


def certificate_row(cert: Certificate) -> dict:
    return {
        "tag": cert.tag,
        "band_min": cert.band_min,
        "band_max": cert.band_max,
        "bound_kind": cert.bound_kind,
        "bound": list(cert.bound),
        "passed": cert.passed,
        "samples": cert.samples,
        "notes": cert.notes,
    }


def harnack_payload(rep: HarnackReport) -> dict:
    return {
        "H": rep.constant,
        "witness": list(rep.witness),
        "domain_size": len(rep.domain.interior),
        "boundary_size": len(rep.domain.boundary),
        "testset_size": len(rep.testset),
        "boundary_ratios": {str(z): v for z, v in sorted(rep.boundary_ratios.items())},
        "warning": rep.warning,
    }


def poincare_row(res: PoincareResult, center: int, radius: int, kappa2: float) -> dict:
    return {
        "center": center,
        "radius": radius,
        "kappa2": kappa2,
        "lambda_max": res.lambda_max,
        "kappa1": res.kappa1,
        "small_size": res.small_size,
        "big_size": res.big_size,
        "killed_scale": res.killed_scale,
    }


def coi_payload(res: CoiResult, kind: str) -> dict:
    return {
        "kind": kind,
        "kappa4": res.kappa4,
        "theta": res.theta,
        "rows": [{"center": r.center, "s": r.s, "trial": r.trial, "ratio": r.ratio}
                 for r in res.rows],
    }


def exit_sample_payload(sample: ExitSample, exact: dict | None = None) -> dict:
    payload = {
        "n": sample.n,
        "seed": sample.seed,
        "exit_freq": {str(z): v for z, v in sorted(sample.exit_freq.items())},
        "exit_se": {str(z): v for z, v in sorted(sample.exit_se.items())},
        "mean_exit_time": sample.mean_exit_time,
        "exit_time_se": sample.exit_time_se,
        "ball_radius": sample.ball_radius,
        "ball_time": sample.ball_time,
        "ball_time_se": sample.ball_time_se,
        "total_steps": sample.total_steps,
    }
    if exact is not None:
        payload["exact"] = exact
    return payload


def stability_payload(rep: StabilityReport) -> dict:
    return {
        "center": rep.center,
        "radii": list(rep.radii),
        "ratio_bound": rep.ratio_bound,
        "n_perturbations": rep.n_perturbations,
        "seed": rep.seed,
        "kill_factor": rep.kill_factor,
        "kappa2": rep.kappa2,
        "bands_ok": rep.bands_ok,
        "coi_kappa4": rep.coi_kappa4,
        "base": [{
            "radius": rec.radius,
            "volume": rec.volume,
            "killed_capacity": rec.killed_capacity,
            "killed_scale": rec.killed_scale,
            "lambda_max": rec.lambda_max,
            "kappa1": rec.kappa1,
            "h_ball": rec.h_ball,
            "h_annulus": rec.h_annulus,
        } for rec in rep.base],
        "perturbations": [{
            "index": row.index,
            "seed": row.seed,
            "ratios": {k: {str(r): v for r, v in sorted(d.items())}
                       for k, d in sorted(row.ratios.items())},
            "worst": dict(sorted(row.worst.items())),
        } for row in rep.perturbations],
    }


def write_report(report: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_report(report))


def write_records_csv(records: list[dict], path) -> None:
    """Flat CSV projection of record rows (spreadsheet view)."""
    if not records:
        return
    fields = []
    for row in records:
        for key in row:
            if key not in fields:
                fields.append(key)
    rounded = _round_floats(records)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=fields)
        writer.writeheader()
        for row in rounded:
            writer.writerow(row)
