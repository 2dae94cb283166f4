"""Command-line front end: graph generation, experiment drivers, reports.

Every report-producing subcommand reads a graph (edge-list file), runs the
corresponding module operation, and writes a versioned JSON report; record
tables additionally get a CSV projection and matplotlib figures rendered next
to the output (disable with --no-figures).  Exit codes: 0 success, 1
validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import figures, report
from .cable import subdivide
from .errors import NumericalError, ValidationError
from .generators import PerturbationSpec, lattice_box, perturb, sierpinski_gasket
from .graphs import audit_regularity, ball, read_edgelist, write_edgelist
from .inequalities import (annulus_harnack_reports, build_cutoff, certify,
                           coi_check, default_probes, harnack_constant,
                           poincare_constant)
from .mc import simulate_exit
from .potential import capacity_sweep, scale_profile
from .stability import run_stability

THREADS_ENV = "HARNACKLAB_THREADS"


class _Parser(argparse.ArgumentParser):
    """argparse that exits with code 1 on bad flags, per the CLI contract."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(1)


def _radii(text: str) -> list[int]:
    try:
        vals = [int(part) for part in text.split(",") if part]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad radius list {text!r}") from None
    if not vals:
        raise argparse.ArgumentTypeError("empty radius list")
    return vals


def auto_center(g) -> int:
    """Approximate graph center: double sweep plus eccentricity refinement."""
    d0 = g.distances(0)
    u = int(np.argmax(d0))
    du = g.distances(u)
    v = int(np.argmax(du))
    dv = g.distances(v)
    m = np.maximum(du, dv)
    candidates = np.flatnonzero(m == m.min())
    picks = candidates[np.linspace(0, candidates.size - 1,
                                   min(25, candidates.size)).astype(int)]
    best = min((g.eccentricity(int(c)), int(c)) for c in picks)
    return best[1]


def _resolve_center(g, text: str) -> int:
    if text == "auto":
        return auto_center(g)
    try:
        c = int(text)
    except ValueError:
        raise ValidationError(f"center must be an integer vertex id or 'auto', got {text!r}")
    if not 0 <= c < g.n:
        raise ValidationError(f"center {c} not in graph of size {g.n}")
    return c


def _threads() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _emit(rep: dict, args, records_for_csv=None, figure_fn=None, figure_arg=None):
    out = Path(args.output)
    report.write_report(rep, out)
    written = [str(out)]
    if records_for_csv:
        csv_path = out.with_suffix(".csv")
        report.write_records_csv(records_for_csv, csv_path)
        written.append(str(csv_path))
    if figure_fn is not None and not args.no_figures:
        written += [str(p) for p in figure_fn(figure_arg, out.with_suffix(""))]
    print("wrote " + ", ".join(written))


def _add_common(p, radii_list: bool):
    p.add_argument("-g", "--graph", required=True, help="edge-list input file")
    p.add_argument("--center", default="auto",
                   help="center vertex id, or 'auto' (default)")
    if radii_list:
        p.add_argument("--r", type=_radii, required=True, metavar="R1,R2,...",
                       help="comma-separated radii")
    else:
        p.add_argument("--r", type=int, required=True, help="radius")
    p.add_argument("-o", "--output", required=True, help="JSON report path")
    p.add_argument("--no-figures", action="store_true",
                   help="skip matplotlib figure rendering")
    p.add_argument("--kill-factor", type=int, default=8,
                   help="outer-ball factor for killed capacities (default 8)")


def build_parser() -> _Parser:
    parser = _Parser(prog="harnacklab", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", metavar="SUBCOMMAND")

    gen = sub.add_parser("generate", help="generate a benchmark graph", parents=[])
    gen.add_argument("--lattice", type=int, choices=(1, 2, 3),
                     help="lattice dimension")
    gen.add_argument("--L", type=int, help="lattice half-width")
    gen.add_argument("--c", type=float, default=1.0, help="constant conductance")
    gen.add_argument("--sierpinski", type=int, help="Sierpinski gasket level")
    gen.add_argument("--perturb", help="input edge list to perturb")
    gen.add_argument("--lam", type=float, help="perturbation ratio bound")
    gen.add_argument("--seed", type=int, default=0, help="perturbation seed")
    gen.add_argument("-o", "--output", required=True, help="edge-list output path")

    aud = sub.add_parser("audit", help="volume/capacity/scale regularity audit")
    _add_common(aud, radii_list=True)

    sc = sub.add_parser("scale", help="scale profile V, C, E per radius")
    _add_common(sc, radii_list=True)
    sc.add_argument("--sweep", action="store_true",
                    help="include a capacity convergence sweep over outer radii")

    ha = sub.add_parser("harnack", help="exact Harnack constant of a ball or annulus")
    _add_common(ha, radii_list=False)
    ha.add_argument("--mode", choices=("ball", "annulus"), default="ball")

    po = sub.add_parser("poincare", help="adjusted-Poincare constant")
    _add_common(po, radii_list=False)
    po.add_argument("--kappa2", type=float, default=2.0,
                    help="enlargement factor for the energy ball (default 2)")

    co = sub.add_parser("coi", help="cut-off inequality constants")
    co.add_argument("-g", "--graph", required=True)
    co.add_argument("--center", default="auto")
    co.add_argument("--R", type=int, required=True, help="cut-off radius")
    co.add_argument("--s", type=_radii, required=True, metavar="S1,S2,...",
                    help="probe radii")
    co.add_argument("--kind", choices=("linear", "green"), default="linear")
    co.add_argument("--seed", type=int, default=0)
    co.add_argument("--kill-factor", type=int, default=8)
    co.add_argument("-o", "--output", required=True)
    co.add_argument("--no-figures", action="store_true")

    ce = sub.add_parser("certify", help="empirical certificate bands for the potential-theory estimates")
    _add_common(ce, radii_list=True)
    ce.add_argument("--seed", type=int, default=0)
    ce.add_argument("--k0", type=int, default=3,
                    help="domain enlargement exponent (default 3)")

    st = sub.add_parser("stability", help="conductance-perturbation stability")
    _add_common(st, radii_list=True)
    st.add_argument("--lam", type=float, required=True, help="equivalence band ratio")
    st.add_argument("--n", type=int, default=20, help="number of perturbations")
    st.add_argument("--seed", type=int, default=0)
    st.add_argument("--kappa2", type=float, default=2.0)

    si = sub.add_parser("simulate", help="Monte Carlo exits from a ball")
    _add_common(si, radii_list=False)
    si.add_argument("--n", type=int, default=100_000, help="number of paths")
    si.add_argument("--seed", type=int, default=0)
    si.add_argument("--ball-radius", type=int, default=None,
                    help="track time spent in this ball around the center")

    sd = sub.add_parser("subdivide", help="resistance-preserving edge subdivision")
    sd.add_argument("-g", "--graph", required=True)
    sd.add_argument("-k", type=int, required=True, help="segments per edge")
    sd.add_argument("-o", "--output", required=True, help="edge-list output path")
    return parser


def _cmd_generate(args) -> int:
    modes = [args.lattice is not None, args.sierpinski is not None,
             args.perturb is not None]
    if sum(modes) != 1:
        raise ValidationError("generate: pick exactly one of --lattice/--sierpinski/--perturb")
    if args.lattice is not None:
        if args.L is None:
            raise ValidationError("generate: --lattice requires --L")
        g = lattice_box(args.lattice, args.L, c=args.c)
    elif args.sierpinski is not None:
        g = sierpinski_gasket(args.sierpinski)
    else:
        base = read_edgelist(args.perturb)
        if args.lam is None:
            raise ValidationError("generate: --perturb requires --lam")
        g = perturb(base, PerturbationSpec(ratio_bound=args.lam, seed=args.seed))
    write_edgelist(g, args.output)
    print(f"wrote {args.output} ({g.n} vertices, {len(g.edges())} edges)")
    return 0


def _cmd_audit(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    rows = audit_regularity(g, center, args.r, kill_factor=args.kill_factor)
    rep = report.base_report(g, "audit", {"center": center, "radii": args.r,
                                          "kill_factor": args.kill_factor},
                             seed=None, threads=_threads())
    rep["records"] = [report.audit_row(row) for row in rows]
    _emit(rep, args, records_for_csv=rep["records"],
          figure_fn=figures.audit_figure, figure_arg=rep["records"])
    return 0


def _cmd_scale(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    records = scale_profile(g, center, args.r, kill_factor=args.kill_factor)
    rep = report.base_report(g, "scale", {"center": center, "radii": args.r,
                                          "kill_factor": args.kill_factor,
                                          "sweep": bool(args.sweep)},
                             seed=None, threads=_threads())
    rows = [report.scale_record_row(rec) for rec in records]
    sweep = None
    if args.sweep:
        sweep = {str(r): [{"outer_radius": rad, "capacity": cap}
                          for rad, cap in capacity_sweep(g, center, r)]
                 for r in args.r}
    rep["records"] = {"rows": rows, "sweep": sweep}
    _emit(rep, args, records_for_csv=rows,
          figure_fn=figures.scale_figure, figure_arg=rows)
    return 0


def _cmd_harnack(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    if args.mode == "ball":
        domain = ball(g, center, 2 * args.r)
        if not domain.boundary:
            raise ValidationError(
                f"harnack: ball B({center}, {2 * args.r}) escapes the finite graph")
        rep_h = harnack_constant(g, domain, ball(g, center, args.r).interior)
        payload = report.harnack_payload(rep_h)
    else:
        reports, warning = annulus_harnack_reports(g, center, args.r)
        best = max(reports, key=lambda rep_: rep_.constant)
        payload = report.harnack_payload(best)
        payload["components"] = len(reports)
        payload["warning"] = warning
    rep = report.base_report(g, "harnack", {"center": center, "r": args.r,
                                            "mode": args.mode},
                             seed=None, threads=_threads())
    rep["harnack"] = payload
    _emit(rep, args, figure_fn=figures.harnack_figure, figure_arg=payload)
    return 0


def _cmd_poincare(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    res = poincare_constant(g, center, args.r, kappa2=args.kappa2,
                            kill_factor=args.kill_factor)
    rep = report.base_report(g, "poincare", {"center": center, "r": args.r,
                                             "kappa2": args.kappa2,
                                             "kill_factor": args.kill_factor},
                             seed=None, threads=_threads())
    rep["records"] = [report.poincare_row(res, center, args.r, args.kappa2)]
    _emit(rep, args, records_for_csv=rep["records"])
    return 0


def _cmd_coi(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    phi = build_cutoff(g, center, args.R, kind=args.kind)
    probes = default_probes(g, center, args.R, args.s, kill_factor=args.kill_factor)
    res = coi_check(g, phi, probes, seed=args.seed, kill_factor=args.kill_factor)
    rep = report.base_report(g, "coi", {"center": center, "R": args.R,
                                        "s": args.s, "kind": args.kind,
                                        "kill_factor": args.kill_factor},
                             seed=args.seed, threads=_threads())
    payload = report.coi_payload(res, phi.kind)
    payload["kappa3"] = phi.kappa3
    payload["note"] = phi.note
    rep["certificates"] = payload
    _emit(rep, args, figure_fn=figures.coi_figure, figure_arg=payload)
    return 0


def _cmd_certify(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    certs = certify(g, center, args.r, seed=args.seed, k0=args.k0,
                    kill_factor=args.kill_factor)
    rep = report.base_report(g, "certify", {"center": center, "radii": args.r,
                                            "k0": args.k0,
                                            "kill_factor": args.kill_factor},
                             seed=args.seed, threads=_threads())
    rep["certificates"] = [report.certificate_row(c) for c in certs]
    _emit(rep, args, records_for_csv=rep["certificates"],
          figure_fn=figures.certificates_figure, figure_arg=rep["certificates"])
    return 0


def _cmd_stability(args) -> int:
    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    result = run_stability(g, center, args.r, args.lam, args.n, args.seed,
                           kill_factor=args.kill_factor, kappa2=args.kappa2,
                           threads=_threads())
    rep = report.base_report(g, "stability", {"center": center, "radii": args.r,
                                              "lam": args.lam, "n": args.n,
                                              "kill_factor": args.kill_factor,
                                              "kappa2": args.kappa2},
                             seed=args.seed, threads=_threads())
    payload = report.stability_payload(result)
    rep["stability"] = payload
    csv_rows = [dict(radius=rec["radius"], volume=rec["volume"],
                     killed_capacity=rec["killed_capacity"],
                     killed_scale=rec["killed_scale"], lambda_max=rec["lambda_max"],
                     kappa1=rec["kappa1"], h_ball=rec["h_ball"],
                     h_annulus=rec["h_annulus"]) for rec in payload["base"]]
    _emit(rep, args, records_for_csv=csv_rows,
          figure_fn=figures.stability_figure, figure_arg=payload)
    return 0


def _cmd_simulate(args) -> int:
    from .laplace import harmonic_measure, mean_exit_time

    g = read_edgelist(args.graph)
    center = _resolve_center(g, args.center)
    reg = ball(g, center, args.r)
    if not reg.boundary:
        raise ValidationError(
            f"simulate: ball B({center}, {args.r}) escapes the finite graph")
    sample = simulate_exit(g, reg, center, args.n, args.seed,
                           ball_radius=args.ball_radius)
    exact = {
        "exit_probabilities": {str(z): p for z, p in
                               sorted(harmonic_measure(g, reg, center).items())},
        "mean_exit_time": mean_exit_time(g, reg, center),
    }
    rep = report.base_report(g, "simulate", {"center": center, "r": args.r,
                                             "n": args.n,
                                             "ball_radius": args.ball_radius},
                             seed=args.seed, threads=_threads())
    payload = report.exit_sample_payload(sample, exact=exact)
    rep["records"] = payload
    _emit(rep, args, figure_fn=figures.simulate_figure, figure_arg=payload)
    return 0


def _cmd_subdivide(args) -> int:
    g = read_edgelist(args.graph)
    sub = subdivide(g, args.k)
    write_edgelist(sub.graph, args.output)
    print(f"wrote {args.output} ({sub.graph.n} vertices, "
          f"{len(sub.graph.edges())} edges, k={args.k})")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "audit": _cmd_audit,
    "scale": _cmd_scale,
    "harnack": _cmd_harnack,
    "poincare": _cmd_poincare,
    "coi": _cmd_coi,
    "certify": _cmd_certify,
    "stability": _cmd_stability,
    "simulate": _cmd_simulate,
    "subdivide": _cmd_subdivide,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.subcommand is None:
        parser.print_help()
        return 1
    try:
        return _COMMANDS[args.subcommand](args)
    except ValidationError as exc:
        print(f"harnacklab {args.subcommand}: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"harnacklab {args.subcommand}: numerical failure: {exc}",
              file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
