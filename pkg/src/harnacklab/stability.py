"""Conductance-perturbation stability experiments.

For a base graph and a band ratio lambda, draws equivalent weighted graphs
(conductances multiplied inside [1/lambda, lambda] edge by edge) and compares
capacities, volumes, scales, Poincare constants, and Harnack constants.  The
capacity, volume, and scale ratios obey exact bands because the energy and
mass functionals move termwise with the conductances; those bands are
asserted on every record.  Harnack ratios carry no a-priori formula and are
reported, not asserted.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError, ValidationError
from .generators import PerturbationSpec, perturb
from .graphs import WeightedGraph, ball, volume
from .inequalities import (annulus_harnack_reports, build_cutoff, coi_check,
                           default_probes, harnack_constant, poincare_constant)
from .potential import DEFAULT_KILL_FACTOR, killed_capacity

_BAND_SLACK = 1e-9


@dataclass(frozen=True)
class StabilityRecord:
    """Base quantities at one radius."""

    radius: int
    volume: float
    killed_capacity: float
    killed_scale: float
    lambda_max: float
    kappa1: float
    h_ball: float
    h_annulus: float


@dataclass(frozen=True)
class PerturbationRow:
    """Per-perturbation ratios primed/base, keyed by quantity then radius."""

    index: int
    seed: int
    ratios: dict[str, dict[int, float]]
    worst: dict[str, float] = field(default_factory=dict)


@dataclass(frozen=True)
class StabilityReport:
    """Everything the stability experiment produced, a pure function of inputs."""

    center: int
    radii: tuple[int, ...]
    ratio_bound: float
    n_perturbations: int
    seed: int
    kill_factor: int
    kappa2: float
    base: list[StabilityRecord]
    coi_kappa4: dict[str, float]
    perturbations: list[PerturbationRow]
    bands_ok: bool


def _records(g: WeightedGraph, center: int, radii, kill_factor: int,
             kappa2: float) -> list[StabilityRecord]:
    records = []
    for r in radii:
        v = volume(g, ball(g, center, r))
        ck = killed_capacity(g, center, r, kill_factor).capacity
        ek = v / ck
        poin = poincare_constant(g, center, r, kappa2=kappa2,
                                 kill_factor=kill_factor, e_scale=ek)
        dom = ball(g, center, 2 * r)
        if not dom.boundary:
            raise ValidationError(
                f"stability at r={r}: ball B({center}, {2 * r}) escapes the graph")
        hb = harnack_constant(g, dom, ball(g, center, r).interior).constant
        reports, _ = annulus_harnack_reports(g, center, r)
        ha = max(rep.constant for rep in reports)
        records.append(StabilityRecord(
            radius=int(r), volume=v, killed_capacity=ck, killed_scale=ek,
            lambda_max=poin.lambda_max, kappa1=float(poin.kappa1),
            h_ball=hb, h_annulus=ha))
    return records


def _assert_band(name: str, r: int, ratio: float, lo: float, hi: float):
    if not (lo * (1 - _BAND_SLACK) <= ratio <= hi * (1 + _BAND_SLACK)):
        raise NumericalError(
            f"stability: {name} ratio {ratio} at r={r} escaped the exact band "
            f"[{lo}, {hi}]")


def run_stability(g: WeightedGraph, center: int, radii, ratio_bound: float,
                  n_perturbations: int, seed: int,
                  kill_factor: int = DEFAULT_KILL_FACTOR, kappa2: float = 2.0,
                  threads: int = 1) -> StabilityReport:
    """Run the full stability experiment around one center.

    Computes base records, cut-off inequality constants for both kinds, then for
    each of `n_perturbations` equivalent graphs recomputes the records and
    asserts the exact comparability bands:
    C'/C and V'/V inside [1/lambda, lambda], E'/E inside [1/lambda^2,
    lambda^2], and kappa1'/kappa1 <= lambda^4.
    """
    radii = tuple(int(r) for r in radii)
    if not radii:
        raise ValidationError("stability: need at least one radius")
    if n_perturbations < 0:
        raise ValidationError("stability: n_perturbations must be >= 0")
    spec_probe = PerturbationSpec(ratio_bound=ratio_bound, seed=0)  # validates bound
    lam = spec_probe.ratio_bound

    base = _records(g, center, radii, kill_factor, kappa2)
    by_r = {rec.radius: rec for rec in base}

    R = 4 * max(radii)
    probes = default_probes(g, center, R, radii, kill_factor=kill_factor)
    coi_kappa4 = {}
    for kind in ("linear", "green"):
        phi = build_cutoff(g, center, R, kind=kind)
        res = coi_check(g, phi, probes, seed=seed, kill_factor=kill_factor)
        coi_kappa4[kind] = res.kappa4

    child_seeds = [int(s) for s in np.random.SeedSequence(seed).generate_state(
        max(n_perturbations, 1), dtype=np.uint64)][:n_perturbations]

    def one(item):
        i, child = item
        gp = perturb(g, PerturbationSpec(ratio_bound=lam, seed=child))
        recs = _records(gp, center, radii, kill_factor, kappa2)
        ratios: dict[str, dict[int, float]] = {
            k: {} for k in ("volume", "killed_capacity", "killed_scale",
                            "lambda_max", "kappa1", "h_ball", "h_annulus")}
        for rec in recs:
            b = by_r[rec.radius]
            r = rec.radius
            ratios["volume"][r] = rec.volume / b.volume
            ratios["killed_capacity"][r] = rec.killed_capacity / b.killed_capacity
            ratios["killed_scale"][r] = rec.killed_scale / b.killed_scale
            ratios["lambda_max"][r] = rec.lambda_max / b.lambda_max
            ratios["kappa1"][r] = rec.kappa1 / b.kappa1
            ratios["h_ball"][r] = rec.h_ball / b.h_ball
            ratios["h_annulus"][r] = rec.h_annulus / b.h_annulus
            _assert_band("killed capacity", r, ratios["killed_capacity"][r], 1 / lam, lam)
            _assert_band("volume", r, ratios["volume"][r], 1 / lam, lam)
            _assert_band("killed scale", r, ratios["killed_scale"][r],
                         1 / lam ** 2, lam ** 2)
            _assert_band("lambda_max", r, ratios["lambda_max"][r],
                         1 / lam ** 2, lam ** 2)
            if ratios["kappa1"][r] > lam ** 4 * (1 + _BAND_SLACK):
                raise NumericalError(
                    f"stability: kappa1 ratio {ratios['kappa1'][r]} at r={r} "
                    f"exceeded lambda^4 = {lam ** 4}")
        worst = {k: max(max(v.values()), 1 / min(v.values()))
                 for k, v in ratios.items()}
        return PerturbationRow(index=i, seed=child, ratios=ratios, worst=worst)

    items = list(enumerate(child_seeds))
    if threads > 1 and items:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            rows = list(pool.map(one, items))
    else:
        rows = [one(it) for it in items]

    return StabilityReport(
        center=int(center), radii=radii, ratio_bound=lam,
        n_perturbations=n_perturbations, seed=seed, kill_factor=kill_factor,
        kappa2=kappa2, base=base, coi_kappa4=coi_kappa4, perturbations=rows,
        bands_ok=True)
