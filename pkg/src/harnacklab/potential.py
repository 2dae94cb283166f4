"""Capacities, equilibrium potentials, the scale function E, occupation times.

The capacity of an inner set relative to an outer region is the minimal
Dirichlet energy among functions equal to 1 on the inner set and 0 outside
the outer region; the minimizer (equilibrium potential) is harmonic in
between.  The killed variant forces 0 outside B(x, 8r).  On a finite
truncation the "global" capacity is realized with the largest admissible
outer ball and its truncation radius is recorded; the CLI exposes a
convergence sweep instead of pretending exactness.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Region, ScaleRecord, WeightedGraph, ball, volume
from .laplace import GreenKernel, Potential, dirichlet_solve, restricted_energy

DEFAULT_KILL_FACTOR = 8


@dataclass(frozen=True)
class CapacityResult:
    """Capacity value plus the equilibrium potential realizing it."""

    capacity: float
    potential: Potential
    inner: frozenset[int]
    outer: Region

    def __post_init__(self):
        if not self.capacity > 0:
            raise ValidationError(f"capacity must be positive, got {self.capacity}")


def capacity(g: WeightedGraph, inner, outer: Region) -> CapacityResult:
    """Dirichlet capacity of `inner` relative to the outer region.

    Solves the equilibrium problem with data 1 on the inner set and 0 on the
    outer boundary; all of the outer boundary is grounded, and the potential
    is implicitly 0 outside the outer region.
    """
    inner = frozenset(int(v) for v in inner)
    if not inner:
        raise ValidationError("capacity: inner set is empty")
    if inner & outer.boundary:
        raise ValidationError("capacity: inner set meets the outer boundary")
    if not inner <= outer.interior:
        raise ValidationError("capacity: inner set must lie in the outer interior")
    if not outer.boundary:
        raise ValidationError("capacity: outer region has no boundary to ground")

    free = outer.interior - inner
    values: dict[int, float] = {int(v): 1.0 for v in inner}
    values.update({int(z): 0.0 for z in outer.boundary})
    residual = None
    if free:
        sub = Region(interior=free, boundary=frozenset(
            int(w) for v in free for w in g.neighbors(v) if int(w) not in free))
        sol = dirichlet_solve(g, sub, values)
        residual = sol.residual
        values.update(sol.values)

    if min(values.values()) < -1e-9 or max(values.values()) > 1 + 1e-9:
        raise ValidationError("capacity: equilibrium potential escaped [0, 1]")
    energy = restricted_energy(g, values)
    pot = Potential(values=values, energy=energy, residual=residual)
    return CapacityResult(capacity=energy, potential=pot, inner=inner, outer=outer)


def equilibrium_flux(g: WeightedGraph, result: CapacityResult) -> float:
    """Total flux out of the inner set: sum C_ay (1 - f(y)); equals the capacity."""
    f = result.potential.values
    total = 0.0
    for a in result.inner:
        nbrs = g.neighbors(a)
        cs = g.conductances(a)
        for y, c in zip(nbrs, cs):
            y = int(y)
            if y not in result.inner:
                total += float(c) * (1.0 - f.get(y, 0.0))
    return total


def killed_capacity(g: WeightedGraph, x: int, r: int,
                    kill_factor: int = DEFAULT_KILL_FACTOR) -> CapacityResult:
    """Capacity of B(x, r) for the process killed on exiting B(x, kill_factor*r)."""
    if r < 1:
        raise ValidationError(f"killed capacity: radius must be >= 1, got {r}")
    outer = ball(g, x, kill_factor * r)
    if not outer.boundary:
        raise ValidationError(
            f"killed capacity at r={r}: ball B({x}, {kill_factor * r}) escapes the finite graph")
    return capacity(g, ball(g, x, r).interior, outer)


def global_capacity(g: WeightedGraph, x: int, r: int) -> tuple[CapacityResult, int]:
    """Finite-truncation proxy for the transient capacity of B(x, r).

    Uses the largest admissible outer ball (radius = eccentricity of x) and
    returns that truncation radius alongside the result.
    """
    ecc = g.eccentricity(x)
    if r > ecc:
        raise ValidationError(f"global capacity: ball B({x}, {r}) escapes the finite graph")
    outer = ball(g, x, ecc)
    return capacity(g, ball(g, x, r).interior, outer), ecc


def capacity_sweep(g: WeightedGraph, x: int, r: int,
                   start_factor: int = DEFAULT_KILL_FACTOR) -> list[tuple[int, float]]:
    """Convergence sweep: capacity of B(x, r) with doubling outer radii.

    Rows (outer_radius, capacity) for outer radii start_factor*r, 2*that, ...
    capped at the eccentricity of x.
    """
    ecc = g.eccentricity(x)
    if start_factor * r > ecc:
        raise ValidationError(
            f"capacity sweep: smallest outer ball B({x}, {start_factor * r}) escapes the graph")
    radii = []
    rad = start_factor * r
    while rad < ecc:
        radii.append(rad)
        rad *= 2
    radii.append(ecc)
    inner = ball(g, x, r).interior
    return [(rad, capacity(g, inner, ball(g, x, rad)).capacity) for rad in radii]


def occupation_time(g: WeightedGraph, x: int, r: int, outer: Region) -> float:
    """Expected time spent in B(x, r) before exiting the outer region, from x."""
    if x not in outer.interior:
        raise ValidationError(f"occupation_time: start {x} must be interior to outer")
    ball_int = ball(g, x, r).interior
    if not ball_int <= outer.interior:
        raise ValidationError(
            f"occupation_time: ball B({x}, {r}) is not contained in the outer region")
    kern = GreenKernel(g, outer)
    col = kern.column_array(x)
    idx = kern.interior_index()
    mask = np.isin(idx, np.fromiter(ball_int, dtype=np.int64, count=len(ball_int)))
    return float(col[mask].sum())


def _comparability_worst(g: WeightedGraph, x: int, r: int, ck: float,
                         kill_factor: int, sample: int) -> float | None:
    """Worst ratio of C_killed(y, 2r) against C_killed(x, r) over nearby centers."""
    sphere = np.flatnonzero(g.distances(x) == r)
    if sphere.size == 0 or sample == 0:
        return None
    picks = sphere[np.linspace(0, sphere.size - 1, min(sample, sphere.size)).astype(int)]
    worst = None
    for y in picks:
        y = int(y)
        if not ball(g, y, kill_factor * 2 * r).boundary:
            continue
        ratio = killed_capacity(g, y, 2 * r, kill_factor).capacity / ck
        spread = max(ratio, 1.0 / ratio)
        worst = spread if worst is None else max(worst, spread)
    return worst


def scale_profile(g: WeightedGraph, x: int, radii,
                  kill_factor: int = DEFAULT_KILL_FACTOR,
                  compare_centers: int = 4) -> list[ScaleRecord]:
    """ScaleRecords (V, C, C_killed, E, E_killed) for each radius.

    Also samples nearby centers y on the r-sphere and records the worst
    two-sided ratio of C_killed(y, 2r) to C_killed(x, r), the capacity
    comparability check.
    """
    records = []
    for r in radii:
        r = int(r)
        if r < 1:
            raise ValidationError(f"scale profile: radius must be >= 1, got {r}")
        outer = ball(g, x, kill_factor * r)
        if not outer.boundary:
            raise ValidationError(
                f"scale profile at r={r}: ball B({x}, {kill_factor * r}) escapes the finite graph")
        v = volume(g, ball(g, x, r))
        ck = capacity(g, ball(g, x, r).interior, outer).capacity
        cglob, trunc = global_capacity(g, x, r)
        records.append(ScaleRecord(
            center=int(x), radius=r, volume=v,
            capacity=cglob.capacity, killed_capacity=ck,
            scale=v / cglob.capacity, killed_scale=v / ck,
            truncation_radius=trunc, kill_factor=kill_factor,
            comparability_worst=_comparability_worst(
                g, x, r, ck, kill_factor, compare_centers),
        ))
    return records


def killed_scale(g: WeightedGraph, x: int, r: int,
                 kill_factor: int = DEFAULT_KILL_FACTOR) -> float:
    """E_killed(x, r) = V(x, r) / C_killed(x, r)."""
    v = volume(g, ball(g, x, r))
    return v / killed_capacity(g, x, r, kill_factor).capacity


__all__ = [
    "CapacityResult", "capacity", "equilibrium_flux", "killed_capacity",
    "global_capacity", "capacity_sweep", "occupation_time", "scale_profile",
    "killed_scale",
]
