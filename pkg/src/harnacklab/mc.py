"""Monte Carlo simulation of the continuous-time chain, a statistical oracle.

The chain waits at v for an Exp(mu_v) holding time (sampled by inverse CDF)
and jumps to a neighbor y with probability C_vy / mu_v.  Each path draws from
its own counter-based Philox stream keyed by (seed, path index), so serial
and partitioned-parallel runs agree bit for bit.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from math import log1p, sqrt

import numpy as np

from .errors import NumericalError, ValidationError
from .graphs import Region, WeightedGraph, ball

STEP_CAP = 10 ** 8


@dataclass(frozen=True)
class ExitSample:
    """Empirical exit law and time functionals with standard errors."""

    n: int
    seed: int
    exit_freq: dict[int, float]
    exit_se: dict[int, float]
    mean_exit_time: float
    exit_time_se: float
    ball_radius: int | None
    ball_time: float | None
    ball_time_se: float | None
    total_steps: int


def simulate_exit(g: WeightedGraph, reg: Region, x: int, n: int, seed: int,
                  ball_radius: int | None = None,
                  step_cap: int = STEP_CAP) -> ExitSample:
    """Simulate n independent exits from the region started at x.

    Reports per-boundary-vertex exit frequencies, the mean exit time, and
    (when `ball_radius` is given) the mean time spent in B(x, ball_radius),
    each with standard errors.  Deterministic for a fixed seed.
    """
    if n < 1:
        raise ValidationError(f"simulate_exit: need n >= 1 paths, got {n}")
    if x not in reg.interior:
        raise ValidationError(f"simulate_exit: start {x} must be interior")
    if not reg.boundary:
        raise ValidationError("simulate_exit: region has no boundary, no exit possible")

    is_interior = np.zeros(g.n, dtype=bool)
    is_interior[list(reg.interior)] = True
    in_ball = np.zeros(g.n, dtype=bool)
    if ball_radius is not None:
        in_ball[list(ball(g, x, ball_radius).interior)] = True

    nbrs = [g.neighbors(v).tolist() for v in range(g.n)]
    cums: list = [None] * g.n
    rates = [0.0] * g.n
    for v in reg.interior:
        c = g.conductances(v)
        cums[v] = (np.cumsum(c) / c.sum()).tolist()
        rates[v] = float(g.mu[v])

    exit_counts: dict[int, int] = {}
    times = np.empty(n)
    ball_times = np.empty(n) if ball_radius is not None else None
    total_steps = 0
    # one bit generator, re-keyed per path to the stream Philox(key=[seed, i]);
    # re-keying through .state is bitwise identical to a fresh construction
    bg = np.random.Philox(key=[0, 0])
    state = bg.state
    key_arr = state["state"]["key"]
    counter_arr = state["state"]["counter"]
    shift = np.uint64(11)
    scale = 2.0 ** -53
    block = 64
    ball_flag = ball_times is not None
    for i in range(n):
        key_arr[0] = seed
        key_arr[1] = i
        counter_arr[:] = 0
        state["buffer_pos"] = 4
        bg.state = state
        buf = ((bg.random_raw(block) >> shift) * scale).tolist()
        ptr = 0
        v = x
        t = 0.0
        tb = 0.0
        steps = 0
        while is_interior[v]:
            if ptr + 1 >= block:
                buf = ((bg.random_raw(block) >> shift) * scale).tolist()
                ptr = 0
            hold = -log1p(-buf[ptr]) / rates[v]
            t += hold
            if ball_flag and in_ball[v]:
                tb += hold
            v = nbrs[v][bisect_right(cums[v], buf[ptr + 1])]
            ptr += 2
            steps += 1
            if steps > step_cap:
                raise NumericalError(
                    f"simulate_exit: path {i} exceeded the {step_cap}-step safety cap")
        exit_counts[v] = exit_counts.get(v, 0) + 1
        times[i] = t
        if ball_times is not None:
            ball_times[i] = tb
        total_steps += steps

    exit_freq = {}
    exit_se = {}
    for z in sorted(reg.boundary):
        p = exit_counts.get(z, 0) / n
        exit_freq[z] = p
        exit_se[z] = sqrt(p * (1.0 - p) / n)
    t_mean = float(times.mean())
    t_se = float(times.std(ddof=1) / sqrt(n)) if n > 1 else 0.0
    if ball_times is not None:
        b_mean = float(ball_times.mean())
        b_se = float(ball_times.std(ddof=1) / sqrt(n)) if n > 1 else 0.0
    else:
        b_mean = b_se = None
    return ExitSample(n=n, seed=seed, exit_freq=exit_freq, exit_se=exit_se,
                      mean_exit_time=t_mean, exit_time_se=t_se,
                      ball_radius=ball_radius, ball_time=b_mean,
                      ball_time_se=b_se, total_steps=total_steps)
