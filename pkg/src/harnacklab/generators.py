"""Benchmark graph generators and conductance perturbations.

Lattice boxes (d = 1, 2, 3), Sierpinski gasket graph approximations, and the
band-limited multiplicative perturbations driving the stability experiments.
All generators are deterministic: identical inputs give bit-identical edge
lists.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import WeightedGraph

DEFAULT_VERTEX_CAP = 2_000_000
MAX_GASKET_LEVEL = 11


@dataclass(frozen=True)
class PerturbationSpec:
    """Multiplicative conductance band: each C'_xy = m_xy * C_xy.

    Multipliers are drawn once per unordered edge, log-uniform on
    [1/ratio_bound, ratio_bound], from a counter-based Philox stream keyed by
    `seed`, so runs are reproducible across platforms.  ratio_bound = 1 is the
    identity convenience.
    """

    ratio_bound: float
    seed: int
    distribution: str = "log-uniform"

    def __post_init__(self):
        if not self.ratio_bound >= 1:
            raise ValidationError(
                f"perturbation ratio bound must be >= 1, got {self.ratio_bound}")


def lattice_box(d: int, L: int, c=1.0, vertex_cap: int = DEFAULT_VERTEX_CAP) -> WeightedGraph:
    """Integer box [-L, L]^d with nearest-neighbor edges.

    `c` is either a constant conductance or a callable taking the two endpoint
    coordinate tuples.  Vertices are numbered in lexicographic coordinate
    order.
    """
    if d not in (1, 2, 3):
        raise ValidationError(f"lattice dimension must be 1, 2, or 3, got {d}")
    if L < 1:
        raise ValidationError(f"box half-width must be >= 1, got {L}")
    side = 2 * L + 1
    n = side ** d
    if n > vertex_cap:
        raise ValidationError(f"lattice box has {n} vertices, above cap {vertex_cap}")

    # vertex id of coordinate tuple = lexicographic rank
    strides = [side ** (d - 1 - k) for k in range(d)]
    grid = np.arange(n)
    coords = np.empty((n, d), dtype=np.int64)
    rem = grid
    for k in range(d):
        coords[:, k] = rem // strides[k] - L
        rem = rem % strides[k]

    us, vs = [], []
    for k in range(d):
        movable = coords[:, k] < L
        u = grid[movable]
        v = u + strides[k]
        us.append(u)
        vs.append(v)
    us = np.concatenate(us)
    vs = np.concatenate(vs)

    if callable(c):
        cs = np.array([float(c(tuple(coords[u]), tuple(coords[v])))
                       for u, v in zip(us, vs)])
        if (cs <= 0).any():
            raise ValidationError("conductance function returned a non-positive value")
    else:
        c = float(c)
        if c <= 0:
            raise ValidationError(f"conductance must be positive, got {c}")
        cs = np.full(us.shape, c)
    # keep u < v for the canonical edge list
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    return WeightedGraph.from_arrays(lo, hi, cs, n)


def sierpinski_gasket(level: int, max_level: int = MAX_GASKET_LEVEL) -> WeightedGraph:
    """Level-n graph approximation of the Sierpinski gasket, unit conductances.

    Vertex count is 3(3^n + 1)/2.  Built by recursive corner-sharing of three
    half-scale copies on an integer coordinate grid, then densely relabeled in
    sorted coordinate order.
    """
    if level < 0:
        raise ValidationError(f"gasket level must be >= 0, got {level}")
    if level > max_level:
        raise ValidationError(f"gasket level {level} above cap {max_level}")

    edges = {((0, 0), (1, 0)), ((0, 0), (0, 1)), ((0, 1), (1, 0))}
    for k in range(level):
        shift = 2 ** k
        grown = set()
        for (a, b) in edges:
            for (dx, dy) in ((0, 0), (shift, 0), (0, shift)):
                a2 = (a[0] + dx, a[1] + dy)
                b2 = (b[0] + dx, b[1] + dy)
                grown.add((min(a2, b2), max(a2, b2)))
        edges = grown

    points = sorted({p for e in edges for p in e})
    expected = 3 * (3 ** level + 1) // 2
    if len(points) != expected:
        raise ValidationError(
            f"gasket construction produced {len(points)} vertices, expected {expected}")
    ids = {p: i for i, p in enumerate(points)}
    us = np.array([ids[a] for a, _ in sorted(edges)])
    vs = np.array([ids[b] for _, b in sorted(edges)])
    lo = np.minimum(us, vs)
    hi = np.maximum(us, vs)
    return WeightedGraph.from_arrays(lo, hi, np.ones(len(edges)), len(points))


def path_graph(length: int, c=1.0) -> WeightedGraph:
    """Path 0 - 1 - ... - length with constant conductance (1-D helper)."""
    if length < 1:
        raise ValidationError("path needs at least one edge")
    us = np.arange(length)
    return WeightedGraph.from_arrays(us, us + 1, np.full(length, float(c)), length + 1)


def perturb(g: WeightedGraph, spec: PerturbationSpec) -> WeightedGraph:
    """Equivalent weighted graph: same edges, conductances scaled inside the band.

    Each unordered edge, taken in canonical sorted order, receives one
    multiplier exp(U * log(ratio_bound)) with U uniform on [-1, 1], so
    C_xy / ratio_bound <= C'_xy <= ratio_bound * C_xy holds by construction.
    """
    edges = g.edges()
    us = np.array([e[0] for e in edges])
    vs = np.array([e[1] for e in edges])
    cs = np.array([e[2] for e in edges])
    lam = float(spec.ratio_bound)
    if lam == 1.0:
        mult = np.ones(len(edges))
    else:
        rng = np.random.Generator(np.random.Philox(key=np.uint64(spec.seed)))
        u = rng.uniform(-1.0, 1.0, size=len(edges))
        mult = np.exp(u * math.log(lam))
    return WeightedGraph.from_arrays(us, vs, cs * mult, g.n)
