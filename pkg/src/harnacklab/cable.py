"""Resistance-preserving edge subdivision, the discrete cable-system analogue.

Replacing each edge of conductance C by a path of k segments of conductance
k*C keeps every series resistance equal to 1/C, so harmonic values at the
original vertices, capacities between original-vertex sets, and harmonic
measure on original boundaries are all invariant.  Station weights are NOT
preserved (the mu mass inflates along the cables), so only
conductance-determined quantities should be compared across a subdivision.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .graphs import Region, WeightedGraph


@dataclass(frozen=True)
class Subdivision:
    """Subdivided graph, the identity map on originals, and per-edge cable paths."""

    graph: WeightedGraph
    vertex_map: dict[int, int]
    edge_paths: dict[tuple[int, int], tuple[int, ...]]
    k: int


def subdivide(g: WeightedGraph, k: int) -> Subdivision:
    """Replace every edge (u, v, C) with a k-segment path of conductance k*C.

    Original vertices keep their ids; the k-1 fresh vertices per edge are
    numbered consecutively from g.n in canonical edge order, listed in the
    cable path from u to v.  Distances between original vertices scale by
    exactly k.
    """
    if k < 2:
        raise ValidationError(f"subdivision order must be >= 2, got {k}")
    next_id = g.n
    us, vs, cs = [], [], []
    edge_paths: dict[tuple[int, int], tuple[int, ...]] = {}
    for u, v, c in g.edges():
        fresh = list(range(next_id, next_id + k - 1))
        next_id += k - 1
        chain = [u] + fresh + [v]
        seg_c = k * c
        for a, b in zip(chain[:-1], chain[1:]):
            us.append(min(a, b))
            vs.append(max(a, b))
            cs.append(seg_c)
        edge_paths[(u, v)] = tuple(fresh)
    graph = WeightedGraph.from_arrays(
        np.array(us), np.array(vs), np.array(cs), next_id)
    return Subdivision(graph=graph, vertex_map={v: v for v in range(g.n)},
                       edge_paths=edge_paths, k=k)


def lift_region(g: WeightedGraph, sub: Subdivision, reg: Region) -> Region:
    """Region of the subdivided graph matching `reg` on the original graph.

    Cable vertices of edges with at least one endpoint in the interior join
    the interior; the boundary stays the original boundary, so Dirichlet data
    carries over unchanged.
    """
    interior = set(reg.interior)
    for (u, v), fresh in sub.edge_paths.items():
        if u in reg.interior or v in reg.interior:
            interior.update(fresh)
    return Region(interior=frozenset(interior), boundary=reg.boundary)
