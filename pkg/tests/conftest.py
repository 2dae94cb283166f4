"""Shared fixtures and independent oracles for the test suite.

The oracle helpers here deliberately avoid the package's solver stack: dense
numpy solves assembled straight from edge lists, and hand BFS over dict
adjacency.  Tests freeze expected values computed by these oracles.
"""

from __future__ import annotations

import numpy as np
import pytest

import harnacklab as hl


@pytest.fixture
def path5():
    """Path 0-1-2-3-4 with unit conductances."""
    return hl.build_graph([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)])


@pytest.fixture
def path5_region(path5):
    """Interior {1, 2, 3}, boundary {0, 4}."""
    return hl.ball(path5, 2, 2)


@pytest.fixture(scope="session")
def box3_small():
    """3-D lattice box [-8, 8]^3, unit conductances (4913 vertices)."""
    return hl.lattice_box(3, 8)


@pytest.fixture(scope="session")
def box24():
    """The acceptance-scale 3-D box [-24, 24]^3 (117649 vertices)."""
    return hl.lattice_box(3, 24)


def center_of(g):
    """Lattice boxes are lexicographically numbered, so the middle id is 0^d."""
    return g.n // 2


# -- independent oracles -----------------------------------------------------

def adjacency_from_edges(edges):
    adj: dict[int, dict[int, float]] = {}
    for u, v, c in edges:
        adj.setdefault(u, {})[v] = c
        adj.setdefault(v, {})[u] = c
    return adj


def bfs_distances(adj, source):
    dist = {source: 0}
    frontier = [source]
    while frontier:
        nxt = []
        for u in frontier:
            for v in adj[u]:
                if v not in dist:
                    dist[v] = dist[u] + 1
                    nxt.append(v)
        frontier = nxt
    return dist


def dense_dirichlet(edges, interior, data):
    """Dense direct solve of the Dirichlet problem, straight from the edge list."""
    adj = adjacency_from_edges(edges)
    interior = sorted(interior)
    loc = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    A = np.zeros((n, n))
    b = np.zeros(n)
    for v in interior:
        i = loc[v]
        for w, c in adj[v].items():
            A[i, i] += c
            if w in loc:
                A[i, loc[w]] -= c
            else:
                b[i] += c * data[w]
    sol = np.linalg.solve(A, b)
    return {v: sol[loc[v]] for v in interior}


def dense_green_matrix(edges, interior):
    """Dense (degree - adjacency)^{-1} over the interior, sorted order."""
    adj = adjacency_from_edges(edges)
    interior = sorted(interior)
    loc = {v: i for i, v in enumerate(interior)}
    n = len(interior)
    A = np.zeros((n, n))
    for v in interior:
        i = loc[v]
        for w, c in adj[v].items():
            A[i, i] += c
            if w in loc:
                A[i, loc[w]] -= c
    return interior, np.linalg.inv(A)


def random_connected_edges(rng, n, extra=4, conductance_band=(0.5, 2.0)):
    """Random connected graph: a random tree plus extra chords."""
    edges = set()
    order = rng.permutation(n)
    for k in range(1, n):
        u = int(order[k])
        v = int(order[rng.integers(0, k)])
        edges.add((min(u, v), max(u, v)))
    tries = 0
    while len(edges) < n - 1 + extra and tries < 50 * extra:
        u, v = int(rng.integers(0, n)), int(rng.integers(0, n))
        tries += 1
        if u != v:
            edges.add((min(u, v), max(u, v)))
    lo, hi = conductance_band
    return [(u, v, float(rng.uniform(lo, hi))) for u, v in sorted(edges)]


def three_sigma_retry(run, check):
    """Flaky-test budget: rerun once with a shifted seed, fail on the second."""
    first = run(0)
    if check(first):
        return first
    second = run(1)
    assert check(second), "statistical check failed twice in a row"
    return second
