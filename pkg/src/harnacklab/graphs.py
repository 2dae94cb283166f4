"""Weighted-graph data model: conductances, station weights, balls, volumes.

A :class:`WeightedGraph` is a finite connected graph with symmetric positive
edge conductances ``C_xy`` and station weights ``mu_x = sum_y C_xy``.  The
graph metric is the unweighted hop distance; balls use the strict inequality
``B(x, r) = {y : d(x, y) < r}``, so ``ball(x, 1)`` is ``{x}`` alone.

All structures are immutable after construction and every query is pure, so
they are safe to share across threads.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .errors import ValidationError

_HEADER_RE = re.compile(r"^graph v=(\d+) e=(\d+)$")


class WeightedGraph:
    """Immutable weighted graph in CSR layout.

    Vertices are the dense integers ``0 .. n-1``.  ``indptr``/``indices``/
    ``weights`` store the symmetric adjacency (each undirected edge appears
    in both directions), and ``mu`` caches the station weights.
    """

    __slots__ = ("n", "indptr", "indices", "weights", "mu", "_dist_cache",
                 "_matrix", "_solver_cache")

    def __init__(self, n, indptr, indices, weights):
        self.n = int(n)
        self.indptr = indptr
        self.indices = indices
        self.weights = weights
        mu = np.zeros(self.n)
        np.add.at(mu, np.repeat(np.arange(self.n), np.diff(indptr)), weights)
        self.mu = mu
        self._dist_cache: dict[int, np.ndarray] = {}
        self._matrix = None
        self._solver_cache: dict = {}

    # -- construction ------------------------------------------------------

    @staticmethod
    def from_arrays(us: np.ndarray, vs: np.ndarray, cs: np.ndarray, n: int) -> "WeightedGraph":
        """Build from parallel edge arrays (one entry per undirected edge).

        Trusted fast path used by the generators; no validation beyond what
        numpy enforces.  Use :func:`build_graph` for user-supplied lists.
        """
        heads = np.concatenate([us, vs])
        tails = np.concatenate([vs, us])
        ws = np.concatenate([cs, cs])
        order = np.lexsort((tails, heads))
        heads, tails, ws = heads[order], tails[order], ws[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, heads + 1, 1)
        np.cumsum(indptr, out=indptr)
        return WeightedGraph(n, indptr, tails.astype(np.int64), ws.astype(float))

    # -- basic queries -----------------------------------------------------

    def neighbors(self, x: int) -> np.ndarray:
        return self.indices[self.indptr[x]:self.indptr[x + 1]]

    def conductances(self, x: int) -> np.ndarray:
        return self.weights[self.indptr[x]:self.indptr[x + 1]]

    def conductance(self, x: int, y: int) -> float:
        """C_xy, or 0.0 when x and y are not adjacent."""
        nbrs = self.neighbors(x)
        hit = np.flatnonzero(nbrs == y)
        if hit.size == 0:
            return 0.0
        return float(self.conductances(x)[hit[0]])

    def degree(self, x: int) -> int:
        return int(self.indptr[x + 1] - self.indptr[x])

    def edges(self) -> list[tuple[int, int, float]]:
        """Canonical edge list, sorted, with u < v."""
        out = []
        for u in range(self.n):
            nbrs = self.neighbors(u)
            cs = self.conductances(u)
            for v, c in zip(nbrs, cs):
                if u < v:
                    out.append((u, int(v), float(c)))
        return out

    def matrix(self) -> sp.csr_matrix:
        """Symmetric conductance matrix W with W[x, y] = C_xy (cached)."""
        if self._matrix is None:
            counts = np.diff(self.indptr)
            rows = np.repeat(np.arange(self.n), counts)
            self._matrix = sp.csr_matrix(
                (self.weights, (rows, self.indices)), shape=(self.n, self.n))
        return self._matrix

    def distances(self, x: int) -> np.ndarray:
        """Hop distances from x to every vertex (cached per center)."""
        if x in self._dist_cache:
            return self._dist_cache[x]
        if not 0 <= x < self.n:
            raise ValidationError(f"vertex {x} not in graph of size {self.n}")
        dist = np.full(self.n, -1, dtype=np.int64)
        dist[x] = 0
        frontier = np.array([x], dtype=np.int64)
        d = 0
        while frontier.size:
            starts = self.indptr[frontier]
            counts = self.indptr[frontier + 1] - starts
            total = int(counts.sum())
            if total == 0:
                break
            ends = np.cumsum(counts)
            offsets = np.arange(total) - np.repeat(ends - counts, counts)
            nbrs = self.indices[np.repeat(starts, counts) + offsets]
            fresh = np.unique(nbrs[dist[nbrs] < 0])
            d += 1
            dist[fresh] = d
            frontier = fresh
        self._dist_cache[x] = dist
        return dist

    def eccentricity(self, x: int) -> int:
        return int(self.distances(x).max())

    def is_connected_subset(self, vertices) -> bool:
        """Whether the induced subgraph on `vertices` is connected."""
        vs = sorted(vertices)
        if not vs:
            return True
        inside = np.zeros(self.n, dtype=bool)
        inside[vs] = True
        seen = {vs[0]}
        stack = [vs[0]]
        while stack:
            u = stack.pop()
            for v in self.neighbors(u):
                v = int(v)
                if inside[v] and v not in seen:
                    seen.add(v)
                    stack.append(v)
        return len(seen) == len(vs)


@dataclass(frozen=True)
class Region:
    """A vertex subset split into interior and exterior boundary.

    The boundary is exactly the set of vertices outside the interior that are
    adjacent to it; every Dirichlet problem is posed on a Region.
    """

    interior: frozenset[int]
    boundary: frozenset[int]

    def __post_init__(self):
        if self.interior & self.boundary:
            raise ValidationError("region interior and boundary must be disjoint")

    @property
    def size(self) -> int:
        return len(self.interior)


@dataclass(frozen=True)
class ScaleRecord:
    """Per-(center, radius) row of volume, capacity, and scale quantities.

    ``capacity`` is the finite-truncation global proxy (outer ball as large as
    the graph admits, radius recorded in ``truncation_radius``);
    ``killed_capacity`` kills at ``kill_factor * radius``.  The scale entries
    satisfy E = V/C and E_killed = V/C_killed.
    """

    center: int
    radius: int
    volume: float
    capacity: float
    killed_capacity: float
    scale: float
    killed_scale: float
    truncation_radius: int = 0
    kill_factor: int = 8
    comparability_worst: float | None = None

    def __post_init__(self):
        if not (self.volume > 0 and self.capacity > 0 and self.killed_capacity > 0):
            raise ValidationError("scale record requires positive V, C, C_killed")
        if self.capacity > self.killed_capacity * (1 + 1e-9):
            raise ValidationError(
                "killed capacity may not be smaller than the global proxy")
        for name, got, want in (("scale", self.scale, self.volume / self.capacity),
                                ("killed_scale", self.killed_scale,
                                 self.volume / self.killed_capacity)):
            if not math.isclose(got, want, rel_tol=1e-9):
                raise ValidationError(f"{name} inconsistent with V and capacity")


@dataclass(frozen=True)
class AuditRow:
    """One radius of the regularity audit (doubling/growth ratios, covering)."""

    radius: int
    v_doubling: float
    c_growth: float
    e_growth: float
    covering_m: int
    volume_r: float = field(default=0.0, repr=False)
    volume_2r: float = field(default=0.0, repr=False)


def build_graph(edges, mu_cap: float | None = None) -> WeightedGraph:
    """Validate an edge list ``[(u, v, c), ...]`` and build the graph.

    Rejects self-loops, duplicate unordered pairs, non-positive conductances,
    non-dense vertex ids, and disconnected graphs.  ``mu_cap`` optionally
    enforces the uniform station-weight bound ``mu_x <= mu_cap``.
    """
    if not edges:
        raise ValidationError("empty edge list")
    seen = set()
    us, vs, cs = [], [], []
    for u, v, c in edges:
        u, v = int(u), int(v)
        if u == v:
            raise ValidationError(f"self-loop at vertex {u}")
        if u < 0 or v < 0:
            raise ValidationError("vertex ids must be non-negative")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise ValidationError(f"duplicate edge {key}")
        seen.add(key)
        c = float(c)
        if not (c > 0) or not math.isfinite(c):
            raise ValidationError(f"conductance for edge {key} must be positive, got {c}")
        us.append(key[0])
        vs.append(key[1])
        cs.append(c)
    n = max(max(us), max(vs)) + 1
    present = np.zeros(n, dtype=bool)
    present[us] = True
    present[vs] = True
    if not present.all():
        missing = int(np.flatnonzero(~present)[0])
        raise ValidationError(f"vertex ids must be dense integers; {missing} is missing")
    g = WeightedGraph.from_arrays(np.array(us), np.array(vs), np.array(cs), n)
    if (g.distances(0) < 0).any():
        raise ValidationError("graph is not connected")
    if mu_cap is not None and g.mu.max() > mu_cap:
        worst = int(g.mu.argmax())
        raise ValidationError(
            f"station weight {g.mu[worst]} at vertex {worst} exceeds cap {mu_cap}")
    return g


def region_from_set(g: WeightedGraph, interior) -> Region:
    """Region with the given interior and its exterior neighbors as boundary."""
    interior = frozenset(int(v) for v in interior)
    if not interior:
        raise ValidationError("region interior must be nonempty")
    for v in interior:
        if not 0 <= v < g.n:
            raise ValidationError(f"vertex {v} not in graph")
    boundary = set()
    for v in interior:
        for w in g.neighbors(v):
            w = int(w)
            if w not in interior:
                boundary.add(w)
    return Region(interior=interior, boundary=frozenset(boundary))


def ball(g: WeightedGraph, x: int, r: int) -> Region:
    """B(x, r) = {y : d(x, y) < r} as a Region; boundary is the r-sphere."""
    if r < 1:
        raise ValidationError(f"ball radius must be >= 1, got {r}")
    dist = g.distances(x)
    interior = frozenset(int(v) for v in np.flatnonzero(dist < r))
    boundary = frozenset(int(v) for v in np.flatnonzero(dist == r))
    return Region(interior=interior, boundary=boundary)


def volume(g: WeightedGraph, reg: Region) -> float:
    """mu-mass of the region interior."""
    if not reg.interior:
        raise ValidationError("volume of empty region")
    idx = np.fromiter(reg.interior, dtype=np.int64)
    if idx.min() < 0 or idx.max() >= g.n:
        raise ValidationError("region contains vertices outside the graph")
    return float(g.mu[idx].sum())


def _require_admissible_ball(g: WeightedGraph, x: int, r: int, what: str) -> Region:
    """Ball whose exterior boundary must be nonempty (fails loudly otherwise)."""
    reg = ball(g, x, r)
    if not reg.boundary:
        raise ValidationError(
            f"{what}: ball B({x}, {r}) escapes the finite graph (no exterior boundary)")
    return reg


def covering_number(g: WeightedGraph, x: int, r: int) -> int:
    """Greedy upper bound on covering the r-sphere by balls of radius ceil(r/8).

    Centers are chosen among the sphere vertices; classic greedy set cover
    (largest uncovered gain first, ties to the smallest id).
    """
    sphere = sorted(int(v) for v in np.flatnonzero(g.distances(x) == r))
    if not sphere:
        raise ValidationError(f"sphere of radius {r} around {x} is empty")
    rho = max(1, math.ceil(r / 8))
    cover_sets = {}
    sphere_set = set(sphere)
    for z in sphere:
        dist_z = _truncated_distances(g, z, rho - 1)
        cover_sets[z] = {v for v in dist_z if v in sphere_set}
    uncovered = set(sphere)
    count = 0
    while uncovered:
        best = min(sphere, key=lambda z: (-len(cover_sets[z] & uncovered), z))
        gained = cover_sets[best] & uncovered
        if not gained:
            # isolated leftover; cover it by itself
            best = min(uncovered)
            gained = {best}
        uncovered -= gained
        count += 1
    return count


def _truncated_distances(g: WeightedGraph, x: int, depth: int) -> dict[int, int]:
    """BFS distances from x up to `depth` hops, as a dict."""
    dist = {x: 0}
    frontier = [x]
    for d in range(1, depth + 1):
        nxt = []
        for u in frontier:
            for v in g.neighbors(u):
                v = int(v)
                if v not in dist:
                    dist[v] = d
                    nxt.append(v)
        frontier = nxt
    return dist


def audit_regularity(g: WeightedGraph, x: int, radii, kill_factor: int = 8) -> list[AuditRow]:
    """Volume-doubling / capacity-growth / scale-growth ratios and covering M.

    For each radius reports V(x,2r)/V(x,r), the killed-capacity growth
    C(x,r)/C(x,2r), the killed-scale growth E(x,r)/E(x,2r), and the greedy
    covering bound for the r-sphere.  Fails loudly, naming the radius, when a
    required ball has no exterior boundary left in the finite graph.
    """
    from .potential import killed_capacity

    rows = []
    for r in radii:
        r = int(r)
        if r < 1:
            raise ValidationError(f"audit radius must be >= 1, got {r}")
        _require_admissible_ball(g, x, 2 * r, f"audit r={r}")
        v_r = volume(g, ball(g, x, r))
        v_2r = volume(g, ball(g, x, 2 * r))
        ck_r = killed_capacity(g, x, r, kill_factor=kill_factor).capacity
        ck_2r = killed_capacity(g, x, 2 * r, kill_factor=kill_factor).capacity
        ek_r = v_r / ck_r
        ek_2r = v_2r / ck_2r
        rows.append(AuditRow(
            radius=r,
            v_doubling=v_2r / v_r,
            c_growth=ck_r / ck_2r,
            e_growth=ek_r / ek_2r,
            covering_m=covering_number(g, x, r),
            volume_r=v_r,
            volume_2r=v_2r,
        ))
    return rows


# -- edge-list text format -------------------------------------------------

def format_edgelist(g: WeightedGraph) -> str:
    """Canonical text serialization: header then one `u v c` line per edge."""
    lines = [f"graph v={g.n} e={len(g.edges())}"]
    for u, v, c in g.edges():
        lines.append(f"{u} {v} {c!r}")
    return "\n".join(lines) + "\n"


def parse_edgelist(text: str) -> WeightedGraph:
    """Parse the edge-list format, rejecting any deviation bit-exactly."""
    lines = text.splitlines()
    if not lines:
        raise ValidationError("line 1: missing header")
    m = _HEADER_RE.match(lines[0])
    if not m:
        raise ValidationError(f"line 1: malformed header {lines[0]!r}")
    n, e = int(m.group(1)), int(m.group(2))
    body = [ln for ln in lines[1:] if ln.strip()]
    if len(body) != e:
        raise ValidationError(
            f"line {len(lines)}: header declares e={e} edges, found {len(body)}")
    edges = []
    seen = set()
    for i, ln in enumerate(body, start=2):
        parts = ln.split()
        if len(parts) != 3:
            raise ValidationError(f"line {i}: expected 'u v c', got {ln!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ValidationError(f"line {i}: non-integer vertex id in {ln!r}") from None
        if not u < v:
            raise ValidationError(f"line {i}: requires u < v, got {u} {v}")
        if v >= n:
            raise ValidationError(f"line {i}: vertex {v} out of range for v={n}")
        if (u, v) in seen:
            raise ValidationError(f"line {i}: duplicate edge {u} {v}")
        seen.add((u, v))
        try:
            c = float(parts[2])
        except ValueError:
            raise ValidationError(f"line {i}: bad conductance {parts[2]!r}") from None
        if not math.isfinite(c) or c <= 0:
            raise ValidationError(f"line {i}: conductance must be positive, got {parts[2]}")
        edges.append((u, v, c))
    g = build_graph(edges)
    if g.n != n:
        raise ValidationError(f"header declares v={n} vertices, edge list spans {g.n}")
    return g


def read_edgelist(path) -> WeightedGraph:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_edgelist(fh.read())


def write_edgelist(g: WeightedGraph, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(format_edgelist(g))
