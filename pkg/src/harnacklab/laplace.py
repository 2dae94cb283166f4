"""Dirichlet problems, killed Green operators, harmonic measure, resolvents.

The generator convention is L f(x) = sum_y C_xy (f(y) - f(x)): the chain
waits an Exp(mu_x) holding time and jumps to y with probability C_xy / mu_x.
Because the conductances are symmetric, L is self-adjoint with respect to
counting measure, so killed Green kernels are stored as expected time at a
vertex and are symmetric without mu-weighting.  Every mu-weighted quantity
(volumes, Poincare mass terms) applies mu explicitly at the call site.

Solves use a sparse direct factorization up to a configured size and
Jacobi-preconditioned conjugate gradients above it; the relative residual is
checked after every solve and surfaced on the returned objects.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NumericalError, ValidationError
from .graphs import Region, WeightedGraph

#: size above which Dirichlet systems switch from sparse LU to CG
DIRECT_LIMIT = 25_000
#: relative residual target for every linear solve
SOLVE_TOL = 1e-12
_CACHE_SLOTS = 6


@dataclass(frozen=True)
class Potential:
    """A vertex function together with its Dirichlet energy over its support.

    The energy is (1/2) sum over stored pairs x ~ y of (f(y)-f(x))^2 C_xy,
    i.e. the form restricted to edges with both endpoints in `values`.
    """

    values: dict[int, float]
    energy: float
    residual: float | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.energy < -1e-12:
            raise NumericalError(f"negative Dirichlet energy {self.energy}")

    def __getitem__(self, v: int) -> float:
        return self.values[v]


class _LinearSystem:
    """Factorized (or CG-backed) SPD system over a region interior."""

    def __init__(self, matrix: sp.csr_matrix, name: str):
        self.matrix = matrix
        self.name = name
        self.n = matrix.shape[0]
        self.last_residual = 0.0
        if self.n <= DIRECT_LIMIT:
            self._lu = spla.splu(matrix.tocsc())
            self._jacobi = None
        else:
            self._lu = None
            d = matrix.diagonal()
            if (d <= 0).any():
                raise NumericalError(f"{name}: non-positive diagonal in SPD system")
            inv = 1.0 / d
            self._jacobi = spla.LinearOperator(matrix.shape, matvec=lambda x: inv * x)

    def solve(self, b: np.ndarray) -> np.ndarray:
        if self._lu is not None:
            x = self._lu.solve(b)
        else:
            x, info = spla.cg(self.matrix, b, rtol=SOLVE_TOL, atol=0.0,
                              maxiter=20 * int(np.sqrt(self.n)) + 2000, M=self._jacobi)
            if info != 0:
                raise NumericalError(f"{self.name}: CG did not converge (info={info})")
        scale = float(np.abs(b).max()) or 1.0
        self.last_residual = float(np.abs(self.matrix @ x - b).max()) / scale
        if self.last_residual > 1e-8:
            raise NumericalError(
                f"{self.name}: residual {self.last_residual:.3e} above tolerance")
        return x

    def solve_many(self, bs: np.ndarray) -> np.ndarray:
        """Solve for each column of `bs`."""
        if self._lu is not None:
            out = self._lu.solve(np.asarray(bs))
            scale = float(np.abs(bs).max()) or 1.0
            self.last_residual = float(np.abs(self.matrix @ out - bs).max()) / scale
            if self.last_residual > 1e-8:
                raise NumericalError(f"{self.name}: residual above tolerance")
            return out
        cols = [self.solve(bs[:, j]) for j in range(bs.shape[1])]
        return np.stack(cols, axis=1)


def _sorted_array(vertices) -> np.ndarray:
    return np.fromiter(sorted(vertices), dtype=np.int64, count=len(vertices))


def _cached(g: WeightedGraph, key, build):
    cache = g._solver_cache
    if key not in cache:
        if len(cache) >= _CACHE_SLOTS:
            cache.pop(next(iter(cache)))
        cache[key] = build()
    return cache[key]


def _dirichlet_parts(g: WeightedGraph, reg: Region):
    """(interior idx, boundary idx, A = diag(mu) - W_II, W_IB), cached."""
    def build():
        idx = _sorted_array(reg.interior)
        bidx = _sorted_array(reg.boundary)
        W = g.matrix()
        rows = W[idx]
        A = sp.diags(g.mu[idx]) - rows[:, idx]
        W_ib = rows[:, bidx] if bidx.size else sp.csr_matrix((idx.size, 0))
        return idx, bidx, A.tocsr(), W_ib.tocsr()
    return _cached(g, ("parts", reg.interior), build)


def _dirichlet_system(g: WeightedGraph, reg: Region) -> _LinearSystem:
    idx, _, A, _ = _dirichlet_parts(g, reg)
    return _cached(g, ("dirichlet", reg.interior),
                   lambda: _LinearSystem(A, f"dirichlet[{idx.size}]"))


def _check_region(g: WeightedGraph, reg: Region, op: str):
    if not reg.interior:
        raise ValidationError(f"{op}: region interior is empty")
    if not reg.boundary:
        raise ValidationError(f"{op}: region has empty boundary, no exit possible")


def restricted_energy(g: WeightedGraph, values, subset=None) -> float:
    """(1/2) sum_{x,y in subset} (f(y)-f(x))^2 C_xy, the form restricted to a set.

    `values` maps vertices to reals; `subset` defaults to its support.  Edges
    with an endpoint outside the subset do not contribute.
    """
    if subset is None:
        subset = values.keys()
    idx = _sorted_array(subset)
    if idx.size == 0:
        return 0.0
    vals = np.array([values[int(v)] for v in idx])
    return _energy_indexed(g, idx, vals)


def _energy_indexed(g: WeightedGraph, idx: np.ndarray, vals: np.ndarray) -> float:
    # the COO submatrix carries both orientations of every unordered edge
    sub = g.matrix()[idx][:, idx].tocoo()
    diff = vals[sub.row] - vals[sub.col]
    return float((sub.data * diff * diff).sum() / 2.0)


def dirichlet_solve(g: WeightedGraph, reg: Region, boundary_data: dict) -> Potential:
    """Solve L h = 0 on the interior with the given boundary values.

    Every boundary vertex must carry a value; extra keys are ignored.  The
    maximum principle is asserted on the result.
    """
    _check_region(g, reg, "dirichlet_solve")
    missing = [z for z in reg.boundary if z not in boundary_data]
    if missing:
        raise ValidationError(
            f"dirichlet_solve: missing boundary value at vertex {min(missing)}")
    idx, bidx, _, W_ib = _dirichlet_parts(g, reg)
    b = np.array([float(boundary_data[int(z)]) for z in bidx])
    system = _dirichlet_system(g, reg)
    h = system.solve(W_ib @ b)

    lo, hi = float(b.min()), float(b.max())
    span = max(hi - lo, abs(hi), 1.0)
    if h.size and (h.min() < lo - 1e-8 * span or h.max() > hi + 1e-8 * span):
        raise NumericalError("dirichlet_solve: maximum principle violated")

    values = {int(v): float(x) for v, x in zip(idx, h)}
    values.update({int(z): float(x) for z, x in zip(bidx, b)})
    support = np.concatenate([idx, bidx])
    order = np.argsort(support)
    support = support[order]
    vals = np.concatenate([h, b])[order]
    energy = _energy_indexed(g, support, vals)
    return Potential(values=values, energy=energy, residual=system.last_residual)


class GreenKernel:
    """Killed Green operator G_D for a region: expected time at y started at x.

    Columns are computed on demand and cached; entries vanish when either
    argument lies outside the interior, and G_D(x, y) = G_D(y, x) by
    self-adjointness with respect to counting measure.
    """

    def __init__(self, g: WeightedGraph, domain: Region):
        _check_region(g, domain, "green kernel")
        self.g = g
        self.domain = domain
        self._idx, _, _, _ = _dirichlet_parts(g, domain)
        self._loc = {int(v): i for i, v in enumerate(self._idx)}
        self._system = _dirichlet_system(g, domain)
        self._columns: dict[int, np.ndarray] = {}
        self.last_residual = None

    def column_array(self, x: int) -> np.ndarray:
        if x not in self._loc:
            raise ValidationError(f"green kernel: vertex {x} not in domain interior")
        if x not in self._columns:
            e = np.zeros(self._idx.size)
            e[self._loc[x]] = 1.0
            self._columns[x] = self._system.solve(e)
            self.last_residual = self._system.last_residual
        return self._columns[x]

    def column(self, x: int) -> dict[int, float]:
        col = self.column_array(x)
        return {int(v): float(t) for v, t in zip(self._idx, col)}

    def entry(self, x: int, y: int) -> float:
        if y not in self._loc:
            return 0.0
        return float(self.column_array(x)[self._loc[y]])

    def interior_index(self) -> np.ndarray:
        return self._idx


def green_killed(g: WeightedGraph, reg: Region, x: int) -> dict[int, float]:
    """One column of the killed Green kernel: y -> expected time at y from x."""
    return GreenKernel(g, reg).column(x)


def harmonic_measure(g: WeightedGraph, reg: Region, x: int) -> dict[int, float]:
    """Exit distribution K(x, z) over the boundary of the region.

    Computed from the Green column through K(x, z) = sum_y G(x, y) C_yz; the
    total mass is checked against 1.
    """
    _check_region(g, reg, "harmonic_measure")
    if x not in reg.interior:
        raise ValidationError(f"harmonic_measure: start {x} must be interior")
    kern = GreenKernel(g, reg)
    col = kern.column_array(x)
    _, bidx, _, W_ib = _dirichlet_parts(g, reg)
    probs = W_ib.T @ col
    total = float(probs.sum())
    if abs(total - 1.0) > 1e-9:
        raise NumericalError(f"harmonic_measure: total mass {total} is not 1")
    return {int(z): float(p) for z, p in zip(bidx, probs)}


def exit_kernel(g: WeightedGraph, reg: Region):
    """Full exit kernel K[i, j] = P^x_i(exit at z_j) over sorted interior/boundary.

    Equivalent to one Dirichlet solve per boundary vertex with indicator data.
    Returns (interior ids, boundary ids, K).
    """
    _check_region(g, reg, "exit_kernel")
    idx, bidx, _, W_ib = _dirichlet_parts(g, reg)
    system = _dirichlet_system(g, reg)
    K = system.solve_many(W_ib.toarray())
    return idx, bidx, K


def mean_exit_time(g: WeightedGraph, reg: Region, x: int) -> float:
    """Expected time to leave the region from x (solves L u = -1)."""
    _check_region(g, reg, "mean_exit_time")
    if x not in reg.interior:
        raise ValidationError(f"mean_exit_time: start {x} must be interior")
    idx, _, _, _ = _dirichlet_parts(g, reg)
    system = _dirichlet_system(g, reg)
    u = system.solve(np.ones(idx.size))
    return float(u[np.searchsorted(idx, x)])


def _neumann_matrix(g: WeightedGraph, reg: Region):
    """PSD matrix of the form restricted to interior-interior edges."""
    def build():
        idx = _sorted_array(reg.interior)
        W_ii = g.matrix()[idx][:, idx]
        deg = np.asarray(W_ii.sum(axis=1)).ravel()
        return idx, (sp.diags(deg) - W_ii).tocsr()
    return _cached(g, ("neumann", reg.interior), build)


def neumann_resolvent(g: WeightedGraph, reg: Region, alpha: float, f):
    """u = (alpha - L_Neu)^{-1} f for the edge-deleted Neumann restriction.

    Only edges with both endpoints inside the region survive; the operator is
    conservative (alpha * u = 1 when f = 1) and symmetric in the counting
    inner product.  `f` may be a dict over the interior or an array aligned
    with the sorted interior; the result matches the input kind.
    """
    if not alpha > 0:
        raise ValidationError(f"neumann_resolvent: alpha must be > 0, got {alpha}")
    if not reg.interior:
        raise ValidationError("neumann_resolvent: empty region")
    idx, A = _neumann_matrix(g, reg)
    if isinstance(f, dict):
        fv = np.array([float(f[int(v)]) for v in idx])
    else:
        fv = np.asarray(f, dtype=float)
        if fv.shape != (idx.size,):
            raise ValidationError("neumann_resolvent: array f must match interior size")
    system = _cached(g, ("neumann-sys", reg.interior, float(alpha)),
                     lambda: _LinearSystem((A + alpha * sp.identity(idx.size)).tocsr(),
                                           f"neumann[{idx.size}]"))
    u = system.solve(fv)
    if isinstance(f, dict):
        return {int(v): float(x) for v, x in zip(idx, u)}
    return u


def neumann_energy(g: WeightedGraph, reg: Region, f) -> float:
    """Dirichlet energy of the Neumann-restricted form (interior-interior edges)."""
    idx, A = _neumann_matrix(g, reg)
    if isinstance(f, dict):
        fv = np.array([float(f[int(v)]) for v in idx])
    else:
        fv = np.asarray(f, dtype=float)
    return float(fv @ (A @ fv))


def killed_resolvent_column(g: WeightedGraph, reg: Region, alpha: float, x: int) -> dict[int, float]:
    """Column of the killed alpha-resolvent (alpha + mu - C)^{-1} at x."""
    if not alpha > 0:
        raise ValidationError(f"killed resolvent: alpha must be > 0, got {alpha}")
    _check_region(g, reg, "killed resolvent")
    if x not in reg.interior:
        raise ValidationError(f"killed resolvent: vertex {x} must be interior")
    idx, _, A, _ = _dirichlet_parts(g, reg)
    system = _cached(g, ("killed-resolvent", reg.interior, float(alpha)),
                     lambda: _LinearSystem((A + alpha * sp.identity(idx.size)).tocsr(),
                                           f"resolvent[{idx.size}]"))
    e = np.zeros(idx.size)
    e[np.searchsorted(idx, x)] = 1.0
    u = system.solve(e)
    return {int(v): float(t) for v, t in zip(idx, u)}
