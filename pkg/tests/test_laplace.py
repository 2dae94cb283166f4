import numpy as np
import pytest

import harnacklab as hl
from harnacklab.errors import ValidationError

from conftest import dense_dirichlet, dense_green_matrix, random_connected_edges


class TestDirichletSolve:
    def test_path_linear_interpolation(self, path5, path5_region):
        sol = hl.dirichlet_solve(path5, path5_region, {0: 0.0, 4: 1.0})
        for v, want in enumerate([0.0, 0.25, 0.5, 0.75, 1.0]):
            assert sol.values[v] == pytest.approx(want, abs=1e-12)

    def test_triangle_symmetry(self):
        g = hl.build_graph([(0, 1, 1.0), (1, 2, 1.0), (0, 2, 1.0)])
        reg = hl.Region(interior=frozenset({2}), boundary=frozenset({0, 1}))
        sol = hl.dirichlet_solve(g, reg, {0: 0.0, 1: 1.0})
        assert sol.values[2] == pytest.approx(0.5, abs=1e-12)

    def test_constants_are_harmonic(self, path5, path5_region):
        sol = hl.dirichlet_solve(path5, path5_region, {0: 3.25, 4: 3.25})
        assert all(v == pytest.approx(3.25, abs=1e-12) for v in sol.values.values())
        assert sol.energy == pytest.approx(0.0, abs=1e-12)

    def test_missing_boundary_value_rejected(self, path5, path5_region):
        with pytest.raises(ValidationError, match="missing boundary"):
            hl.dirichlet_solve(path5, path5_region, {0: 0.0})

    def test_matches_dense_oracle_on_random_regions(self):
        rng = np.random.default_rng(7)
        for _ in range(10):
            n = int(rng.integers(12, 40))
            edges = random_connected_edges(rng, n, extra=6)
            g = hl.build_graph(edges)
            x = int(rng.integers(0, n))
            reg = hl.ball(g, x, 2)
            if not reg.boundary:
                continue
            data = {z: float(rng.uniform(-1, 1)) for z in reg.boundary}
            sol = hl.dirichlet_solve(g, reg, data)
            oracle = dense_dirichlet(edges, reg.interior, data)
            for v, want in oracle.items():
                assert sol.values[v] == pytest.approx(want, abs=1e-10)

    def test_maximum_principle(self, path5, path5_region):
        sol = hl.dirichlet_solve(path5, path5_region, {0: -2.0, 4: 5.0})
        assert min(sol.values.values()) >= -2.0 - 1e-12
        assert max(sol.values.values()) <= 5.0 + 1e-12


class TestGreenKernel:
    def test_path_closed_form(self, path5, path5_region):
        # tridiagonal inverse: G(i, j) = i (n - j) / n for i <= j, n = 4
        kern = hl.GreenKernel(path5, path5_region)
        for i in (1, 2, 3):
            for j in (1, 2, 3):
                want = min(i, j) * (4 - max(i, j)) / 4
                assert kern.entry(i, j) == pytest.approx(want, abs=1e-12)

    def test_spec_anchor_values(self, path5, path5_region):
        col1 = hl.green_killed(path5, path5_region, 1)
        col2 = hl.green_killed(path5, path5_region, 2)
        assert col1[2] == pytest.approx(0.5, abs=1e-12)
        assert col2[2] == pytest.approx(1.0, abs=1e-12)

    def test_symmetry(self, path5, path5_region):
        kern = hl.GreenKernel(path5, path5_region)
        assert kern.entry(1, 3) == pytest.approx(kern.entry(3, 1), abs=1e-12)

    def test_zero_outside_interior(self, path5, path5_region):
        kern = hl.GreenKernel(path5, path5_region)
        assert kern.entry(1, 0) == 0.0

    def test_matches_dense_inverse(self):
        rng = np.random.default_rng(3)
        edges = random_connected_edges(rng, 30, extra=8)
        g = hl.build_graph(edges)
        reg = hl.ball(g, 4, 3)
        if not reg.boundary:
            pytest.skip("ball swallowed the random graph")
        interior, G = dense_green_matrix(edges, reg.interior)
        kern = hl.GreenKernel(g, reg)
        x = interior[0]
        col = kern.column(x)
        for j, y in enumerate(interior):
            assert col[y] == pytest.approx(G[0, j], abs=1e-10)

    def test_composition_is_squared_operator(self):
        rng = np.random.default_rng(9)
        edges = random_connected_edges(rng, 60, extra=15)
        g = hl.build_graph(edges)
        reg = hl.ball(g, 0, 3)
        if not reg.boundary or len(reg.interior) < 3:
            pytest.skip("degenerate region")
        interior, G = dense_green_matrix(edges, reg.interior)
        G2 = G @ G
        kern = hl.GreenKernel(g, reg)
        x = interior[1]
        # apply the kernel twice: solve against the first column
        col = np.array([kern.column(x)[y] for y in interior])
        idx, _, A, _ = hl.laplace._dirichlet_parts(g, reg)
        twice = hl.laplace._dirichlet_system(g, reg).solve(col)
        want = G2[:, 1]
        assert np.abs(twice - want).max() < 1e-9


class TestHarmonicMeasure:
    def test_gambler_ruin(self, path5, path5_region):
        assert hl.harmonic_measure(path5, path5_region, 2)[4] == pytest.approx(0.5, abs=1e-12)
        assert hl.harmonic_measure(path5, path5_region, 1)[4] == pytest.approx(0.25, abs=1e-12)

    def test_cross_check_dense_solve(self, path5, path5_region):
        # indicator boundary data reproduces the kernel column
        oracle = dense_dirichlet(path5.edges(), path5_region.interior, {0: 0.0, 4: 1.0})
        km = hl.harmonic_measure(path5, path5_region, 1)
        assert km[4] == pytest.approx(oracle[1], abs=1e-12)

    def test_total_mass_one(self):
        rng = np.random.default_rng(21)
        g = hl.build_graph(random_connected_edges(rng, 50, extra=12))
        reg = hl.ball(g, 3, 3)
        if not reg.boundary:
            pytest.skip("ball swallowed the random graph")
        x = sorted(reg.interior)[0]
        total = sum(hl.harmonic_measure(g, reg, x).values())
        assert total == pytest.approx(1.0, abs=1e-12)

    def test_start_on_boundary_rejected(self, path5, path5_region):
        with pytest.raises(ValidationError):
            hl.harmonic_measure(path5, path5_region, 0)


class TestNeumannResolvent:
    def test_two_vertex_oracle(self):
        g = hl.build_graph([(0, 1, 1.0)])
        reg = hl.region_from_set(g, {0, 1})
        u = hl.neumann_resolvent(g, reg, 1.0, {0: 1.0, 1: 0.0})
        assert u[0] == pytest.approx(2 / 3, abs=1e-12)
        assert u[1] == pytest.approx(1 / 3, abs=1e-12)

    def test_conservation(self, box3_small):
        c = box3_small.n // 2
        reg = hl.ball(box3_small, c, 3)
        ones = {v: 1.0 for v in reg.interior}
        for alpha in (0.1, 1.0, 10.0):
            u = hl.neumann_resolvent(box3_small, reg, alpha, ones)
            assert max(abs(alpha * val - 1.0) for val in u.values()) < 1e-12

    def test_large_alpha_limit(self, box3_small):
        c = box3_small.n // 2
        reg = hl.ball(box3_small, c, 3)
        idx = np.array(sorted(reg.interior))
        f = np.cos(idx / 50.0)
        alpha = 1e6
        u = hl.neumann_resolvent(box3_small, reg, alpha, f)
        assert np.abs(alpha * u - f).max() <= 1e-5 * np.abs(f).max()

    def test_symmetry_in_counting_inner_product(self, path5):
        reg = hl.ball(path5, 2, 2)
        rng = np.random.default_rng(0)
        f = rng.standard_normal(3)
        h = rng.standard_normal(3)
        gf = hl.neumann_resolvent(path5, reg, 0.7, f)
        gh = hl.neumann_resolvent(path5, reg, 0.7, h)
        assert np.dot(gf, h) == pytest.approx(np.dot(f, gh), rel=1e-12)

    def test_alpha_nonpositive_rejected(self, path5):
        reg = hl.ball(path5, 2, 2)
        with pytest.raises(ValidationError):
            hl.neumann_resolvent(path5, reg, 0.0, {v: 1.0 for v in reg.interior})

    def test_spectral_contraction(self, box3_small):
        # ||f||^2 - ||alpha G f||^2 <= (2/alpha) E_Neu(f, f), the resolvent
        # contraction that drives the adjusted Poincare inequality
        c = box3_small.n // 2
        reg = hl.ball(box3_small, c, 4)
        rng = np.random.default_rng(4)
        size = len(reg.interior)
        for alpha in (0.1, 1.0, 10.0):
            for _ in range(10):
                f = rng.standard_normal(size)
                u = hl.neumann_resolvent(box3_small, reg, alpha, f)
                lhs = f @ f - (alpha * u) @ (alpha * u)
                rhs = (2 / alpha) * hl.neumann_energy(box3_small, reg, f)
                assert lhs <= rhs + 1e-9


def test_mean_exit_time_path(path5, path5_region):
    assert hl.mean_exit_time(path5, path5_region, 2) == pytest.approx(2.0, abs=1e-12)


def test_restricted_energy_counts_inside_edges_only(path5):
    vals = {0: 0.0, 1: 1.0, 2: 3.0}
    # edges (0,1) and (1,2) inside the support: (1)^2 + (2)^2 = 5
    assert hl.restricted_energy(path5, vals) == pytest.approx(5.0, abs=1e-12)
    # restricting to {0, 1} drops the second edge
    assert hl.restricted_energy(path5, vals, subset={0, 1}) == pytest.approx(1.0, abs=1e-12)
