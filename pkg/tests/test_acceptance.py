"""Acceptance suite: one test per criterion, each printing a PASS line.

Run with `pytest tests/test_acceptance.py -v -s`.  Quantities computed on the
[-24, 24]^3 box are regression-pinned (rel 1e-6) from the first computation;
the wide analytic bands absorb truncation boundary effects.
"""

import time

import numpy as np
import pytest

import harnacklab as hl
from harnacklab.inequalities import default_probes

from conftest import (dense_dirichlet, random_connected_edges,
                      three_sigma_retry)

CENTER_PIN = {
    # (V, C_killed) on the L = 24 box at its center
    2: (42.0, 12.764673453610005),
    3: (150.0, 22.488214155693456),
    4: (378.0, 32.5569445096739),
    6: (1386.0, 51.47927687049825),
    8: (3450.0, 48.42473450771823),
}
CERT_PINS = {
    "PE-P1": (0.7138891945792462, 3.756028803902395),
    "PE-P3": (0.2173201327524208, 0.24302271411755555),
    "EiA-P3": (0.381487193672758, 7.973481524753724),
}
COI_KAPPA4_PIN = 1.040098934603733
STABILITY_H_SPREAD_PIN = 2.149821454159084


@pytest.fixture(scope="module")
def box_center(box24):
    return box24.n // 2


def test_criterion_1_solver_oracle_equivalence():
    start = time.time()
    rng = np.random.default_rng(20240501)
    tested = 0
    while tested < 50:
        n = int(rng.integers(30, 260))
        edges = random_connected_edges(rng, n, extra=int(rng.integers(3, 20)))
        g = hl.build_graph(edges)
        x = int(rng.integers(0, n))
        reg = hl.ball(g, x, int(rng.integers(2, 5)))
        if not reg.boundary or len(reg.interior) > 200:
            continue
        data = {z: float(rng.uniform(-2, 2)) for z in reg.boundary}
        sol = hl.dirichlet_solve(g, reg, data)
        oracle = dense_dirichlet(edges, reg.interior, data)
        worst = max(abs(sol.values[v] - want) for v, want in oracle.items())
        assert worst < 1e-10, f"region {tested}: max-abs {worst}"
        tested += 1
    elapsed = time.time() - start
    assert elapsed < 10
    print(f"\nACCEPTANCE 1: PASS - 50 random regions match dense solves "
          f"to 1e-10 ({elapsed:.1f}s)")


def test_criterion_2_one_dimensional_anchors(path5, path5_region):
    start = time.time()
    kern = hl.GreenKernel(path5, path5_region)
    assert abs(kern.entry(1, 2) - 0.5) < 1e-10
    assert abs(kern.entry(2, 2) - 1.0) < 1e-10
    assert abs(hl.harmonic_measure(path5, path5_region, 1)[4] - 0.25) < 1e-10
    assert abs(hl.mean_exit_time(path5, path5_region, 2) - 2.0) < 1e-10

    def run(shift):
        return hl.simulate_exit(path5, path5_region, 2, 100_000, seed=424 + shift)

    def check(s):
        return (abs(s.exit_freq[4] - 0.5) <= 3 * s.exit_se[4]
                and abs(s.mean_exit_time - 2.0) <= 3 * s.exit_time_se)

    sample = three_sigma_retry(run, check)
    elapsed = time.time() - start
    assert elapsed < 5
    print(f"\nACCEPTANCE 2: PASS - exact 1-D anchors to 1e-10; Monte Carlo "
          f"n=1e5 within 3 s.e. (exit {sample.exit_freq[4]:.4f}, "
          f"mean {sample.mean_exit_time:.4f}) ({elapsed:.1f}s)")


def test_criterion_3_harnack_exactness(path5, path5_region):
    start = time.time()
    rep = hl.harnack_constant(path5, path5_region, {1, 2, 3})
    assert abs(rep.constant - 3.0) < 1e-9

    kms = {x: hl.harmonic_measure(path5, path5_region, x) for x in (1, 2, 3)}
    rng = np.random.default_rng(3)
    for _ in range(1000):
        a, b = rng.uniform(0, 1, 2)
        if a + b <= 0:
            continue
        h = {x: a * kms[x][0] + b * kms[x][4] for x in (1, 2, 3)}
        assert max(h.values()) / min(h.values()) <= rep.constant + 1e-9

    x_w, y_w, z_w = rep.witness
    attained = kms[x_w][z_w] / kms[y_w][z_w]
    assert abs(attained - rep.constant) < 1e-9
    elapsed = time.time() - start
    assert elapsed < 5
    print(f"\nACCEPTANCE 3: PASS - H = 3 exactly, 1000 random data dominated, "
          f"witness {rep.witness} attains it ({elapsed:.1f}s)")


def test_criterion_4_scaling_bands(box24, box_center):
    start = time.time()
    box_scale_values = {}
    for r in (2, 3, 4, 6, 8):
        v = hl.volume(box24, hl.ball(box24, box_center, r))
        ck = hl.killed_capacity(box24, box_center, r).capacity
        box_scale_values[r] = (v, ck)
    for r, (v, ck) in box_scale_values.items():
        v_pin, ck_pin = CENTER_PIN[r]
        assert v == v_pin
        assert ck == pytest.approx(ck_pin, rel=1e-6), f"r={r} capacity drifted"
    ek = {r: v / ck for r, (v, ck) in box_scale_values.items()}
    ratio_e2 = ek[4] / ek[2]
    assert 2.0 <= ratio_e2 <= 8.0
    for r in (2, 3, 4):
        ratio_c = box_scale_values[2 * r][1] / box_scale_values[r][1]
        assert 1.2 <= ratio_c <= 4.0, f"capacity growth at r={r}: {ratio_c}"
    elapsed = time.time() - start
    assert elapsed < 120
    print(f"\nACCEPTANCE 4: PASS - E_killed(x,4)/E_killed(x,2) = {ratio_e2:.3f} "
          f"in [2, 8]; killed-capacity growth in [1.2, 4] at r = 2, 3, 4 "
          f"({elapsed:.1f}s)")


def test_criterion_5_estimate_certificates(box24, box_center):
    start = time.time()
    box_certificates = {ct.tag: ct
                        for ct in hl.certify(box24, box_center, [2, 3, 4], seed=0)}
    pe1 = box_certificates["PE-P1"]
    assert pe1.samples == 50
    assert pe1.band_max / pe1.band_min <= 50
    pe3 = box_certificates["PE-P3"]
    assert pe3.band_max / pe3.band_min <= 10
    p3 = box_certificates["EiA-P3"]
    assert p3.band_min > 0
    for tag, (lo, hi) in CERT_PINS.items():
        ct = box_certificates[tag]
        assert ct.band_min == pytest.approx(lo, rel=1e-6), f"{tag} band drifted"
        assert ct.band_max == pytest.approx(hi, rel=1e-6), f"{tag} band drifted"
    elapsed = time.time() - start
    assert elapsed < 180
    print(f"\nACCEPTANCE 5: PASS - PE-P1 spread "
          f"{pe1.band_max / pe1.band_min:.2f} <= 50, PE-P3 spread "
          f"{pe3.band_max / pe3.band_min:.2f} <= 10, EiA-P3 min "
          f"{p3.band_min:.4f} > 0, bands pinned ({elapsed:.1f}s)")


def test_criterion_6_spectral_inequality():
    start = time.time()
    g = hl.path_graph(201)
    reg = hl.region_from_set(g, set(range(1, 201)))
    assert len(reg.interior) == 200
    rng = np.random.default_rng(66)
    ones = np.ones(200)
    for alpha in (0.1, 1.0, 10.0):
        u1 = hl.neumann_resolvent(g, reg, alpha, ones)
        assert np.abs(alpha * u1 - 1.0).max() < 1e-12
        for _ in range(100):
            f = rng.standard_normal(200)
            u = hl.neumann_resolvent(g, reg, alpha, f)
            lhs = f @ f - (alpha * u) @ (alpha * u)
            rhs = (2 / alpha) * hl.neumann_energy(g, reg, f)
            assert lhs <= rhs + 1e-9
    elapsed = time.time() - start
    assert elapsed < 10
    print(f"\nACCEPTANCE 6: PASS - resolvent contraction and conservation for "
          f"300 (f, alpha) pairs on a 200-vertex region ({elapsed:.1f}s)")


def test_criterion_7_poincare_anchors(box3_small):
    start = time.time()
    g2 = hl.build_graph([(0, 1, 1.0)])
    res = hl.poincare_constant(g2, 0, 2, kappa2=1.0)
    assert abs(res.lambda_max - 0.5) < 1e-9

    rng = np.random.default_rng(17)
    checked = 0
    while checked < 10:
        n = int(rng.integers(20, 70))
        g = hl.build_graph(random_connected_edges(rng, n, extra=8))
        x = int(rng.integers(0, n))
        if len(hl.ball(g, x, 2).interior) < 2:
            continue
        vals = [hl.poincare_constant(g, x, 2, kappa2=k2, e_scale=1.0).lambda_max
                for k2 in (1.0, 1.5, 2.0, 3.0)]
        assert all(vals[i] >= vals[i + 1] - 1e-9 for i in range(3))
        checked += 1

    c = box3_small.n // 2
    base = hl.poincare_constant(box3_small, c, 2)
    scaled_g = hl.build_graph([(u, v, 2.5 * k) for u, v, k in box3_small.edges()])
    scaled = hl.poincare_constant(scaled_g, c, 2)
    assert scaled.lambda_max == pytest.approx(base.lambda_max, rel=1e-9)
    assert scaled.kappa1 == pytest.approx(base.kappa1, rel=1e-9)
    elapsed = time.time() - start
    assert elapsed < 30
    print(f"\nACCEPTANCE 7: PASS - two-vertex lambda_max = 1/2, kappa2-monotone "
          f"on 10 instances, kappa1 scale-invariant to 1e-9 ({elapsed:.1f}s)")


def test_criterion_8_cutoff_inequality(box24, box_center):
    start = time.time()
    R = 16
    phi = hl.build_cutoff(box24, box_center, R, kind="linear")
    assert (phi.kappa3, phi.theta) == (2.0, 1.0)
    arr = phi.as_array(box24.n)
    dist = box24.distances(box_center)
    support = np.flatnonzero(dist <= R + 1)
    bound = phi.kappa3 / R
    for u in support:
        u = int(u)
        for v in box24.neighbors(u):
            assert abs(arr[u] - arr[int(v)]) <= bound + 1e-15

    probes = default_probes(box24, box_center, R, [2, 4])
    res = hl.coi_check(box24, phi, probes, seed=0)
    assert np.isfinite(res.kappa4) and res.kappa4 > 0
    assert res.kappa4 == pytest.approx(COI_KAPPA4_PIN, rel=1e-6)
    elapsed = time.time() - start
    assert elapsed < 60
    print(f"\nACCEPTANCE 8: PASS - linear cutoff edge-exact with (2, 1); "
          f"kappa4 = {res.kappa4:.6f} pinned ({elapsed:.1f}s)")


def test_criterion_9_cable_invariance():
    start = time.time()
    rng = np.random.default_rng(909)
    tested = 0
    while tested < 10:
        n = int(rng.integers(18, 45))
        g = hl.build_graph(random_connected_edges(rng, n, extra=6))
        x = int(rng.integers(0, n))
        reg = hl.ball(g, x, 3)
        if not reg.boundary or len(reg.interior) < 3:
            continue
        inner = hl.ball(g, x, 2).interior
        data = {z: float(rng.uniform(0.1, 1)) for z in reg.boundary}
        base_sol = hl.dirichlet_solve(g, reg, data)
        base_cap = hl.capacity(g, inner, reg).capacity
        base_h = hl.harnack_constant(g, reg, inner).constant
        for k in (2, 3, 5):
            sub = hl.subdivide(g, k)
            lifted = hl.lift_region(g, sub, reg)
            sol = hl.dirichlet_solve(sub.graph, lifted, data)
            assert all(abs(sol.values[v] - base_sol.values[v]) < 1e-10
                       for v in reg.interior)
            cap = hl.capacity(sub.graph, inner, lifted).capacity
            assert abs(cap - base_cap) < 1e-10
            h = hl.harnack_constant(sub.graph, lifted, inner).constant
            assert abs(h - base_h) < 1e-10
        tested += 1
    elapsed = time.time() - start
    assert elapsed < 60
    print(f"\nACCEPTANCE 9: PASS - harmonic values, capacities, and Harnack "
          f"constants invariant under k = 2, 3, 5 subdivision on 10 instances "
          f"({elapsed:.1f}s)")


def test_criterion_10_stability(box24, box_center):
    start = time.time()
    rep = hl.run_stability(box24, box_center, [2, 3, 4], 2.0, 20, seed=0)
    assert rep.bands_ok
    lam = rep.ratio_bound
    for row in rep.perturbations:
        for r, ratio in row.ratios["killed_capacity"].items():
            assert 0.5 - 1e-9 <= ratio <= 2.0 + 1e-9
        for r, ratio in row.ratios["volume"].items():
            assert 0.5 - 1e-9 <= ratio <= 2.0 + 1e-9
        for r, ratio in row.ratios["killed_scale"].items():
            assert 0.25 - 1e-9 <= ratio <= 4.0 + 1e-9
        for r, ratio in row.ratios["kappa1"].items():
            assert ratio <= 16.0 + 1e-9
    worst_h = max(max(row.worst["h_ball"], row.worst["h_annulus"])
                  for row in rep.perturbations)
    assert np.isfinite(worst_h)
    assert worst_h == pytest.approx(STABILITY_H_SPREAD_PIN, rel=1e-6)
    elapsed = time.time() - start
    assert elapsed < 300
    print(f"\nACCEPTANCE 10: PASS - 20 perturbations hold the exact bands "
          f"(C, V, E, kappa1 <= lambda^4); worst Harnack spread "
          f"{worst_h:.4f} pinned per seed ({elapsed:.1f}s)")
