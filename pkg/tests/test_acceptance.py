"""Acceptance criteria, one test each.

Every test prints one ``PASS``/``FAIL criterion k`` line with the measured
quantities, then asserts.  Run with ``pytest -s tests/test_acceptance.py`` to
see the lines.
"""

import math
import time

import numpy as np
import pytest

from weylmeasure import (
    BasisTruncation, CurvePairDensity, Dirac, PhasePoint, Reflect, catalog_measure,
    circle_measure, curve_catalog, finite_type_order, greedy_spanning_points,
    hyperplane_containment, pairing_oracle, rho_matrix, tconv_weyl_direct, weyl_matrix,
)
from weylmeasure import verify
from weylmeasure.cli import main
from weylmeasure.geometry import EXCEEDS, uniform_samples
from weylmeasure.measures import CATALOG
from weylmeasure.twisted import bump_function, critical_set_area, grid_pairing
from weylmeasure.weyl import compactness_scan


def report(k, ok, msg, elapsed, limit):
    ok = bool(ok) and elapsed < limit
    print(f"{'PASS' if ok else 'FAIL'} criterion {k}: {msg} [{elapsed:.2f} s, limit {limit:g} s]")
    return ok


def test_criterion_1_identity_and_dirac(rng):
    t0 = time.perf_counter()
    exact = all(np.array_equal(weyl_matrix(Dirac(PhasePoint.origin(1)), BasisTruncation(1, N)).entries,
                               np.eye(N)) for N in (8, 64))
    err = 0.0
    for _ in range(5):
        p = PhasePoint.from_array(rng.uniform(-1, 1, 2))
        for N in (8, 64):
            trunc = BasisTruncation(1, N)
            W = weyl_matrix(Dirac(p), trunc).entries
            err = max(err, float(np.max(np.abs(W - rho_matrix(p, trunc).entries))))
    ok = report(1, exact and err <= 1e-12, f"identity exact={exact}, max Dirac entry error {err:.2e}",
                time.perf_counter() - t0, 1)
    assert ok


def test_criterion_2_unitarity_blocks():
    t0 = time.perf_counter()
    r = verify.unitarity_suite(1e-6)
    rows = "; ".join(f"{tuple(p['point'])}: " + ", ".join(f"{d:.1e}" for d in p["defects"])
                     for p in r.detail["points"])
    ok = report(2, r.passed, f"defects over N=64,128,256 {rows}", time.perf_counter() - t0, 30)
    assert ok


def test_criterion_3_group_law_blocks():
    t0 = time.perf_counter()
    r = verify.rho_group_law_suite(np.random.default_rng(3), 1e-5)
    ok = report(3, r.passed, f"max 16x16 block error {r.error:.2e} over 5 pairs at N=256",
                time.perf_counter() - t0, 60)
    assert ok


def test_criterion_4_tconv_homomorphism():
    t0 = time.perf_counter()
    circle = circle_measure()
    ellipse = catalog_measure("ellipse")
    parts, ok = [], True
    for name, (a, b) in {"circle-circle": (circle, circle), "circle-ellipse": (circle, ellipse)}.items():
        d = {}
        for N in (32, 64):
            trunc = BasisTruncation(1, N)
            D = tconv_weyl_direct([a, b], trunc).entries
            P = weyl_matrix(a, trunc).entries @ weyl_matrix(b, trunc).entries
            d[N] = float(np.linalg.norm((D - P)[:8, :8]))
        ok &= d[64] <= d[32] / 2 and d[64] <= 1e-3
        parts.append(f"{name} {d[32]:.2e} -> {d[64]:.2e}")
    ok = report(4, ok, "8x8 discrepancy N=32 -> 64: " + ", ".join(parts), time.perf_counter() - t0, 300)
    assert ok


def test_criterion_5_adjoint_catalog():
    t0 = time.perf_counter()
    r = verify.adjoint_suite(1e-10, N=64)
    worst = max(r.detail["errors"], key=r.detail["errors"].get)
    ok = report(5, r.passed and set(r.detail["errors"]) == set(CATALOG),
                f"max error {r.error:.2e} ({worst}) over {len(r.detail['errors'])} catalog charts",
                time.perf_counter() - t0, 60)
    assert ok


def test_criterion_6_compactness_contrast():
    t0 = time.perf_counter()
    N_list = [32, 64, 128, 256]
    circ = compactness_scan(circle_measure(), N_list, 8)
    seg = compactness_scan(catalog_measure("line_segment"), N_list, 8)
    c, s = circ.mid_ratios, seg.mid_ratios
    circle_ok = all(b < a for a, b in zip(c, c[1:])) and c[-1] < 1e-3
    segment_ok = all(v > 1e-1 for v in s)
    fmt = lambda v: ", ".join(f"{x:.3g}" for x in v)
    ok = report(6, circle_ok and segment_ok,
                f"sigma_mid/sigma_1 circle [{fmt(c)}] (need decreasing, < 1e-3), "
                f"segment [{fmt(s)}] (need all > 1e-1)", time.perf_counter() - t0, 300)
    assert ok


def test_criterion_7_density_duality():
    t0 = time.perf_counter()
    a = circle_measure()
    dens = CurvePairDensity(a.spec, a.spec)
    parts, ok = [], True
    for center in [(1.0, 0.0), (0.0, 1.0), (-0.7, 0.7)]:
        r = 0.45
        g = bump_function(center, r)
        lo = [c - r for c in center]
        hi = [c + r for c in center]
        gp = grid_pairing(dens, g, lo, hi, 40)
        ref = pairing_oracle(a, a, g)
        rel = abs(gp.value - ref) / abs(ref)
        ok &= rel <= 1e-3
        parts.append(f"{center}: rel {rel:.1e}, excluded {len(gp.excluded)}/{gp.cells}")
    ok = report(7, ok, "; ".join(parts), time.perf_counter() - t0, 120)
    assert ok


def test_criterion_8_geometry():
    t0 = time.perf_counter()
    circle, cubic, seg = (curve_catalog(n) for n in ("circle", "cubic_arc", "line_segment"))
    checks = {}
    checks["circle type 2"] = all(finite_type_order(circle, s) == 2 for s in uniform_samples(circle, 16))
    checks["cubic type 3 at 0"] = finite_type_order(cubic, 0.0) == 3
    checks["cubic type 2 elsewhere"] = all(finite_type_order(cubic, s) == 2
                                           for s in uniform_samples(cubic, 16) if s != 0)
    seg_s = uniform_samples(seg, 16)
    checks["segment exceeds"] = all(finite_type_order(seg, s) == EXCEEDS for s in seg_s)
    hp = hyperplane_containment(seg, seg_s)
    checks["segment normal (0,1)"] = hp is not None and np.allclose(hp.normal, [0, 1])
    gc = greedy_spanning_points(circle, uniform_samples(circle, 16))
    checks["circle spans with 2"] = gc.found and len(gc.params) == 2
    checks["segment fails to span"] = not greedy_spanning_points(seg, seg_s).found
    area = [x for _, x in critical_set_area(circle, circle)]
    ratios = [a / b for a, b in zip(area, area[1:])]
    checks["critical area shrinks >= 4x per halving"] = all(q >= 4 for q in ratios)
    failed = [k for k, v in checks.items() if not v]
    ok = report(8, not failed, f"critical area ratios {', '.join(f'{q:.2f}' for q in ratios)}; "
                f"failed: {failed or 'none'}", time.perf_counter() - t0, 10)
    assert ok


def test_criterion_9_phi_recursion():
    t0 = time.perf_counter()
    r = verify.phi_recursion_suite(np.random.default_rng(9), 1e-12)
    ok = report(9, r.passed, f"max error {r.error:.2e} over 1000 triples", time.perf_counter() - t0, 1)
    assert ok


def test_criterion_10_determinism(tmp_path):
    t0 = time.perf_counter()
    codes = [main(["verify", "--seed", "11", "--threads", str(th), "--out", str(tmp_path / str(th))])
             for th in (1, 4)]
    same = (tmp_path / "1" / "verify.json").read_bytes() == (tmp_path / "4" / "verify.json").read_bytes()
    ok = report(10, same, f"verify.json identical for threads 1 and 4: {same}; exit codes {codes}",
                time.perf_counter() - t0, math.inf)
    assert ok
