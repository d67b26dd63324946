import math

import numpy as np
import pytest

from weylmeasure import (
    CurvePairDensity, Dirac, NearCriticalError, PhaseChain, Reflect, TConv, catalog_measure,
    circle_measure, critical_set_area, curve_catalog, pairing_oracle, phase_phi_k, rho_matrix,
    symplectic_phase, tconv_density, tconv_weyl_direct, total_mass, weyl_matrix,
)
from weylmeasure.errors import BudgetExceededError, ConfigError
from weylmeasure.measures import BumpDensity, reflect_measure
from weylmeasure.twisted import (
    bump_function, density_sweep, grid_pairing, phase_phi_k_array, product_cloud,
)
from conftest import pp, trunc1

# closed form at z = (1, 0) for two unit circles: roots s = -t = +-pi/3, |det| = sqrt(3)/2,
# phases exp(-+ i pi sqrt(3)/2)
TWO_CIRCLES_AT_1_0 = 4 / math.sqrt(3) * math.cos(math.pi * math.sqrt(3) / 2)


def test_phi_examples():
    assert abs(phase_phi_k(PhaseChain((pp(1, 0), pp(0, 1)))) + 1) < 1e-15
    assert phase_phi_k(PhaseChain((pp(0.3, 2.2), pp(0, 0)))) == 1
    assert abs(phase_phi_k(PhaseChain((pp(1, 0), pp(0, 1), pp(1, 1)))) + 1) < 1e-15
    assert phase_phi_k(PhaseChain((pp(5, 5),))) == 1


def test_phi_recursion_and_modulus(rng):
    for _ in range(1000):
        p, q, r = (pp(*rng.uniform(-3, 3, 2)) for _ in range(3))
        lhs = phase_phi_k(PhaseChain((p, q, r)))
        rhs = phase_phi_k(PhaseChain((p, q))) * phase_phi_k(PhaseChain((p + q, r)))
        assert abs(lhs - rhs) <= 1e-12
        assert abs(abs(lhs) - 1) <= 1e-15


def test_phi_array_matches_scalar(rng):
    pts = rng.uniform(-2, 2, (40, 3, 2))
    got = phase_phi_k_array(np.moveaxis(pts, 1, 0))
    ref = [phase_phi_k(PhaseChain(tuple(pp(*v) for v in chain))) for chain in pts]
    np.testing.assert_allclose(got, ref, atol=1e-13)


def test_direct_dirac_products():
    t = trunc1(48)
    assert np.allclose(tconv_weyl_direct([Dirac(pp(0, 0)), Dirac(pp(0, 0))], t).entries, np.eye(48))
    p, q = pp(0.7, -0.2), pp(-0.4, 0.5)
    D = tconv_weyl_direct([Dirac(p), Dirac(q)], t, method="quadrature").entries
    z = np.exp(1j * np.pi * symplectic_phase(p, q))
    assert np.max(np.abs(D - z * rho_matrix(p + q, t).entries)) < 1e-13
    P = (rho_matrix(p, t) @ rho_matrix(q, t)).entries
    assert np.linalg.norm((D - P)[:8, :8]) < 1e-10


def test_direct_three_factors():
    ps = [pp(0.3, 0.1), pp(-0.2, 0.4), pp(0.5, -0.3)]
    t = trunc1(40)
    D = tconv_weyl_direct([Dirac(p) for p in ps], t).entries
    P = weyl_matrix(TConv(tuple(Dirac(p) for p in ps)), t, "product").entries
    assert np.linalg.norm((D - P)[:8, :8]) < 1e-10


@pytest.mark.slow
def test_convolution_square_block_law():
    m = circle_measure()
    errs = []
    for N in (64, 128):
        D = weyl_matrix(TConv((m, Reflect(m))), trunc1(N), "direct").entries
        P = weyl_matrix(TConv((m, Reflect(m))), trunc1(N), "product").entries
        errs.append(np.linalg.norm((D - P)[:8, :8]))
    assert errs[0] <= 1e-4
    assert errs[1] <= errs[0]


def test_product_cloud_budget_and_nesting():
    m = circle_measure()
    pts, w = product_cloud([m, Dirac(pp(1, 0))], panels=4, order=4)
    assert pts.shape == (16, 2)
    assert abs(np.sum(np.abs(w)) - total_mass(m, panels=4, order=4)) < 1e-12
    with pytest.raises(BudgetExceededError):
        product_cloud([m, m, m], panels=64, order=8, budget=10 ** 6)
    with pytest.raises(ConfigError):
        product_cloud([m, TConv((m, m))])


def test_density_known_point():
    d = tconv_density(circle_measure(), circle_measure(), pp(1, 0))
    assert d.roots_found == 2
    roots = sorted(map(tuple, np.round(d.roots, 12)))
    assert np.allclose(roots, [(math.pi / 3, 5 * math.pi / 3), (5 * math.pi / 3, math.pi / 3)])
    assert abs(d.value - TWO_CIRCLES_AT_1_0) < 1e-10
    assert abs(d.nearest_critical_distance - math.sqrt(3) / 2) < 1e-10


def test_density_pairing_at_known_point():
    a, b = circle_measure(), circle_measure()
    g = bump_function((1.0, 0.0), 0.45)
    ref = pairing_oracle(a, b, g)
    gp = grid_pairing(CurvePairDensity(a.spec, b.spec), g, (0.55, -0.45), (1.45, 0.45), 40)
    assert abs(gp.value - ref) <= 1e-3 * abs(ref)
    assert gp.excluded == []


def test_density_empty_and_critical():
    dens = CurvePairDensity(circle_measure().spec, circle_measure().spec)
    out = dens(pp(2.2, 0.3))
    assert out.roots_found == 0 and out.value == 0
    with pytest.raises(NearCriticalError) as exc:
        dens(pp(0, 0))
    assert exc.value.root is not None


def test_density_conjugate_symmetry():
    m = circle_measure(center=(0.4, -0.2), density=BumpDensity((math.pi,), (2.5,)))
    dens = CurvePairDensity(m.spec, reflect_measure(m).spec)
    for z in [(0.3, 0.5), (-0.8, 0.2), (1.1, -0.9)]:
        a = dens(pp(*z)).value
        b = dens(pp(-z[0], -z[1])).value
        assert abs(a - b.conjugate()) <= 1e-8 * max(1.0, abs(a))


def test_density_requires_planar_curves():
    with pytest.raises(ConfigError):
        CurvePairDensity(catalog_measure("sphere3").spec, circle_measure().spec)


def test_pairing_oracle_examples():
    p, q = pp(0.3, 1.1), pp(-0.7, 0.4)
    one = lambda z: np.ones(len(z))
    assert abs(pairing_oracle(Dirac(p), Dirac(q), one) - np.exp(1j * np.pi * symplectic_phase(p, q))) < 1e-15
    e = catalog_measure("ellipse")
    assert abs(pairing_oracle(Dirac(pp(0, 0)), e, one) - total_mass(e, panels=256)) < 1e-12


def test_density_sweep_flags_origin_and_writes_csv():
    dens = CurvePairDensity(circle_measure().spec, circle_measure().spec)
    sw = density_sweep(dens, (-0.5, -0.5), (0.5, 0.5), 8)
    origin_cells = np.all(np.abs(sw.centers) < 0.13, axis=1)
    assert all(s == "near_critical" for s, o in zip(sw.status, origin_cells) if o)
    csv = sw.to_csv(["test"])
    assert csv.splitlines()[1] == "z_x,z_y,re,im,roots_found,nearest_critical_distance,status"
    assert "np.float64" not in csv


def test_far_circles_zero_outside_support():
    a = circle_measure(center=(10.0, 0.0))
    b = circle_measure(center=(0.0, 10.0))
    dens = CurvePairDensity(a.spec, b.spec)
    sw = density_sweep(dens, (-3, -3), (3, 3), 12)
    assert np.all(sw.values == 0) and set(sw.status) == {"empty"}


def test_critical_set_area():
    c = curve_catalog("circle")
    areas = [a for _, a in critical_set_area(c, c)]
    assert all(b < a for a, b in zip(areas, areas[1:]))
    seg = curve_catalog("line_segment")
    par = curve_catalog("line_segment", a=(-1.0, 1.0), b=(1.0, 1.0))
    full = [a for _, a in critical_set_area(seg, par, grid=64)]
    assert np.allclose(full, 1.0)  # parameter box [0, 1]^2
    mixed = [a for _, a in critical_set_area(c, seg)]
    # the critical set is a curve in the parameter box, so the area halves with eta
    assert np.allclose(np.array(mixed[1:]) / mixed[:-1], 0.5, atol=0.05)
