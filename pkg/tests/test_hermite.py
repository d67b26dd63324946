import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate, special

from weylmeasure import (
    BasisTruncation, ConfigError, OperatorMatrix, PhasePoint, QuadratureError, gauss_hermite,
    hermite_fn, hermite_functions, rho_matrix, rho_matrix_1d,
)
from weylmeasure.hermite import (
    ORDERING_VERSION, accumulate, accumulate_1d, graded_multi_indices, kron_to_graded,
    quadrature_order, rho_stack_1d,
)
from weylmeasure.weyl import unitarity_defect


def test_hermite_examples():
    assert abs(hermite_fn(0, 0.0) - math.pi ** -0.25) < 1e-15
    assert abs(hermite_fn(0, 0.0) - 0.75112554) < 1e-8
    assert hermite_fn(1, 0.0) == 0.0
    u, w = gauss_hermite(64, scaled=True)
    assert abs(np.sum(w * hermite_fn(5, u) ** 2) - 1) <= 1e-12


def test_hermite_matches_scipy_polynomials():
    t = np.linspace(-6, 6, 41)
    H = hermite_functions(21, t)
    for k in range(21):
        norm = 1 / math.sqrt(2.0 ** k * math.factorial(k) * math.sqrt(math.pi))
        ref = norm * special.eval_hermite(k, t) * np.exp(-t * t / 2)
        np.testing.assert_allclose(H[:, k], ref, rtol=1e-12, atol=1e-14)


def test_hermite_gram_matrix():
    u, w = gauss_hermite(128, scaled=True)
    H = hermite_functions(32, u)
    G = H.T @ (w[:, None] * H)
    assert np.max(np.abs(G - np.eye(32))) <= 1e-10


def test_hermite_tails_and_large_index():
    vals = hermite_functions(2049, np.array([0.0, 10.0, 40.0, 200.0]))
    assert np.all(np.isfinite(vals))
    # far outside the turning point sqrt(2k+1) the functions vanish
    assert np.max(np.abs(vals[-1])) == 0.0
    # h_2000 stays normalised, checked with a rule that resolves it
    u, w = gauss_hermite(2100, scaled=True)
    h = hermite_fn(2000, u)
    assert abs(np.sum(w * h * h) - 1) < 1e-10
    with pytest.raises(ValueError):
        hermite_fn(2049, 0.0)
    with pytest.raises(ValueError):
        hermite_fn(3, float("nan"))


def test_gauss_hermite_weights():
    u, w = gauss_hermite(80)
    ref_u, ref_w = special.roots_hermite(80)
    np.testing.assert_allclose(u, ref_u, rtol=1e-13, atol=1e-13)
    np.testing.assert_allclose(w, ref_w, rtol=1e-10, atol=1e-300)
    assert abs(np.sum(w * u ** 10) - special.gamma(5.5)) < 1e-12


def _definition_entry(j, k, x, y):
    """<rho(x, y) h_k, h_j> straight from the definition, by adaptive quadrature."""
    def f(t, part):
        v = np.exp(1j * np.pi * (x * y + 2 * y * t)) * hermite_fn(k, t + x) * hermite_fn(j, t)
        return v.real if part == 0 else v.imag
    lo, hi = min(-x, 0) - 12, max(-x, 0) + 12
    re = integrate.quad(f, lo, hi, args=(0,), limit=400, epsabs=1e-13)[0]
    im = integrate.quad(f, lo, hi, args=(1,), limit=400, epsabs=1e-13)[0]
    return re + 1j * im


@pytest.mark.parametrize("x,y", [(0.7, -0.3), (-1.5, 0.4), (2.0, 1.1), (0.0, -2.0)])
@pytest.mark.parametrize("method", ["quadrature", "recurrence"])
def test_rho_entries_against_definition(x, y, method):
    A = rho_matrix_1d(x, y, 12, method=method).entries
    for j, k in [(0, 0), (3, 1), (1, 3), (7, 2), (11, 11), (5, 9)]:
        assert abs(A[j, k] - _definition_entry(j, k, x, y)) <= 1e-10


def test_rho_closed_form_examples():
    assert np.array_equal(rho_matrix_1d(0, 0, 8).entries, np.eye(8))
    assert abs(rho_matrix_1d(1, 0, 4).entries[0, 0] - math.exp(-0.25)) < 1e-14
    assert abs(rho_matrix_1d(1, 0, 4).entries[0, 0] - 0.77880078) < 1e-8
    assert abs(rho_matrix_1d(0, 0.2, 4).entries[0, 0] - math.exp(-(math.pi * 0.2) ** 2)) < 1e-14
    assert abs(rho_matrix_1d(0, 0.2, 4).entries[0, 0] - 0.67381) < 2e-5  # quoted to 5 digits


def test_rho_matrix_n2_product():
    trunc = BasisTruncation(2, 4)
    M = rho_matrix(PhasePoint.from_array([1, 0, 0, 0]), trunc).entries
    assert abs(M[0, 0] - math.exp(-0.25)) < 1e-14
    assert np.array_equal(rho_matrix(PhasePoint.origin(2), trunc).entries, np.eye(16))
    p = PhasePoint.from_array([0.4, -0.3, 0.2, 0.9])
    A = rho_matrix_1d(0.4, 0.2, 4).entries
    B = rho_matrix_1d(-0.3, 0.9, 4).entries
    M = rho_matrix(p, trunc).entries
    for a, alpha in enumerate(trunc.indices):
        for b, beta in enumerate(trunc.indices):
            assert abs(M[a, b] - A[alpha[0], beta[0]] * B[alpha[1], beta[1]]) < 1e-15


def test_rho_matrix_n1_consistency():
    p = PhasePoint.from_array([0.3, -0.8])
    assert np.array_equal(rho_matrix(p, BasisTruncation(1, 10)).entries,
                          rho_matrix_1d(0.3, -0.8, 10).entries)


def test_graded_ordering():
    idx = graded_multi_indices(2, 3)
    assert idx.tolist() == [[0, 0], [0, 1], [1, 0], [0, 2], [1, 1], [2, 0], [1, 2], [2, 1], [2, 2]]
    t = BasisTruncation(3, 4)
    assert t.size == 64 and len({tuple(a) for a in t.indices}) == 64
    assert t.ordering == ORDERING_VERSION
    lex = np.arange(16.0).reshape(4, 4)
    g = kron_to_graded([lex[:2, :2], np.eye(2)], BasisTruncation(2, 2))
    assert g.shape == (4, 4)


def test_laguerre_cross_validation_gate(rng):
    """The recurrence fast path must agree with quadrature to 1e-8 on a random grid."""
    for _ in range(25):
        x, y = rng.uniform(-4, 4), rng.uniform(-2, 2)
        Aq = rho_matrix_1d(x, y, 48).entries
        Ar = rho_matrix_1d(x, y, 48, method="recurrence").entries
        assert np.max(np.abs(Aq - Ar)) <= 1e-8


def test_recurrence_large_arguments():
    A = rho_matrix_1d(16, 16, 64, method="recurrence").entries
    assert np.all(np.isfinite(A))
    B = rho_matrix_1d(16, 16, 64).entries
    assert np.max(np.abs(A - B)) <= 1e-10


def test_symmetry_inverse():
    for x, y in [(0.5, 0.25), (-1.3, 1.7), (2.0, -0.6)]:
        A = rho_matrix_1d(x, y, 40).entries
        B = rho_matrix_1d(-x, -y, 40).entries
        assert np.max(np.abs(B - A.conj().T)) <= 1e-10


def test_unitarity_trend():
    # block defect shrinks with N and is negligible once N >= 4K + 8(|x|+|y|)^2
    for x, y in [(1.0, 0.5), (-1.5, 1.0)]:
        K = 16
        d = [unitarity_defect(rho_matrix_1d(x, y, N), K) for N in (20, 32, 64, 4 * K + 8 * math.ceil((abs(x) + abs(y)) ** 2))]
        assert d[0] > d[1] > d[2] or d[2] < 1e-12
        assert d[-1] <= 1e-6


def test_order_check_raises():
    with pytest.raises(QuadratureError, match="raise the quadrature order"):
        rho_matrix_1d(0.5, 3.0, 32, order=40)
    rho_matrix_1d(0.5, 3.0, 32, order=quadrature_order(32, 3.0))


def test_box_and_input_errors():
    with pytest.raises(ConfigError, match="box"):
        rho_matrix_1d(17, 0, 4)
    rho_matrix_1d(17, 0, 4, box=20)
    with pytest.raises(ConfigError):
        rho_matrix_1d(0, 0, 0)
    with pytest.raises(ValueError):
        rho_matrix_1d(float("inf"), 0, 4)
    with pytest.raises(ConfigError):
        rho_matrix_1d(0, 0, 4, method="spline")


def test_accumulate_matches_sum(rng):
    pts = rng.uniform(-1, 1, (300, 2))
    c = rng.normal(size=300) + 1j * rng.normal(size=300)
    ref = sum(ci * rho_matrix_1d(x, y, 10).entries for (x, y), ci in zip(pts, c))
    for method in ("quadrature", "recurrence"):
        got = accumulate_1d(pts[:, 0], pts[:, 1], c, 10, method=method)
        assert np.max(np.abs(got - ref)) <= 1e-12
    stack = rho_stack_1d(pts[:5, 0], pts[:5, 1], 10)
    assert np.max(np.abs(stack[2] - rho_matrix_1d(*pts[2], 10).entries)) <= 1e-14


def test_accumulate_n2(rng):
    trunc = BasisTruncation(2, 3)
    pts = rng.uniform(-1, 1, (7, 4))
    c = rng.normal(size=7)
    ref = sum(ci * rho_matrix(PhasePoint.from_array(p), trunc).entries for p, ci in zip(pts, c))
    assert np.max(np.abs(accumulate(pts, c, trunc) - ref)) <= 1e-13


def test_operator_matrix_validation():
    t = BasisTruncation(1, 3)
    with pytest.raises(Exception):
        OperatorMatrix(t, np.eye(4))
    with pytest.raises(Exception):
        OperatorMatrix(t, np.full((3, 3), np.nan))
    M = OperatorMatrix(t, np.eye(3))
    assert (M @ M).entries.tolist() == np.eye(3).tolist()
    assert M.block(2).shape == (2, 2)


@settings(max_examples=40, deadline=None)
@given(st.floats(-3, 3), st.floats(-1.5, 1.5))
def test_entries_bounded_by_one(x, y):
    # |<rho h_k, h_j>| <= 1 for a unitary rho and unit vectors
    A = rho_matrix_1d(x, y, 24).entries
    assert np.max(np.abs(A)) <= 1 + 1e-12


@settings(max_examples=30, deadline=None)
@given(st.floats(-2, 2), st.floats(-1, 1), st.floats(-2, 2), st.floats(-1, 1))
def test_group_law_blocks_property(x, y, x2, y2):
    N, K = 96, 8
    g, h = PhasePoint.from_array([x, y]), PhasePoint.from_array([x2, y2])
    t = BasisTruncation(1, N)
    z = np.exp(1j * np.pi * (x * y2 - y * x2))
    lhs = rho_matrix(g, t).entries @ rho_matrix(h, t).entries
    rhs = z * rho_matrix(g + h, t).entries
    assert np.linalg.norm((lhs - rhs)[:K, :K]) <= 1e-8
