import math

import numpy as np
import pytest
from scipy.special import eval_hermite

from python.calculus import fock, numeric, quantize
from python.calculus.grids import SampledField
from python.calculus.symalg import I, AWSymbol, WeylSymbol, WickSymbol, random_symbol
from python.calculus.symmaps import wick_to_weyl
from python.calculus.weights import WeightSpec
from python.helpers.errors import (
    ConvergenceError,
    MalformedInputError,
    NonAnalyticInputError,
    PreconditionError,
)

z = WickSymbol.first_var(1, 0)
wb = WickSymbol.second_var(1, 0)
w = AWSymbol.first_var(1, 0)


def e_alpha(alpha, pts):
    pts = np.atleast_2d(pts)
    return np.prod(pts ** np.asarray(alpha), axis=-1) / math.sqrt(math.prod(math.factorial(a) for a in alpha))


def disc_points(n=20, radius=2.0):
    return numeric.phase_points(n, 1, radius / math.sqrt(2))


# ---------------------------------------------------------------------------
# Hermite functions and the Bargmann transform


def test_hermite_recurrence_matches_closed_form():
    x = np.linspace(-5, 5, 41)
    table = numeric.hermite_functions(20, x)
    for n in (0, 1, 2, 5, 10, 20):
        norm = math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
        expected = eval_hermite(n, x) * np.exp(-x ** 2 / 2) / norm
        np.testing.assert_allclose(table[n], expected, rtol=1e-9, atol=1e-12)


def test_hermite_coefficients_are_orthonormal(config):
    coefficients = numeric.hermite_coefficients(lambda y: numeric.hermite_eval((3,), y), 1, 5, config)
    for alpha, c in coefficients.items():
        assert c == pytest.approx(1.0 if alpha == (3,) else 0.0, abs=1e-10)
    two = numeric.hermite_coefficients(lambda y: numeric.hermite_eval((1, 2), y), 2, 3, config)
    assert two[(1, 2)] == pytest.approx(1.0, abs=1e-10)
    assert abs(two[(2, 1)]) < 1e-10


def test_hermite_eval_dimension_check():
    with pytest.raises(MalformedInputError):
        numeric.hermite_eval((1, 1), np.zeros((3, 1)))


@pytest.mark.parametrize("n", range(6))
def test_bargmann_maps_hermite_to_monomials(n, config):
    pts = disc_points()
    f = lambda y: numeric.hermite_eval((n,), y)  # noqa: E731
    expected = e_alpha((n,), pts)
    np.testing.assert_allclose(numeric.bargmann_num(f, pts, path="coefficients", config=config), expected, atol=1e-8)
    np.testing.assert_allclose(numeric.bargmann_num(f, pts, path="kernel", config=config), expected, atol=1e-8)


def test_bargmann_in_two_dimensions(config):
    pts = numeric.phase_points(10, 2, 1.0)
    f = lambda y: numeric.hermite_eval((1, 2), y)  # noqa: E731
    expected = e_alpha((1, 2), pts)
    np.testing.assert_allclose(numeric.bargmann_num(f, pts, path="kernel", config=config), expected, atol=1e-8)
    np.testing.assert_allclose(numeric.bargmann_num({(1, 2): 1.0}, pts), expected, atol=1e-12)


def test_bargmann_of_sampled_field():
    y = np.arange(-10, 10.0001, 0.05)[:, None]
    field = SampledField(points=y, values=numeric.hermite_eval((0,), y), meta={"step": 0.05})
    pts = disc_points(8, 1.0)
    np.testing.assert_allclose(numeric.bargmann_num(field, pts, dim=1), np.ones(len(pts)), atol=1e-8)


def test_bargmann_rejects_divergent_coefficients():
    with pytest.raises(ConvergenceError):
        numeric.bargmann_num({(0,): complex("nan")}, np.array([[0.5]]))
    with pytest.raises(MalformedInputError):
        numeric.bargmann_num({(0,): 1.0}, np.array([[0.5]]), path="fourier")


# ---------------------------------------------------------------------------
# short-time Fourier transform identities


def test_stft_of_gaussian_window():
    h0 = numeric.gaussian_window(1)
    value = numeric.stft_T(h0, h0, np.array([[0.0]]), np.array([[0.0]]))
    assert value[0] == pytest.approx(1 / math.sqrt(2 * math.pi), abs=1e-12)
    x, xi = np.array([[0.7]]), np.array([[-1.3]])
    assert abs(numeric.stft_V(h0, h0, x, xi)[0]) == pytest.approx(abs(numeric.stft_T(h0, h0, x, xi)[0]))


def test_stft_nyquist_limit():
    h0 = numeric.gaussian_window(1)
    with pytest.raises(ConvergenceError):
        numeric.stft_T(h0, h0, np.array([[0.0]]), np.array([[40.0]]), step=0.1)


def test_bargmann_stft_factorization():
    coefficients = {(0,): 1.0, (2,): 1.0}
    f = lambda y: numeric.hermite_eval((0,), y) + numeric.hermite_eval((2,), y)  # noqa: E731
    pts = numeric.phase_points(25, 1, 1.5)
    report = numeric.factorization_check(f, lambda p: numeric.bargmann_num(coefficients, p), pts)
    assert report.passed, report.constants


@pytest.mark.parametrize("build", [lambda x, xi: x * x + xi * xi, lambda x, xi: x])
def test_assignment_stft_relation(build):
    A = build(WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0))
    zs = numeric.phase_points(25, 1, 1.0)
    ws = numeric.phase_points(25, 1, 1.0, 0.3)
    report = numeric.sbatarel_check(A, zs, ws)
    assert report.passed, report.constants


def test_moyal_identity():
    report = numeric.moyal_check(lambda y: numeric.hermite_eval((1,), y))
    assert report.passed
    assert report.constants["norm_product"] == pytest.approx(1.0, abs=1e-8)


# ---------------------------------------------------------------------------
# integral forms


def test_inverse_assignment_of_number_operator(config):
    pts = numeric.phase_points(12, 1, 2.0)
    values = numeric.inverse_assignment_num(z * wb, pts, config=config)
    expected = (np.abs(pts[:, 0]) ** 2 - 1) / 2
    np.testing.assert_allclose(values, expected, atol=1e-10)


def test_inverse_assignment_matches_exact_map(rng, config):
    for _ in range(5):
        dim = int(rng.integers(1, 3))
        a = random_symbol(WickSymbol, dim, 3, rng)
        pts = numeric.phase_points(8, dim, 1.0)
        expected = wick_to_weyl(a).evaluate(pts)
        np.testing.assert_allclose(numeric.inverse_assignment_num(a, pts, config=config), expected, atol=1e-8)


def test_tensor_rule_is_capped_and_chunked(config):
    assert numeric.axis_nodes(64, 2, config.quad_max_points) == 64
    assert numeric.axis_nodes(64, 4, config.quad_max_points) == 16
    sizes = [len(weights) for _, weights in numeric.tensor_rule_chunks(32, 4)]
    assert max(sizes) <= numeric.NODE_CHUNK and sum(sizes) == 32 ** 4
    # E[t_1^2 ... t_4^2] = 2^-4 under pi^-2 e^{-|t|^2}
    value = numeric.gaussian_expectation(lambda t: np.prod(t ** 2, axis=-1), 4, 16)
    assert value == pytest.approx(1 / 16, abs=1e-12)


def test_inverse_assignment_in_two_dimensions(config):
    z1, wb1 = WickSymbol.first_var(2, 0), WickSymbol.second_var(2, 0)
    wb2 = WickSymbol.second_var(2, 1)
    a = z1 * wb1 + 2 * wb2
    pts = numeric.phase_points(4, 2, 1.0)
    np.testing.assert_allclose(numeric.inverse_assignment_num(a, pts, config=config), wick_to_weyl(a).evaluate(pts), atol=1e-9)
    F = WickSymbol.first_var(2, 1)
    expected = fock.apply_operator(a, F).evaluate(pts)
    np.testing.assert_allclose(numeric.wick_apply_num(a, F, pts, config), expected, atol=1e-8)


def test_wick_integral_matches_normal_ordering(rng, config):
    pts = disc_points(10, 1.0)
    np.testing.assert_allclose(numeric.wick_apply_num(wb, z * z, pts, config), 2 * pts[:, 0], atol=1e-9)
    F = 1 + 2 * z + z ** 3
    for _ in range(5):
        a = random_symbol(WickSymbol, 1, 3, rng)
        expected = fock.apply_operator(a, F).evaluate(pts)
        np.testing.assert_allclose(numeric.wick_apply_num(a, F, pts, config), expected, atol=1e-8)


# ---------------------------------------------------------------------------
# growth certificates


def test_certificate_passes_for_harmonic_symbol(config):
    report = numeric.growth_certificate(2 * z * wb + 1, "shubin", WeightSpec.polynomial(2), config=config)
    assert report.passed, report.constants
    assert np.isfinite(report.constants["C"])


def test_certificate_of_constant_is_one(config):
    report = numeric.growth_certificate(WickSymbol.constant(1), config=config)
    assert report.passed
    assert report.constants["C"] == pytest.approx(1.0)
    gevrey = numeric.growth_certificate(WickSymbol.constant(1), "gevrey", config=config)
    assert gevrey.passed


def test_certificate_fails_for_exponential_growth(config):
    def sample(zz, ww):
        return np.exp(np.sum(zz * np.conj(ww), axis=-1))

    report = numeric.growth_certificate(sample, "shubin", WeightSpec.polynomial(2), dim=1, config=config)
    assert not report.passed


def test_derivative_certificate(config):
    report = numeric.growth_certificate(2 * z * wb + 1, "shubin-derivative", WeightSpec.polynomial(2), rho=1.0, config=config)
    assert report.passed
    with pytest.raises(MalformedInputError):
        numeric.growth_certificate(lambda zz, ww: zz[..., 0], "shubin-derivative", dim=1, config=config)


def test_certificate_input_checks(config):
    with pytest.raises(MalformedInputError):
        numeric.growth_certificate(lambda zz, ww: zz[..., 0], config=config)
    with pytest.raises(MalformedInputError):
        numeric.growth_certificate(WickSymbol.constant(1), "sobolev", config=config)


# ---------------------------------------------------------------------------
# sharp Garding experiment


def test_garding_number_operator(config):
    report = numeric.garding_experiment(2 * z * wb, config=config)
    assert report.passed
    assert report.constants["lambda_min"] == pytest.approx(0.0, abs=1e-12)
    assert [row["cutoff"] for row in report.trace] == [8, 16, 24, 32]


@pytest.mark.slow
def test_garding_squeezed_family_is_stable(config):
    a = z * wb + (z * z + wb * wb).scale("1/4")
    report = numeric.garding_experiment(a, config=config)
    assert report.passed, report.trace
    assert report.constants["lambda_spread"] < 0.05
    assert report.constants["lambda_min"] > -1.0


@pytest.mark.slow
def test_garding_skew_part_is_reported(config):
    a = z * wb + (z * z + wb * wb).scale("1/4") + I
    report = numeric.garding_experiment(a, config=config)
    assert report.passed
    assert report.constants["skew_norm"] == pytest.approx(1.0)


@pytest.mark.slow
def test_antiwick_positive_symbols_have_nonnegative_matrices(rng, config):
    for _ in range(10):
        a0 = AWSymbol.zero(1)
        for _ in range(2):
            p = random_symbol(AWSymbol, 1, int(rng.integers(1, 3)), rng, n_terms=3, coeff_range=1)
            a0 = a0 + p * p.conj()
        report = numeric.garding_experiment(a0, config=config)
        assert report.constants["lambda_min"] >= -1e-10


def test_garding_weyl_input(config):
    x, xi = WeylSymbol.first_var(1, 0), WeylSymbol.second_var(1, 0)
    report = numeric.garding_experiment(x * x + xi * xi, cutoffs=[4, 8, 12], config=config)
    assert report.constants["lambda_min"] == pytest.approx(1.0)


def test_garding_needs_nonnegative_diagonal(config):
    with pytest.raises(PreconditionError):
        numeric.garding_experiment(-(z * wb), config=config)


# ---------------------------------------------------------------------------
# anti-Wick symbols and envelopes


def test_antiwick_symbol_polarized_path_is_exact():
    pts_z = numeric.phase_points(6, 1, 1.0)
    pts_w = numeric.phase_points(6, 1, 1.0, 0.2)
    values = numeric.antiwick_symbol_num(w * w.conj(), pts_z, pts_w, 16)
    np.testing.assert_allclose(values, (z * wb + 1).evaluate(pts_z, pts_w), atol=1e-12)


def test_antiwick_symbol_real_centred_path():
    pts_z = numeric.phase_points(6, 1, 1.0)
    pts_w = numeric.phase_points(6, 1, 1.0, 0.2)
    values = numeric.antiwick_symbol_num(lambda v: np.sum(np.abs(v) ** 2, axis=-1), pts_z, pts_w, 32, dim=1)
    np.testing.assert_allclose(values, (z * wb + 1).evaluate(pts_z, pts_w), atol=1e-9)


@pytest.mark.slow
def test_antiwick_bound_check_is_exact_for_polynomials(rng, config):
    for _ in range(3):
        a0 = random_symbol(AWSymbol, 1, int(rng.integers(1, 5)), rng)
        report = numeric.antiwick_bound_check(a0, "omega", WeightSpec.polynomial(4), config=config)
        assert report.constants["max_exact_error"] < 1e-8
        assert report.passed


@pytest.mark.slow
def test_antiwick_bound_check_exponential_decay(config):
    def decay(v):
        return np.exp(-np.sqrt(np.sum(np.abs(v) ** 2, axis=-1)))

    report = numeric.antiwick_bound_check(decay, "gs-decay", s=1.0, dim=1, config=config)
    assert report.passed
    assert report.constants["r"] > 0
    assert report.meta["path"] == "real-centred"


def test_antiwick_bound_check_input_checks(config):
    with pytest.raises(MalformedInputError):
        numeric.antiwick_bound_check(lambda v: v[..., 0], config=config)
    with pytest.raises(PreconditionError):
        numeric.antiwick_bound_check(w * w.conj(), "folland", r=1.5, config=config)


# ---------------------------------------------------------------------------
# polynomial detector


def test_detector_finds_quadratic(config):
    report = numeric.polynomial_detector(lambda p: 1 + p[..., 0] ** 2, 1, 8, config=config)
    assert report.is_polynomial and report.degree == 2
    assert report.coefficients[(0,)] == pytest.approx(1.0, abs=1e-10)
    assert report.coefficients[(2,)] == pytest.approx(1.0, abs=1e-10)
    assert max(report.tail_estimates) < 1e-10


def test_detector_declares_exact_degrees(rng, config):
    for _ in range(10):
        degree = int(rng.integers(0, 9))
        coeffs = rng.integers(-3, 4, size=degree + 1).astype(float)
        coeffs[-1] = coeffs[-1] or 1.0
        F = lambda p, c=coeffs: np.polynomial.polynomial.polyval(p[..., 0], c)  # noqa: E731
        report = numeric.polynomial_detector(F, 1, 8, config=config)
        assert report.is_polynomial
        assert report.degree == degree
        for alpha, value in report.coefficients.items():
            assert value == pytest.approx(coeffs[alpha[0]], abs=1e-8)


def test_detector_flags_exponential(config):
    report = numeric.polynomial_detector(lambda p: np.exp(p[..., 0]), 1, 8, config=config)
    assert not report.is_polynomial
    assert report.degree is None
    assert report.meta["apparent_degree"] > 8


def test_detector_rejects_non_analytic_input(config):
    with pytest.raises(NonAnalyticInputError):
        numeric.polynomial_detector(lambda p: np.abs(p[..., 0]) ** 2, 1, 4, config=config)
    with pytest.raises(PreconditionError):
        numeric.polynomial_detector(lambda p: p[..., 0], 1, 40, config=config)


def test_detector_on_kernels(config):
    a = 1 + z * z * wb + z * wb * wb
    w0 = np.array([0.5 + 0.5j])
    kernel = numeric.polynomial_detector(lambda p: quantize.kernel_eval(a, p, w0).value, 1, 8, config=config)
    assert not kernel.is_polynomial
    divided = numeric.polynomial_detector(
        lambda p: quantize.kernel_eval(a, p, w0).value / np.exp(np.sum(p * np.conj(w0), axis=-1)), 1, 8, config=config)
    assert divided.is_polynomial and divided.degree == a.deg_first


def test_detector_on_wick_symbols(config):
    report = numeric.detect_wick_polynomial(2 * z * wb + 1, 1, 4, config=config)
    assert report.is_polynomial and report.degree == 2
