import numpy as np
import pytest

from python.calculus import fock, quantize, symmaps
from python.calculus.grids import GridSpec
from python.calculus.symalg import (
    I,
    INV_SQRT2,
    AWSymbol,
    MultiIndex,
    WeylSymbol,
    WickSymbol,
    multi_indices,
    random_symbol,
)
from python.calculus.weights import WeightSpec
from python.helpers.errors import MalformedInputError, PreconditionError


def x_(dim, j, c=1):
    return WeylSymbol.first_var(dim, j, c)


def xi_(dim, j, c=1):
    return WeylSymbol.second_var(dim, j, c)


def z_(dim, j, c=1):
    return WickSymbol.first_var(dim, j, c)


def wb_(dim, j, c=1):
    return WickSymbol.second_var(dim, j, c)


@pytest.mark.parametrize("dim", [1, 2, 3])
def test_generator_table(dim):
    assert symmaps.weyl_to_wick(WeylSymbol.constant(dim)) == WickSymbol.constant(dim)
    for j in range(dim):
        assert symmaps.weyl_to_wick(x_(dim, j)) == (z_(dim, j) + wb_(dim, j)).scale(INV_SQRT2)
        assert symmaps.weyl_to_wick(xi_(dim, j)) == (z_(dim, j) - wb_(dim, j)).scale(I * INV_SQRT2)
        assert symmaps.wick_to_weyl(z_(dim, j)) == (x_(dim, j) - xi_(dim, j, I)).scale(INV_SQRT2)
        assert symmaps.wick_to_weyl(wb_(dim, j)) == (x_(dim, j) + xi_(dim, j, I)).scale(INV_SQRT2)
        harmonic = x_(dim, j) * x_(dim, j) + xi_(dim, j) * xi_(dim, j)
        assert symmaps.weyl_to_wick(harmonic) == 2 * z_(dim, j) * wb_(dim, j) + 1


def test_known_pairs():
    x, xi = x_(1, 0), xi_(1, 0)
    z, wb = z_(1, 0), wb_(1, 0)
    assert symmaps.wick_to_weyl(z * wb) == (x * x + xi * xi - 1).scale("1/2")
    assert symmaps.weyl_to_wick(x * x - xi * xi) == z * z + wb * wb
    assert symmaps.weyl_to_wick(x * xi) == (z * z - wb * wb).scale(I / 2)


def test_maps_reject_wrong_kind():
    with pytest.raises(MalformedInputError):
        symmaps.wick_to_weyl(x_(1, 0))
    with pytest.raises(MalformedInputError):
        symmaps.weyl_to_wick(z_(1, 0))


def _monomials(cls, dim, max_degree):
    for first in multi_indices(dim, max_degree):
        for second in multi_indices(dim, max_degree - first.order):
            yield cls.monomial(dim, first, second)


@pytest.mark.slow
@pytest.mark.parametrize("dim", [1, 2])
def test_round_trip_on_monomials(dim):
    for A in _monomials(WeylSymbol, dim, 6):
        assert symmaps.wick_to_weyl(symmaps.weyl_to_wick(A)) == A
    for a in _monomials(WickSymbol, dim, 6):
        assert symmaps.weyl_to_wick(symmaps.wick_to_weyl(a)) == a


def test_round_trip_random(rng):
    for _ in range(10):
        A = random_symbol(WeylSymbol, int(rng.integers(1, 3)), 4, rng, with_sqrt2=True)
        assert symmaps.wick_to_weyl(symmaps.weyl_to_wick(A)) == A


def test_antiwick_to_wick():
    w = AWSymbol.first_var(1, 0)
    assert symmaps.antiwick_to_wick(w * w.conj()) == z_(1, 0) * wb_(1, 0) + 1


def test_antiwick_expansion_reconstructs(rng):
    for _ in range(20):
        dim = int(rng.integers(1, 3))
        a = random_symbol(WickSymbol, dim, int(rng.integers(1, 4)), rng)
        result = symmaps.wick_to_antiwick_expansion(a, max(a.deg_first, 0))
        assert result.remainder.is_zero()
        cutoff = 12
        assert fock.matrix_of(result.reconstruct(), cutoff) == fock.matrix_of(quantize.wick_quantize(a), cutoff)


def test_antiwick_expansion_leading_terms():
    z, wb = z_(1, 0), wb_(1, 0)
    result = symmaps.wick_to_antiwick_expansion(z * wb, 1)
    coefficients = {tuple(k): v for k, v in result.coefficients.items()}
    assert coefficients[(0,)] == AWSymbol.monomial(1, (1,), (1,))
    assert coefficients[(1,)] == AWSymbol.constant(1)
    assert [weight for _, weight, _ in result.terms()] == [1, -1]
    with pytest.raises(PreconditionError):
        symmaps.wick_to_antiwick_expansion(z, -1)


def test_truncated_expansion_leaves_remainder():
    z, wb = z_(1, 0), wb_(1, 0)
    a = z * z * wb * wb
    result = symmaps.wick_to_antiwick_expansion(a, 1)
    assert not result.remainder.is_zero()
    assert result.remainder.degree == 0


def test_principal_symbols():
    x, xi = x_(1, 0), xi_(1, 0)
    top, a_p = symmaps.principal_symbols(x * x - xi * xi + x)
    assert top == x * x - xi * xi
    assert a_p == z_(1, 0) * z_(1, 0) + wb_(1, 0) * wb_(1, 0)
    with pytest.raises(PreconditionError):
        symmaps.principal_symbols(WeylSymbol.zero(1))


def test_diagonal_law_harmonic():
    x, xi = x_(1, 0), xi_(1, 0)
    diff = symmaps.diag_difference(x * x + xi * xi)
    assert diff.difference == AWSymbol.constant(1)
    assert diff.degree == 0 and diff.bound_holds


def test_diagonal_law_random(rng):
    for _ in range(50):
        A = random_symbol(WeylSymbol, int(rng.integers(1, 3)), int(rng.integers(1, 7)), rng)
        result = symmaps.diag_difference(A)
        assert result.bound_holds, str(A)


CURATED = [
    ("x^2+xi^2", lambda x, xi: x * x + xi * xi, True),
    ("x^2-xi^2", lambda x, xi: x * x - xi * xi, False),
    ("x xi", lambda x, xi: x * xi, False),
    ("x^2", lambda x, xi: x * x, False),
    ("x+i xi", lambda x, xi: x + xi.scale(I), True),
    ("x", lambda x, xi: x, False),
    ("x^4+xi^4", lambda x, xi: x ** 4 + xi ** 4, True),
    ("(x^2+xi^2)^2", lambda x, xi: (x * x + xi * xi) ** 2, True),
    ("2x^2+xi^2+i x xi", lambda x, xi: 2 * x * x + xi * xi + (x * xi).scale(I), True),
    ("x^2+3 xi^2-x xi", lambda x, xi: x * x + 3 * xi * xi - x * xi, True),
]


@pytest.mark.parametrize("name, build, elliptic", CURATED, ids=[c[0] for c in CURATED])
def test_ellipticity_transfer_curated(name, build, elliptic):
    A = build(x_(1, 0), xi_(1, 0))
    top, a_p = symmaps.principal_symbols(A)
    real_side = symmaps.elliptic_check(top)
    wick_side = symmaps.elliptic_check(a_p)
    assert real_side.passed == wick_side.passed == elliptic
    assert symmaps.positive_on_diagonal(top) == symmaps.positive_on_diagonal(a_p)


def test_ellipticity_transfer_two_dims():
    x1, x2, xi1, xi2 = x_(2, 0), x_(2, 1), xi_(2, 0), xi_(2, 1)
    full = x1 * x1 + xi1 * xi1 + x2 * x2 + xi2 * xi2
    partial = x1 * x1 + xi1 * xi1
    for A, expected in [(full, True), (partial, False)]:
        top, a_p = symmaps.principal_symbols(A)
        assert symmaps.elliptic_check(top).passed == symmaps.elliptic_check(a_p).passed == expected
    assert symmaps.positive_on_diagonal(full)
    assert symmaps.positive_on_diagonal(symmaps.weyl_to_wick(full).top_degree_part())


@pytest.mark.slow
def test_ellipticity_transfer_random(rng):
    for _ in range(50):
        dim = int(rng.integers(1, 3))
        degree = int(rng.choice([2, 4])) if dim == 1 else 2
        A = random_symbol(WeylSymbol, dim, degree, rng, complex_coeffs=False, homogeneous=True)
        top, a_p = symmaps.principal_symbols(A)
        assert symmaps.elliptic_check(top).kind == symmaps.elliptic_check(a_p).kind, str(A)
        assert symmaps.positive_on_diagonal(top) == symmaps.positive_on_diagonal(a_p), str(A)


def test_elliptic_check_needs_homogeneous_input():
    with pytest.raises(PreconditionError):
        symmaps.elliptic_check(x_(1, 0) * x_(1, 0) + 1)
    with pytest.raises(PreconditionError):
        symmaps.elliptic_check(WickSymbol.zero(1))


def test_elliptic_threshold_scales_with_coefficients(config):
    z, wb = z_(1, 0), wb_(1, 0)
    p = 3 * z * z + 4 * wb * wb
    report = symmaps.elliptic_check(p, config=config)
    assert report.meta["threshold"] == pytest.approx(config.elliptic_tol * 4)
    assert report.max_value == pytest.approx(7.0, rel=1e-3)


def test_hypoelliptic_harmonic():
    a = 2 * z_(1, 0) * wb_(1, 0) + 1
    report = symmaps.hypoelliptic_diagnostic(a, rho=1.0, rho0=0.0, weight=WeightSpec.polynomial(2))
    assert report.kind == "hypoelliptic"
    assert report.constants["c"] == pytest.approx(1.0)
    assert report.constants["C"] < 3.0


def test_hypoelliptic_fails_on_vanishing_diagonal():
    a = z_(1, 0) * z_(1, 0) + wb_(1, 0) * wb_(1, 0)
    report = symmaps.hypoelliptic_diagnostic(a, rho=1.0, rho0=0.0, weight=WeightSpec.polynomial(2))
    assert report.kind == "fail"
    with pytest.raises(PreconditionError):
        symmaps.hypoelliptic_diagnostic(a, rho=0.0, rho0=0.0)


def test_hypoelliptic_fails_for_linear_symbol():
    # a(z, z) = 2 Re z vanishes on the imaginary axis
    a = z_(1, 0) + wb_(1, 0)
    report = symmaps.hypoelliptic_diagnostic(a, rho=1.0, rho0=0.0, weight=WeightSpec.polynomial(1))
    assert report.kind == "fail"
    assert report.constants["c"] < 1e-6


def test_weak_ellipticity_order():
    report = symmaps.weak_ellipticity_order(WickSymbol.constant(1), WeightSpec.polynomial(2))
    assert report.kind == "weakly-elliptic"
    assert 1.8 < report.rho0 < 2.8
    assert report.constants["r2"] > 0.95
    elliptic = symmaps.weak_ellipticity_order(2 * z_(1, 0) * wb_(1, 0) + 1, WeightSpec.polynomial(2))
    assert elliptic.rho0 == pytest.approx(0.0, abs=0.2)
    with pytest.raises(PreconditionError):
        symmaps.weak_ellipticity_order(WickSymbol.constant(1), grid=GridSpec(1.0, 8.0, 2, 16))


def test_multi_index_unit_helpers_agree_with_maps():
    e = MultiIndex.unit(2, 1)
    assert symmaps.weyl_to_wick(WeylSymbol.monomial(2, e, MultiIndex.zero(2))) == (z_(2, 1) + wb_(2, 1)).scale(INV_SQRT2)
