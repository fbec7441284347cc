"""Symbol transforms between the Weyl, Wick and anti-Wick pictures, and ellipticity diagnostics.

Conventions: z = x + i xi on the real side and (z, w) = sum z_j conj(w_j).
The Bargmann assignment is fixed by its action on the generators

    x_j  -> 2^(-1/2) (z_j + wbar_j)
    xi_j -> 2^(-1/2) i (z_j - wbar_j)

extended to all polynomials by Weyl symmetrization; the inverse map has the finite
Taylor form implemented by ``wick_to_weyl``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np
import scipy.optimize

from initialize import CalculusConfig, default_config
from python.calculus import quantize
from python.calculus.grids import GridSpec, real_to_complex, complex_to_real, sphere_points
from python.calculus.reports import EllipticityReport
from python.calculus.symalg import (
    INV_SQRT2,
    ZERO,
    AWSymbol,
    ExactCoeff,
    MultiIndex,
    PolySymbol,
    WeylSymbol,
    WickSymbol,
    mi_factorial,
    multi_indices,
    multi_indices_of_order,
)
from python.calculus.weights import WeightSpec, japanese
from python.helpers.errors import InternalInvariantError, MalformedInputError, PreconditionError
from python.helpers.print_style import PrintStyle


def _sqrt2_part(re=0, im=0) -> ExactCoeff:
    return INV_SQRT2 * ExactCoeff(re, im)


def _wick_to_real_matrix(d: int) -> list[list[ExactCoeff]]:
    """z_j -> (x_j - i xi_j)/sqrt 2, wbar_j -> (x_j + i xi_j)/sqrt 2 (xi sign flip included)."""
    rows = []
    for j in range(d):
        row = [ZERO] * (2 * d)
        row[j] = _sqrt2_part(1, 0)
        row[d + j] = _sqrt2_part(0, -1)
        rows.append(row)
    for j in range(d):
        row = [ZERO] * (2 * d)
        row[j] = _sqrt2_part(1, 0)
        row[d + j] = _sqrt2_part(0, 1)
        rows.append(row)
    return rows


def _real_to_wick_matrix(d: int) -> list[list[ExactCoeff]]:
    """x_j -> (z_j + wbar_j)/sqrt 2, xi_j -> i (z_j - wbar_j)/sqrt 2."""
    rows = []
    for j in range(d):
        row = [ZERO] * (2 * d)
        row[j] = _sqrt2_part(1, 0)
        row[d + j] = _sqrt2_part(1, 0)
        rows.append(row)
    for j in range(d):
        row = [ZERO] * (2 * d)
        row[j] = _sqrt2_part(0, 1)
        row[d + j] = _sqrt2_part(0, -1)
        rows.append(row)
    return rows


def _real_to_diagonal_matrix(d: int) -> list[list[ExactCoeff]]:
    """sqrt2 x -> (w + wbar)/sqrt 2 and -sqrt2 xi -> i (w - wbar)/sqrt 2 for w = x + i xi."""
    return _real_to_wick_matrix(d)


# ---------------------------------------------------------------------------
# Weyl <-> Wick


def wick_to_weyl(a: WickSymbol) -> WeylSymbol:
    """sum_a (-1)^|a| / (2^|a| a!) (d_z^a dbar_w^a a) at z = (x - i xi)/sqrt 2, wbar = (x + i xi)/sqrt 2."""
    if not isinstance(a, WickSymbol):
        raise MalformedInputError(f"wick_to_weyl needs a Wick symbol, got {type(a).__name__}")
    d = a.dim
    top = max(0, min(a.deg_first, a.deg_second))
    total = WickSymbol.zero(d)
    for alpha in multi_indices(d, top):
        term = a.diff_first(alpha).diff_second(alpha)
        if term.is_zero():
            continue
        k = alpha.order
        weight = ExactCoeff((-1) ** k) / (2 ** k * mi_factorial(alpha))
        total = total + term.scale(weight)
    return total.substitute_linear(_wick_to_real_matrix(d), WeylSymbol)  # type: ignore[return-value]


def weyl_to_wick(A: WeylSymbol) -> WickSymbol:
    """Bargmann assignment: the unique Wick symbol with wick_to_weyl(result) = A.

    wick_to_weyl is the top-degree substitution plus strictly lower-degree terms, so the
    graded system is solved top-down by inverting the substitution on each homogeneous part.
    """
    if not isinstance(A, WeylSymbol):
        raise MalformedInputError(f"weyl_to_wick needs a Weyl symbol, got {type(A).__name__}")
    inverse = _real_to_wick_matrix(A.dim)
    result = WickSymbol.zero(A.dim)
    residual: WeylSymbol = A
    while not residual.is_zero():
        degree = residual.degree
        top = residual.top_degree_part()
        piece = top.substitute_linear(inverse, WickSymbol)
        result = result + piece
        residual = residual - wick_to_weyl(piece)  # type: ignore[assignment]
        if not residual.homogeneous_part(degree).is_zero():
            raise InternalInvariantError(f"graded block of degree {degree} failed to invert")
    return result


def antiwick_to_wick(a0: AWSymbol) -> WickSymbol:
    return quantize.antiwick_quantize(a0).to_wick()


# ---------------------------------------------------------------------------
# Wick -> anti-Wick expansion


@dataclass
class ExpansionResult:
    coefficients: dict[MultiIndex, AWSymbol]
    order: int
    remainder: WickSymbol

    def terms(self):
        """(a, (-1)^|a|/a!, a_a) for each coefficient."""
        for alpha, coeff in self.coefficients.items():
            yield alpha, ExactCoeff((-1) ** alpha.order) / mi_factorial(alpha), coeff

    def reconstruct(self) -> quantize.NormalOrderedOp:
        d = self.remainder.dim
        total = WickSymbol.zero(d)
        for _, weight, coeff in self.terms():
            total = total + antiwick_to_wick(coeff).scale(weight)
        return quantize.wick_quantize(total)

    def to_json(self) -> dict[str, Any]:
        return {
            "order": self.order,
            "coefficients": [{"alpha": list(a), "symbol": c.to_json()} for a, c in self.coefficients.items()],
            "remainder": self.remainder.to_json(),
        }


def wick_to_antiwick_expansion(a: WickSymbol, order: int) -> ExpansionResult:
    """a_a(w) = (d_z^a dbar_w^a a)(w, w); Op(a) = sum (-1)^|a|/a! Op^aw(a_a) + Op(remainder)."""
    if order < 0:
        raise PreconditionError(f"expansion order must be non-negative, got {order}")
    coefficients: dict[MultiIndex, AWSymbol] = {}
    reconstructed = WickSymbol.zero(a.dim)
    for alpha in multi_indices(a.dim, order):
        coeff = quantize.berezin_diag(a.diff_first(alpha).diff_second(alpha))
        if coeff.is_zero():
            continue
        coefficients[alpha] = coeff
        weight = ExactCoeff((-1) ** alpha.order) / mi_factorial(alpha)
        reconstructed = reconstructed + antiwick_to_wick(coeff).scale(weight)
    return ExpansionResult(coefficients, order, a - reconstructed)


# ---------------------------------------------------------------------------
# principal symbols and the diagonal law


def principal_symbols(A: WeylSymbol) -> tuple[WeylSymbol, WickSymbol]:
    if A.is_zero():
        raise PreconditionError("the zero symbol has no principal part")
    top = A.top_degree_part()
    return top, top.substitute_linear(_real_to_wick_matrix(A.dim), WickSymbol)  # type: ignore[return-value]


@dataclass
class DiagDifference:
    difference: AWSymbol
    degree: int
    symbol_degree: int

    @property
    def bound_holds(self) -> bool:
        return self.difference.is_zero() or self.degree <= self.symbol_degree - 2

    def to_json(self) -> dict[str, Any]:
        return {
            "difference": self.difference.to_json(),
            "degree": self.degree,
            "symbol_degree": self.symbol_degree,
            "bound_holds": self.bound_holds,
        }


def diag_difference(A: WeylSymbol) -> DiagDifference:
    """S_V A(w, w) - A(sqrt2 x, -sqrt2 xi) as an exact polynomial in (w, wbar), w = x + i xi."""
    diagonal = quantize.berezin_diag(weyl_to_wick(A))
    rescaled = A.substitute_linear(_real_to_diagonal_matrix(A.dim), AWSymbol)
    diff = diagonal - rescaled
    return DiagDifference(diff, diff.degree, A.degree)  # type: ignore[arg-type]


# ---------------------------------------------------------------------------
# ellipticity


def _sphere_values(p: PolySymbol, z: np.ndarray) -> np.ndarray:
    # Wick symbols are read on the diagonal w = z, Weyl symbols at x + i xi
    if isinstance(p, (WeylSymbol, WickSymbol, AWSymbol)):
        return np.abs(p.evaluate(z))
    raise MalformedInputError(f"cannot sample {type(p).__name__} on the sphere")


def _refine_sphere_min(p: PolySymbol, starts: np.ndarray) -> tuple[float, np.ndarray]:
    d = p.dim

    def objective(v):
        norm = np.linalg.norm(v)
        if norm == 0:
            return np.inf
        z = real_to_complex(v / norm, d)[None, :]
        return float(_sphere_values(p, z)[0])

    best_val, best_z = np.inf, starts[0]
    for start in starts:
        res = scipy.optimize.minimize(objective, complex_to_real(start), method="Nelder-Mead",
                                      options={"xatol": 1e-12, "fatol": 1e-16, "maxiter": 4000})
        if res.fun < best_val:
            v = res.x / np.linalg.norm(res.x)
            best_val, best_z = float(res.fun), real_to_complex(v, d)
    return best_val, best_z


def elliptic_check(p: PolySymbol, samples: int | None = None, config: CalculusConfig | None = None) -> EllipticityReport:
    """min over the unit sphere of |p| (diagonal restriction on the Wick side).

    Elliptic iff the minimum exceeds ``elliptic_tol`` scaled by the largest coefficient modulus.
    """
    config = config or default_config()
    samples = samples or config.sphere_samples
    if p.is_zero():
        raise PreconditionError("elliptic_check needs a nonzero symbol")
    if not p.is_homogeneous():
        raise PreconditionError("elliptic_check needs a homogeneous symbol (pass the principal part)")
    z = sphere_points(p.dim, samples)
    values = _sphere_values(p, z)
    max_value = float(values.max())
    order = np.argsort(values)[:5]
    refined, argmin = _refine_sphere_min(p, z[order])
    min_value = min(float(values.min()), refined)
    threshold = config.elliptic_tol * max(p.max_coeff_norm(), np.finfo(float).tiny)
    kind = "elliptic" if min_value > threshold else "fail"
    PrintStyle.debug(f"elliptic_check({p.KIND}): min={min_value:.3e} max={max_value:.3e} -> {kind}")
    return EllipticityReport(
        kind=kind,
        min_value=min_value,
        max_value=max_value,
        radii=[1.0],
        meta={"symbol_kind": p.KIND, "samples": samples, "threshold": threshold,
              "argmin": [[float(c.real), float(c.imag)] for c in np.atleast_1d(argmin)]},
    )


def positive_on_diagonal(p: PolySymbol, samples: int | None = None, config: CalculusConfig | None = None) -> bool:
    """Real and positive on the unit sphere (Wick diagonal or Weyl values)."""
    config = config or default_config()
    z = sphere_points(p.dim, samples or config.sphere_samples)
    values = p.evaluate(z)  # type: ignore[attr-defined]
    scale = max(float(np.max(np.abs(values))), np.finfo(float).tiny)
    return bool(np.all(np.abs(values.imag) <= 1e-9 * scale) and np.all(values.real > config.elliptic_tol * scale))


def _diagonal_derivatives(a: WickSymbol, max_order: int):
    d = a.dim
    for k in range(1, max_order + 1):
        for split in range(k + 1):
            for alpha in multi_indices_of_order(d, split):
                for beta in multi_indices_of_order(d, k - split):
                    der = a.diff_first(alpha).diff_second(beta)
                    yield alpha, beta, der


def hypoelliptic_diagnostic(a: WickSymbol, rho: float, rho0: float, weight: WeightSpec | None = None,
                            grid: GridSpec | None = None, config: CalculusConfig | None = None) -> EllipticityReport:
    """Radial-shell falsifier for Shubin-Wick hypoellipticity.

    Fits C = max |d_z^a dbar_w^b a(z,z)| / (|a(z,z)| <z>^(-rho|a+b|)) over |a+b| <= max order
    and c = min |a(z,z)| / (w(sqrt2 zbar) <z>^(-rho0)).
    """
    config = config or default_config()
    weight = weight or WeightSpec.polynomial(0)
    grid = grid or GridSpec(config.grid_r_min, config.grid_r_max, config.grid_radial, config.grid_angular)
    if rho <= 0 or rho0 < 0:
        raise PreconditionError(f"need rho > 0 and rho0 >= 0, got rho={rho}, rho0={rho0}")
    radii, points = grid.shells(a.dim)
    pts = points.reshape(-1, a.dim)
    if not len(pts):
        raise PreconditionError("empty grid")
    diag = np.abs(a.evaluate(pts))
    jz = japanese(pts)
    tiny = np.finfo(float).tiny

    upper = 0.0
    for alpha, beta, der in _diagonal_derivatives(a, config.hypo_max_order):
        if der.is_zero():
            continue
        k = alpha.order + beta.order
        vals = np.abs(der.evaluate(pts))
        bound = diag * jz ** (-rho * k)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(vals == 0, 0.0, vals / np.maximum(bound, tiny))
        upper = max(upper, float(ratio.max()))

    lower_vals = diag / (weight(np.sqrt(2) * np.conj(pts)) * jz ** (-rho0))
    lower = float(lower_vals.min())
    tol = config.elliptic_tol
    passed = np.isfinite(upper) and upper < 1.0 / tol and lower > tol * max(float(lower_vals.max()), tiny)
    kind = "hypoelliptic" if passed else "fail"
    return EllipticityReport(
        kind=kind,
        min_value=float(diag.min()),
        max_value=float(diag.max()),
        radii=[float(r) for r in radii],
        weight=weight,
        rho=rho,
        rho0=rho0,
        constants={"C": upper, "c": lower},
        meta={"grid": grid.to_json(), "max_order": config.hypo_max_order, "points": int(len(pts))},
    )


def weak_ellipticity_order(a: WickSymbol, weight: WeightSpec | None = None, grid: GridSpec | None = None,
                           config: CalculusConfig | None = None) -> EllipticityReport:
    """Fitted rho0 in |a(z,z)| ~ <z>^(-rho0) w(sqrt2 zbar) from shell minima, with R^2."""
    config = config or default_config()
    weight = weight or WeightSpec.polynomial(0)
    grid = grid or GridSpec(config.grid_r_min, config.grid_r_max, config.grid_radial, config.grid_angular)
    if grid.radial < 3:
        raise PreconditionError("the order fit needs at least three radii")
    radii, points = grid.shells(a.dim)
    diag = np.abs(a.evaluate(points))
    ratio = diag / weight(np.sqrt(2) * np.conj(points))
    minima = ratio.min(axis=1)
    if np.any(minima <= 0) or not np.all(np.isfinite(minima)):
        return EllipticityReport(kind="fail", min_value=float(diag.min()), radii=[float(r) for r in radii],
                                 weight=weight, meta={"shell_minima": minima.tolist()})
    x = np.log(np.sqrt(1.0 + radii ** 2))
    y = np.log(minima)
    slope, intercept = np.polyfit(x, y, 1)
    fitted = slope * x + intercept
    ss_res = float(np.sum((y - fitted) ** 2))
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 - ss_res / ss_tot if ss_tot > 0 else 1.0
    rho0 = max(0.0, -float(slope))
    return EllipticityReport(
        kind="weakly-elliptic",
        min_value=float(diag.min()),
        max_value=float(diag.max()),
        radii=[float(r) for r in radii],
        weight=weight,
        rho0=rho0,
        constants={"c": float(np.exp(intercept)), "slope": float(slope), "r2": r2},
        meta={"shell_minima": minima.tolist(), "grid": grid.to_json()},
    )
