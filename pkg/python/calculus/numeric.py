"""Floating-point verification engine.

Gaussian integrals over R^k are taken with tensor Gauss-Hermite rules against
pi^(-k/2) e^(-|t|^2); every reported integral is recomputed with twice the nodes
and the run fails with ConvergenceError when the two disagree beyond ``quad_tol``.
Oscillatory transforms (STFT, Moyal) use the uniform trapezoid rule, which is
spectrally accurate for Gaussian-type integrands.
"""

from __future__ import annotations

import asyncio
import math
from functools import lru_cache
from typing import Callable, Mapping, Sequence

import numpy as np
import scipy.linalg
import scipy.optimize

from initialize import CalculusConfig, default_config
from python.calculus import fock, quantize
from python.calculus.grids import GridSpec, SampledField, box_points, complex_to_real, real_to_complex, sphere_points
from python.calculus.reports import EstimateReport, PolynomialReport
from python.calculus.symalg import (
    AWSymbol,
    PolySymbol,
    WeylSymbol,
    WickSymbol,
    mi_factorial,
    multi_indices,
    multi_indices_of_order,
)
from python.calculus.symmaps import antiwick_to_wick, weyl_to_wick
from python.calculus.weights import WeightSpec, japanese
from python.helpers.errors import (
    ConvergenceError,
    MalformedInputError,
    NonAnalyticInputError,
    PreconditionError,
)
from python.helpers.print_style import PrintStyle

__all__ = [
    "WeightSpec",
    "GridSpec",
    "SampledField",
    "EstimateReport",
    "hermite_functions",
    "hermite_eval",
    "hermite_coefficients",
    "bargmann_num",
    "stft_T",
    "stft_V",
    "factorization_check",
    "sbatarel_check",
    "moyal_check",
    "inverse_assignment_num",
    "wick_apply_num",
    "growth_certificate",
    "garding_experiment",
    "antiwick_symbol_num",
    "antiwick_bound_check",
    "polynomial_detector",
    "detect_wick_polynomial",
]

Evaluator = Callable[..., np.ndarray]


# ---------------------------------------------------------------------------
# Hermite functions


def hermite_functions(n_max: int, x) -> np.ndarray:
    """h_0 .. h_n_max at x by the normalized three-term recurrence; shape (n_max + 1, *x.shape)."""
    x = np.asarray(x, dtype=float)
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = np.pi ** -0.25 * np.exp(-0.5 * x ** 2)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * x * out[0]
    for n in range(1, n_max):
        out[n + 1] = np.sqrt(2.0 / (n + 1)) * x * out[n] - np.sqrt(n / (n + 1)) * out[n - 1]
    return out


def hermite_eval(alpha: Sequence[int], x) -> np.ndarray:
    """h_a(x) = prod_j h_{a_j}(x_j); x has shape (..., d)."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != len(alpha):
        raise MalformedInputError(f"point dimension {x.shape[-1]} does not match multi-index length {len(alpha)}")
    out = np.ones(x.shape[:-1])
    for j, a in enumerate(alpha):
        out = out * hermite_functions(a, x[..., j])[a]
    return out


# ---------------------------------------------------------------------------
# Gauss-Hermite quadrature


@lru_cache(maxsize=16)
def gauss_hermite(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.polynomial.hermite.hermgauss(n)


NODE_CHUNK = 8192


def _chunks(n: int, size: int):
    for start in range(0, n, size):
        yield slice(start, min(n, start + size))


def axis_nodes(n: int, k: int, max_points: int) -> int:
    """Nodes per axis, reduced so that the k-fold tensor rule has at most max_points nodes."""
    cap = int(math.floor(max_points ** (1.0 / k) + 1e-9))
    return max(2, min(n, cap))


def tensor_rule_chunks(n: int, k: int, size: int = NODE_CHUNK):
    """Yield (nodes (M, k), weights (M,)) slices of the n^k tensor rule for pi^(-k/2) e^(-|t|^2)."""
    x, w = gauss_hermite(n)
    scale = np.pi ** (-k / 2)
    for sl in _chunks(n ** k, size):
        idx = np.unravel_index(np.arange(sl.start, sl.stop), (n,) * k)
        nodes = np.stack([x[i] for i in idx], axis=-1)
        weights = np.prod(np.stack([w[i] for i in idx], axis=-1), axis=-1) * scale
        yield nodes, weights


def gaussian_expectation(func: Callable[[np.ndarray], np.ndarray], k: int, n: int) -> np.ndarray:
    """pi^(-k/2) int_{R^k} func(t) e^(-|t|^2) dt; func maps nodes (M, k) to values (M, ...)."""
    total = None
    for nodes, weights in tensor_rule_chunks(n, k):
        part = np.tensordot(weights, func(nodes), axes=(0, 0))
        total = part if total is None else total + part
    return total


def checked_expectation(func: Callable[[np.ndarray], np.ndarray], k: int, config: CalculusConfig, what: str) -> np.ndarray:
    n = axis_nodes(config.quad_nodes, k, config.quad_max_points)
    coarse = gaussian_expectation(func, k, n)
    fine = gaussian_expectation(func, k, 2 * n)
    err = float(np.max(np.abs(fine - coarse) / np.maximum(1.0, np.abs(fine)), initial=0.0))
    if not np.all(np.isfinite(fine)) or err > config.quad_tol:
        raise ConvergenceError(f"{what}: {n} and {2 * n} Gauss-Hermite nodes differ by {err:.3e} (tol {config.quad_tol:.1e})")
    return fine


def _complex_expectation(func, dim: int, config: CalculusConfig, what: str) -> np.ndarray:
    """pi^-d int_{C^d} func(t) e^(-|t|^2) dlambda(t)."""
    return checked_expectation(lambda nodes: func(real_to_complex(nodes, dim)), 2 * dim, config, what)


# ---------------------------------------------------------------------------
# Bargmann transform


def _hermite_series(coefficients: Mapping[tuple[int, ...], complex]) -> Callable[[np.ndarray], np.ndarray]:
    def f(y):
        out = np.zeros(np.asarray(y).shape[:-1], dtype=complex)
        for alpha, c in coefficients.items():
            out = out + c * hermite_eval(alpha, y)
        return out

    return f


def _check_coefficients(coefficients: Mapping[tuple[int, ...], complex], dim: int):
    for alpha, c in coefficients.items():
        if len(alpha) != dim:
            raise MalformedInputError(f"Hermite index {alpha} does not have length {dim}")
        if not np.isfinite(c):
            raise ConvergenceError(f"divergent Hermite coefficient at {alpha}: {c}")


def hermite_coefficients(f: Callable[[np.ndarray], np.ndarray], dim: int, max_order: int,
                         config: CalculusConfig | None = None) -> dict[tuple[int, ...], complex]:
    """c(f, a) = (f, h_a) for |a| <= max_order."""
    config = config or default_config()
    indices = [tuple(a) for a in multi_indices(dim, max_order)]

    def integrand(y):
        base = np.exp(np.sum(y ** 2, axis=-1)) * f(y)
        return np.stack([base * hermite_eval(a, y) for a in indices], axis=-1)

    values = checked_expectation(integrand, dim, config, "Hermite coefficients") * np.pi ** (dim / 2)
    return {a: complex(v) for a, v in zip(indices, values)}


def bargmann_num(f: Mapping[tuple[int, ...], complex] | Callable[[np.ndarray], np.ndarray] | SampledField, z, dim: int | None = None,
                 path: str = "coefficients", max_order: int = 10, config: CalculusConfig | None = None) -> np.ndarray:
    """Bargmann transform at z, from Hermite coefficients (sum c_a e_a(z)) or by kernel quadrature.

    Kernel: pi^(-d/4) int exp(-(z.z + |y|^2)/2 + sqrt2 z.y) f(y) dy, bilinear dot products.
    """
    config = config or default_config()
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    dim = dim or z.shape[-1]
    if isinstance(f, SampledField):
        path = "kernel"
    if path == "coefficients":
        coefficients = f if isinstance(f, Mapping) else hermite_coefficients(f, dim, max_order, config)
        _check_coefficients(coefficients, dim)
        out = np.zeros(z.shape[:-1], dtype=complex)
        for alpha, c in coefficients.items():
            mono = np.prod(z ** np.asarray(alpha), axis=-1)
            out = out + c * mono / math.sqrt(mi_factorial(alpha))
        return out
    if path != "kernel":
        raise MalformedInputError(f"unknown Bargmann path {path!r}")
    zz = np.sum(z * z, axis=-1)
    if isinstance(f, SampledField):
        # quadrature over the given nodes; no refinement is possible
        y = np.asarray(f.points, dtype=float).reshape(len(f.values), dim)
        if f.weights is None:
            step = f.meta.get("step")
            if step is None:
                raise MalformedInputError("sampled field needs weights or a uniform 'step'")
            weights = np.full(len(y), float(step) ** dim)
        else:
            weights = np.asarray(f.weights, dtype=float)
        expo = -0.5 * np.sum(y ** 2, axis=-1)[:, None] - 0.5 * zz[None, :] + np.sqrt(2.0) * (y @ z.T)
        return np.pi ** (-dim / 4) * np.tensordot(weights * np.asarray(f.values), np.exp(expo), axes=(0, 0))
    func = _hermite_series(f) if isinstance(f, Mapping) else f
    if isinstance(f, Mapping):
        _check_coefficients(f, dim)

    def integrand(y):
        # e^{|y|^2} compensates the quadrature weight
        expo = 0.5 * np.sum(y ** 2, axis=-1)[:, None] - 0.5 * zz[None, :] + np.sqrt(2.0) * (y @ z.T)
        return np.exp(expo) * func(y)[:, None]

    return checked_expectation(integrand, dim, config, "Bargmann kernel") * np.pi ** (dim / 2) * np.pi ** (-dim / 4)


# ---------------------------------------------------------------------------
# short-time Fourier transform


def gaussian_window(dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """phi(x) = pi^(-d/4) e^(-|x|^2/2)."""
    return lambda y: np.pi ** (-dim / 4) * np.exp(-0.5 * np.sum(np.asarray(y) ** 2, axis=-1))


def assignment_window(dim: int) -> Callable[[np.ndarray], np.ndarray]:
    """psi(X) = (2/pi)^(d/2) e^(-|X|^2) on R^(2d)."""
    return lambda y: (2.0 / np.pi) ** (dim / 2) * np.exp(-np.sum(np.asarray(y) ** 2, axis=-1))


def _uniform_grid(k: int, step: float, half_width: float) -> np.ndarray:
    axis = np.arange(-half_width, half_width + step / 2, step)
    grids = np.meshgrid(*([axis] * k), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=-1)


def stft_T(f: Callable[[np.ndarray], np.ndarray], window: Callable[[np.ndarray], np.ndarray], x, xi,
           step: float = 0.1, half_width: float = 10.0) -> np.ndarray:
    """(2 pi)^(-k/2) int f(y + x) conj(window(y)) e^(-i <y, xi>) dy by the trapezoid rule."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    if x.shape != xi.shape:
        raise MalformedInputError(f"x and xi shapes differ: {x.shape} vs {xi.shape}")
    k = x.shape[-1]
    nyquist = np.pi / step
    if np.max(np.abs(xi), initial=0.0) > nyquist:
        raise ConvergenceError(f"frequency {np.max(np.abs(xi)):.3g} exceeds the grid Nyquist limit {nyquist:.3g}")
    y = _uniform_grid(k, step, half_width)
    win = np.conj(window(y))
    out = np.empty(len(x), dtype=complex)
    for i in range(len(x)):
        out[i] = np.sum(f(y + x[i]) * win * np.exp(-1j * (y @ xi[i])))
    return out * step ** k * (2 * np.pi) ** (-k / 2)


def stft_V(f, window, x, xi, **kwargs) -> np.ndarray:
    """V_phi f = e^(-i <x, xi>) T_phi f."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    xi = np.atleast_2d(np.asarray(xi, dtype=float))
    return np.exp(-1j * np.sum(x * xi, axis=-1)) * stft_T(f, window, x, xi, **kwargs)


def phase_points(n: int, dim: int, radius: float, seed_offset: float = 0.5) -> np.ndarray:
    """n low-discrepancy points z = x + i xi in the box [-radius, radius]^(2d)."""
    return real_to_complex(box_points(n, 2 * dim, radius, seed_offset), dim)


def factorization_check(f: Callable[[np.ndarray], np.ndarray], bargmann_values: Callable[[np.ndarray], np.ndarray],
                        points: np.ndarray, step: float = 0.1, half_width: float = 10.0) -> EstimateReport:
    """Bargmann f(x + i xi) against (2pi)^(d/2) e^((|x|^2+|xi|^2)/2) e^(i<x,xi>) T_phi f(sqrt2 x, -sqrt2 xi)."""
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    dim = points.shape[-1]
    x, xi = points.real, points.imag
    t = stft_T(f, gaussian_window(dim), np.sqrt(2) * x, -np.sqrt(2) * xi, step, half_width)
    rhs = (2 * np.pi) ** (dim / 2) * np.exp(0.5 * np.sum(x ** 2 + xi ** 2, axis=-1)) * np.exp(1j * np.sum(x * xi, axis=-1)) * t
    lhs = bargmann_values(points)
    err = np.abs(lhs - rhs)
    return EstimateReport(
        form="bargmann-stft-factorization",
        constants={"max_abs_error": float(err.max())},
        max_violation=float(err.max()),
        grid={"points": int(len(points)), "step": step, "half_width": half_width},
        passed=bool(err.max() <= 1e-6),
    )


def sbatarel_check(A: WeylSymbol, points_z: np.ndarray, points_w: np.ndarray,
                   step: float = 0.1, half_width: float = 8.0) -> EstimateReport:
    """S_V A(z, w) against (2pi)^(d/2) e^(|z-w|^2/2) T_psi A((x+y)/sqrt2, -(xi+eta)/sqrt2; sqrt2(eta-xi), sqrt2(y-x))."""
    z = np.atleast_2d(np.asarray(points_z, dtype=complex))
    w = np.atleast_2d(np.asarray(points_w, dtype=complex))
    d = A.dim
    lhs = weyl_to_wick(A).evaluate(z, w)
    s = np.sqrt(2.0)
    X = np.concatenate([(z.real + w.real) / s, -(z.imag + w.imag) / s], axis=-1)
    Xi = np.concatenate([s * (w.imag - z.imag), s * (w.real - z.real)], axis=-1)

    def symbol(Y):
        return A.evaluate_real(Y[..., :d], Y[..., d:])

    t = stft_T(symbol, assignment_window(d), X, Xi, step, half_width)
    rhs = (2 * np.pi) ** (d / 2) * np.exp(0.5 * np.sum(np.abs(z - w) ** 2, axis=-1)) * t
    err = np.abs(lhs - rhs)
    return EstimateReport(
        form="assignment-stft",
        constants={"max_abs_error": float(err.max())},
        max_violation=float(err.max()),
        grid={"points": int(len(z)), "step": step, "half_width": half_width},
        passed=bool(err.max() <= 1e-6),
    )


def moyal_check(f: Callable[[np.ndarray], np.ndarray], window: Callable[[np.ndarray], np.ndarray] | None = None,
                step: float = 0.1, half_width: float = 10.0, phase_step: float = 0.125, phase_width: float = 8.0) -> EstimateReport:
    """int int |T_phi f|^2 dx dxi = ||f||^2 ||phi||^2 on the real line."""
    window = window or gaussian_window(1)
    y = np.arange(-half_width, half_width + step / 2, step)
    axis = np.arange(-phase_width, phase_width + phase_step / 2, phase_step)
    if phase_width > np.pi / step:
        raise ConvergenceError("phase-space window exceeds the grid Nyquist limit")
    win = np.conj(window(y[:, None]))
    shifted = f((y[None, :] + axis[:, None])[..., None]) * win[None, :]
    phase = np.exp(-1j * np.outer(y, axis))
    T = shifted @ phase * step / np.sqrt(2 * np.pi)
    energy = float(np.sum(np.abs(T) ** 2) * phase_step ** 2)
    norms = float(np.sum(np.abs(f(y[:, None])) ** 2) * step * np.sum(np.abs(window(y[:, None])) ** 2) * step)
    err = abs(energy - norms)
    return EstimateReport(
        form="moyal",
        constants={"energy": energy, "norm_product": norms},
        max_violation=err,
        grid={"step": step, "half_width": half_width, "phase_step": phase_step, "phase_width": phase_width},
        passed=err <= 1e-6 * max(1.0, norms),
    )


# ---------------------------------------------------------------------------
# integral forms of the calculus


def _as_wick_evaluator(a: WickSymbol | Evaluator) -> Evaluator:
    if isinstance(a, WickSymbol):
        return a.evaluate
    if callable(a):
        return a
    raise MalformedInputError(f"expected a Wick symbol or an evaluator, got {type(a).__name__}")


def inverse_assignment_num(a: WickSymbol | Evaluator, points, dim: int | None = None,
                           config: CalculusConfig | None = None) -> np.ndarray:
    """Weyl symbol A(x, xi) at points x + i xi, from (2/pi)^d int a(z/sqrt2 - w, z/sqrt2 + w) e^(-2|w|^2) with z = x - i xi."""
    config = config or default_config()
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    d = dim or points.shape[-1]
    ev = _as_wick_evaluator(a)
    zc = np.conj(points) / np.sqrt(2)
    out = np.empty(len(points), dtype=complex)
    for sl in _chunks(len(points), 32):
        zs = zc[sl]

        def integrand(t):
            t = t[:, None, :] / np.sqrt(2)
            return ev(zs[None, :, :] - t, zs[None, :, :] + t)

        out[sl] = _complex_expectation(integrand, d, config, "inverse assignment")
    return out


def wick_apply_num(a: WickSymbol | Evaluator, F: WickSymbol | Evaluator, points,
                   config: CalculusConfig | None = None) -> np.ndarray:
    """Op_V(a)F(z) = int a(z, w) F(w) e^((z, w)) dmu(w)."""
    config = config or default_config()
    points = np.atleast_2d(np.asarray(points, dtype=complex))
    d = points.shape[-1]
    ev = _as_wick_evaluator(a)
    fv = F.evaluate if isinstance(F, WickSymbol) else F
    out = np.empty(len(points), dtype=complex)
    for sl in _chunks(len(points), 32):
        zs = points[sl]

        def integrand(t):
            w = t[:, None, :]
            return ev(zs[None, :, :], w) * fv(w) * np.exp(np.sum(zs[None, :, :] * np.conj(w), axis=-1))

        out[sl] = _complex_expectation(integrand, d, config, "Wick operator integral")
    return out


# ---------------------------------------------------------------------------
# growth certificates


def _pair_points(n: int, dim: int, radius: float) -> tuple[np.ndarray, np.ndarray]:
    v = box_points(n, 4 * dim, radius)
    z = real_to_complex(v[:, : 2 * dim], dim)
    w = real_to_complex(v[:, 2 * dim:], dim)
    diag = phase_points(max(1, n // 4), dim, radius, 0.25)
    return np.concatenate([z, diag]), np.concatenate([w, diag])


def _log_bound(form: str, z, w, weight: WeightSpec, N: float, rho: float, order: int, r1: float, r2: float, s: float):
    dz = np.sum(np.abs(z - w) ** 2, axis=-1)
    if form in ("shubin", "shubin-derivative"):
        out = 0.5 * dz + weight.log_eval(np.sqrt(2) * np.conj(z)) - N * np.log(japanese(z - w))
        if form == "shubin-derivative":
            out = out - rho * order * np.log(japanese(z + w))
        return out
    if form == "gevrey":
        if s <= 0:
            raise PreconditionError("the Gevrey template needs s > 0")
        plus = np.sqrt(np.sum(np.abs(z + w) ** 2, axis=-1)) ** (1.0 / s)
        minus = np.sqrt(dz) ** (1.0 / s)
        return 0.5 * dz + r1 * plus - r2 * minus
    raise MalformedInputError(f"unknown certificate form {form!r}")


def _slack(evaluators, form, z, w, weight, N, rho, r1, r2, s) -> np.ndarray:
    best = np.full(len(z), -np.inf)
    for order, ev in evaluators:
        with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
            vals = np.abs(ev(z, w))
            logs = np.where(np.isfinite(vals), np.log(vals), np.inf)
            best = np.maximum(best, logs - _log_bound(form, z, w, weight, N, rho, order, r1, r2, s))
    return best


def _certificate_constant(evaluators, form, dim, radius, n, weight, N, rho, r1, r2, s, polish: int = 4) -> float:
    z, w = _pair_points(n, dim, radius)
    slack = _slack(evaluators, form, z, w, weight, N, rho, r1, r2, s)
    if not np.all(slack < np.inf):
        return np.inf
    best = float(np.max(slack, initial=-np.inf))

    # local ascent from the best samples, clipped to the box
    def objective(v):
        v = np.clip(v, -radius, radius)
        zz = real_to_complex(v[: 2 * dim], dim)[None, :]
        ww = real_to_complex(v[2 * dim:], dim)[None, :]
        value = float(_slack(evaluators, form, zz, ww, weight, N, rho, r1, r2, s)[0])
        return -value if np.isfinite(value) else (-np.inf if value > 0 else np.inf)

    for i in np.argsort(slack)[::-1][:polish]:
        start = np.concatenate([complex_to_real(z[i]), complex_to_real(w[i])])
        res = scipy.optimize.minimize(objective, start, method="Nelder-Mead",
                                      options={"xatol": 1e-8, "fatol": 1e-12, "maxiter": 2000})
        best = max(best, -float(res.fun))
    return float(np.exp(best)) if best < 700 else np.inf


def growth_certificate(a: WickSymbol | Evaluator, form: str = "shubin", weight: WeightSpec | None = None,
                       rho: float = 1.0, N: float = 0.0, dim: int | None = None, r1: float = 0.0, r2: float = 0.0,
                       s: float = 1.0, config: CalculusConfig | None = None) -> EstimateReport:
    """Smallest C with |a(z, w)| <= C bound(z, w) on a box grid, stable under refinement.

    Forms: ``shubin`` e^(|z-w|^2/2) w(sqrt2 zbar) <z-w>^-N; ``shubin-derivative`` the same for every
    d_z^a dbar_w^b a with |a+b| <= hypo_max_order, times <z+w>^(-rho|a+b|) (polynomial a only);
    ``gevrey`` exp(|z-w|^2/2 + r1|z+w|^(1/s) - r2|z-w|^(1/s)).
    """
    config = config or default_config()
    weight = weight or WeightSpec.polynomial(0)
    if isinstance(a, WickSymbol):
        dim = a.dim
    if dim is None:
        raise MalformedInputError("growth_certificate needs the dimension for a plain evaluator")
    if form == "shubin-derivative":
        if not isinstance(a, WickSymbol):
            raise MalformedInputError("derivative certificates need a polynomial Wick symbol")
        evaluators = [(0, a.evaluate)]
        for k in range(1, config.hypo_max_order + 1):
            for split in range(k + 1):
                for alpha in multi_indices_of_order(dim, split):
                    for beta in multi_indices_of_order(dim, k - split):
                        der = a.diff_first(alpha).diff_second(beta)
                        if not der.is_zero():
                            evaluators.append((k, der.evaluate))
    else:
        evaluators = [(0, _as_wick_evaluator(a))]

    radius, n = config.cert_radius, config.cert_points
    fine_radius, fine_n = radius * config.cert_refine_factor, 4 * n
    coarse = _certificate_constant(evaluators, form, dim, radius, n, weight, N, rho, r1, r2, s)
    fine = _certificate_constant(evaluators, form, dim, fine_radius, fine_n, weight, N, rho, r1, r2, s)
    ratio = fine / coarse if np.isfinite(coarse) and coarse > 0 else np.inf
    passed = bool(np.isfinite(fine) and ratio < config.stability_ratio)
    PrintStyle.debug(f"growth_certificate({form}): C={coarse:.4g} -> {fine:.4g} (ratio {ratio:.4g})")
    return EstimateReport(
        form=form,
        constants={"C": fine, "C_coarse": coarse, "ratio": ratio},
        max_violation=max(0.0, ratio - config.stability_ratio) if np.isfinite(ratio) else np.inf,
        grid={"radius": radius, "points": n, "refined_radius": fine_radius, "refined_points": fine_n},
        passed=passed,
        meta={"weight": weight.to_json(), "rho": rho, "N": N, "r1": r1, "r2": r2, "s": s},
    )


# ---------------------------------------------------------------------------
# sharp Garding experiment


def _diagonal_nonnegative(a: WickSymbol, config: CalculusConfig) -> tuple[bool, float]:
    radii = np.linspace(0.0, config.grid_r_max, config.grid_radial + 1)
    sphere = sphere_points(a.dim, config.grid_angular)
    pts = (radii[:, None, None] * sphere[None, :, :]).reshape(-1, a.dim)
    values = quantize.berezin_diag(a).evaluate(pts)
    scale = max(1.0, float(np.max(np.abs(values))))
    worst = float(values.real.min())
    return worst >= -config.eig_tol * scale, worst


def _garding_point(a: WickSymbol, cutoff: int, config: CalculusConfig) -> dict[str, float]:
    n = fock.matrix_of(a, cutoff).to_float()
    herm = (n + n.conj().T) / 2
    skew = (n - n.conj().T) / 2
    lam = fock.min_eig_sym(fock.from_float(fock.FockBasis(a.dim, cutoff), herm), config.eig_tol, config.eig_max_iter)
    skew_norm = float(scipy.linalg.norm(skew, 2)) if skew.size else 0.0
    PrintStyle.debug(f"garding: D={cutoff} lambda_min={lam:.6g} skew_norm={skew_norm:.6g}")
    return {"cutoff": cutoff, "lambda_min": lam, "skew_norm": skew_norm}


async def _garding_sweep(a: WickSymbol, cutoffs: Sequence[int], config: CalculusConfig) -> list[dict[str, float]]:
    limiter = asyncio.Semaphore(max(1, config.workers))

    async def run(cutoff: int):
        async with limiter:
            return await asyncio.to_thread(_garding_point, a, cutoff, config)

    return list(await asyncio.gather(*(run(c) for c in cutoffs)))


def _spread(values: Sequence[float]) -> float:
    hi, lo = max(values), min(values)
    return (hi - lo) / max(abs(hi), abs(lo), 1.0)


def garding_experiment(a: PolySymbol, cutoffs: Sequence[int] | None = None, check_diagonal: bool = True,
                       config: CalculusConfig | None = None) -> EstimateReport:
    """lambda_min of the Hermitian part and ||skew part|| of matrix_of(a, D) for each cutoff D.

    Passes when both sequences are stable: spread over the last three cutoffs below ``spread_tol``.
    """
    config = config or default_config()
    cutoffs = sorted(cutoffs or config.garding_cutoffs)
    if isinstance(a, WeylSymbol):
        a = weyl_to_wick(a)
    elif isinstance(a, AWSymbol):
        a = antiwick_to_wick(a)
    if not isinstance(a, WickSymbol):
        raise MalformedInputError(f"garding_experiment needs a polynomial symbol, got {type(a).__name__}")
    if check_diagonal:
        ok, worst = _diagonal_nonnegative(a, config)
        if not ok:
            raise PreconditionError(f"Berezin diagonal is negative (Re a(w,w) reaches {worst:.4g}); the sharp Garding hypothesis fails")
    trace = asyncio.run(_garding_sweep(a, cutoffs, config))
    tail = trace[-3:]
    lam_spread = _spread([row["lambda_min"] for row in tail])
    skew_spread = _spread([row["skew_norm"] for row in tail])
    passed = lam_spread < config.spread_tol and skew_spread < config.spread_tol
    return EstimateReport(
        form="sharp-garding",
        constants={"lambda_min": min(row["lambda_min"] for row in trace), "skew_norm": max(row["skew_norm"] for row in trace),
                   "lambda_spread": lam_spread, "skew_spread": skew_spread},
        max_violation=max(lam_spread, skew_spread),
        grid={"cutoffs": list(cutoffs)},
        passed=passed,
        trace=trace,
        meta={"eig_tol": config.eig_tol, "eig_max_iter": config.eig_max_iter},
    )


# ---------------------------------------------------------------------------
# anti-Wick symbols by quadrature and their envelopes


def antiwick_symbol_num(a0: AWSymbol | Evaluator, z, w, nodes: int, dim: int | None = None) -> np.ndarray:
    """a0^aw(z, w) = pi^-d int a0(zeta) e^(-(zeta - z, zeta - w)) dlambda(zeta).

    Polynomial a0 uses the polarized form pi^-d int a0(z + t, wbar + tbar) e^(-|t|^2), exact at
    modest node counts; any other a0 is centred at m = (z + w)/2 with d = (z - w)/2:
    pi^-d e^(|d|^2) int a0(m + t) e^(-|t|^2) e^(-2i Im(t, d)).
    """
    z = np.atleast_2d(np.asarray(z, dtype=complex))
    w = np.atleast_2d(np.asarray(w, dtype=complex))
    d = dim or z.shape[-1]
    out = np.empty(len(z), dtype=complex)
    if isinstance(a0, AWSymbol):
        for sl in _chunks(len(z), 16):
            zs, ws = z[sl], w[sl]

            def polarized(t_nodes):
                t = real_to_complex(t_nodes, d)[:, None, :]
                return a0.evaluate_polarized(zs[None, :, :] + t, np.conj(ws[None, :, :] + t))

            out[sl] = gaussian_expectation(polarized, 2 * d, nodes)
        return out
    m = (z + w) / 2
    delta = (z - w) / 2
    for sl in _chunks(len(z), 16):
        ms, ds = m[sl], delta[sl]

        def centred(t_nodes):
            t = real_to_complex(t_nodes, d)[:, None, :]
            phase = np.exp(-2j * np.sum(t * np.conj(ds[None, :, :]), axis=-1).imag)
            return a0(ms[None, :, :] + t) * phase

        out[sl] = np.exp(np.sum(np.abs(ds) ** 2, axis=-1)) * gaussian_expectation(centred, 2 * d, nodes)
    return out


def _log_envelope(form: str, z, w, weight: WeightSpec, r: float, s: float) -> np.ndarray:
    quarter = 0.25 * np.sum(np.abs(z - w) ** 2, axis=-1)
    if form == "folland":
        if not 0 < r < 1:
            raise PreconditionError("the Folland envelope needs 0 < r < 1")
        r0 = 1.0 / (4.0 * (1.0 - r))
        return r0 * np.sum(np.abs(z + w) ** 2, axis=-1) - np.sum(z * np.conj(w), axis=-1).real
    if form == "omega":
        return quarter + weight.log_eval(z + w)
    if form in ("gs-decay", "gs-growth"):
        return quarter
    raise MalformedInputError(f"unknown anti-Wick envelope {form!r}")


def _fit_envelope(form: str, values, z, w, weight: WeightSpec, r: float, s: float, bins: int = 24) -> dict[str, float]:
    with np.errstate(divide="ignore"):
        y = np.log(np.abs(values)) - _log_envelope(form, z, w, weight, r, s)
    if form not in ("gs-decay", "gs-growth"):
        return {"C": float(np.exp(np.max(y)))}
    if s <= 0:
        raise PreconditionError("Gelfand-Shilov envelopes need s > 0")
    X = np.sqrt(np.sum(np.abs(z + w) ** 2, axis=-1)) ** (1.0 / s)
    finite = np.isfinite(y)
    X, y = X[finite], y[finite]
    edges = np.linspace(X.min(), X.max(), bins + 1)
    which = np.clip(np.digitize(X, edges) - 1, 0, bins - 1)
    bx, by = [], []
    for b in range(bins):
        sel = which == b
        if np.any(sel):
            top = np.argmax(y[sel])
            bx.append(X[sel][top])
            by.append(y[sel][top])
    slope, _ = np.polyfit(np.array(bx), np.array(by), 1)
    # decay form: y ~ log C - r X; growth form: y ~ log C + r X
    fitted_r = -float(slope) if form == "gs-decay" else float(slope)
    sign = 1.0 if form == "gs-decay" else -1.0
    log_c = float(np.max(y + sign * fitted_r * X))
    return {"C": float(np.exp(log_c)), "r": fitted_r}


def antiwick_bound_check(a0: AWSymbol | Evaluator, form: str = "omega", weight: WeightSpec | None = None,
                         r: float = 0.5, s: float = 1.0, dim: int | None = None,
                         config: CalculusConfig | None = None) -> EstimateReport:
    """Fit the envelope constants of a0^aw on a box grid; the fit must be stable when the nodes double."""
    config = config or default_config()
    weight = weight or WeightSpec.polynomial(0)
    if isinstance(a0, AWSymbol):
        dim = a0.dim
    if dim is None:
        raise MalformedInputError("antiwick_bound_check needs the dimension for a plain evaluator")
    if not isinstance(a0, AWSymbol) and dim != 1:
        raise MalformedInputError("non-polynomial anti-Wick symbols are supported for d = 1")
    z, w = _pair_points(config.bound_points, dim, config.bound_radius)
    n = axis_nodes(config.quad_nodes, 2 * dim, config.quad_max_points)
    coarse_vals = antiwick_symbol_num(a0, z, w, n, dim)
    fine_vals = antiwick_symbol_num(a0, z, w, 2 * n, dim)
    coarse = _fit_envelope(form, coarse_vals, z, w, weight, r, s)
    fine = _fit_envelope(form, fine_vals, z, w, weight, r, s)

    ratio = max(fine["C"], coarse["C"]) / max(min(fine["C"], coarse["C"]), np.finfo(float).tiny)
    if "r" in fine:
        r_ratio = abs(fine["r"] - coarse["r"]) / max(abs(fine["r"]), 1e-3)
        ratio = max(ratio, 1.0 + r_ratio)
    if not np.isfinite(ratio) or ratio > config.stability_ratio:
        raise ConvergenceError(f"anti-Wick envelope fit unstable between {n} and {2 * n} nodes (ratio {ratio:.4g})")
    passed = bool(np.isfinite(fine["C"]) and (form != "gs-decay" or fine["r"] > 0))
    constants = dict(fine)
    constants["node_ratio"] = ratio
    if isinstance(a0, AWSymbol):
        exact = antiwick_to_wick(a0).evaluate(z, w)
        constants["max_exact_error"] = float(np.max(np.abs(fine_vals - exact) / np.maximum(1.0, np.abs(exact))))
    return EstimateReport(
        form=form,
        constants=constants,
        max_violation=ratio - 1.0,
        grid={"radius": config.bound_radius, "points": int(len(z)), "nodes": [n, 2 * n]},
        passed=passed,
        meta={"weight": weight.to_json(), "r": r, "s": s,
              "path": "polarized" if isinstance(a0, AWSymbol) else "real-centred"},
    )


# ---------------------------------------------------------------------------
# polynomial detector


def _torus_coefficients(F: Evaluator, dim: int, radius: float, samples: int) -> tuple[np.ndarray, float]:
    """Cauchy coefficients c_a R^|a| on the torus |z_j| = R by the trapezoid rule (FFT)."""
    roots = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
    grids = np.meshgrid(*([roots] * dim), indexing="ij")
    pts = np.stack(grids, axis=-1)
    values = np.asarray(F(pts.reshape(-1, dim)), dtype=complex).reshape((samples,) * dim)
    if not np.all(np.isfinite(values)):
        raise NonAnalyticInputError(f"non-finite samples on the radius-{radius} torus")
    scaled = np.fft.fftn(values) / samples ** dim
    return scaled, float(np.max(np.abs(values)))


def polynomial_detector(F: Evaluator, dim: int, degree_cap: int, radii: Sequence[float] | None = None,
                        config: CalculusConfig | None = None) -> PolynomialReport:
    """Declare F a polynomial of degree <= degree_cap when every Cauchy coefficient beyond the cap is negligible.

    Negligible means |c_a| R^|a| / max_{torus} |F| below ``detector_tol`` on every radius of the ladder.
    """
    config = config or default_config()
    radii = sorted(radii or config.detector_radii)
    samples = config.detector_samples
    limit = samples // 2 - 1
    if degree_cap >= limit:
        raise PreconditionError(f"degree cap {degree_cap} needs more than {samples} circle samples")
    indices = [tuple(a) for a in multi_indices(dim, limit) if max(a, default=0) <= limit]
    per_radius = []
    for R in radii:
        scaled, peak = _torus_coefficients(F, dim, R, samples)
        if peak == 0:
            raise PreconditionError("the function vanishes on the sampled torus")
        per_radius.append((R, scaled, peak))

    # Cauchy coefficients of an analytic function do not depend on the radius
    ref_R, ref_scaled, _ = per_radius[len(per_radius) // 2]
    low = [a for a in indices if sum(a) <= min(degree_cap, 6)]
    for R, scaled, peak in per_radius:
        for a in low:
            k = sum(a)
            c_here = scaled[a] / R ** k
            c_ref = ref_scaled[a] / ref_R ** k
            if abs(c_here - c_ref) * R ** k / peak > 1e-6:
                raise NonAnalyticInputError(f"Cauchy coefficient {a} changes between radii {ref_R} and {R}")

    relative = {a: max(abs(scaled[a]) / peak for _, scaled, peak in per_radius) for a in indices}
    tails = [max((abs(scaled[a]) / peak for a in indices if sum(a) > degree_cap), default=0.0) for _, scaled, peak in per_radius]
    significant = [sum(a) for a in indices if relative[a] >= config.detector_tol]
    degree = max(significant, default=0)
    is_polynomial = degree <= degree_cap
    coefficients = {a: complex(ref_scaled[a] / ref_R ** sum(a)) for a in indices if sum(a) <= degree_cap and relative[a] >= config.detector_tol}
    PrintStyle.debug(f"polynomial_detector: degree={degree} cap={degree_cap} polynomial={is_polynomial}")
    return PolynomialReport(
        is_polynomial=is_polynomial,
        degree=degree if is_polynomial else None,
        coefficients=coefficients,
        radii=[float(R) for R in radii],
        tail_estimates=tails,
        meta={"samples": samples, "tol": config.detector_tol, "cap": degree_cap, "apparent_degree": degree},
    )


def detect_wick_polynomial(a: WickSymbol | Evaluator, dim: int, degree_cap: int,
                           radii: Sequence[float] | None = None, config: CalculusConfig | None = None) -> PolynomialReport:
    """Run the detector on (z, zeta) -> a(z, conj zeta), analytic in 2d variables."""
    ev = _as_wick_evaluator(a)

    def G(pts):
        return ev(pts[..., :dim], np.conj(pts[..., dim:]))

    return polynomial_detector(G, 2 * dim, degree_cap, radii, config)
