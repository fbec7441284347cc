"""Wick and anti-Wick quantization of polynomial symbols."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Mapping

import numpy as np

from python.calculus import fock
from python.calculus.symalg import (
    AWSymbol,
    ExactCoeff,
    Key,
    WickSymbol,
    gaussian_moment,
    mi_add,
    mi_binomial,
    mi_factorial,
    mi_min,
    mi_sub,
    sub_indices,
    symbol_from_json,
)
from python.helpers.errors import MalformedInputError, check_dim


@dataclass(frozen=True)
class NormalOrderedOp:
    """sum c z^b d^g, in bijection with the Wick symbol sum c z^b wbar^g."""

    dim: int
    terms: tuple[tuple[tuple[int, ...], tuple[int, ...], ExactCoeff], ...]

    @classmethod
    def from_wick(cls, a: WickSymbol) -> "NormalOrderedOp":
        return cls(a.dim, tuple((f, s, c) for (f, s), c in a))

    def to_wick(self) -> WickSymbol:
        terms: dict[Key, ExactCoeff] = {}
        for b, g, c in self.terms:
            key = (b, g)
            terms[key] = terms[key] + c if key in terms else c
        return WickSymbol(self.dim, terms)

    def __add__(self, other: "NormalOrderedOp") -> "NormalOrderedOp":
        check_dim(self.dim, other.dim)
        return NormalOrderedOp.from_wick(self.to_wick() + other.to_wick())

    def scale(self, c: Any) -> "NormalOrderedOp":
        return NormalOrderedOp.from_wick(self.to_wick().scale(c))

    def apply(self, F: WickSymbol) -> WickSymbol:
        return fock.apply_operator(self, F)

    def matrix(self, cutoff: int) -> fock.FockMatrix:
        return fock.matrix_of(self, cutoff)

    def to_json(self) -> dict[str, Any]:
        data = self.to_wick().to_json()
        data["kind"] = "nops"
        return data

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "NormalOrderedOp":
        if data.get("kind") != "nops":
            raise MalformedInputError(f"expected a nops operator, got {data.get('kind')!r}")
        return cls.from_wick(symbol_from_json({**data, "kind": "wick"}))  # type: ignore[arg-type]

    def __str__(self):
        parts = []
        for b, g, c in self.terms:
            factors = [f"z{j + 1}^{e}" for j, e in enumerate(b) if e] + [f"d{j + 1}^{e}" for j, e in enumerate(g) if e]
            parts.append(f"({c})" + ("*" + "*".join(factors) if factors else ""))
        return " + ".join(parts) if parts else "0"


def wick_quantize(a: WickSymbol) -> NormalOrderedOp:
    if not isinstance(a, WickSymbol):
        raise MalformedInputError(f"wick_quantize needs a Wick symbol, got {type(a).__name__}")
    return NormalOrderedOp.from_wick(a)


def antiwick_quantize(a0: AWSymbol) -> NormalOrderedOp:
    """Anti-normal order d^g z^b commuted into normal order by Leibniz' rule."""
    if not isinstance(a0, AWSymbol):
        raise MalformedInputError(f"antiwick_quantize needs an anti-Wick symbol, got {type(a0).__name__}")
    terms: dict[Key, ExactCoeff] = {}
    for (b, g), c in a0:
        for k in sub_indices(mi_min(b, g)):
            # C(g, k) b!/(b-k)! = k! C(b, k) C(g, k)
            weight = mi_factorial(k) * mi_binomial(b, k) * mi_binomial(g, k)
            key = (mi_sub(b, k), mi_sub(g, k))
            val = c * weight
            terms[key] = terms[key] + val if key in terms else val
    return NormalOrderedOp.from_wick(WickSymbol(a0.dim, terms))


@dataclass(frozen=True)
class KernelValue:
    value: complex | np.ndarray
    saturated: bool

    def __complex__(self):
        return complex(self.value)


def kernel_eval(a: WickSymbol, z, w, clamp: float = 700.0) -> KernelValue:
    """K(z, w) = a(z, w) e^{(z, w)}; the exponent is clamped to +-clamp and saturation reported."""
    z = np.asarray(z, dtype=complex)
    w = np.asarray(w, dtype=complex)
    exponent = np.sum(z * np.conj(w), axis=-1)
    saturated = bool(np.any(np.abs(exponent.real) > clamp))
    clipped = np.clip(exponent.real, -clamp, clamp) + 1j * exponent.imag
    value = a.evaluate(z, w) * np.exp(clipped)
    return KernelValue(complex(value) if np.ndim(value) == 0 else value, saturated)


def berezin_diag(a: WickSymbol) -> AWSymbol:
    """z -> w: the diagonal restriction a(w, w)."""
    return AWSymbol(a.dim, dict(a.terms))


def toeplitz_matrix(a0: AWSymbol, cutoff: int) -> fock.FockMatrix:
    """Moment-integral matrix of the anti-Wick operator.

    <T z^a, z^b> = int a0 z^a conj(z^b) dmu, divided by the Gram weight b!
    to land in monomial coordinates.
    """
    basis = fock.FockBasis(a0.dim, cutoff)
    out = fock._zeros(basis.size)
    for col, alpha in enumerate(basis.indices):
        for row, beta in enumerate(basis.indices):
            acc = None
            for (b, g), c in a0:
                m = gaussian_moment(mi_add(alpha, b), mi_add(beta, g), 1)
                if m:
                    acc = c * m if acc is None else acc + c * m
            if acc is not None:
                out[row, col] = acc / basis.factorials[row]
    return fock.FockMatrix(basis, out, exact=True)
