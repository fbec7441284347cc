"""Truncated Fock space with monomial basis e_a = z^a / sqrt(a!).

Exact data lives in the unnormalized monomial basis z^a (rational entries,
Gram weights a!); the sqrt(a!) factors are applied only when converting to
floating point, where the basis is orthonormal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Sequence

import numpy as np
import scipy.linalg

from python.calculus.symalg import (
    ZERO,
    ExactCoeff,
    MultiIndex,
    WickSymbol,
    mi_add,
    mi_factorial,
    mi_falling,
    mi_sub,
    multi_indices,
    rational,
)
from python.helpers.errors import ConvergenceError, MalformedInputError, PreconditionError, check_dim
from python.helpers.print_style import PrintStyle

NormalTerm = tuple[tuple[int, ...], tuple[int, ...], ExactCoeff]


class FockBasis:
    """Graded lexicographic index table for {a : |a| <= cutoff}."""

    def __init__(self, dim: int, cutoff: int):
        if dim < 1:
            raise MalformedInputError(f"dimension must be positive, got {dim}")
        if cutoff < 0:
            raise MalformedInputError(f"cutoff must be non-negative, got {cutoff}")
        self.dim = dim
        self.cutoff = cutoff
        self.indices: list[MultiIndex] = multi_indices(dim, cutoff)
        self.position: dict[tuple[int, ...], int] = {tuple(a): i for i, a in enumerate(self.indices)}

    @property
    def size(self) -> int:
        return len(self.indices)

    def __len__(self):
        return self.size

    def __eq__(self, other):
        return isinstance(other, FockBasis) and (self.dim, self.cutoff) == (other.dim, other.cutoff)

    def __hash__(self):
        return hash((self.dim, self.cutoff))

    @cached_property
    def factorials(self) -> list[int]:
        return [mi_factorial(a) for a in self.indices]

    @cached_property
    def degrees(self) -> np.ndarray:
        return np.array([a.order for a in self.indices], dtype=int)

    @cached_property
    def sqrt_factorials(self) -> np.ndarray:
        return np.array([math.sqrt(f) for f in self.factorials])

    def label(self, i: int) -> str:
        return "(" + " ".join(str(e) for e in self.indices[i]) + ")"


def _check_basis(a: FockBasis, b: FockBasis):
    if a != b:
        raise MalformedInputError(f"basis mismatch: (d={a.dim}, D={a.cutoff}) vs (d={b.dim}, D={b.cutoff})")


# ---------------------------------------------------------------------------
# vectors


@dataclass(frozen=True)
class FockVector:
    """Exact vectors hold monomial coefficients; floating vectors hold orthonormal coordinates."""

    basis: FockBasis
    entries: np.ndarray
    exact: bool = True

    def __post_init__(self):
        if len(self.entries) != self.basis.size:
            raise MalformedInputError(f"vector length {len(self.entries)} does not match basis size {self.basis.size}")

    @classmethod
    def from_polynomial(cls, F: WickSymbol, cutoff: int) -> "FockVector":
        if not F.is_analytic():
            raise MalformedInputError("Fock vectors are analytic polynomials; the symbol has wbar terms")
        basis = FockBasis(F.dim, cutoff)
        entries = np.array([ZERO] * basis.size, dtype=object)
        for (f, _), c in F:
            if sum(f) > cutoff:
                raise MalformedInputError(f"polynomial degree {sum(f)} exceeds cutoff {cutoff}")
            entries[basis.position[f]] = c
        return cls(basis, entries, exact=True)

    @classmethod
    def monomial(cls, basis: FockBasis, alpha: Sequence[int]) -> "FockVector":
        """The monomial z^a (not normalized)."""
        entries = np.array([ZERO] * basis.size, dtype=object)
        entries[basis.position[tuple(alpha)]] = ExactCoeff(1)
        return cls(basis, entries, exact=True)

    def to_polynomial(self) -> WickSymbol:
        if not self.exact:
            raise MalformedInputError("only exact vectors convert back to polynomials")
        zero = (0,) * self.basis.dim
        return WickSymbol(self.basis.dim, {(tuple(a), zero): c for a, c in zip(self.basis.indices, self.entries)})

    def to_float(self) -> np.ndarray:
        if not self.exact:
            return np.asarray(self.entries, dtype=complex)
        vals = np.array([c.to_complex() for c in self.entries], dtype=complex)
        return vals * self.basis.sqrt_factorials


# ---------------------------------------------------------------------------
# matrices


@dataclass(frozen=True)
class FockMatrix:
    """Square matrix of a truncated operator; rows/columns follow ``basis.indices``."""

    basis: FockBasis
    entries: np.ndarray
    exact: bool = True
    meta: dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        n = self.basis.size
        if self.entries.shape != (n, n):
            raise MalformedInputError(f"matrix shape {self.entries.shape} does not match basis size {n}")

    @property
    def size(self) -> int:
        return self.basis.size

    def nonzero(self) -> Iterable[tuple[int, int, Any]]:
        n = self.size
        for r in range(n):
            for c in range(n):
                v = self.entries[r, c]
                if (v if self.exact else v != 0):
                    yield r, c, v

    @cached_property
    def band(self) -> int:
        deg = self.basis.degrees
        return max((abs(int(deg[r]) - int(deg[c])) for r, c, _ in self.nonzero()), default=0)

    def to_float(self) -> np.ndarray:
        """Orthonormal-basis complex matrix N[b, a] = M[b, a] sqrt(b!/a!)."""
        if not self.exact:
            return np.asarray(self.entries, dtype=complex)
        out = np.zeros((self.size, self.size), dtype=complex)
        s = self.basis.sqrt_factorials
        for r, c, v in self.nonzero():
            out[r, c] = v.to_complex() * (s[r] / s[c])
        return out

    def as_float(self) -> "FockMatrix":
        return FockMatrix(self.basis, self.to_float(), exact=False, meta=dict(self.meta))

    def adjoint(self) -> "FockMatrix":
        if not self.exact:
            return FockMatrix(self.basis, np.conj(self.entries).T, exact=False)
        fact = self.basis.factorials
        out = _zeros(self.size)
        # Gram matrix diag(a!): M*[b, a] = conj(M[a, b]) a!/b!
        for r, c, v in self.nonzero():
            out[c, r] = v.conj() * ExactCoeff(fact[r]) / ExactCoeff(fact[c])
        return FockMatrix(self.basis, out, exact=True)

    def _combine(self, other: "FockMatrix", sign: int) -> "FockMatrix":
        _check_basis(self.basis, other.basis)
        if self.exact and other.exact:
            out = self.entries.copy()
            for r, c, v in other.nonzero():
                out[r, c] = out[r, c] + v if sign > 0 else out[r, c] - v
            return FockMatrix(self.basis, out, exact=True)
        return FockMatrix(self.basis, self.to_float() + sign * other.to_float(), exact=False)

    def __add__(self, other: "FockMatrix") -> "FockMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "FockMatrix") -> "FockMatrix":
        return self._combine(other, -1)

    def scale(self, c: Any) -> "FockMatrix":
        if self.exact:
            c = ExactCoeff.coerce(c)
            out = _zeros(self.size)
            for r, col, v in self.nonzero():
                out[r, col] = v * c
            return FockMatrix(self.basis, out, exact=True)
        return FockMatrix(self.basis, self.entries * complex(c), exact=False)

    def __matmul__(self, other: "FockMatrix") -> "FockMatrix":
        _check_basis(self.basis, other.basis)
        if not (self.exact and other.exact):
            return FockMatrix(self.basis, self.to_float() @ other.to_float(), exact=False)
        rows: dict[int, list[tuple[int, ExactCoeff]]] = {}
        for r, c, v in other.nonzero():
            rows.setdefault(r, []).append((c, v))
        out = _zeros(self.size)
        for r, k, v in self.nonzero():
            for c, w in rows.get(k, ()):
                out[r, c] = out[r, c] + v * w
        return FockMatrix(self.basis, out, exact=True)

    def apply(self, F: FockVector) -> FockVector:
        _check_basis(self.basis, F.basis)
        if self.exact and F.exact:
            out = np.array([ZERO] * self.size, dtype=object)
            for r, c, v in self.nonzero():
                if F.entries[c]:
                    out[r] = out[r] + v * F.entries[c]
            return FockVector(self.basis, out, exact=True)
        return FockVector(self.basis, self.to_float() @ F.to_float(), exact=False)

    def block(self, max_degree: int) -> np.ndarray:
        """Top-left block of rows/columns with |a| <= max_degree."""
        n = int(np.sum(self.basis.degrees <= max_degree))
        return self.entries[:n, :n]

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        if self.exact:
            adj = self.adjoint()
            return all(self.entries[r, c] == adj.entries[r, c] for r in range(self.size) for c in range(self.size))
        n = self.to_float()
        return float(np.max(np.abs(n - n.conj().T), initial=0.0)) <= tol * max(1.0, float(np.max(np.abs(n), initial=0.0)))

    def __eq__(self, other):
        if not isinstance(other, FockMatrix) or self.basis != other.basis:
            return NotImplemented
        if self.exact and other.exact:
            return all(self.entries[r, c] == other.entries[r, c] for r in range(self.size) for c in range(self.size))
        return bool(np.array_equal(self.to_float(), other.to_float()))


def _zeros(n: int) -> np.ndarray:
    out = np.empty((n, n), dtype=object)
    out.fill(ZERO)
    return out


def identity(basis: FockBasis) -> FockMatrix:
    out = _zeros(basis.size)
    for i in range(basis.size):
        out[i, i] = ExactCoeff(1)
    return FockMatrix(basis, out, exact=True)


def from_float(basis: FockBasis, entries) -> FockMatrix:
    entries = np.asarray(entries, dtype=complex)
    return FockMatrix(basis, entries, exact=False)


# ---------------------------------------------------------------------------
# operations


def normal_terms(op: Any) -> tuple[int, list[NormalTerm]]:
    """(dim, [(b, g, c)]) from a WickSymbol or anything carrying ``dim`` and ``terms``."""
    if isinstance(op, WickSymbol):
        return op.dim, [(f, s, c) for (f, s), c in op]
    dim = getattr(op, "dim", None)
    terms = getattr(op, "terms", op)
    out = [(tuple(b), tuple(g), ExactCoeff.coerce(c)) for b, g, c in terms]
    if dim is None:
        if not out:
            raise MalformedInputError("cannot infer the dimension of an empty operator")
        dim = len(out[0][0])
    return dim, out


def apply_normal_ordered(term: NormalTerm, F: WickSymbol | FockVector):
    """coeff * z^b d^g applied to an analytic polynomial or an exact Fock vector."""
    beta, gamma, coeff = tuple(term[0]), tuple(term[1]), ExactCoeff.coerce(term[2])
    if isinstance(F, FockVector):
        if not F.exact:
            raise MalformedInputError("apply_normal_ordered works on exact vectors")
        check_dim(F.basis.dim, len(beta))
        image = apply_normal_ordered((beta, gamma, coeff), F.to_polynomial())
        basis = F.basis
        out = np.array([ZERO] * basis.size, dtype=object)
        for (f, _), c in image:
            # components beyond the cutoff are projected away
            if sum(f) <= basis.cutoff:
                out[basis.position[f]] = c
        return FockVector(basis, out, exact=True)
    check_dim(F.dim, len(beta))
    if not F.is_analytic():
        raise MalformedInputError("apply_normal_ordered acts on analytic polynomials (no wbar terms)")
    zero = (0,) * F.dim
    out = {}
    for (f, _), c in F:
        k = mi_falling(f, gamma)
        if k:
            out[(mi_add(mi_sub(f, gamma), beta), zero)] = c * coeff * k
    return WickSymbol(F.dim, out)


def apply_operator(op: Any, F: WickSymbol) -> WickSymbol:
    dim, terms = normal_terms(op)
    out = WickSymbol.zero(F.dim)
    for term in terms:
        out = out + apply_normal_ordered(term, F)
    return out


def matrix_of(op: Any, cutoff: int) -> FockMatrix:
    """Exact matrix M[b, a] = coefficient of z^b in Op z^a, |a|, |b| <= cutoff."""
    dim, terms = normal_terms(op)
    basis = FockBasis(dim, cutoff)
    out = _zeros(basis.size)
    for col, alpha in enumerate(basis.indices):
        for beta, gamma, coeff in terms:
            k = mi_falling(alpha, gamma)
            if not k:
                continue
            image = mi_add(mi_sub(alpha, gamma), beta)
            row = basis.position.get(image)
            if row is None:
                continue
            out[row, col] = out[row, col] + coeff * k
    if basis.size > 500:
        PrintStyle.debug(f"Built exact {basis.size}x{basis.size} Fock matrix (d={dim}, D={cutoff})")
    return FockMatrix(basis, out, exact=True)


def hermitian_split(M: FockMatrix) -> tuple[FockMatrix, FockMatrix]:
    """M = H + S with H = (M + M*)/2 self-adjoint and S = (M - M*)/2 skew-adjoint."""
    adj = M.adjoint()
    half = rational(1, 2) if M.exact else 0.5
    return (M + adj).scale(half), (M - adj).scale(half)


def min_eig_sym(H: FockMatrix, tol: float = 1e-10, max_iter: int = 10_000) -> float:
    n = H.to_float()
    scale = max(1.0, float(np.max(np.abs(n), initial=0.0)))
    asym = float(np.max(np.abs(n - n.conj().T), initial=0.0))
    if asym > tol * scale:
        raise PreconditionError(f"matrix is not self-adjoint: max |H - H*| = {asym:.3e} exceeds {tol:.1e}")
    if n.size == 0:
        raise PreconditionError("empty matrix has no eigenvalues")
    try:
        # LAPACK's symmetric driver converges well within max_iter sweeps at desk sizes
        values = scipy.linalg.eigvalsh((n + n.conj().T) / 2, subset_by_index=[0, 0])
    except (np.linalg.LinAlgError, scipy.linalg.LinAlgError) as e:
        raise ConvergenceError(f"symmetric eigensolver failed (max_iter={max_iter}): {e}") from e
    return float(values[0])


def operator_norm(M: FockMatrix) -> float:
    return float(scipy.linalg.norm(M.to_float(), 2)) if M.size else 0.0


def inner(F: FockVector, G: FockVector):
    """<F, G> in the Fock space; exact vectors use the Gram weights a!."""
    _check_basis(F.basis, G.basis)
    if F.exact and G.exact:
        out = ZERO
        for f, g, fact in zip(F.entries, G.entries, F.basis.factorials):
            if f and g:
                out = out + f * g.conj() * fact
        return out
    return complex(np.vdot(G.to_float(), F.to_float()))


def quadratic_form(M: FockMatrix, F: FockVector):
    return inner(M.apply(F), F)


def harmonic_spectrum(dim: int, cutoff: int) -> np.ndarray:
    """Eigenvalues 2|a| + d of the harmonic oscillator on the Fock basis."""
    basis = FockBasis(dim, cutoff)
    return 2 * basis.degrees + dim


def to_csv(M: FockMatrix) -> str:
    """Orthonormal-basis dump: header of multi-indices, entries as re+imi with 17 significant digits."""
    basis = M.basis
    n = M.to_float()
    lines = ["row," + ",".join(basis.label(i) for i in range(basis.size))]
    for r in range(basis.size):
        cells = [_complex_text(v) for v in n[r]]
        lines.append(basis.label(r) + "," + ",".join(cells))
    return "\n".join(lines) + "\n"


def _complex_text(v: complex) -> str:
    re, im = float(v.real) + 0.0, float(v.imag) + 0.0
    return f"{re:.17g}{im:+.17g}i"
