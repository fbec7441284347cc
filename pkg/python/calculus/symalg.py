"""Exact multi-index and polynomial-symbol arithmetic over Q(i)[sqrt 2].

Three polynomial kinds share one representation, a mapping
``(first, second) -> ExactCoeff`` of multi-index pairs:

* ``WickSymbol``   a(z, w)   = sum c z^b wbar^g   (analytic in z, conjugate analytic in w)
* ``WeylSymbol``   A(x, xi)  = sum c x^b xi^g     (real phase space)
* ``AWSymbol``     a0(w)     = sum c w^b wbar^g   (anti-Wick / Toeplitz symbols)

Terms are stored in graded lexicographic order and never hold zero coefficients.
"""

from __future__ import annotations

import itertools
import math
from functools import lru_cache
from types import MappingProxyType
from typing import Any, Callable, Iterable, Mapping, Sequence

import numpy as np
import sympy
from sympy.polys.domains import QQ

from python.helpers.errors import DimensionMismatchError, InternalInvariantError, MalformedInputError, check_dim

Key = tuple[tuple[int, ...], tuple[int, ...]]


# ---------------------------------------------------------------------------
# multi-indices


class MultiIndex(tuple):
    """Tuple of non-negative integers with |a| and a! helpers."""

    def __new__(cls, entries: Iterable[int]):
        entries = tuple(int(e) for e in entries)
        if any(e < 0 for e in entries):
            raise MalformedInputError(f"multi-index entries must be non-negative: {entries}")
        return super().__new__(cls, entries)

    @property
    def order(self) -> int:
        return sum(self)

    def factorial(self) -> int:
        return mi_factorial(self)

    def __add__(self, other):  # type: ignore[override]
        return MultiIndex(mi_add(self, other))

    def __sub__(self, other):
        return MultiIndex(mi_sub(self, other))

    def __le__(self, other):  # type: ignore[override]
        return mi_le(self, other)

    @staticmethod
    def zero(dim: int) -> "MultiIndex":
        return MultiIndex((0,) * dim)

    @staticmethod
    def unit(dim: int, j: int) -> "MultiIndex":
        return MultiIndex(tuple(1 if k == j else 0 for k in range(dim)))


def mi_add(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(x - y for x, y in zip(a, b))


def mi_le(a: Sequence[int], b: Sequence[int]) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mi_min(a: Sequence[int], b: Sequence[int]) -> tuple[int, ...]:
    return tuple(min(x, y) for x, y in zip(a, b))


@lru_cache(maxsize=None)
def _factorial(n: int) -> int:
    return math.factorial(n)


def mi_factorial(a: Sequence[int]) -> int:
    out = 1
    for x in a:
        out *= _factorial(x)
    return out


def mi_binomial(a: Sequence[int], b: Sequence[int]) -> int:
    out = 1
    for x, y in zip(a, b):
        out *= math.comb(x, y)
    return out


def mi_falling(a: Sequence[int], k: Sequence[int]) -> int:
    """a!/(a-k)! per coordinate (zero when k is not below a)."""
    out = 1
    for x, y in zip(a, k):
        if y > x:
            return 0
        out *= math.perm(x, y)
    return out


def graded_lex_key(a: Sequence[int]) -> tuple:
    return (sum(a), tuple(a))


def multi_indices(dim: int, max_order: int) -> list[MultiIndex]:
    """All a in N^dim with |a| <= max_order, graded lexicographic."""
    out = []
    for order in range(max_order + 1):
        out.extend(multi_indices_of_order(dim, order))
    return out


def multi_indices_of_order(dim: int, order: int) -> list[MultiIndex]:
    if dim == 0:
        return [MultiIndex(())] if order == 0 else []
    found = []
    for combo in itertools.combinations_with_replacement(range(dim), order):
        entries = [0] * dim
        for j in combo:
            entries[j] += 1
        found.append(tuple(entries))
    return [MultiIndex(e) for e in sorted(set(found))]


def sub_indices(a: Sequence[int]) -> Iterable[tuple[int, ...]]:
    return itertools.product(*(range(x + 1) for x in a))


# ---------------------------------------------------------------------------
# coefficients


def to_qq(value: Any):
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            return QQ(int(num), int(den))
        return QQ(int(text))
    if isinstance(value, bool):
        return QQ(int(value))
    if isinstance(value, int):
        return QQ(value)
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return QQ(int(value.numerator), int(value.denominator))
    raise MalformedInputError(f"cannot read {value!r} as an exact rational")


def _qq_text(q) -> str:
    return f"{int(q.numerator)}/{int(q.denominator)}"


class ExactCoeff:
    """p + q*sqrt(2) with p, q Gaussian rationals."""

    __slots__ = ("re", "im", "re_s2", "im_s2")

    def __init__(self, re=0, im=0, re_s2=0, im_s2=0):
        self.re = to_qq(re)
        self.im = to_qq(im)
        self.re_s2 = to_qq(re_s2)
        self.im_s2 = to_qq(im_s2)

    @classmethod
    def _raw(cls, re, im, re_s2, im_s2) -> "ExactCoeff":
        obj = object.__new__(cls)
        obj.re, obj.im, obj.re_s2, obj.im_s2 = re, im, re_s2, im_s2
        return obj

    @classmethod
    def coerce(cls, value: Any) -> "ExactCoeff":
        if isinstance(value, ExactCoeff):
            return value
        if isinstance(value, complex):
            raise MalformedInputError("floating complex values cannot be coerced to exact coefficients")
        return cls(value)

    # field structure

    def is_zero(self) -> bool:
        return not (self.re or self.im or self.re_s2 or self.im_s2)

    def __bool__(self):
        return not self.is_zero()

    def is_gaussian(self) -> bool:
        return not (self.re_s2 or self.im_s2)

    def __eq__(self, other):
        if not isinstance(other, ExactCoeff):
            try:
                other = ExactCoeff.coerce(other)
            except (MalformedInputError, TypeError):
                return NotImplemented
        return (self.re, self.im, self.re_s2, self.im_s2) == (other.re, other.im, other.re_s2, other.im_s2)

    def __hash__(self):
        return hash((self.re, self.im, self.re_s2, self.im_s2))

    def __neg__(self):
        return ExactCoeff._raw(-self.re, -self.im, -self.re_s2, -self.im_s2)

    def __add__(self, other):
        other = ExactCoeff.coerce(other)
        return ExactCoeff._raw(self.re + other.re, self.im + other.im, self.re_s2 + other.re_s2, self.im_s2 + other.im_s2)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-ExactCoeff.coerce(other))

    def __rsub__(self, other):
        return ExactCoeff.coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, int):
            q = QQ(other)
            return ExactCoeff._raw(self.re * q, self.im * q, self.re_s2 * q, self.im_s2 * q)
        other = ExactCoeff.coerce(other)
        a, b, c, d = self.re, self.im, self.re_s2, self.im_s2
        e, f, g, h = other.re, other.im, other.re_s2, other.im_s2
        # (a+bi + (c+di)s)(e+fi + (g+hi)s) with s^2 = 2
        re = a * e - b * f
        im = a * f + b * e
        re_s2 = im_s2 = QQ.zero
        if c or d:
            if g or h:
                re += 2 * (c * g - d * h)
                im += 2 * (c * h + d * g)
            re_s2 += c * e - d * f
            im_s2 += c * f + d * e
        if g or h:
            re_s2 += a * g - b * h
            im_s2 += a * h + b * g
        return ExactCoeff._raw(re, im, re_s2, im_s2)

    __rmul__ = __mul__

    def conj(self) -> "ExactCoeff":
        return ExactCoeff._raw(self.re, -self.im, self.re_s2, -self.im_s2)

    def inverse(self) -> "ExactCoeff":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero coefficient")
        a, b, c, d = self.re, self.im, self.re_s2, self.im_s2
        # 1/(p + q s) = (p - q s)/(p^2 - 2 q^2), and p^2 - 2q^2 != 0 since sqrt 2 is not in Q(i)
        nr = a * a - b * b - 2 * (c * c - d * d)
        ni = 2 * a * b - 4 * c * d
        norm = nr * nr + ni * ni
        ir, ii = nr / norm, -ni / norm
        return ExactCoeff._raw(a * ir - b * ii, a * ii + b * ir, -(c * ir - d * ii), -(c * ii + d * ir))

    def __truediv__(self, other):
        return self * ExactCoeff.coerce(other).inverse()

    def __rtruediv__(self, other):
        return ExactCoeff.coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = ONE
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def to_complex(self) -> complex:
        s = math.sqrt(2.0)
        return complex(float(self.re) + s * float(self.re_s2), float(self.im) + s * float(self.im_s2))

    def to_sympy(self) -> sympy.Expr:
        def r(q):
            return sympy.Rational(int(q.numerator), int(q.denominator))

        return r(self.re) + sympy.I * r(self.im) + sympy.sqrt(2) * (r(self.re_s2) + sympy.I * r(self.im_s2))

    def to_json(self) -> dict[str, str]:
        return {
            "re": _qq_text(self.re),
            "im": _qq_text(self.im),
            "re_s2": _qq_text(self.re_s2),
            "im_s2": _qq_text(self.im_s2),
        }

    @classmethod
    def from_json(cls, data: Mapping[str, Any]) -> "ExactCoeff":
        try:
            return cls(data.get("re", 0), data.get("im", 0), data.get("re_s2", 0), data.get("im_s2", 0))
        except (ValueError, ZeroDivisionError) as e:
            raise MalformedInputError(f"bad coefficient {dict(data)!r}: {e}") from e

    def __repr__(self):
        return f"ExactCoeff({self})"

    def __str__(self):
        return str(sympy.nsimplify(self.to_sympy()))


ZERO = ExactCoeff(0)
ONE = ExactCoeff(1)
I = ExactCoeff(0, 1)
SQRT2 = ExactCoeff(0, 0, 1)
INV_SQRT2 = ExactCoeff(0, 0, QQ(1, 2))


def rational(num: int, den: int = 1) -> ExactCoeff:
    return ExactCoeff(QQ(num, den))


# ---------------------------------------------------------------------------
# polynomials


def _term_sort_key(key: Key):
    first, second = key
    return (sum(first) + sum(second), first + second)


class PolySymbol:
    """Common base: immutable sparse polynomial in two blocks of ``dim`` variables."""

    KIND = ""
    VARS = ("u", "v")

    __slots__ = ("dim", "_terms", "_numeric")

    def __init__(self, dim: int, terms: Mapping[Key, Any] | None = None):
        if dim < 1:
            raise MalformedInputError(f"dimension must be positive, got {dim}")
        self.dim = dim
        clean: dict[Key, ExactCoeff] = {}
        for (first, second), c in (terms or {}).items():
            first, second = tuple(first), tuple(second)
            if len(first) != dim or len(second) != dim:
                raise DimensionMismatchError(dim, (len(first), len(second)), "multi-index length")
            if any(e < 0 for e in first + second):
                raise MalformedInputError(f"negative exponent in term {(first, second)}")
            c = ExactCoeff.coerce(c)
            if c.is_zero():
                continue
            key = (first, second)
            prev = clean.get(key)
            clean[key] = c if prev is None else prev + c
            if clean[key].is_zero():
                del clean[key]
        self._terms = MappingProxyType({k: clean[k] for k in sorted(clean, key=_term_sort_key)})
        self._numeric = None

    # constructors

    @classmethod
    def zero(cls, dim: int):
        return cls(dim, {})

    @classmethod
    def constant(cls, dim: int, c: Any = 1):
        z = (0,) * dim
        return cls(dim, {(z, z): c})

    @classmethod
    def monomial(cls, dim: int, first: Sequence[int], second: Sequence[int], c: Any = 1):
        return cls(dim, {(tuple(first), tuple(second)): c})

    @classmethod
    def first_var(cls, dim: int, j: int, c: Any = 1):
        return cls.monomial(dim, MultiIndex.unit(dim, j), MultiIndex.zero(dim), c)

    @classmethod
    def second_var(cls, dim: int, j: int, c: Any = 1):
        return cls.monomial(dim, MultiIndex.zero(dim), MultiIndex.unit(dim, j), c)

    def _new(self, terms: Mapping[Key, Any], cls=None):
        return (cls or type(self))(self.dim, terms)

    # inspection

    @property
    def terms(self) -> Mapping[Key, ExactCoeff]:
        return self._terms

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def coeff(self, first: Sequence[int], second: Sequence[int]) -> ExactCoeff:
        return self._terms.get((tuple(first), tuple(second)), ZERO)

    @property
    def degree(self) -> int:
        return max((sum(f) + sum(s) for f, s in self._terms), default=-1)

    @property
    def deg_first(self) -> int:
        return max((sum(f) for f, _ in self._terms), default=-1)

    @property
    def deg_second(self) -> int:
        return max((sum(s) for _, s in self._terms), default=-1)

    def homogeneous_part(self, k: int):
        return self._new({key: c for key, c in self if sum(key[0]) + sum(key[1]) == k})

    def top_degree_part(self):
        return self.homogeneous_part(self.degree)

    def is_homogeneous(self) -> bool:
        return len({sum(f) + sum(s) for f, s in self._terms}) <= 1

    def max_coeff_norm(self) -> float:
        return max((abs(c.to_complex()) for c in self._terms.values()), default=0.0)

    def __eq__(self, other):
        if not isinstance(other, PolySymbol):
            return NotImplemented
        return type(self) is type(other) and self.dim == other.dim and dict(self._terms) == dict(other._terms)

    def __hash__(self):
        return hash((self.KIND, self.dim, tuple(self._terms.items())))

    # ring operations

    def _check(self, other: "PolySymbol"):
        if type(other) is not type(self):
            raise MalformedInputError(f"cannot combine {self.KIND} and {other.KIND} symbols")
        check_dim(self.dim, other.dim)

    def __add__(self, other):
        if not isinstance(other, PolySymbol):
            other = self.constant(self.dim, other)
        self._check(other)
        terms = dict(self._terms)
        for key, c in other:
            terms[key] = terms[key] + c if key in terms else c
        return self._new(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._new({key: -c for key, c in self})

    def __sub__(self, other):
        if not isinstance(other, PolySymbol):
            other = self.constant(self.dim, other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c: Any):
        c = ExactCoeff.coerce(c)
        if c.is_zero():
            return self.zero(self.dim)
        return self._new({key: v * c for key, v in self})

    def __mul__(self, other):
        if not isinstance(other, PolySymbol):
            return self.scale(other)
        self._check(other)
        out: dict[Key, ExactCoeff] = {}
        for (f1, s1), c1 in self:
            for (f2, s2), c2 in other:
                key = (mi_add(f1, f2), mi_add(s1, s2))
                prod = c1 * c2
                out[key] = out[key] + prod if key in out else prod
        return self._new(out)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        out = self.constant(self.dim, 1)
        for _ in range(n):
            out = out * self
        return out

    # calculus

    def diff_first(self, alpha: Sequence[int]):
        """Derivative of order alpha in the first block of variables."""
        alpha = tuple(alpha)
        check_dim(self.dim, len(alpha), "multi-index length")
        out = {}
        for (f, s), c in self:
            k = mi_falling(f, alpha)
            if k:
                out[(mi_sub(f, alpha), s)] = c * k
        return self._new(out)

    def diff_second(self, gamma: Sequence[int]):
        """Derivative of order gamma in the second block of variables."""
        gamma = tuple(gamma)
        check_dim(self.dim, len(gamma), "multi-index length")
        out = {}
        for (f, s), c in self:
            k = mi_falling(s, gamma)
            if k:
                out[(f, mi_sub(s, gamma))] = c * k
        return self._new(out)

    # the z / wbar names used throughout the calculus
    def diff_z(self, beta: Sequence[int]):
        return self.diff_first(beta)

    def diff_wbar(self, gamma: Sequence[int]):
        return self.diff_second(gamma)

    def conj(self):
        raise NotImplementedError

    def substitute_linear(self, matrix: Sequence[Sequence[Any]], target: type | None = None):
        """Exact linear change of variables.

        ``matrix`` has one row per old variable (first block then second block)
        and one column per new variable; old_k = sum_l matrix[k][l] new_l.
        """
        target = target or type(self)
        n_old = 2 * self.dim
        if len(matrix) != n_old:
            raise DimensionMismatchError(n_old, len(matrix), "substitution rows")
        n_new = len(matrix[0]) if matrix else 0
        if n_new % 2 or any(len(row) != n_new for row in matrix):
            raise DimensionMismatchError("rectangular matrix with an even column count", [len(r) for r in matrix], "substitution shape")
        rows = [[ExactCoeff.coerce(v) for v in row] for row in matrix]
        new_dim = n_new // 2

        powers: dict[tuple[int, int], dict[tuple[int, ...], ExactCoeff]] = {}

        def linear_power(k: int, e: int):
            if (k, e) in powers:
                return powers[(k, e)]
            if e == 0:
                result = {(0,) * n_new: ONE}
            else:
                prev = linear_power(k, e - 1)
                result = {}
                for l, c in enumerate(rows[k]):
                    if c.is_zero():
                        continue
                    for mono, v in prev.items():
                        key = mono[:l] + (mono[l] + 1,) + mono[l + 1:]
                        prod = v * c
                        result[key] = result[key] + prod if key in result else prod
            powers[(k, e)] = result
            return result

        acc: dict[tuple[int, ...], ExactCoeff] = {}
        for (f, s), c in self:
            partial = {(0,) * n_new: c}
            for k, e in enumerate(f + s):
                if e == 0:
                    continue
                factor = linear_power(k, e)
                nxt: dict[tuple[int, ...], ExactCoeff] = {}
                for m1, v1 in partial.items():
                    for m2, v2 in factor.items():
                        key = mi_add(m1, m2)
                        prod = v1 * v2
                        nxt[key] = nxt[key] + prod if key in nxt else prod
                partial = nxt
            for mono, v in partial.items():
                acc[mono] = acc[mono] + v if mono in acc else v
        return target(new_dim, {(m[:new_dim], m[new_dim:]): v for m, v in acc.items()})

    # numeric evaluation

    def _numeric_terms(self):
        if self._numeric is None:
            if self._terms:
                firsts = np.array([f for f, _ in self._terms], dtype=np.int64)
                seconds = np.array([s for _, s in self._terms], dtype=np.int64)
            else:
                firsts = np.zeros((0, self.dim), dtype=np.int64)
                seconds = np.zeros((0, self.dim), dtype=np.int64)
            coeffs = np.array([c.to_complex() for c in self._terms.values()], dtype=complex)
            object.__setattr__(self, "_numeric", (firsts, seconds, coeffs))
        return self._numeric

    def _eval_blocks(self, first_vals, second_vals) -> np.ndarray:
        """sum c * first^f * second^s with both blocks given as values (no conjugation)."""
        first_vals = np.asarray(first_vals, dtype=complex)
        second_vals = np.asarray(second_vals, dtype=complex)
        if first_vals.shape[-1] != self.dim or second_vals.shape[-1] != self.dim:
            raise DimensionMismatchError(self.dim, (first_vals.shape[-1], second_vals.shape[-1]), "point dimension")
        firsts, seconds, coeffs = self._numeric_terms()
        shape = np.broadcast_shapes(first_vals.shape[:-1], second_vals.shape[:-1])
        out = np.zeros(shape, dtype=complex)
        if not len(coeffs):
            return out
        max_f = int(firsts.max()) if firsts.size else 0
        max_s = int(seconds.max()) if seconds.size else 0
        pf = _power_table(first_vals, max_f)
        ps = _power_table(second_vals, max_s)
        for t in range(len(coeffs)):
            term = np.full(shape, coeffs[t], dtype=complex)
            for j in range(self.dim):
                if firsts[t, j]:
                    term = term * pf[firsts[t, j]][..., j]
                if seconds[t, j]:
                    term = term * ps[seconds[t, j]][..., j]
            out = out + term
        return out

    # serialization

    def to_json(self) -> dict[str, Any]:
        return {
            "dim": self.dim,
            "kind": self.KIND,
            "terms": [{"b": list(f), "g": list(s), **c.to_json()} for (f, s), c in self],
        }

    def variable_symbols(self) -> tuple[list[sympy.Symbol], list[sympy.Symbol]]:
        a, b = self.VARS
        if self.dim == 1:
            return [sympy.Symbol(a)], [sympy.Symbol(b)]
        return ([sympy.Symbol(f"{a}{j + 1}") for j in range(self.dim)],
                [sympy.Symbol(f"{b}{j + 1}") for j in range(self.dim)])

    def to_sympy(self) -> sympy.Expr:
        xs, ys = self.variable_symbols()
        expr = sympy.Integer(0)
        for (f, s), c in self:
            mono = sympy.Integer(1)
            for j in range(self.dim):
                mono *= xs[j] ** f[j] * ys[j] ** s[j]
            expr += c.to_sympy() * mono
        return sympy.expand(expr)

    def __str__(self):
        return str(self.to_sympy())

    def __repr__(self):
        return f"{type(self).__name__}(dim={self.dim}, {self})"


def _power_table(values: np.ndarray, max_power: int) -> list[np.ndarray]:
    table = [np.ones_like(values)]
    for _ in range(max_power):
        table.append(table[-1] * values)
    return table


class WickSymbol(PolySymbol):
    """a(z, w) = sum c z^b wbar^g."""

    KIND = "wick"
    VARS = ("z", "wb")
    __slots__ = ()

    def conj(self) -> "WickSymbol":
        # (z, w) -> conj(a(w, z)): the Wick symbol of the adjoint operator
        return WickSymbol(self.dim, {(s, f): c.conj() for (f, s), c in self})

    def evaluate(self, z, w=None) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        w = z if w is None else np.asarray(w, dtype=complex)
        return self._eval_blocks(z, np.conj(w))

    def is_analytic(self) -> bool:
        return all(not any(s) for (_, s) in self._terms)


class WeylSymbol(PolySymbol):
    """A(x, xi) = sum c x^b xi^g on real phase space."""

    KIND = "weyl"
    VARS = ("x", "xi")
    __slots__ = ()

    def conj(self) -> "WeylSymbol":
        return WeylSymbol(self.dim, {key: c.conj() for key, c in self})

    def is_real(self) -> bool:
        return all(c == c.conj() for c in self._terms.values())

    def diff_x(self, alpha):
        return self.diff_first(alpha)

    def diff_xi(self, beta):
        return self.diff_second(beta)

    def evaluate(self, point) -> np.ndarray:
        # complex point convention z = x + i xi
        point = np.asarray(point, dtype=complex)
        return self._eval_blocks(point.real.astype(complex), point.imag.astype(complex))

    def evaluate_real(self, x, xi) -> np.ndarray:
        return self._eval_blocks(np.asarray(x, dtype=complex), np.asarray(xi, dtype=complex))


class AWSymbol(PolySymbol):
    """a0(w) = sum c w^b wbar^g."""

    KIND = "aw"
    VARS = ("w", "wb")
    __slots__ = ()

    def conj(self) -> "AWSymbol":
        return AWSymbol(self.dim, {(s, f): c.conj() for (f, s), c in self})

    def evaluate(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=complex)
        return self._eval_blocks(w, np.conj(w))

    def evaluate_polarized(self, u, vbar) -> np.ndarray:
        """Holomorphic extension a0(u, vbar) with the two blocks independent."""
        return self._eval_blocks(u, vbar)


KINDS: dict[str, type[PolySymbol]] = {cls.KIND: cls for cls in (WickSymbol, WeylSymbol, AWSymbol)}


def complex_point(coords, dim: int | None = None) -> np.ndarray:
    """ComplexPoint: finite complex coordinates, z = x + i xi."""
    arr = np.atleast_1d(np.asarray(coords, dtype=complex))
    if dim is not None and arr.shape[-1] != dim:
        raise DimensionMismatchError(dim, arr.shape[-1], "point dimension")
    if not np.all(np.isfinite(arr)):
        raise MalformedInputError(f"non-finite point coordinates {coords!r}")
    return arr


def symbol_from_json(data: Mapping[str, Any], kind: str | None = None) -> PolySymbol:
    try:
        dim = int(data["dim"])
        data_kind = data["kind"]
        raw_terms = data["terms"]
    except (KeyError, TypeError, ValueError) as e:
        raise MalformedInputError(f"symbol JSON needs 'dim', 'kind' and 'terms': {e}") from e
    if data_kind not in KINDS:
        raise MalformedInputError(f"unknown symbol kind {data_kind!r}")
    if kind is not None and data_kind != kind:
        raise MalformedInputError(f"expected a {kind} symbol, got {data_kind}")
    terms: dict[Key, ExactCoeff] = {}
    for term in raw_terms:
        try:
            key = (tuple(int(v) for v in term["b"]), tuple(int(v) for v in term["g"]))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedInputError(f"bad term {term!r}") from e
        c = ExactCoeff.from_json(term)
        terms[key] = terms[key] + c if key in terms else c
    return KINDS[data_kind](dim, terms)


# ---------------------------------------------------------------------------
# poly_calculus dispatcher


def poly_calculus(p: PolySymbol, action: str, *args, **kwargs):
    actions: dict[str, Callable] = {
        "add": lambda q: p + q,
        "scale": lambda c: p.scale(c),
        "multiply": lambda q: p * q,
        "differentiate_z": lambda beta: p.diff_first(beta),
        "differentiate_wbar": lambda gamma: p.diff_second(gamma),
        "conj": lambda: p.conj(),
        "evaluate": lambda *pts: p.evaluate(*pts),  # type: ignore[attr-defined]
        "substitute_linear": lambda matrix, target=None: p.substitute_linear(matrix, target),
    }
    if action not in actions:
        raise MalformedInputError(f"unknown poly_calculus action {action!r}; expected one of {sorted(actions)}")
    return actions[action](*args, **kwargs)


# ---------------------------------------------------------------------------
# Gaussian integrals


def gaussian_moment(beta: Sequence[int], gamma: Sequence[int], s: Any = 1) -> ExactCoeff:
    """(s/pi)^d int w^beta wbar^gamma e^{-s|w|^2} dlambda = [beta == gamma] beta!/s^|beta|."""
    s = to_qq(s)
    if s <= 0:
        raise MalformedInputError(f"Gaussian parameter must be positive, got {s}")
    if tuple(beta) != tuple(gamma):
        return ZERO
    return ExactCoeff(QQ(mi_factorial(beta)) / s ** sum(beta))


@lru_cache(maxsize=None)
def _reduce_monomial_1d(b: int, g: int) -> tuple[tuple[tuple[int, int], int], ...]:
    """pi^-1 int w^b wbar^g e^{-(w-u)(wbar-vbar)} dlambda(w) as {(u power, vbar power): integer}.

    Shift w = u + t and use pi^-1 int t^p tbar^q e^{-|t|^2 - t cbar} = [p <= q] q!/(q-p)! (-cbar)^(q-p)
    with c = u - v; the ubar powers must cancel.
    """
    acc: dict[tuple[int, int, int], int] = {}
    for bp in range(b + 1):
        for gp in range(bp, g + 1):
            weight = math.comb(b, bp) * math.comb(g, gp) * math.perm(gp, bp)
            k = gp - bp
            # (-cbar)^k = (vbar - ubar)^k
            for m in range(k + 1):
                key = (b - bp, g - gp + k - m, m)
                acc[key] = acc.get(key, 0) + weight * math.comb(k, m) * (-1) ** (k - m)
    out = {}
    for (eu, eub, evb), v in acc.items():
        if v == 0:
            continue
        if eub:
            raise InternalInvariantError(f"conjugate variable survived the Gaussian reduction of w^{b} wbar^{g}")
        out[(eu, evb)] = out.get((eu, evb), 0) + v
    return tuple(sorted(out.items()))


def gaussian_reduce(p: AWSymbol) -> WickSymbol:
    """q(u, vbar) = pi^-d int p(w, wbar) e^{-(w-u, w-v)} dlambda(w), returned as a Wick symbol in (u, v)."""
    d = p.dim
    out: dict[Key, ExactCoeff] = {}
    for (f, s), c in p:
        per_axis = [_reduce_monomial_1d(f[j], s[j]) for j in range(d)]
        for combo in itertools.product(*per_axis):
            weight = 1
            first, second = [], []
            for (eu, evb), v in combo:
                weight *= v
                first.append(eu)
                second.append(evb)
            key = (tuple(first), tuple(second))
            val = c * weight
            out[key] = out[key] + val if key in out else val
    return WickSymbol(d, out)


# ---------------------------------------------------------------------------
# seeded random symbols (test suites and the selftest command)


def random_symbol(cls: type[PolySymbol], dim: int, degree: int, rng: np.random.Generator,
                  n_terms: int = 6, coeff_range: int = 3, complex_coeffs: bool = True,
                  with_sqrt2: bool = False, homogeneous: bool = False) -> PolySymbol:
    keys = []
    for first in multi_indices(dim, degree):
        for second in multi_indices(dim, degree - first.order):
            if homogeneous and first.order + second.order != degree:
                continue
            keys.append((tuple(first), tuple(second)))
    picks = rng.choice(len(keys), size=min(n_terms, len(keys)), replace=False)
    terms = {}
    for idx in sorted(int(i) for i in picks):
        vals = [int(v) for v in rng.integers(-coeff_range, coeff_range + 1, size=4)]
        if not complex_coeffs:
            vals[1] = vals[3] = 0
        if not with_sqrt2:
            vals[2] = vals[3] = 0
        if not any(vals):
            vals[0] = 1
        terms[keys[idx]] = ExactCoeff(*vals)
    return cls(dim, terms)
