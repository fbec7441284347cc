"""Complex twisted product: Op(a1 # a2) = Op(a1) o Op(a2)."""

from __future__ import annotations

from functools import lru_cache

from python.calculus import fock
from python.calculus.symalg import (
    AWSymbol,
    ExactCoeff,
    Key,
    MultiIndex,
    WeylSymbol,
    WickSymbol,
    gaussian_reduce,
    mi_factorial,
    mi_min,
    sub_indices,
)
from python.calculus.symmaps import weyl_to_wick, wick_to_weyl
from python.helpers.errors import MalformedInputError, check_dim


def _check_pair(a1: WickSymbol, a2: WickSymbol):
    if not (isinstance(a1, WickSymbol) and isinstance(a2, WickSymbol)):
        raise MalformedInputError("the twisted product acts on Wick symbols")
    check_dim(a1.dim, a2.dim)


def _kappa_range(a1: WickSymbol, a2: WickSymbol):
    # per-axis bound: max wbar power of a1 against max z power of a2
    d = a1.dim
    top1 = [max((s[j] for _, s in a1.terms), default=0) for j in range(d)]
    top2 = [max((f[j] for f, _ in a2.terms), default=0) for j in range(d)]
    return sub_indices(mi_min(top1, top2))


def twisted_product(a1: WickSymbol, a2: WickSymbol) -> WickSymbol:
    """a1 # a2 = sum_k (1/k!) (dbar_w^k a1)(d_z^k a2)."""
    _check_pair(a1, a2)
    out = WickSymbol.zero(a1.dim)
    for kappa in _kappa_range(a1, a2):
        left = a1.diff_second(kappa)
        if left.is_zero():
            continue
        right = a2.diff_first(kappa)
        if right.is_zero():
            continue
        out = out + (left * right).scale(ExactCoeff(1) / mi_factorial(kappa))
    return out


@lru_cache(maxsize=4096)
def _reduced_monomial(first: tuple[int, ...], second: tuple[int, ...]) -> WickSymbol:
    return gaussian_reduce(AWSymbol.monomial(len(first), first, second))


def twisted_product_oracle(a1: WickSymbol, a2: WickSymbol) -> WickSymbol:
    """pi^-d int a1(z, u) a2(u, w) e^{-(u - z, u - w)} dlambda(u) by exact Gaussian reduction."""
    _check_pair(a1, a2)
    d = a1.dim
    terms: dict[Key, ExactCoeff] = {}
    for (b1, g1), c1 in a1:
        for (b2, g2), c2 in a2:
            # integrand in u: u^b2 ubar^g1, with z^b1 wbar^g2 outside
            reduced = _reduced_monomial(b2, g1)
            outer = WickSymbol.monomial(d, b1, g2, c1 * c2)
            for key, c in outer * reduced:
                terms[key] = terms[key] + c if key in terms else c
    return WickSymbol(d, terms)


def product_rule_check(a1: WickSymbol, a2: WickSymbol, j: int) -> bool:
    """d_{z_j} and dbar_{w_j} are derivations of #."""
    _check_pair(a1, a2)
    if not 0 <= j < a1.dim:
        raise MalformedInputError(f"coordinate {j} out of range for d={a1.dim}")
    e = MultiIndex.unit(a1.dim, j)
    prod = twisted_product(a1, a2)
    z_rule = prod.diff_first(e) == twisted_product(a1.diff_first(e), a2) + twisted_product(a1, a2.diff_first(e))
    w_rule = prod.diff_second(e) == twisted_product(a1.diff_second(e), a2) + twisted_product(a1, a2.diff_second(e))
    return z_rule and w_rule


def weyl_product(A: WeylSymbol, B: WeylSymbol) -> WeylSymbol:
    if not (isinstance(A, WeylSymbol) and isinstance(B, WeylSymbol)):
        raise MalformedInputError("the Weyl product acts on Weyl symbols")
    return wick_to_weyl(twisted_product(weyl_to_wick(A), weyl_to_wick(B)))


def interior_degree(a2: WickSymbol, cutoff: int) -> int:
    """Largest column degree whose images under Op(a2) stay inside the cutoff."""
    return cutoff - max(a2.deg_first, 0)


def homomorphism_check(a1: WickSymbol, a2: WickSymbol, cutoff: int) -> bool:
    """Interior block of matrix_of(a1 # a2) equals that of matrix_of(a1) @ matrix_of(a2)."""
    _check_pair(a1, a2)
    inner = interior_degree(a2, cutoff)
    if inner < 0:
        raise MalformedInputError(f"cutoff {cutoff} leaves no interior block for deg_z {a2.deg_first}")
    product = fock.matrix_of(twisted_product(a1, a2), cutoff)
    composed = fock.matrix_of(a1, cutoff) @ fock.matrix_of(a2, cutoff)
    n = int((product.basis.degrees <= inner).sum())
    return all(product.entries[r, c] == composed.entries[r, c] for r in range(product.size) for c in range(n))
