import numpy as np

from python.calculus import fock, quantize, symmaps, twisted
from python.calculus.symalg import WeylSymbol, WickSymbol, random_symbol
from python.helpers.errors import InternalInvariantError
from python.helpers.print_style import PrintStyle
from python.helpers.tool import Response, Tool


def _round_trip(rng) -> bool:
    dim = int(rng.integers(1, 3))
    A = random_symbol(WeylSymbol, dim, int(rng.integers(1, 5)), rng, with_sqrt2=True)
    a = random_symbol(WickSymbol, dim, int(rng.integers(1, 5)), rng)
    return symmaps.wick_to_weyl(symmaps.weyl_to_wick(A)) == A and symmaps.weyl_to_wick(symmaps.wick_to_weyl(a)) == a  # type: ignore[arg-type]


def _pair(rng):
    dim = int(rng.integers(1, 3))
    a1 = random_symbol(WickSymbol, dim, int(rng.integers(1, 4)), rng)
    a2 = random_symbol(WickSymbol, dim, int(rng.integers(1, 4)), rng)
    return a1, a2


def _twisted_dual_path(rng) -> bool:
    a1, a2 = _pair(rng)
    return twisted.twisted_product(a1, a2) == twisted.twisted_product_oracle(a1, a2)  # type: ignore[arg-type]


def _product_rule(rng) -> bool:
    a1, a2 = _pair(rng)
    return all(twisted.product_rule_check(a1, a2, j) for j in range(a1.dim))  # type: ignore[arg-type]


def _antiwick_reconstruction(rng) -> bool:
    a = random_symbol(WickSymbol, 1, int(rng.integers(1, 4)), rng)
    result = symmaps.wick_to_antiwick_expansion(a, max(a.deg_first, 0))  # type: ignore[arg-type]
    same = fock.matrix_of(result.reconstruct(), 12) == fock.matrix_of(quantize.wick_quantize(a), 12)  # type: ignore[arg-type]
    return bool(same) and result.remainder.is_zero()


def _diagonal_law(rng) -> bool:
    A = random_symbol(WeylSymbol, int(rng.integers(1, 3)), int(rng.integers(1, 7)), rng)
    return symmaps.diag_difference(A).bound_holds  # type: ignore[arg-type]


CHECKS = {
    "round_trip": _round_trip,
    "twisted_dual_path": _twisted_dual_path,
    "product_rule": _product_rule,
    "antiwick_reconstruction": _antiwick_reconstruction,
    "diagonal_law": _diagonal_law,
}


class Selftest(Tool):

    async def execute(self, **kwargs):
        seed = int(self.arg("seed", self.config.seed))
        count = int(self.arg("count", 20))
        rng = np.random.default_rng(seed)
        results = {}
        for name, check in CHECKS.items():
            passed = sum(1 for _ in range(count) if check(rng))
            results[name] = {"passed": passed, "failed": count - passed}
            PrintStyle.debug(f"selftest {name}: {passed}/{count}")
        failed = [name for name, r in results.items() if r["failed"]]
        if failed:
            raise InternalInvariantError(f"identity checks failed: {', '.join(failed)} (seed {seed})")
        return Response(message=f"{len(CHECKS)} identity families hold on {count} cases each (seed {seed})",
                        payload={"seed": seed, "count": count, "checks": results})
