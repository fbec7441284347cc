from python.calculus import fock, quantize
from python.calculus.symalg import AWSymbol, WickSymbol
from python.helpers.errors import InternalInvariantError
from python.helpers.tool import Response, Tool


def counterexample_symbol() -> WickSymbol:
    """a(z, w) = 1 - 2 z wbar + 2 z^2 wbar^2."""
    return WickSymbol(1, {((0,), (0,)): 1, ((1,), (1,)): -2, ((2,), (2,)): 2})


def expected_diagonal() -> AWSymbol:
    """(1 - |w|^2)^2 + |w|^4."""
    r = AWSymbol.monomial(1, (1,), (1,))
    one = AWSymbol.constant(1, 1)
    return (one - r) ** 2 + r ** 2


class Counterexample(Tool):

    async def execute(self, **kwargs):
        a = counterexample_symbol()
        diag = quantize.berezin_diag(a)
        if diag != expected_diagonal():
            raise InternalInvariantError(f"Berezin diagonal {diag} is not (1-|w|^2)^2 + |w|^4")
        basis = fock.FockBasis(1, 2)
        F = fock.FockVector.monomial(basis, (1,))
        form = fock.quadratic_form(quantize.wick_quantize(a).matrix(2), F)
        payload = {
            "symbol": a.to_json(),
            "berezin_diag": diag.to_json(),
            "berezin_diag_form": "(1-|w|^2)^2+|w|^4",
            "F": "z",
            "quadratic_form": form.to_json(),
        }
        return Response(message=f"a(w,w) = (1-|w|^2)^2+|w|^4 >= 0 but <Op z, z> = {form}", payload=payload)
