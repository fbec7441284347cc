from python.calculus.symalg import WickSymbol
from python.calculus.symmaps import elliptic_check, positive_on_diagonal, principal_symbols, wick_to_weyl
from python.helpers.errors import MalformedInputError
from python.helpers.tool import Response, Tool


class Elliptic(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        if isinstance(symbol, WickSymbol):
            symbol = wick_to_weyl(symbol)
        elif symbol.KIND != "weyl":
            raise MalformedInputError("elliptic expects a weyl or wick symbol")
        top, a_p = principal_symbols(symbol)  # type: ignore[arg-type]
        real = elliptic_check(top, config=self.config)
        wick = elliptic_check(a_p, config=self.config)
        agree = real.passed == wick.passed
        payload = {
            "weyl_principal": top.to_json(),
            "wick_principal": a_p.to_json(),
            "weyl": real.to_json(),
            "wick": wick.to_json(),
            "agree": agree,
            "positive": {
                "weyl": positive_on_diagonal(top, config=self.config),
                "wick": positive_on_diagonal(a_p, config=self.config),
            },
        }
        verdict = "elliptic" if real.passed else "not elliptic"
        return Response(message=f"{verdict} (Weyl and Wick sides {'agree' if agree else 'DISAGREE'})", payload=payload)
