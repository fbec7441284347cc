from python.calculus.symalg import AWSymbol
from python.calculus.symmaps import antiwick_to_wick, weyl_to_wick
from python.helpers.errors import MalformedInputError
from python.helpers.tool import Response, Tool


class ToWick(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        if isinstance(symbol, AWSymbol):
            a = antiwick_to_wick(symbol)
        elif symbol.KIND == "weyl":
            a = weyl_to_wick(symbol)  # type: ignore[arg-type]
        else:
            raise MalformedInputError("to-wick expects a weyl or aw symbol")
        return Response(message=f"Wick symbol {a}", payload=a.to_json())
