from python.calculus.quantize import berezin_diag
from python.calculus.symmaps import weyl_to_wick
from python.helpers.errors import MalformedInputError
from python.helpers.tool import Response, Tool


class Berezin(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        if symbol.KIND == "weyl":
            symbol = weyl_to_wick(symbol)  # type: ignore[arg-type]
        elif symbol.KIND != "wick":
            raise MalformedInputError("berezin expects a wick or weyl symbol")
        diag = berezin_diag(symbol)  # type: ignore[arg-type]
        return Response(message=f"a(w,w) = {diag}", payload=diag.to_json())
