from python.calculus import fock, quantize
from python.calculus.symalg import AWSymbol, WeylSymbol
from python.calculus.symmaps import weyl_to_wick
from python.helpers.tool import Response, Tool


class Quantize(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        cutoff = int(self.arg("cutoff", 8))
        if isinstance(symbol, AWSymbol):
            op = quantize.antiwick_quantize(symbol)
        elif isinstance(symbol, WeylSymbol):
            op = quantize.wick_quantize(weyl_to_wick(symbol))
        else:
            op = quantize.wick_quantize(symbol)
        matrix = op.matrix(cutoff)
        return Response(
            message=f"{matrix.size}x{matrix.size} matrix of {symbol.KIND} symbol at D={cutoff}, band {matrix.band}",
            payload=fock.to_csv(matrix),
        )
