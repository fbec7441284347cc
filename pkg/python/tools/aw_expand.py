from python.calculus import fock, quantize
from python.calculus.symmaps import wick_to_antiwick_expansion
from python.helpers.tool import Response, Tool


class AwExpand(Tool):

    async def execute(self, **kwargs):
        a = self.load_symbol(kind="wick")
        order = int(self.arg("order", max(a.deg_first, 0)))
        result = wick_to_antiwick_expansion(a, order)  # type: ignore[arg-type]
        payload = result.to_json()
        message = f"{len(result.coefficients)} anti-Wick coefficients up to order {order}"
        cutoff = self.args.get("check_matrix")
        if cutoff is not None:
            same = fock.matrix_of(result.reconstruct(), int(cutoff)) == fock.matrix_of(quantize.wick_quantize(a), int(cutoff))  # type: ignore[arg-type]
            payload["reconstruction"] = {"cutoff": int(cutoff), "matches": bool(same) and result.remainder.is_zero()}
            message += f"; reconstruction {'matches' if same else 'differs'} at D={cutoff}"
        return Response(message=message, payload=payload)
