from python.calculus import twisted
from python.calculus.symmaps import weyl_to_wick
from python.helpers.errors import InternalInvariantError
from python.helpers.tool import Response, Tool


class Compose(Tool):

    async def execute(self, **kwargs):
        if self.args.get("weyl"):
            A = self.load_symbol("a", kind="weyl")
            B = self.load_symbol("b", kind="weyl")
            product = twisted.weyl_product(A, B)  # type: ignore[arg-type]
            a1, a2 = weyl_to_wick(A), weyl_to_wick(B)  # type: ignore[arg-type]
        else:
            a1 = self.load_symbol("a", kind="wick")
            a2 = self.load_symbol("b", kind="wick")
            product = twisted.twisted_product(a1, a2)  # type: ignore[arg-type]

        payload = {"product": product.to_json()}
        message = f"product {product}"
        cutoff = self.args.get("check_matrix")
        if cutoff is not None:
            holds = twisted.homomorphism_check(a1, a2, int(cutoff))  # type: ignore[arg-type]
            payload["homomorphism"] = {
                "cutoff": int(cutoff),
                "interior_degree": twisted.interior_degree(a2, int(cutoff)),  # type: ignore[arg-type]
                "holds": holds,
            }
            if not holds:
                raise InternalInvariantError(f"matrix of the twisted product differs from the matrix product at D={cutoff}")
            message += f"; interior block matches at D={cutoff}"
        return Response(message=message, payload=payload)
