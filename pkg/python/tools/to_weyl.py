from python.calculus.symmaps import wick_to_weyl
from python.helpers.tool import Response, Tool


class ToWeyl(Tool):

    async def execute(self, **kwargs):
        a = self.load_symbol(kind="wick")
        weyl = wick_to_weyl(a)
        return Response(message=f"Weyl symbol {weyl}", payload=weyl.to_json())
