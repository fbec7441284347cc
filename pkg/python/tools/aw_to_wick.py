from python.calculus.symmaps import antiwick_to_wick
from python.helpers.tool import Response, Tool


class AwToWick(Tool):

    async def execute(self, **kwargs):
        a0 = self.load_symbol(kind="aw")
        a = antiwick_to_wick(a0)  # type: ignore[arg-type]
        return Response(message=f"Wick symbol {a}", payload=a.to_json())
