from python.calculus import numeric
from python.calculus.symalg import AWSymbol
from python.calculus.symmaps import weyl_to_wick
from python.calculus.weights import WeightSpec
from python.helpers.print_style import PrintStyle
from python.helpers.tool import Response, Tool


class Certify(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        weight = WeightSpec.parse(self.args.get("weight"))
        if isinstance(symbol, AWSymbol):
            report = numeric.antiwick_bound_check(
                symbol,
                form=self.arg("form", "omega"),
                weight=weight,
                r=float(self.arg("r", 0.5)),
                s=float(self.arg("s", 1.0)),
                config=self.config,
            )
        else:
            if symbol.KIND == "weyl":
                symbol = weyl_to_wick(symbol)  # type: ignore[arg-type]
            report = numeric.growth_certificate(
                symbol,  # type: ignore[arg-type]
                form=self.arg("form", "shubin"),
                weight=weight,
                rho=float(self.arg("rho", 1.0)),
                N=float(self.arg("N", 0.0)),
                r1=float(self.arg("r1", 0.0)),
                r2=float(self.arg("r2", 0.0)),
                s=float(self.arg("s", 1.0)),
                config=self.config,
            )
        PrintStyle.verdict(report.form, report.passed, report.constants)
        constants = ", ".join(f"{k}={v:.4g}" for k, v in report.constants.items())
        verdict = "passes" if report.passed else "fails"
        return Response(message=f"{report.form} certificate {verdict} ({constants})", payload=report.to_json())
