from python.calculus.grids import GridSpec
from python.calculus.symmaps import hypoelliptic_diagnostic, weak_ellipticity_order, weyl_to_wick
from python.calculus.weights import WeightSpec
from python.helpers.errors import MalformedInputError
from python.helpers.tool import Response, Tool


class Hypo(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        if symbol.KIND == "weyl":
            symbol = weyl_to_wick(symbol)  # type: ignore[arg-type]
        elif symbol.KIND != "wick":
            raise MalformedInputError("hypo expects a wick or weyl symbol")
        c = self.config
        grid = GridSpec(c.grid_r_min, c.grid_r_max, c.grid_radial, c.grid_angular)
        weight = WeightSpec.parse(self.args.get("weight"))
        rho = float(self.arg("rho", 1.0))
        rho0 = float(self.arg("rho0", 0.0))
        report = hypoelliptic_diagnostic(symbol, rho, rho0, weight, grid, c)  # type: ignore[arg-type]
        weak = weak_ellipticity_order(symbol, weight, grid, c)  # type: ignore[arg-type]
        message = f"{report.kind}: C={report.constants['C']:.4g}, c={report.constants['c']:.4g}"
        if weak.rho0 is not None:
            message += f"; fitted rho0={weak.rho0:.3g} (R^2 {weak.constants['r2']:.3f})"
        return Response(message=message, payload={"hypoelliptic": report.to_json(), "weak_ellipticity": weak.to_json()})
