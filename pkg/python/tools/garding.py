import asyncio

from python.calculus.numeric import garding_experiment
from python.calculus.reports import trace_csv
from python.helpers.print_style import PrintStyle
from python.helpers.tool import Response, Tool


class Garding(Tool):

    async def execute(self, **kwargs):
        symbol = self.load_symbol()
        # the sweep runs its own event loop
        report = await asyncio.to_thread(garding_experiment, symbol, self.config.garding_cutoffs, config=self.config)
        PrintStyle.verdict("sharp-garding", report.passed, {k: report.constants[k] for k in ("lambda_min", "skew_norm")})
        out = str(self.args.get("out") or "")
        payload = trace_csv(report) if out.endswith(".csv") else report.to_json()
        verdict = "stable" if report.passed else "unstable"
        return Response(
            message=f"{verdict}: lambda_min={report.constants['lambda_min']:.6g}, skew norm={report.constants['skew_norm']:.6g}",
            payload=payload,
        )
