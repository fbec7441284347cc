import math

import numpy as np

from python.calculus import numeric
from python.calculus.symalg import WeylSymbol
from python.helpers.print_style import PrintStyle
from python.helpers.tool import Response, Tool


def harmonic_weyl(dim: int = 1) -> WeylSymbol:
    """|x|^2 + |xi|^2."""
    terms = {}
    for j in range(dim):
        e = tuple(2 if k == j else 0 for k in range(dim))
        zero = (0,) * dim
        terms[(e, zero)] = 1
        terms[(zero, e)] = 1
    return WeylSymbol(dim, terms)


def bargmann_paths_report(max_alpha: int, points: np.ndarray, config) -> numeric.EstimateReport:
    """Coefficient and kernel paths against e_a(z) = z^a / sqrt(a!) for h_a, d = 1."""
    worst = 0.0
    for a in range(max_alpha + 1):
        exact = points[:, 0] ** a / math.sqrt(math.factorial(a))
        coeff = numeric.bargmann_num({(a,): 1.0}, points, path="coefficients", config=config)
        kernel = numeric.bargmann_num({(a,): 1.0}, points, path="kernel", config=config)
        worst = max(worst, float(np.max(np.abs(coeff - exact))), float(np.max(np.abs(kernel - exact))))
    return numeric.EstimateReport(
        form="bargmann-hermite",
        constants={"max_abs_error": worst},
        max_violation=worst,
        grid={"points": int(len(points)), "max_alpha": max_alpha},
        passed=worst <= 1e-8,
    )


class BargmannCheck(Tool):

    async def execute(self, **kwargs):
        config = self.config
        A = self.load_symbol(kind="weyl") if self.args.get("sym") else harmonic_weyl(1)
        dim = A.dim
        z = numeric.phase_points(25, 1, 1.4)
        h1 = lambda y: numeric.hermite_eval((1,), y)  # noqa: E731
        reports = {
            "bargmann_paths": bargmann_paths_report(5, z, config),
            "factorization": numeric.factorization_check(h1, lambda p: p[:, 0], numeric.phase_points(25, 1, 1.5)),
            "assignment_stft": numeric.sbatarel_check(
                A,  # type: ignore[arg-type]
                numeric.phase_points(25, dim, 1.0, 0.3),
                numeric.phase_points(25, dim, 1.0, 0.7),
            ),
            "moyal": numeric.moyal_check(lambda y: np.pi ** -0.25 * np.exp(-0.5 * np.sum((y - 0.5) ** 2, axis=-1))),
        }
        for name, r in reports.items():
            PrintStyle.verdict(name, r.passed, r.constants)
        passed = all(r.passed for r in reports.values())
        payload = {"passed": passed, **{k: r.to_json() for k, r in reports.items()}}
        failed = [k for k, r in reports.items() if not r.passed]
        message = "all Bargmann/STFT identities hold" if passed else f"failed: {', '.join(failed)}"
        return Response(message=message, payload=payload)
