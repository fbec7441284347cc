import numpy as np

from python.calculus import numeric, quantize
from python.helpers.errors import MalformedInputError
from python.helpers.tool import Response, Tool


class DetectPoly(Tool):
    """Polynomial detector on a Wick symbol, or on its kernel at a fixed w0."""

    async def execute(self, **kwargs):
        a = self.load_symbol(kind="wick")
        cap = int(self.arg("order", a.degree))
        form = self.arg("form", "symbol")
        w0 = np.full(a.dim, 0.5 + 0.5j)

        if form == "symbol":
            report = numeric.detect_wick_polynomial(a, a.dim, cap, config=self.config)  # type: ignore[arg-type]
        elif form == "kernel":
            F = lambda z: quantize.kernel_eval(a, z, w0, self.config.kernel_clamp).value  # noqa: E731
            report = numeric.polynomial_detector(F, a.dim, cap, config=self.config)
        elif form == "kernel-divided":
            def F(z):
                k = quantize.kernel_eval(a, z, w0, self.config.kernel_clamp).value  # type: ignore[arg-type]
                return k / np.exp(np.sum(z * np.conj(w0), axis=-1))

            report = numeric.polynomial_detector(F, a.dim, cap, config=self.config)
        else:
            raise MalformedInputError(f"unknown detector form {form!r}; use symbol, kernel or kernel-divided")

        if report.is_polynomial:
            message = f"polynomial of degree {report.degree} (cap {cap})"
        else:
            message = f"not a polynomial of degree <= {cap}"
        return Response(message=message, payload=report.to_json())
