"""Report records and their JSON / CSV writers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np


def jsonable(value: Any) -> Any:
    """Plain JSON values; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if math.isfinite(v):
            return v
        return "nan" if math.isnan(v) else ("inf" if v > 0 else "-inf")
    if isinstance(value, (complex, np.complexfloating)):
        return {"re": jsonable(value.real), "im": jsonable(value.imag)}
    if hasattr(value, "to_json"):
        return jsonable(value.to_json())
    return value


@dataclass
class EstimateReport:
    form: str
    constants: dict[str, float] = field(default_factory=dict)
    max_violation: float = 0.0
    grid: dict[str, Any] = field(default_factory=dict)
    passed: bool = False
    trace: list[dict[str, Any]] = field(default_factory=list)
    meta: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return jsonable({
            "form": self.form,
            "passed": self.passed,
            "constants": self.constants,
            "max_violation": self.max_violation,
            "grid": self.grid,
            "trace": self.trace,
            "meta": self.meta,
        })


@dataclass
class EllipticityReport:
    kind: str  # elliptic | weakly-elliptic | hypoelliptic | fail
    min_value: float
    max_value: float = 0.0
    radii: list[float] = field(default_factory=list)
    weight: Any = None
    rho: float | None = None
    rho0: float | None = None
    constants: dict[str, float] = field(default_factory=dict)
    meta: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.kind != "fail"

    def to_json(self) -> dict[str, Any]:
        return jsonable({
            "kind": self.kind,
            "passed": self.passed,
            "min_value": self.min_value,
            "max_value": self.max_value,
            "radii": self.radii,
            "weight": self.weight,
            "rho": self.rho,
            "rho0": self.rho0,
            "constants": self.constants,
            "meta": self.meta,
        })


@dataclass
class PolynomialReport:
    is_polynomial: bool
    degree: int | None
    coefficients: dict[tuple[int, ...], complex]
    radii: list[float]
    tail_estimates: list[float]
    meta: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict[str, Any]:
        return jsonable({
            "is_polynomial": self.is_polynomial,
            "degree": self.degree,
            "coefficients": [{"alpha": list(k), "value": v} for k, v in sorted(self.coefficients.items())],
            "radii": self.radii,
            "tail_estimates": self.tail_estimates,
            "meta": self.meta,
        })


TRACE_COLUMNS = ("cutoff", "lambda_min", "skew_norm")


def trace_csv(report: EstimateReport) -> str:
    lines = [",".join(TRACE_COLUMNS)]
    for row in report.trace:
        lines.append(f"{int(row['cutoff'])},{float(row['lambda_min']):.17g},{float(row['skew_norm']):.17g}")
    return "\n".join(lines) + "\n"
