from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from python.helpers.errors import MalformedInputError


def japanese(z) -> np.ndarray:
    """<z> = (1 + |z|^2)^(1/2) over the last axis."""
    z = np.asarray(z)
    return np.sqrt(1.0 + np.sum(np.abs(z) ** 2, axis=-1))


@dataclass(frozen=True)
class WeightSpec:
    """<z>^s (family "poly") or exp(r |z|^(1/s)) (family "exp")."""

    family: str = "poly"
    s: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        if self.family not in ("poly", "exp"):
            raise MalformedInputError(f"unknown weight family {self.family!r}")
        if self.family == "exp" and self.s <= 0:
            raise MalformedInputError("exponential weights need s > 0")

    @classmethod
    def polynomial(cls, s: float) -> "WeightSpec":
        return cls("poly", float(s), 0.0)

    @classmethod
    def exponential(cls, r: float, s: float) -> "WeightSpec":
        return cls("exp", float(s), float(r))

    @classmethod
    def parse(cls, text: str | None) -> "WeightSpec":
        """'1', 'poly:2' or 'exp:r:s'."""
        if text is None or text.strip() in ("", "1"):
            return cls.polynomial(0)
        parts = [p.strip() for p in text.split(":")]
        try:
            if parts[0] == "poly" and len(parts) == 2:
                return cls.polynomial(float(parts[1]))
            if parts[0] == "exp" and len(parts) == 3:
                return cls.exponential(float(parts[1]), float(parts[2]))
        except ValueError as e:
            raise MalformedInputError(f"bad weight spec {text!r}: {e}") from e
        raise MalformedInputError(f"bad weight spec {text!r}; use '1', 'poly:s' or 'exp:r:s'")

    @property
    def is_moderate(self) -> bool:
        return self.family == "poly"

    def log_eval(self, z) -> np.ndarray:
        z = np.asarray(z)
        if self.family == "poly":
            return self.s * np.log(japanese(z))
        norm = np.sqrt(np.sum(np.abs(z) ** 2, axis=-1))
        return self.r * norm ** (1.0 / self.s)

    def __call__(self, z) -> np.ndarray:
        return np.exp(self.log_eval(z))

    def to_json(self) -> dict:
        return {"family": self.family, "s": self.s, "r": self.r}

    def __str__(self):
        if self.family == "poly":
            return "1" if self.s == 0 else f"<z>^{self.s:g}"
        return f"exp({self.r:g}|z|^(1/{self.s:g}))"
