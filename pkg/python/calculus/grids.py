"""Deterministic sample layouts: low-discrepancy sphere and box points, radial shells."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any

import numpy as np
from scipy.special import ndtri

from python.helpers.errors import MalformedInputError, PreconditionError


@lru_cache(maxsize=None)
def _generalized_golden(k: int) -> float:
    # unique positive root of x^(k+1) = x + 1
    x = 2.0
    for _ in range(64):
        x = (1.0 + x) ** (1.0 / (k + 1))
    return x


def kronecker(n: int, k: int, offset: float = 0.5) -> np.ndarray:
    """n points of the additive recurrence in [0, 1)^k."""
    phi = _generalized_golden(k)
    alpha = np.array([phi ** -(j + 1) for j in range(k)])
    i = np.arange(1, n + 1)[:, None]
    return np.mod(offset + i * alpha[None, :], 1.0)


def sphere_points(dim: int, n: int) -> np.ndarray:
    """n quasi-uniform points on the unit sphere of C^dim = R^(2 dim), shape (n, dim)."""
    if n < 1:
        raise PreconditionError("sphere sampling needs at least one point")
    if dim == 1:
        theta = 2 * np.pi * np.arange(n) / n
        return np.exp(1j * theta)[:, None]
    u = np.clip(kronecker(n, 2 * dim), 1e-12, 1 - 1e-12)
    g = ndtri(u)
    g /= np.linalg.norm(g, axis=1, keepdims=True)
    return g[:, :dim] + 1j * g[:, dim:]


def real_to_complex(v: np.ndarray, dim: int) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[..., :dim] + 1j * v[..., dim:]


def complex_to_real(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.concatenate([z.real, z.imag], axis=-1)


def box_points(n: int, k: int, radius: float, offset: float = 0.5) -> np.ndarray:
    """n points in [-radius, radius]^k."""
    return (2.0 * kronecker(n, k, offset) - 1.0) * radius


@dataclass(frozen=True)
class GridSpec:
    """Radial-shell grid |z| in [r_min, r_max], ``radial`` shells of ``angular`` points."""

    r_min: float = 1.0
    r_max: float = 8.0
    radial: int = 16
    angular: int = 64

    def __post_init__(self):
        if self.r_min <= 0 or self.r_max < self.r_min:
            raise PreconditionError(f"grid radii must satisfy 0 < r_min <= r_max, got {self.r_min}, {self.r_max}")
        if self.radial < 1 or self.angular < 1:
            raise PreconditionError("empty grid")

    @classmethod
    def parse(cls, text: str | None, default: "GridSpec | None" = None) -> "GridSpec":
        """'Rmin,Rmax,nr,na'."""
        if not text:
            return default or cls()
        parts = [p for p in text.replace(";", ",").split(",") if p.strip()]
        if len(parts) != 4:
            raise MalformedInputError(f"grid needs Rmin,Rmax,radial,angular, got {text!r}")
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]), int(parts[3]))
        except ValueError as e:
            raise MalformedInputError(f"bad grid {text!r}: {e}") from e

    def radii(self) -> np.ndarray:
        if self.radial == 1:
            return np.array([self.r_min])
        return np.geomspace(self.r_min, self.r_max, self.radial)

    def shells(self, dim: int) -> tuple[np.ndarray, np.ndarray]:
        """(radii, points) with points of shape (radial, angular, dim)."""
        radii = self.radii()
        sphere = sphere_points(dim, self.angular)
        return radii, radii[:, None, None] * sphere[None, :, :]

    def to_json(self) -> dict[str, Any]:
        return {"r_min": self.r_min, "r_max": self.r_max, "radial": self.radial, "angular": self.angular}


@dataclass
class SampledField:
    """Values of a function on a tagged node layout."""

    points: np.ndarray
    values: np.ndarray
    layout: str = "uniform"  # uniform | gauss-hermite
    weights: np.ndarray | None = None
    meta: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if len(self.points) != len(self.values):
            raise MalformedInputError("sample points and values differ in length")
        if not np.all(np.isfinite(self.values)):
            raise MalformedInputError("sampled field has non-finite values")
