import json
import os
from typing import Any, TypedDict

from . import files, dotenv
from .errors import MalformedInputError
from .print_style import PrintStyle


class Settings(TypedDict):
    version: str

    quad_nodes: int
    quad_tol: float
    quad_max_points: int
    eig_tol: float
    eig_max_iter: int
    stability_ratio: float
    spread_tol: float

    sphere_samples: int
    elliptic_tol: float
    hypo_max_order: int

    grid_r_min: float
    grid_r_max: float
    grid_radial: int
    grid_angular: int

    cert_radius: float
    cert_points: int
    cert_refine_factor: float

    bound_radius: float
    bound_points: int

    garding_cutoffs: list[int]

    detector_radii: list[float]
    detector_samples: int
    detector_tol: float

    kernel_clamp: float
    seed: int
    workers: int
    debug: bool
    log_html: bool


class PartialSettings(Settings, total=False):
    pass


VERSION = "v1.0.0"
SETTINGS_FILE = files.get_abs_path("tmp/settings.json")
_settings: Settings | None = None


def get_default_settings() -> Settings:
    return Settings(
        version=VERSION,
        quad_nodes=64,
        quad_tol=1e-8,
        quad_max_points=65_536,
        eig_tol=1e-10,
        eig_max_iter=10_000,
        stability_ratio=1.1,
        spread_tol=0.05,
        sphere_samples=4096,
        elliptic_tol=1e-9,
        hypo_max_order=2,
        grid_r_min=1.0,
        grid_r_max=8.0,
        grid_radial=16,
        grid_angular=64,
        cert_radius=6.0,
        cert_points=4000,
        cert_refine_factor=1.25,
        bound_radius=4.0,
        bound_points=400,
        garding_cutoffs=[8, 16, 24, 32],
        detector_radii=[0.5, 1.0, 2.0, 4.0, 8.0],
        detector_samples=64,
        detector_tol=1e-10,
        kernel_clamp=700.0,
        seed=0,
        workers=4,
        debug=False,
        log_html=True,
    )


def get_settings(path: str | None = None) -> Settings:
    global _settings
    if path:
        return _read_settings_file(path) or get_default_settings()
    if not _settings:
        _settings = _read_settings_file(SETTINGS_FILE)
    if not _settings:
        _settings = get_default_settings()
    return normalize_settings(_settings)


def set_settings(settings: Settings, path: str | None = None):
    global _settings
    _settings = normalize_settings(settings)
    _write_settings_file(_settings, path or SETTINGS_FILE)


def set_settings_delta(delta: dict):
    current = get_settings()
    set_settings({**current, **delta})  # type: ignore


def reset_settings():
    global _settings
    _settings = None


def normalize_settings(settings: dict) -> Settings:
    copy = dict(settings)
    default = get_default_settings()

    if copy.get("version") != default["version"]:
        copy["version"] = default["version"]

    # remove keys that are not in default
    for key in [key for key in copy if key not in default]:
        del copy[key]

    # add missing keys and normalize types
    for key, value in default.items():
        if key not in copy:
            copy[key] = value
        else:
            try:
                copy[key] = _coerce(copy[key], value)
            except (ValueError, TypeError):
                PrintStyle.warning(f"Setting '{key}' has invalid value {copy[key]!r}, using default {value!r}")
                copy[key] = value

    return copy  # type: ignore


def apply_env_overrides(settings: Settings) -> Settings:
    overrides = dotenv.get_setting_overrides(settings.keys())
    if not overrides:
        return settings
    return normalize_settings({**settings, **overrides})


def _coerce(value: Any, default: Any) -> Any:
    if isinstance(default, bool):
        if isinstance(value, str):
            if value.lower() in ("1", "true", "yes", "on"):
                return True
            if value.lower() in ("0", "false", "no", "off"):
                return False
            raise ValueError(value)
        return bool(value)
    if isinstance(default, list):
        item_type = type(default[0]) if default else str
        if isinstance(value, str):
            value = [v for v in value.replace(";", ",").split(",") if v.strip()]
        return [item_type(float(v)) if item_type is int else item_type(v) for v in value]
    if isinstance(default, int):
        return int(float(value))
    return type(default)(value)


def _read_settings_file(path: str) -> Settings | None:
    if os.path.exists(path):
        content = files.read_file(path)
        try:
            parsed = json.loads(content)
        except json.JSONDecodeError as e:
            raise MalformedInputError(f"settings file {path} is not valid JSON: {e}") from e
        if not isinstance(parsed, dict):
            raise MalformedInputError(f"settings file {path} must hold a JSON object")
        return normalize_settings(parsed)
    return None


def _write_settings_file(settings: Settings, path: str):
    files.write_file(path, json.dumps(settings, indent=4))
