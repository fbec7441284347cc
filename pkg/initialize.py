from dataclasses import dataclass, field, replace
from functools import lru_cache

from python.helpers import settings, dotenv
from python.helpers.print_style import PrintStyle


@dataclass(frozen=True)
class CalculusConfig:
    quad_nodes: int = 64
    quad_tol: float = 1e-8
    quad_max_points: int = 65_536
    eig_tol: float = 1e-10
    eig_max_iter: int = 10_000
    stability_ratio: float = 1.1
    spread_tol: float = 0.05
    sphere_samples: int = 4096
    elliptic_tol: float = 1e-9
    hypo_max_order: int = 2
    grid_r_min: float = 1.0
    grid_r_max: float = 8.0
    grid_radial: int = 16
    grid_angular: int = 64
    cert_radius: float = 6.0
    cert_points: int = 4000
    cert_refine_factor: float = 1.25
    bound_radius: float = 4.0
    bound_points: int = 400
    garding_cutoffs: tuple[int, ...] = (8, 16, 24, 32)
    detector_radii: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0)
    detector_samples: int = 64
    detector_tol: float = 1e-10
    kernel_clamp: float = 700.0
    seed: int = 0
    workers: int = 4
    debug: bool = False
    log_html: bool = True
    extras: dict = field(default_factory=dict, compare=False)

    def with_overrides(self, **kwargs) -> "CalculusConfig":
        known = {k: v for k, v in kwargs.items() if v is not None and k in self.__dataclass_fields__}
        return replace(self, **known)


def _from_settings(current: settings.Settings) -> CalculusConfig:
    values = {k: v for k, v in current.items() if k in CalculusConfig.__dataclass_fields__}
    values["garding_cutoffs"] = tuple(values["garding_cutoffs"])
    values["detector_radii"] = tuple(values["detector_radii"])
    return CalculusConfig(**values)


def initialize_config(config_path: str | None = None, **flag_overrides) -> CalculusConfig:
    # defaults < settings file < FOCK_* environment < command-line flags
    dotenv.load_dotenv()
    current = settings.get_settings(config_path)
    current = settings.apply_env_overrides(current)
    config = _from_settings(current).with_overrides(**flag_overrides)

    PrintStyle.configure(html_enabled=config.log_html, debug_enabled=config.debug)
    PrintStyle.debug(f"Configuration: quad_nodes={config.quad_nodes}, quad_tol={config.quad_tol}, eig_tol={config.eig_tol}")
    return config


@lru_cache(maxsize=1)
def default_config() -> CalculusConfig:
    return _from_settings(settings.get_default_settings())
