import os
from typing import Any

from dotenv import load_dotenv as _load_dotenv

from .files import get_abs_path

ENV_PREFIX = "FOCK_"


def load_dotenv():
    _load_dotenv(get_dotenv_file_path(), override=True)


def get_dotenv_file_path():
    return get_abs_path(".env")


def get_dotenv_value(key: str, default: Any = None):
    return os.getenv(key, default)


def get_setting_overrides(keys) -> dict[str, str]:
    # FOCK_QUAD_NODES=96 overrides settings["quad_nodes"]
    overrides = {}
    for key in keys:
        value = get_dotenv_value(ENV_PREFIX + key.upper())
        if value is not None and value != "":
            overrides[key] = value
    return overrides
