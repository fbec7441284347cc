import os

os.environ.setdefault("FOCK_LOG_HTML", "0")

import numpy as np
import pytest

from initialize import default_config
from python.helpers import settings
from python.helpers.print_style import PrintStyle


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path, monkeypatch):
    for key in list(os.environ):
        if key.startswith("FOCK_"):
            monkeypatch.delenv(key)
    monkeypatch.setenv("FOCK_LOG_HTML", "0")
    monkeypatch.setattr(settings, "SETTINGS_FILE", str(tmp_path / "settings.json"))
    settings.reset_settings()
    PrintStyle.configure(html_enabled=False, debug_enabled=False)
    yield
    settings.reset_settings()


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def config():
    return default_config()
