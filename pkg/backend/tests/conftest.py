# File: backend/tests/conftest.py
# Purpose: Shared pytest fixtures: isolated settings, seeded generators, small layouts and a CLI runner.
import io
import os
from typing import Callable

import numpy as np
import pytest

from app.api.schemas.config import RunConfig
from app.config import get_settings
from app.core.hilbert import SpaceLayout
from app.main import main


@pytest.fixture(autouse=True)
def _isolated_settings(tmp_path, monkeypatch):
    """No BIMODAL_* variable or stray .env file leaks into a test."""
    for name in list(os.environ):
        if name.startswith("BIMODAL_"):
            monkeypatch.delenv(name, raising=False)
    monkeypatch.chdir(tmp_path)
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture()
def layout_n1() -> SpaceLayout:
    return SpaceLayout.bimodal(1)


@pytest.fixture()
def layout_n2() -> SpaceLayout:
    return SpaceLayout.bimodal(2)


@pytest.fixture()
def run_config() -> RunConfig:
    return RunConfig(seed=7, reps=20, sigma_pct=[0.0, 5.0])


@pytest.fixture()
def random_density(rng) -> Callable[[int], np.ndarray]:
    def make(dim: int) -> np.ndarray:
        g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        rho = g @ g.conj().T
        return rho / np.trace(rho)

    return make


@pytest.fixture()
def cli() -> Callable[..., tuple[int, str]]:
    """Run the CLI in-process; returns (exit code, captured stdout)."""

    def run(*argv: str) -> tuple[int, str]:
        out = io.StringIO()
        code = main(list(argv), stdout=out)
        return code, out.getvalue()

    return run
