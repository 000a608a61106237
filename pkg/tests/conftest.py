"""Pytest configuration and shared fixtures.

Provides small grids, fast experiment configurations and noise samples so
that unit tests stay at desk scale.
"""

import os
from pathlib import Path

import numpy as np
import pytest

from src.config import (
    ExperimentConfig,
    FeynmanKacConfig,
    GridConfig,
    MollifierConfig,
    NoiseConfig,
    ReportConfig,
    SolveConfig,
    ValidationConfig,
)
from src.lattice import Field, make_grid
from src.stochastics import NoiseSample, sample_white_noise

SMALL_CONFIG_TEXT = """\
# desk-scale experiment
experiment.name = smoke
grid.L = 2
grid.n = 64
noise.seeds = 1, 2
mollifier.eps_ladder = 2^-1, 2^-2, 2^-3
solver.T = 0.02
solver.dt = 0.001
solver.frame_stride = 10
report.collar = 0.5
fk.walkers = 2000
fk.dt = 0.005
"""


@pytest.fixture(scope="session")
def small_grid():
    """[-1, 1]² with h = 1/32."""
    return make_grid(1.0, 64)


@pytest.fixture(scope="session")
def tiny_grid():
    """[-1, 1]² with h = 1/8, small enough for brute-force references."""
    return make_grid(1.0, 16)


@pytest.fixture(scope="session")
def solver_grid():
    """[-2, 2]² with h = 1/16."""
    return make_grid(2.0, 64)


@pytest.fixture(scope="function")
def rng():
    """Seeded numpy generator for test data."""
    return np.random.default_rng(20240601)


@pytest.fixture(scope="function")
def fast_solve_config():
    """Twenty steps of dt = 1e-3 with frames every ten steps."""
    return SolveConfig(T=0.02, dt=1e-3, frame_stride=10)


@pytest.fixture(scope="function")
def small_config():
    """Experiment configuration that runs a full ladder in seconds."""
    return ExperimentConfig(
        name="smoke",
        grid=GridConfig(L=2.0, n=64),
        noise=NoiseConfig(seeds=[1, 2]),
        mollifier=MollifierConfig(eps_ladder=[0.5, 0.25, 0.125]),
        solver=SolveConfig(T=0.02, dt=1e-3, frame_stride=10),
        fk=FeynmanKacConfig(walkers=2000, dt=5e-3),
        report=ReportConfig(collar=0.5),
        validation=ValidationConfig(),
    )


@pytest.fixture(scope="function")
def config_file(tmp_path):
    """Flat configuration document on disk."""
    path = tmp_path / "smoke.cfg"
    path.write_text(SMALL_CONFIG_TEXT, encoding="utf-8")
    return path


@pytest.fixture(scope="session")
def solver_noise(solver_grid) -> NoiseSample:
    return sample_white_noise(solver_grid, 7)


@pytest.fixture(scope="session")
def zero_noise(solver_grid) -> NoiseSample:
    """ξ ≡ 0 injected as a noise sample."""
    return NoiseSample.injected(Field.zeros(solver_grid))


@pytest.fixture(scope="session")
def gaussian_u0(solver_grid) -> Field:
    return Field.gaussian(solver_grid, 0.25)


@pytest.fixture(scope="function")
def clean_environment():
    """Clean environment variables fixture."""
    original_env = {}
    test_env_vars = ["PAMLAB_LOG_LEVEL", "PAMLAB_ENVIRONMENT"]

    for var in test_env_vars:
        if var in os.environ:
            original_env[var] = os.environ[var]
            del os.environ[var]

    yield

    for var, value in original_env.items():
        os.environ[var] = value


@pytest.fixture(scope="function")
def isolated_cwd(tmp_path, monkeypatch) -> Path:
    """Run in a temporary directory so log files land there."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


def pytest_configure(config):
    """Configure pytest with custom markers."""
    config.addinivalue_line("markers", "unit: mark test as a unit test")
    config.addinivalue_line("markers", "integration: mark test as an integration test")
    config.addinivalue_line("markers", "slow: mark test as slow running")


def pytest_collection_modifyitems(config, items):
    """Modify test collection to add markers."""
    for item in items:
        # Auto-mark tests based on file path
        if "unit" in str(item.fspath):
            item.add_marker(pytest.mark.unit)
        elif "integration" in str(item.fspath):
            item.add_marker(pytest.mark.integration)

        if "slow" in item.name:
            item.add_marker(pytest.mark.slow)
