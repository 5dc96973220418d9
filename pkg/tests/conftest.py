"""Pytest configuration and fixtures for testing."""
import os

import numpy as np
import pytest

# Set test environment before importing app modules
os.environ['DENSEWLAN_THREADS'] = '1'
os.environ['LOG_LEVEL'] = 'WARNING'

from typer.testing import CliRunner  # noqa: E402

from schemas.network_config_schema import NetworkConfig  # noqa: E402
from schemas.point_set_schema import PointSet  # noqa: E402
from services.association_service import build_problem  # noqa: E402
from services.config_service import build_config, default_config  # noqa: E402
from utils.seeding import make_rng  # noqa: E402

# Dense deployment with low transmit power: the PCS bound sits near 150 mW, so
# thresholds between a few mW and the bound give non-degenerate STPs.
DENSE_OVERRIDES = [
    "lambda_s=0.9",
    "lambda_a=0.5",
    "p_tx_dbm=-30",
    "pcs_dbm=10",
    "gamma_db=0",
    "antennas=2",
    "window=4,4",
]


@pytest.fixture
def reference_cfg() -> NetworkConfig:
    """Reference deployment parameters."""
    return default_config()


@pytest.fixture
def dense_cfg() -> NetworkConfig:
    """Small dense configuration with a usable PCS threshold range."""
    return build_config(overrides=DENSE_OVERRIDES)


@pytest.fixture
def rng() -> np.random.Generator:
    """Seeded generator."""
    return make_rng(12345)


@pytest.fixture
def fixed_aps(dense_cfg) -> PointSet:
    """Two APs on the diagonal of the dense window."""
    return PointSet(points=[[1.0, 1.0], [3.0, 3.0]], density=dense_cfg.lambda_a, window=dense_cfg.window)


@pytest.fixture
def fixed_stas(dense_cfg) -> PointSet:
    """Five STAs; the first two are nearest to AP 0, the next two to AP 1."""
    return PointSet(
        points=[[0.5, 1.2], [1.4, 0.8], [2.8, 3.1], [3.5, 2.5], [1.8, 1.9]],
        density=dense_cfg.lambda_s,
        window=dense_cfg.window,
    )


@pytest.fixture
def fixed_problem(dense_cfg, fixed_aps, fixed_stas):
    """Association problem on the fixed instance."""
    return build_problem(dense_cfg, fixed_aps, fixed_stas)


@pytest.fixture
def tmp_out(tmp_path):
    """Temporary output directory."""
    out = tmp_path / "out"
    out.mkdir()
    return out


@pytest.fixture
def cli_runner() -> CliRunner:
    """Typer CLI runner."""
    return CliRunner()
