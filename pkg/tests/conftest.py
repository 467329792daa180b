import numpy as np
import pytest

from wmult.config import RunConfig
from wmult.grid import GridSpec, SampledFunction
from wmult.scenario import SweepContext


@pytest.fixture(scope="session")
def run_config():
    return RunConfig()


@pytest.fixture(scope="session")
def cfg(run_config):
    return run_config.resolve_exponents()


@pytest.fixture(scope="session")
def ctx(cfg, run_config):
    """Shared sweep tables for the default configuration (built once)."""
    return SweepContext.create(cfg, eps_list=run_config.eps_list())


@pytest.fixture(scope="session")
def small1d():
    return GridSpec(1, 32.0, 512)


@pytest.fixture(scope="session")
def gaussian(small1d):
    vals = np.exp(-small1d.axis_x ** 2 / 2.0)
    return SampledFunction(small1d, vals.astype(complex))
