import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from catsum import SystemDims
from catsum.experiments import default_config
from catsum.model import DecoherenceParams


@pytest.fixture(scope="session")
def config():
    """Reference flux-ququart configuration."""
    return default_config()


@pytest.fixture(scope="session")
def device(config):
    return config.device()


@pytest.fixture(scope="session")
def dims40():
    return SystemDims(40)


@pytest.fixture(scope="session")
def dec_reference():
    """T = 20 us, kappa_inv = 100 us."""
    return DecoherenceParams.from_timescale(20.0, 0.01)
