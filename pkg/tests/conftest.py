import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lipq import ArrivalDist, ModelParams


@pytest.fixture(scope="session")
def desk_params() -> ModelParams:
    """The scaled-down study parameters used across the suite."""
    return ModelParams(alpha=1.44, mean=0.5, rate=1.0, theta=0.85, buffer=2000.0, horizon=5000.0)


@pytest.fixture(scope="session")
def desk_dist() -> ArrivalDist:
    return ArrivalDist(1.44, 0.5)
