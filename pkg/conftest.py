import pytest
from hypothesis import settings, HealthCheck

import wavepacket as wp

#fixtures below are immutable
settings.register_profile('qif', deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.function_scoped_fixture])
settings.load_profile('qif')


@pytest.fixture
def grid():
    return wp.GridSpec()


@pytest.fixture
def gaussian(grid):
    return wp.gaussian_init(wp.GaussianParams(), grid)
