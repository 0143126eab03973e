import random

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture
def std():
    from torellicore.sampling import STANDARD_A, STANDARD_X

    return STANDARD_A, STANDARD_X
