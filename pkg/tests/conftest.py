import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from povmforge.finite_field import make_field, make_tower

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def gf8():
    return make_field(2, 3)


@pytest.fixture(scope="session")
def gf9():
    return make_field(3, 2)


@pytest.fixture(scope="session")
def tower2():
    return make_tower(2, 1)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(1234)
