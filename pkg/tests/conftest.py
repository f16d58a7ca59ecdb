import os

import pytest
from hypothesis import HealthCheck, settings

from qsigalois.scalars import cyclotomic, rational_functions, rationals

settings.register_profile(
    "seed0",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    max_examples=30,
)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "seed0"))

DEMO_DATA = os.path.join(os.path.dirname(__file__), os.pardir, "demos", "data")


@pytest.fixture
def Q2():
    return rationals(2)


@pytest.fixture
def Qq():
    return rational_functions()


@pytest.fixture
def Z3():
    return cyclotomic(3)


@pytest.fixture
def demo_data():
    return os.path.abspath(DEMO_DATA)
