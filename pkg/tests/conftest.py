import pytest
from hypothesis import HealthCheck, settings

from acbm.structure import canonical_structure

settings.register_profile(
    "suite",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture(scope="session")
def s1():
    return canonical_structure(1)


@pytest.fixture(scope="session")
def s2():
    return canonical_structure(2)
