import pytest
from hypothesis import HealthCheck, settings

from thin_gasket.sequence import LevelSequence

settings.register_profile(
    "suite",
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("suite")


@pytest.fixture
def ls5() -> LevelSequence:
    return LevelSequence((5,), continuation="repeat-last")


@pytest.fixture
def ls576() -> LevelSequence:
    return LevelSequence((5, 7, 6), continuation="repeat-last")
