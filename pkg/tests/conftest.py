import pytest
from hypothesis import settings

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


@pytest.fixture
def r_std():
    from squeezebath.reservoir import ReservoirSpec

    return ReservoirSpec(1.0, 0.5, 1.0)
