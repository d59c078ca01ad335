import pytest

from spectherm import natural_units


@pytest.fixture
def u():
    return natural_units()
