import mpmath
import pytest

from apery_verify.numerics import PrecisionContext


@pytest.fixture(scope="session")
def ctx30():
    return PrecisionContext.from_digits(30)


@pytest.fixture(scope="session")
def ctx40():
    return PrecisionContext.from_digits(40)


@pytest.fixture(scope="session")
def ctx50():
    return PrecisionContext.from_digits(50)


@pytest.fixture
def oracle():
    """mpmath at 70 digits, used only as an independent reference."""
    with mpmath.workdps(70):
        yield mpmath.mp
