import pytest

from src.core.harbourne.certificates import builtin_certificates
from src.core.harbourne.tspace import TVector


@pytest.fixture(scope="session")
def db():
    return builtin_certificates()


@pytest.fixture
def fano_t():
    return TVector(7, (0, 7, 0, 0, 0, 0))


@pytest.fixture
def dual_hesse_t():
    return TVector(9, (0, 12, 0, 0, 0, 0, 0, 0))


@pytest.fixture
def ten_lines_t():
    return TVector(10, (0, 9, 3, 0, 0, 0, 0, 0, 0))
