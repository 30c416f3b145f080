import pytest

from pertop.operations import OperationContext
from pertop.simplicial import em_space_2, normalized_chain_complex


@pytest.fixture(scope="session")
def em26():
    return em_space_2(2, 6)


@pytest.fixture(scope="session")
def em26_complex(em26):
    return normalized_chain_complex(em26)


@pytest.fixture(scope="session")
def em26_ctx(em26, em26_complex):
    return OperationContext(em26, em26_complex)
