import pytest

from counterscope.catalog import builtin_catalog
from counterscope.simulator import builtin_profile


@pytest.fixture(scope="session")
def catalog():
    return builtin_catalog()


@pytest.fixture(scope="session")
def profile():
    return builtin_profile()
