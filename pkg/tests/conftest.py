import pytest

from manna.instgen import fixtures


@pytest.fixture(scope="session")
def named_fixtures():
    return fixtures()
