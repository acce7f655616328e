import pytest

from graphette.store import TableSet


@pytest.fixture(scope="session")
def tables3() -> TableSet:
    return TableSet.build(3)


@pytest.fixture(scope="session")
def tables4() -> TableSet:
    return TableSet.build(4)


@pytest.fixture(scope="session")
def tables5() -> TableSet:
    return TableSet.build(5)
