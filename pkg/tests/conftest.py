import pytest

from dodeca.checks import Context


@pytest.fixture(scope="session")
def ctx():
    """Shared lazily-built artifacts (table, similarity, partitions...)."""
    return Context(seed=0)


@pytest.fixture(scope="session")
def system(ctx):
    return ctx.system


@pytest.fixture(scope="session")
def sim(ctx):
    return ctx.sim
