import pytest
from hypothesis import HealthCheck, settings

from unionlab.canonical import make_spread
from unionlab.setsystem import GroundSet, SetSystem

settings.register_profile(
    "repo",
    max_examples=60,
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture
def m1():
    g = GroundSet(("alpha", "beta", "gamma"))
    S = SetSystem.of(g, [g.mask(["alpha"]), g.mask(["beta"]), g.mask(["alpha", "beta"]), g.full])
    return g, S


@pytest.fixture
def sp2():
    return make_spread((2, 3))


@pytest.fixture(scope="session")
def tiles15():
    from unionlab.fixtures import section6_build

    return section6_build(15)


@pytest.fixture(scope="session")
def tiles8():
    from unionlab.fixtures import section6_build

    return section6_build(8, r_columns=4)
