import pytest
from hypothesis import HealthCheck, settings

from ellwn.qspecial import QParams

settings.register_profile(
    "ellwn", deadline=None, max_examples=25, derandomize=True,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ellwn")


@pytest.fixture(scope="session")
def P2():
    return QParams(N=2)


@pytest.fixture(scope="session")
def P3():
    return QParams(N=3)


@pytest.fixture(scope="session", params=[2, 3], ids=["N2", "N3"])
def PN(request):
    return QParams(N=request.param)
