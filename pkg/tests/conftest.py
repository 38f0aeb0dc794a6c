import pytest
from hypothesis import HealthCheck, settings

from lladic.localring import base_ring, cyclotomic_ring, real_cyclotomic_ring, unramified_ring

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PREC = 20


@pytest.fixture(scope="session")
def z5():
    return base_ring(5, PREC)


@pytest.fixture(scope="session")
def z7():
    return base_ring(7, PREC)


@pytest.fixture(scope="session")
def cyc5():
    return cyclotomic_ring(base_ring(5, PREC))


@pytest.fixture(scope="session")
def cyc7():
    return cyclotomic_ring(base_ring(7, PREC))


@pytest.fixture(scope="session")
def real5():
    return real_cyclotomic_ring(base_ring(5, PREC))


@pytest.fixture(scope="session")
def unr74():
    return unramified_ring(7, 4, PREC)
