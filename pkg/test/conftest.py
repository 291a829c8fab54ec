import pytest

from pydiii.models import build_model, q_minus, appendix_b_fixtures
from pydiii.invariants import direct_sum


@pytest.fixture(scope="session")
def q_plus():
    return build_model("q_plus")


@pytest.fixture(scope="session")
def q_minus_1():
    return build_model("q_minus")


@pytest.fixture(scope="session")
def q_minus_3():
    return q_minus(n=3)


@pytest.fixture(scope="session")
def q_minus_sum(q_minus_1):
    return direct_sum(q_minus_1, q_minus_1)


@pytest.fixture(scope="session")
def torus_models():
    """The four torus models on the default 64 x 64 grid."""
    return {name: build_model(name) for name in ["q_0", "q_w1", "q_w2", "q_s"]}


@pytest.fixture(scope="session")
def fixtures_b():
    return appendix_b_fixtures()
