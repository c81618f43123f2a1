import pytest

from nfhnf.selftest import corpus_field


@pytest.fixture(scope="session")
def field_q():
    return corpus_field("Q")


@pytest.fixture(scope="session")
def field_qi():
    return corpus_field("Q(i)")


@pytest.fixture(scope="session")
def field_sqrt5():
    return corpus_field("Q(sqrt5)")


@pytest.fixture(scope="session")
def field_cubic():
    return corpus_field("Q(cubic23)")


@pytest.fixture(scope="session")
def all_fields(field_q, field_qi, field_sqrt5, field_cubic):
    return {
        "Q": field_q,
        "Q(i)": field_qi,
        "Q(sqrt5)": field_sqrt5,
        "Q(cubic23)": field_cubic,
    }
