import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from foxcalc.groupring import RingElement
from foxcalc.words import FactorTable

settings.register_profile("default", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


MIXED = FactorTable.build([("a", "infinite"), ("b", "finite", 3), ("x", "free")])
FREE2 = FactorTable.free(["x", "y"])
FREE3 = FactorTable.free(["x", "y", "z"])


@pytest.fixture
def mixed():
    return MIXED


@pytest.fixture
def free2():
    return FREE2


@pytest.fixture
def free3():
    return FREE3


def words(table, max_len=8):
    letters = table.letters()
    return st.lists(st.sampled_from(letters), max_size=max_len).map(table.word)


def ring_elements(table, max_terms=4, max_len=3):
    term = st.tuples(words(table, max_len), st.integers(-3, 3))
    return st.lists(term, max_size=max_terms).map(
        lambda ts: sum((RingElement.word(w, c) for w, c in ts), RingElement()))
