import itertools

import pytest
from hypothesis import settings

from revsym.automaton import parse_automaton
from revsym.data import table1, table1_text
from revsym.permutation import Permutation, automaton_from_permutation

# first calls pay numba compilation
settings.register_profile("default", deadline=None)
settings.load_profile("default")


@pytest.fixture
def t1():
    return table1()


@pytest.fixture
def t1_text():
    return table1_text()


@pytest.fixture
def identity_machine():
    return parse_automaton("states: a\ninputs: 0\noutputs: 0\ntable:\na 0 -> a 0\n")


def small_machines(states=("p", "q"), symbols=("0", "1")):
    """Every machine whose combined map is a permutation of states x symbols."""
    n = len(states) * len(symbols)
    for image in itertools.permutations(range(n)):
        yield automaton_from_permutation(states, symbols, Permutation(image))


SMALL_MACHINES = list(small_machines())


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(RESULTS):
        terminalreporter.write_line(RESULTS[number])
