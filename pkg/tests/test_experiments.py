import itertools
import random

import pytest

from revsym.errors import RevsymError
from revsym.experiments import (
    FALSIFIED,
    IMMANENT,
    NOT_FALSIFIED,
    TRANSCENDENT,
    CompositeSystem,
    eraser_experiment,
    measure,
    transcendence_experiment,
    unmeasure,
)


def S(k, m, r):
    return CompositeSystem(k, m, r)


@pytest.mark.parametrize(
    "before, after",
    [(S(2, 1, 0), S(2, 1, 1)), (S(2, 0, 0), S(2, 0, 0)), (S(5, 3, 4), S(5, 3, 2))],
)
def test_measure(before, after):
    assert measure(before) == after
    assert unmeasure(after) == before


@pytest.mark.parametrize("k", range(1, 17))
def test_measure_is_bijection(k):
    states = [S(k, m, r) for m, r in itertools.product(range(k), repeat=2)]
    images = {measure(s) for s in states}
    assert len(images) == k * k
    assert all(unmeasure(measure(s)) == s for s in states)
    assert all(measure(s).object_state == s.object_state for s in states)


def test_invalid_composite():
    with pytest.raises(RevsymError):
        S(3, 3, 0)
    with pytest.raises(RevsymError):
        S(0, 0, 0)


def test_eraser_one_bit():
    rep = eraser_experiment(2, S(2, 1, 0))
    assert rep.restored and not rep.trace_left
    assert rep.mid_register == 1
    assert [s.as_tuple() for s in rep.steps] == [(1, 0), (1, 1), (1, 0)]


def test_eraser_trivial_alphabet():
    rep = eraser_experiment(1, S(1, 0, 0))
    assert rep.restored and len(set(rep.steps)) == 1


def test_eraser_random():
    rnd = random.Random(3)
    for seed in range(1000):
        k = rnd.randint(1, 16)
        rep = eraser_experiment(k, seed=seed)
        assert rep.restored and not rep.trace_left
        assert rep.steps[0] == rep.steps[-1]
        first = rep.steps[0]
        assert rep.mid_register == (first.observer_register + first.object_state) % k


def test_transcendent_never_misses():
    rep = transcendence_experiment(3, TRANSCENDENT, 10_000, seed=1)
    assert rep.match_rate == 1.0
    assert rep.verdict == NOT_FALSIFIED


def test_immanent_seed42_regression():
    rep = transcendence_experiment(3, IMMANENT, 10_000, seed=42)
    assert rep.matches == 3200
    assert abs(rep.match_rate - 1 / 3) <= 0.014
    assert rep.verdict == FALSIFIED


@pytest.mark.parametrize("seed, verdict", [(0, NOT_FALSIFIED), (1, FALSIFIED)])
def test_single_immanent_trial(seed, verdict):
    rep = transcendence_experiment(2, IMMANENT, 1, seed=seed)
    assert rep.verdict == verdict
    assert rep.matches == (1 if verdict == NOT_FALSIFIED else 0)


@pytest.mark.parametrize("k", [2, 3, 5, 8])
def test_immanent_binomial_band(k):
    n = 4000
    rep = transcendence_experiment(k, IMMANENT, n, seed=k)
    sigma = (n * (1 / k) * (1 - 1 / k)) ** 0.5
    assert abs(rep.matches - n / k) <= 3 * sigma


def test_reproducible():
    a = transcendence_experiment(4, IMMANENT, 500, seed=9)
    b = transcendence_experiment(4, IMMANENT, 500, seed=9)
    assert a == b


@pytest.mark.parametrize(
    "args", [(1, IMMANENT, 10), (3, IMMANENT, 0), (3, "oracle", 10)]
)
def test_transcendence_bad_params(args):
    with pytest.raises(RevsymError):
        transcendence_experiment(*args)
