"""Measurement-undo experiments on a reversible object + observer system.

Measurement is a reversible copy: the observer register is shifted by the
object state modulo ``k``. Undoing it subtracts the same amount, which puts
the whole composite (observer included) back where it started.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import RevsymError

IMMANENT = "immanent"
TRANSCENDENT = "transcendent"
NOT_FALSIFIED = "not_falsified"
FALSIFIED = "falsified"


@dataclass(frozen=True)
class CompositeSystem:
    k: int
    object_state: int
    observer_register: int

    def __post_init__(self):
        if self.k < 1:
            raise RevsymError("modulus must be at least 1")
        for name in ("object_state", "observer_register"):
            v = getattr(self, name)
            if not 0 <= v < self.k:
                raise RevsymError(f"{name}={v} outside [0, {self.k})")

    def as_tuple(self) -> tuple[int, int]:
        return (self.object_state, self.observer_register)


def measure(c: CompositeSystem) -> CompositeSystem:
    return CompositeSystem(c.k, c.object_state, (c.observer_register + c.object_state) % c.k)


def unmeasure(c: CompositeSystem) -> CompositeSystem:
    return CompositeSystem(c.k, c.object_state, (c.observer_register - c.object_state) % c.k)


@dataclass(frozen=True)
class EraserReport:
    restored: bool
    trace_left: bool
    steps: tuple[CompositeSystem, ...]

    @property
    def mid_register(self) -> int:
        """Observer register between measurement and erasure."""
        return self.steps[1].observer_register


def eraser_experiment(k: int, initial: CompositeSystem | None = None, seed: int | None = None) -> EraserReport:
    """Measure, then erase the measurement, logging every composite state.

    With no ``initial`` a uniformly random composite state is drawn from
    ``seed``.
    """
    if initial is None:
        rng = np.random.default_rng(seed)
        initial = CompositeSystem(k, int(rng.integers(k)), int(rng.integers(k)))
    elif initial.k != k:
        raise RevsymError(f"initial state has modulus {initial.k}, expected {k}")
    mid = measure(initial)
    final = unmeasure(mid)
    return EraserReport(
        restored=final == initial,
        trace_left=final.observer_register != initial.observer_register,
        steps=(initial, mid, final),
    )


@dataclass(frozen=True)
class TranscendenceReport:
    k: int
    agent: str
    trials: int
    matches: int
    seed: int

    @property
    def match_rate(self) -> float:
        return self.matches / self.trials

    @property
    def verdict(self) -> str:
        return NOT_FALSIFIED if self.matches == self.trials else FALSIFIED


def _trial(k: int, agent: str, rng: np.random.Generator) -> bool:
    # Step I: irreducibly random outcome = hidden micro state, copied into the observer
    before = CompositeSystem(k, int(rng.integers(k)), 0)
    seen = measure(before)
    record = seen.observer_register if agent == TRANSCENDENT else None

    # Step II: reconstruct; no physical record survives
    restored = unmeasure(seen)
    if restored != before:
        raise RuntimeError("reconstruction failed to restore the composite state")

    # Step III: predict
    guess = record if record is not None else int(rng.integers(k))

    # Step IV: replay the measurement on the restored state
    return measure(restored).observer_register == guess


def transcendence_experiment(k: int, agent: str, trials: int, seed: int = 0) -> TranscendenceReport:
    """Four-step undo-and-predict protocol, one generator per trial.

    Trial ``t`` draws from ``default_rng([seed, t])`` so the result does not
    depend on evaluation order.
    """
    if k < 2:
        raise RevsymError("need at least two outcomes")
    if trials < 1:
        raise RevsymError("need at least one trial")
    if agent not in (IMMANENT, TRANSCENDENT):
        raise RevsymError(f"agent must be {IMMANENT!r} or {TRANSCENDENT!r}, not {agent!r}")
    matches = sum(_trial(k, agent, np.random.default_rng([seed, t])) for t in range(trials))
    return TranscendenceReport(k, agent, trials, matches, seed)
