"""Reversible Mealy automata.

An automaton is a finite machine with states ``S``, input alphabet ``I``,
output alphabet ``O``, a transition table ``delta: S x I -> S`` and an
output table ``lam: S x I -> O``. It is *reversible* when the combined map

    U: (s, i) -> (delta(s, i), lam(s, i))

is injective. Neither table needs to be one-to-one on its own.

Symbols are opaque string tokens; declaration order is the canonical
index order, so configuration ``(states[a], inputs[b])`` has index
``a * len(inputs) + b``.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple, Sequence

import numpy as np

from .errors import AlphabetError, FeedbackError, NotReversibleError, ParseError, RevsymError


class Configuration(NamedTuple):
    state: str
    symbol: str

    def __str__(self):
        return f"({self.state},{self.symbol})"


@dataclass(frozen=True)
class Automaton:
    states: tuple[str, ...]
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    delta: Mapping[tuple[str, str], str] = field(hash=False)
    lam: Mapping[tuple[str, str], str] = field(hash=False)

    next_index: np.ndarray = field(init=False, repr=False, compare=False, hash=False)
    output_index: np.ndarray = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        for name in ("states", "inputs", "outputs"):
            symbols = tuple(getattr(self, name))
            object.__setattr__(self, name, symbols)
            if not symbols:
                raise AlphabetError(f"{name} must not be empty")
            if len(set(symbols)) != len(symbols):
                raise AlphabetError(f"duplicate symbol in {name}")
        object.__setattr__(self, "delta", dict(self.delta))
        object.__setattr__(self, "lam", dict(self.lam))

        s_idx = {s: k for k, s in enumerate(self.states)}
        o_idx = {o: k for k, o in enumerate(self.outputs)}
        nxt = np.empty((len(self.states), len(self.inputs)), dtype=np.int64)
        out = np.empty_like(nxt)
        for a, s in enumerate(self.states):
            for b, i in enumerate(self.inputs):
                if (s, i) not in self.delta or (s, i) not in self.lam:
                    raise RevsymError(f"missing pair ({s},{i})")
                t, o = self.delta[(s, i)], self.lam[(s, i)]
                if t not in s_idx:
                    raise AlphabetError(f"undeclared state {t!r}")
                if o not in o_idx:
                    raise AlphabetError(f"undeclared output {o!r}")
                nxt[a, b] = s_idx[t]
                out[a, b] = o_idx[o]
        extra = (set(self.delta) | set(self.lam)) - {(s, i) for s in self.states for i in self.inputs}
        if extra:
            s, i = sorted(extra)[0]
            raise AlphabetError(f"table entry for undeclared pair ({s},{i})")
        nxt.flags.writeable = False
        out.flags.writeable = False
        object.__setattr__(self, "next_index", nxt)
        object.__setattr__(self, "output_index", out)

    @property
    def size(self) -> int:
        return len(self.states) * len(self.inputs)

    def configurations(self) -> list[Configuration]:
        return [Configuration(s, i) for s in self.states for i in self.inputs]

    def index_of(self, c: Configuration) -> int:
        try:
            return self.states.index(c.state) * len(self.inputs) + self.inputs.index(c.symbol)
        except ValueError:
            raise AlphabetError(f"{c} is not a configuration of this machine") from None

    def rows(self) -> list[tuple[str, str, str, str]]:
        return [(s, i, self.delta[(s, i)], self.lam[(s, i)]) for s in self.states for i in self.inputs]


def from_rows(states, inputs, outputs, rows: Iterable[Sequence[str]]) -> Automaton:
    """Build an automaton from ``(state, input, next_state, output)`` rows."""
    delta, lam = {}, {}
    for s, i, t, o in rows:
        delta[(s, i)] = t
        lam[(s, i)] = o
    return Automaton(tuple(states), tuple(inputs), tuple(outputs), delta, lam)


def parse_automaton(text: str) -> Automaton:
    """Parse the line-oriented automaton description format.

    ::

        states: s1 s2
        inputs: 1 2 3
        outputs: 1 2 3
        table:
        s1 1 -> s1 1
        ...

    Blank lines and lines starting with ``#`` are ignored. Errors carry the
    offending line number.
    """
    decl: dict[str, tuple[str, ...]] = {}
    rows: dict[tuple[str, str], tuple[str, str]] = {}
    in_table = False
    last_line = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        last_line = lineno
        if not in_table:
            key, sep, rest = line.partition(":")
            key = key.strip()
            if not sep:
                raise ParseError(f"expected 'key: value', got {line!r}", lineno)
            if key == "table":
                if rest.strip():
                    raise ParseError("'table:' takes no values", lineno)
                missing = [k for k in ("states", "inputs", "outputs") if k not in decl]
                if missing:
                    raise ParseError(f"'{missing[0]}:' must be declared before 'table:'", lineno)
                in_table = True
                continue
            if key not in ("states", "inputs", "outputs"):
                raise ParseError(f"unknown declaration {key!r}", lineno)
            if key in decl:
                raise ParseError(f"'{key}:' declared twice", lineno)
            tokens = tuple(rest.split())
            if not tokens:
                raise ParseError(f"'{key}:' declares no symbols", lineno)
            if "->" in tokens:
                raise ParseError("'->' is not a valid symbol", lineno)
            if len(set(tokens)) != len(tokens):
                dup = next(t for t in tokens if tokens.count(t) > 1)
                raise ParseError(f"duplicate symbol {dup!r} in {key}", lineno)
            decl[key] = tokens
            continue

        parts = line.split()
        if len(parts) != 5 or parts[2] != "->":
            raise ParseError(f"malformed row {line!r}; expected '<state> <input> -> <state> <output>'", lineno)
        s, i, _, t, o = parts
        for sym, kind in ((s, "states"), (i, "inputs"), (t, "states"), (o, "outputs")):
            if sym not in decl[kind]:
                raise ParseError(f"undeclared symbol {sym!r} (not in {kind})", lineno)
        if (s, i) in rows:
            raise ParseError(f"duplicate pair ({s},{i})", lineno)
        rows[(s, i)] = (t, o)

    if not in_table:
        raise ParseError("missing 'table:' section", last_line or None)
    for s in decl["states"]:
        for i in decl["inputs"]:
            if (s, i) not in rows:
                raise ParseError(f"missing pair ({s},{i})", last_line)
    return from_rows(
        decl["states"], decl["inputs"], decl["outputs"], ((s, i, t, o) for (s, i), (t, o) in rows.items())
    )


def load_automaton(path) -> Automaton:
    with open(path, encoding="utf-8") as fh:
        return parse_automaton(fh.read())


def format_automaton(a: Automaton) -> str:
    lines = [
        "states: " + " ".join(a.states),
        "inputs: " + " ".join(a.inputs),
        "outputs: " + " ".join(a.outputs),
        "table:",
    ]
    lines += [f"{s} {i} -> {t} {o}" for s, i, t, o in a.rows()]
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReversibilityReport:
    reversible: bool
    collisions: tuple[tuple[Configuration, ...], ...] = ()


def combined_codes(a: Automaton) -> np.ndarray:
    """Integer code of ``U(s, i)`` for every configuration, in canonical order."""
    return (a.next_index * len(a.outputs) + a.output_index).ravel()


def check_reversible(a: Automaton) -> ReversibilityReport:
    """Decide injectivity of ``U`` and list every group of colliding pairs."""
    groups = defaultdict(list)
    for c, code in zip(a.configurations(), combined_codes(a)):
        groups[int(code)].append(c)
    collisions = tuple(tuple(g) for g in groups.values() if len(g) > 1)
    return ReversibilityReport(not collisions, collisions)


def step(a: Automaton, c: Configuration) -> Configuration:
    """Apply ``U`` once."""
    key = (c.state, c.symbol)
    if c.symbol not in a.inputs:
        raise AlphabetError(f"symbol {c.symbol!r} is not in the input alphabet")
    if c.state not in a.states:
        raise AlphabetError(f"state {c.state!r} is not declared")
    return Configuration(a.delta[key], a.lam[key])


@dataclass(frozen=True)
class Trajectory:
    """A run of an automaton.

    ``steps[k]`` is the configuration fed to step ``k`` (state and input)
    and ``steps[-1]`` pairs the final state with the last emitted output.
    In a closed-loop run the output of each step is the next input, so
    consecutive entries are related by ``U``. ``outputs[k]`` is the output
    emitted at step ``k``.
    """

    steps: tuple[Configuration, ...]
    closed_loop: bool
    outputs: tuple[str, ...] = ()

    def __len__(self):
        return len(self.steps)


def run_closed(a: Automaton, c0: Configuration, n: int) -> Trajectory:
    if n < 0:
        raise ValueError("step count must be non-negative")
    c0 = Configuration(*c0)
    steps = [c0]
    outputs = []
    c = c0
    for k in range(n):
        if c.symbol not in a.inputs:
            raise FeedbackError(f"output {c.symbol!r} is not a legal input", k)
        c = step(a, c)
        steps.append(c)
        outputs.append(c.symbol)
    return Trajectory(tuple(steps), True, tuple(outputs))


def run_open(a: Automaton, state: str, inputs: Sequence[str]) -> Trajectory:
    """Drive the machine with an external input stream."""
    steps = []
    outputs = []
    for i in inputs:
        c = Configuration(state, i)
        steps.append(c)
        nxt = step(a, c)
        state = nxt.state
        outputs.append(nxt.symbol)
    if not inputs:
        raise ValueError("open-loop run needs at least one input")
    steps.append(Configuration(state, outputs[-1]))
    return Trajectory(tuple(steps), False, tuple(outputs))


def invert(a: Automaton) -> Automaton:
    """Return the machine that undoes ``a`` one step at a time.

    Its inputs are ``a.outputs`` and its outputs are ``a.inputs``.
    """
    report = check_reversible(a)
    if not report.reversible:
        raise NotReversibleError(f"combined map is not injective: {len(report.collisions)} collision(s)")
    if len(a.inputs) != len(a.outputs):
        raise AlphabetError(
            f"{len(a.inputs)} inputs vs {len(a.outputs)} outputs: U cannot be a bijection onto state x output"
        )
    delta, lam = {}, {}
    for s, i, t, o in a.rows():
        delta[(t, o)] = s
        lam[(t, o)] = i
    return Automaton(a.states, a.outputs, a.inputs, delta, lam)


def undo_trajectory(a: Automaton, t: Trajectory, inverse: Automaton | None = None) -> Configuration:
    """Run a trajectory backwards through the inverse machine.

    Each backward step feeds the inverse machine the output recorded for
    that step; the returned configuration is the start of the run.
    """
    inv = invert(a) if inverse is None else inverse
    n = len(t.steps) - 1
    if n == 0:
        return t.steps[0]
    c = t.steps[-1]
    for k in range(n - 1, -1, -1):
        c = step(inv, c)
        if k > 0:
            c = Configuration(c.state, t.outputs[k - 1])
    return c


def fixed_points(a: Automaton) -> list[Configuration]:
    return [c for c in a.configurations() if c.symbol in a.outputs and step(a, c) == c]
