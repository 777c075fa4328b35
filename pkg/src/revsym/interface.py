"""Observer/object interfaces: question-indexed readouts of micro configurations.

A readout asks question ``q`` about micro configuration ``x`` and gets the
answer ``readout[q][x]``. A readout that sends several configurations to
the same answer is a coarse-graining: the micro dynamics stay one-to-one,
but an observer who only sees answers may be unable to reconstruct where
the system came from. ``candidate_filter`` is that observer's best effort.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .automaton import Automaton, Configuration, Trajectory
from .errors import AlphabetError, FeedbackError, InconsistentObservations, ParseError, RevsymError
from .permutation import Permutation, to_permutation

ONE_TO_ONE = "one_to_one"
MANY_TO_ONE = "many_to_one"


@dataclass(frozen=True)
class InterfaceMap:
    questions: tuple[str, ...]
    answers: tuple[str, ...]
    readout: Mapping[str, tuple[str, ...]] = field(hash=False)
    configurations: tuple[Configuration, ...] | None = None
    scenario: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "questions", tuple(self.questions))
        object.__setattr__(self, "answers", tuple(self.answers))
        object.__setattr__(self, "readout", {q: tuple(v) for q, v in self.readout.items()})
        if len(set(self.questions)) != len(self.questions) or len(set(self.answers)) != len(self.answers):
            raise AlphabetError("duplicate question or answer symbol")
        if set(self.readout) != set(self.questions):
            raise RevsymError("readout must define every question and nothing else")
        sizes = {len(v) for v in self.readout.values()}
        if len(sizes) > 1:
            raise RevsymError("readouts cover different numbers of micro configurations")
        declared = set(self.answers)
        for q, row in self.readout.items():
            bad = [a for a in row if a not in declared]
            if bad:
                raise AlphabetError(f"question {q!r} reads undeclared answer {bad[0]!r}")
        if self.configurations is not None:
            object.__setattr__(self, "configurations", tuple(Configuration(*c) for c in self.configurations))
            if len(self.configurations) != self.size:
                raise RevsymError("configuration labels do not match readout length")

    @property
    def size(self) -> int:
        return len(next(iter(self.readout.values()))) if self.readout else 0

    def labels(self, q: str) -> np.ndarray:
        """Answer index of every micro configuration under question ``q``."""
        row = self._row(q)
        idx = {a: k for k, a in enumerate(self.answers)}
        return np.array([idx[a] for a in row], dtype=np.int64)

    def answer_index(self, answer: str) -> int:
        try:
            return self.answers.index(answer)
        except ValueError:
            raise AlphabetError(f"{answer!r} is not a declared answer") from None

    def _row(self, q):
        try:
            return self.readout[q]
        except KeyError:
            raise AlphabetError(f"unknown question {q!r}") from None


def from_partition(
    groups: Mapping[str, Sequence[int]], size: int | None = None, question: str = "q", scenario=None
) -> InterfaceMap:
    """Single-question readout from ``{answer: [micro indices]}``."""
    n = size if size is not None else 1 + max(i for g in groups.values() for i in g)
    row: list[str | None] = [None] * n
    for answer, members in groups.items():
        for i in members:
            if row[i] is not None:
                raise RevsymError(f"micro index {i} assigned twice")
            row[i] = answer
    if None in row:
        raise RevsymError(f"micro index {row.index(None)} has no answer")
    return InterfaceMap((question,), tuple(groups), {question: tuple(row)}, scenario=scenario)


def identity_readout(a: Automaton, question: str = "full") -> InterfaceMap:
    labels = tuple(str(c) for c in a.configurations())
    return InterfaceMap((question,), labels, {question: labels}, tuple(a.configurations()))


def state_readout(a: Automaton, question: str = "state") -> InterfaceMap:
    row = tuple(c.state for c in a.configurations())
    return InterfaceMap((question,), a.states, {question: row}, tuple(a.configurations()))


def constant_readout(a: Automaton, question: str = "blind", answer: str = "*") -> InterfaceMap:
    return InterfaceMap((question,), (answer,), {question: (answer,) * a.size}, tuple(a.configurations()))


def parse_interface(text: str, a: Automaton) -> InterfaceMap:
    """Parse an interface document against the micro configurations of ``a``.

    ::

        questions: state
        answers: s1 s2
        scenario: I_classical        # optional
        readout:
        state s1 1 -> s1
        ...
    """
    decl: dict[str, tuple[str, ...]] = {}
    scenario = None
    table: dict[str, list] = {}
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
            if key == "readout":
                for k in ("questions", "answers"):
                    if k not in decl:
                        raise ParseError(f"'{k}:' must be declared before 'readout:'", lineno)
                table = {q: [None] * a.size for q in decl["questions"]}
                in_table = True
            elif key in ("questions", "answers"):
                tokens = tuple(rest.split())
                if not tokens or len(set(tokens)) != len(tokens) or "->" in tokens:
                    raise ParseError(f"'{key}:' needs distinct symbols", lineno)
                decl[key] = tokens
            elif key == "scenario":
                scenario = rest.strip() or None
            else:
                raise ParseError(f"unknown declaration {key!r}", lineno)
            continue

        parts = line.split()
        if len(parts) != 5 or parts[3] != "->":
            raise ParseError(f"malformed row {line!r}; expected '<question> <state> <symbol> -> <answer>'", lineno)
        q, s, sym, _, ans = parts
        if q not in table:
            raise ParseError(f"undeclared question {q!r}", lineno)
        if ans not in decl["answers"]:
            raise ParseError(f"undeclared answer {ans!r}", lineno)
        try:
            idx = a.index_of(Configuration(s, sym))
        except AlphabetError as exc:
            raise ParseError(str(exc), lineno) from None
        if table[q][idx] is not None:
            raise ParseError(f"duplicate readout for {q} ({s},{sym})", lineno)
        table[q][idx] = ans

    if not in_table:
        raise ParseError("missing 'readout:' section", last_line or None)
    configs = a.configurations()
    for q, row in table.items():
        for idx, ans in enumerate(row):
            if ans is None:
                raise ParseError(f"missing readout for {q} {configs[idx]}", last_line)
    return InterfaceMap(decl["questions"], decl["answers"], table, tuple(configs), scenario)


def load_interface(path, a: Automaton) -> InterfaceMap:
    with open(path, encoding="utf-8") as fh:
        return parse_interface(fh.read(), a)


def _micro_indices(t, m: InterfaceMap) -> list[int]:
    if isinstance(t, Trajectory):
        if m.configurations is None:
            raise RevsymError("interface has no configuration labels; pass micro indices instead")
        where = {c: k for k, c in enumerate(m.configurations)}
        out = []
        for c in t.steps:
            if c not in where:
                raise RevsymError(f"no readout entry for {c}")
            out.append(where[c])
        return out
    out = [int(x) for x in t]
    for x in out:
        if not 0 <= x < m.size:
            raise RevsymError(f"no readout entry for micro index {x}")
    return out


def coarse_grain(t: Trajectory | Sequence[int], m: InterfaceMap, q: str) -> list[str]:
    """Macro symbol sequence seen through question ``q``."""
    row = m._row(q)
    return [row[x] for x in _micro_indices(t, m)]


@dataclass(frozen=True)
class InterfaceClassification:
    per_question: Mapping[str, str] = field(hash=False)
    overall: str
    preimage_sizes: Mapping[str, Mapping[str, int]] = field(hash=False)
    scenario_label: str | None = None


def classify_interface(m: InterfaceMap, micro_count: int | None = None) -> InterfaceClassification:
    """Exhaustively decide which readouts are injective on micro indices."""
    n = m.size if micro_count is None else micro_count
    if n != m.size:
        raise RevsymError(f"readout covers {m.size} micro configurations, not {n}")
    per_q, sizes = {}, {}
    for q in m.questions:
        counts = np.bincount(m.labels(q), minlength=len(m.answers))
        sizes[q] = {a: int(c) for a, c in zip(m.answers, counts) if c}
        per_q[q] = ONE_TO_ONE if counts.max(initial=0) <= 1 else MANY_TO_ONE
    overall = ONE_TO_ONE if all(v == ONE_TO_ONE for v in per_q.values()) else MANY_TO_ONE
    return InterfaceClassification(per_q, overall, sizes, m.scenario)


@dataclass(frozen=True)
class CandidateSet:
    indices: frozenset[int]

    def __len__(self):
        return len(self.indices)

    @property
    def unique(self) -> bool:
        return len(self.indices) == 1


def _dynamics(a) -> Permutation:
    return a if isinstance(a, Permutation) else to_permutation(a)


def candidate_filter(
    a: Automaton | Permutation,
    m: InterfaceMap,
    q: str,
    observations: Sequence[str],
    prior: CandidateSet | Sequence[int] | None = None,
) -> list[CandidateSet]:
    """Micro configurations consistent with each prefix of ``observations``.

    ``C_0 = prior & readout^-1(obs_0)``, ``C_t = U(C_{t-1}) & readout^-1(obs_t)``.
    """
    if not observations:
        raise ValueError("need at least one observation")
    p = _dynamics(a)
    if p.size != m.size:
        raise RevsymError(f"interface covers {m.size} configurations, dynamics {p.size}")
    labels = m.labels(q)
    obs = np.array([m.answer_index(o) for o in observations], dtype=np.int64)
    mask0 = np.zeros(p.size, dtype=np.bool_)
    if prior is None:
        mask0[:] = True
    else:
        members = prior.indices if isinstance(prior, CandidateSet) else prior
        mask0[list(members)] = True
    masks = kernels.filter_sequence(p.image, labels, obs, mask0)
    out = []
    for t, mask in enumerate(masks):
        idx = np.flatnonzero(mask)
        if idx.size == 0:
            raise InconsistentObservations(f"no configuration is consistent with {observations[t]!r}", t)
        out.append(CandidateSet(frozenset(int(i) for i in idx)))
    return out


def initial_candidates(a: Automaton | Permutation, trace: Sequence[CandidateSet]) -> CandidateSet:
    """Pull the last candidate set back to the start of the run."""
    p = _dynamics(a)
    back = kernels.power_image(p.image, -(len(trace) - 1))
    return CandidateSet(frozenset(int(back[i]) for i in trace[-1].indices))


@dataclass(frozen=True)
class ReconstructibilityReport:
    horizon: int
    fraction_unique: float
    mean_size: float
    final_sizes: tuple[int, ...]


def reconstructibility_report(a: Automaton | Permutation, m: InterfaceMap, q: str, horizon: int) -> ReconstructibilityReport:
    """Filter every start's own closed-loop run and summarise how often it is pinned down."""
    if horizon < 0:
        raise ValueError("horizon must be non-negative")
    if isinstance(a, Automaton) and horizon > 0 and not set(a.outputs) <= set(a.inputs):
        raise FeedbackError("outputs are not a subset of inputs", 1)
    p = _dynamics(a)
    sizes = kernels.reconstruct_all(p.image, m.labels(q), int(horizon))
    return ReconstructibilityReport(
        horizon, float(np.mean(sizes == 1)), float(np.mean(sizes)), tuple(int(s) for s in sizes)
    )
