"""Permutations of indexed configurations: matrix form, cycles, powers."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Sequence

import numpy as np

from . import kernels
from .automaton import Automaton, check_reversible, from_rows
from .errors import AlphabetError, NotReversibleError, RevsymError

MATRIX_HEADER = "# row k = source configuration k, column = its image; configurations ordered (state, symbol) lexicographically by declaration"


@dataclass(frozen=True, eq=False)
class Permutation:
    image: np.ndarray = field(repr=False)

    def __post_init__(self):
        image = np.array(self.image, dtype=np.int64).ravel()
        n = image.shape[0]
        if n and not np.array_equal(np.sort(image), np.arange(n)):
            raise RevsymError("image is not a bijection on 0..size-1")
        image.flags.writeable = False
        object.__setattr__(self, "image", image)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(np.arange(n))

    @property
    def size(self) -> int:
        return self.image.shape[0]

    def __call__(self, idx: int) -> int:
        return int(self.image[idx])

    def __eq__(self, other):
        return isinstance(other, Permutation) and np.array_equal(self.image, other.image)

    def __hash__(self):
        return hash(self.image.tobytes())

    def __repr__(self):
        return f"Permutation({self.image.tolist()})"

    def inverse(self) -> Permutation:
        return Permutation(kernels.inverse_image(self.image))

    def then(self, other: Permutation) -> Permutation:
        """Apply ``self`` first, then ``other``."""
        if other.size != self.size:
            raise RevsymError("size mismatch")
        return Permutation(other.image[self.image])

    def power(self, k: int) -> Permutation:
        return Permutation(kernels.power_image(self.image, int(k)))


def to_permutation(a: Automaton) -> Permutation:
    """The combined map of ``a`` as a permutation of state x input indices."""
    if not check_reversible(a).reversible:
        raise NotReversibleError("combined map is not injective")
    if set(a.inputs) != set(a.outputs) or len(a.inputs) != len(a.outputs):
        raise AlphabetError("inputs and outputs differ; U does not permute state x input")
    out_to_in = np.array([a.inputs.index(o) for o in a.outputs], dtype=np.int64)
    image = a.next_index * len(a.inputs) + out_to_in[a.output_index]
    return Permutation(image.ravel())


def automaton_from_permutation(states: Sequence[str], symbols: Sequence[str], p: Permutation) -> Automaton:
    """Split each image index back into (next state, output) table entries."""
    m = len(symbols)
    if p.size != len(states) * m:
        raise RevsymError(f"permutation of size {p.size} does not fit {len(states)} states x {m} symbols")
    rows = []
    for k, target in enumerate(p.image):
        a, b = divmod(k, m)
        t, o = divmod(int(target), m)
        rows.append((states[a], symbols[b], states[t], symbols[o]))
    return from_rows(states, symbols, symbols, rows)


def permutation_matrix(p: Permutation) -> np.ndarray:
    m = np.zeros((p.size, p.size), dtype=np.int8)
    m[np.arange(p.size), p.image] = 1
    return m


def format_matrix(p: Permutation, header: bool = True) -> str:
    grid = "\n".join(" ".join(str(v) for v in row) for row in permutation_matrix(p))
    return (MATRIX_HEADER + "\n" + grid if header else grid) + "\n"


@dataclass(frozen=True)
class CycleDecomposition:
    cycles: tuple[tuple[int, ...], ...]
    order: int

    def __str__(self):
        body = "".join("(" + " ".join(map(str, c)) + ")" for c in self.cycles)
        return f"{body} order={self.order}"


def cycle_decomposition(p: Permutation) -> CycleDecomposition:
    """Disjoint cycles in canonical form, fixed points included.

    Each cycle starts at its smallest index and cycles are sorted by that
    index, so the form is unique.
    """
    labels = kernels.cycle_labels(p.image)
    cycles = []
    for start in np.flatnonzero(labels == np.arange(p.size)):
        cycle = [int(start)]
        k = p.image[start]
        while k != start:
            cycle.append(int(k))
            k = p.image[k]
        cycles.append(tuple(cycle))
    order = reduce(math.lcm, (len(c) for c in cycles), 1)
    return CycleDecomposition(tuple(cycles), order)


def apply_power(p: Permutation, k: int, idx: int) -> int:
    """``p^k(idx)``; negative ``k`` walks backwards."""
    if not 0 <= idx < p.size:
        raise IndexError(f"index {idx} out of range for size {p.size}")
    return int(kernels.power_image(p.image, int(k))[idx])
