"""Entropy accounting and information-flux bookkeeping.

Distributions live on micro configuration indices. A permutation moves
probability around without changing Shannon entropy; a many-to-one readout
merges probability and can only lower it.

The flux half deals with bits crossing surfaces: the flow density of ``N``
carriers per cubic metre moving at ``v`` with ``i`` bits each is
``N * v * i``, the flow through a surface is the sum of ``(j . n) dA`` over
its patches, and on a lattice the per-cell balance ``rho' - rho = in - out``
is checked in exact integers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import kernels
from .errors import LatticeError, RevsymError
from .interface import InterfaceMap
from .permutation import Permutation

SPEED_OF_LIGHT = 2.998e8
NORM_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class Distribution:
    probs: np.ndarray
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        p = np.array(self.probs, dtype=np.float64).ravel()
        if p.size == 0:
            raise RevsymError("empty distribution")
        if not np.all(np.isfinite(p)) or np.any(p < 0):
            raise RevsymError("probabilities must be finite and non-negative")
        if abs(math.fsum(p) - 1.0) > NORM_TOL:
            raise RevsymError(f"probabilities sum to {math.fsum(p)!r}, not 1")
        if self.labels is not None and len(self.labels) != p.size:
            raise RevsymError("labels do not match distribution length")
        p.flags.writeable = False
        object.__setattr__(self, "probs", p)

    @classmethod
    def uniform(cls, n: int) -> Distribution:
        return cls(np.full(n, 1.0 / n))

    def __len__(self):
        return self.probs.shape[0]


def _probs(d) -> np.ndarray:
    return d.probs if isinstance(d, Distribution) else Distribution(d).probs


def entropy(d: Distribution | Sequence[float]) -> float:
    """Shannon entropy in bits, with ``0 log 0 = 0``."""
    return kernels.entropy_bits(_probs(d))


def push_forward(d: Distribution | Sequence[float], p: Permutation) -> Distribution:
    probs = _probs(d)
    if probs.shape[0] != p.size:
        raise RevsymError(f"distribution of size {probs.shape[0]} vs permutation of size {p.size}")
    return Distribution(kernels.push_forward(probs, p.image))


def project(d: Distribution | Sequence[float], m: InterfaceMap, q: str) -> Distribution:
    """Macro distribution over ``m.answers`` under question ``q``."""
    probs = _probs(d)
    labels = m.labels(q)
    if labels.shape[0] != probs.shape[0]:
        raise RevsymError(f"readout covers {labels.shape[0]} configurations, distribution {probs.shape[0]}")
    out = kernels.project(probs, labels, len(m.answers))
    return Distribution(out, m.answers)


# -- flux ------------------------------------------------------------------


def flux_density(n: float, v: float, i: float = 1.0) -> float:
    """Flow density ``N v i`` in bits per square metre per second."""
    if n < 0 or i < 0:
        raise RevsymError("carrier density and bits per carrier must be non-negative")
    return n * v * i


@dataclass(frozen=True, eq=False)
class SurfacePatch:
    j: np.ndarray
    n: np.ndarray
    area: float

    def __post_init__(self):
        j = np.asarray(self.j, dtype=np.float64).reshape(3)
        n = np.asarray(self.n, dtype=np.float64).reshape(3)
        if abs(np.linalg.norm(n) - 1.0) > 1e-9:
            raise RevsymError(f"normal {n.tolist()} is not a unit vector")
        if not self.area > 0:
            raise RevsymError("patch area must be positive")
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "n", n)


def surface_flow(patches: Iterable[SurfacePatch]) -> float:
    """Bits per second through a tessellated surface, ``sum (j . n) dA``."""
    return math.fsum(float(np.dot(p.j, p.n)) * p.area for p in patches)


def sphere_flow(x: float, c: float = SPEED_OF_LIGHT, i: float = 1.0) -> float:
    """Flow through a sphere of radius ``x`` with radial density ``c i``."""
    if not x > 0:
        raise RevsymError("radius must be positive")
    return 4.0 * math.pi * x * x * c * i


_ICO_FACES = (
    (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
    (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
    (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
    (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
)  # fmt: skip


def icosphere(subdivisions: int = 3) -> tuple[np.ndarray, np.ndarray]:
    """Unit icosphere: ``(vertices, faces)`` with ``20 * 4**subdivisions`` outward faces."""
    g = (1 + 5**0.5) / 2
    verts = [
        (-1, g, 0), (1, g, 0), (-1, -g, 0), (1, -g, 0),
        (0, -1, g), (0, 1, g), (0, -1, -g), (0, 1, -g),
        (g, 0, -1), (g, 0, 1), (-g, 0, -1), (-g, 0, 1),
    ]  # fmt: skip
    verts = [np.array(v, dtype=np.float64) / np.linalg.norm(v) for v in verts]
    faces = list(_ICO_FACES)
    for _ in range(subdivisions):
        midpoint: dict[tuple[int, int], int] = {}

        def mid(a, b):
            key = (a, b) if a < b else (b, a)
            if key not in midpoint:
                m = verts[a] + verts[b]
                verts.append(m / np.linalg.norm(m))
                midpoint[key] = len(verts) - 1
            return midpoint[key]

        new = []
        for a, b, c in faces:
            ab, bc, ca = mid(a, b), mid(b, c), mid(c, a)
            new += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = new
    return np.array(verts), np.array(faces, dtype=np.int64)


def radial_patches(radius: float, magnitude: float, subdivisions: int = 3) -> list[SurfacePatch]:
    """Flat icosphere facets of ``radius`` carrying a radial flow of ``magnitude``.

    The flow at each facet is evaluated at its centroid direction.
    """
    verts, faces = icosphere(subdivisions)
    verts = verts * radius
    a, b, c = verts[faces[:, 0]], verts[faces[:, 1]], verts[faces[:, 2]]
    cross = np.cross(b - a, c - a)
    norm = np.linalg.norm(cross, axis=1)
    normals = cross / norm[:, None]
    centroid = (a + b + c) / 3
    radial = centroid / np.linalg.norm(centroid, axis=1)[:, None]
    return [SurfacePatch(magnitude * r, nrm, 0.5 * ar) for r, nrm, ar in zip(radial, normals, norm)]


def parse_patches(text: str) -> list[SurfacePatch]:
    """Patch document: one ``jx jy jz nx ny nz area`` line per patch."""
    from .errors import ParseError

    patches = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 7:
            raise ParseError(f"expected 7 numbers 'jx jy jz nx ny nz area', got {len(parts)}", lineno)
        try:
            vals = [float(x) for x in parts]
        except ValueError:
            raise ParseError(f"non-numeric value in {line!r}", lineno) from None
        try:
            patches.append(SurfacePatch(vals[:3], vals[3:6], vals[6]))
        except RevsymError as exc:
            raise ParseError(str(exc), lineno) from None
    return patches


# -- lattice ---------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LatticeFlow:
    """Integer bit contents per cell plus this tick's transfers.

    ``flows`` is an ``(E, 3)`` integer array of ``(src, dst, bits)`` rows.
    ``shape`` is only used for display and neighbour generation.
    """

    cells: np.ndarray
    flows: np.ndarray = field(default_factory=lambda: np.zeros((0, 3), dtype=np.int64))
    shape: tuple[int, ...] | None = None

    def __post_init__(self):
        cells = np.array(self.cells, dtype=np.int64).ravel()
        flows = np.array(self.flows, dtype=np.int64).reshape(-1, 3)
        if np.any(cells < 0):
            raise LatticeError("cells must hold a non-negative number of bits")
        if flows.size:
            if np.any(flows[:, 2] < 0):
                raise LatticeError("transfers must be non-negative")
            if flows[:, :2].min() < 0 or flows[:, :2].max() >= cells.size:
                raise LatticeError("transfer references a cell outside the lattice")
            sent = np.zeros(cells.size, dtype=np.int64)
            np.add.at(sent, flows[:, 0], flows[:, 2])
            over = np.flatnonzero(sent > cells)
            if over.size:
                k = int(over[0])
                raise LatticeError(f"cell {k} sends {int(sent[k])} bits but holds {int(cells[k])}")
        shape = tuple(self.shape) if self.shape is not None else (cells.size,)
        if math.prod(shape) != cells.size:
            raise LatticeError(f"shape {shape} does not match {cells.size} cells")
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "flows", flows)
        object.__setattr__(self, "shape", shape)

    @property
    def total(self) -> int:
        return int(self.cells.sum())


@dataclass(frozen=True)
class ContinuityReport:
    total_before: int
    total_after: int
    residuals: tuple[int, ...]
    region_residuals: Mapping[str, int] = field(default_factory=dict, hash=False)

    @property
    def residual_max(self) -> int:
        vals = [abs(r) for r in self.residuals] + [abs(r) for r in self.region_residuals.values()]
        return max(vals, default=0)

    @property
    def conserved(self) -> bool:
        return self.total_before == self.total_after and self.residual_max == 0


def lattice_tick(
    lattice: LatticeFlow, regions: Mapping[str, Iterable[int]] | None = None
) -> tuple[LatticeFlow, ContinuityReport]:
    """Apply one tick of transfers and audit the balance.

    Per cell, the change in content must equal inflow minus outflow. For each
    named region, the net transfer leaving across its boundary must equal the
    loss of bits inside it.
    """
    cells, flows = lattice.cells, lattice.flows
    src, dst, amt = flows[:, 0].copy(), flows[:, 1].copy(), flows[:, 2].copy()
    new, inflow, outflow = kernels.apply_transfers(cells, src, dst, amt)
    if np.any(new < 0):
        raise LatticeError("transfer would create negative information")
    residuals = (new - cells) - (inflow - outflow)

    region_res = {}
    for name, members in (regions or {}).items():
        inside = np.zeros(cells.size, dtype=np.bool_)
        inside[list(members)] = True
        leaving = int(amt[inside[src] & ~inside[dst]].sum())
        entering = int(amt[~inside[src] & inside[dst]].sum())
        change = int(new[inside].sum()) - int(cells[inside].sum())
        region_res[name] = (leaving - entering) + change

    after = LatticeFlow(new, shape=lattice.shape)
    report = ContinuityReport(
        int(cells.sum()), int(new.sum()), tuple(int(r) for r in residuals), region_res
    )
    return after, report


def grid_edges(shape: tuple[int, int]) -> np.ndarray:
    """Directed nearest-neighbour edges of a rectangular grid, row-major cells."""
    rows, cols = shape
    edges = []
    for r in range(rows):
        for c in range(cols):
            k = r * cols + c
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols:
                    edges.append((k, rr * cols + cc))
    return np.array(edges, dtype=np.int64)


def random_transfers(cells: np.ndarray, edges: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Random feasible transfers: each cell splits at most its content among its out-edges."""
    rows = []
    for k in range(cells.shape[0]):
        out = edges[edges[:, 0] == k]
        if not len(out) or cells[k] == 0:
            continue
        budget = int(rng.integers(0, cells[k] + 1))
        shares = rng.multinomial(budget, np.full(len(out), 1.0 / len(out)))
        rows += [(k, int(d), int(s)) for (_, d), s in zip(out, shares) if s]
    return np.array(rows, dtype=np.int64).reshape(-1, 3)


@dataclass
class LatticeScene:
    """A lattice document: initial cells, an optional transfer schedule, audit regions."""

    cells: np.ndarray
    shape: tuple[int, ...]
    schedule: list[np.ndarray]
    regions: dict[str, list[int]]


def parse_lattice(text: str) -> LatticeScene:
    """Parse a lattice document.

    ::

        shape: 3 3
        cells: 5 0 0 0 0 0 0 0 0
        region: left 0 3 6
        tick:
        0 -> 1 3
        tick:
        1 -> 2 1

    Tick blocks are cycled when more ticks are requested than listed.
    """
    from .errors import ParseError

    shape = None
    cells = None
    schedule: list[list[tuple[int, int, int]]] = []
    regions: dict[str, list[int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        key, sep, rest = line.partition(":")
        try:
            if sep and key.strip() == "shape":
                shape = tuple(int(x) for x in rest.split())
            elif sep and key.strip() == "cells":
                cells = np.array([int(x) for x in rest.split()], dtype=np.int64)
            elif sep and key.strip() == "region":
                name, *members = rest.split()
                regions[name] = [int(x) for x in members]
            elif sep and key.strip() == "tick":
                schedule.append([])
            else:
                parts = line.split()
                if len(parts) != 4 or parts[1] != "->":
                    raise ParseError(f"malformed line {line!r}", lineno)
                if not schedule:
                    raise ParseError("transfer outside a 'tick:' block", lineno)
                schedule[-1].append((int(parts[0]), int(parts[2]), int(parts[3])))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad integer in {line!r}", lineno) from None
    if cells is None:
        raise ParseError("missing 'cells:' line")
    shape = shape or (cells.size,)
    if math.prod(shape) != cells.size:
        raise ParseError(f"shape {shape} does not match {cells.size} cells")
    for name, members in regions.items():
        if any(not 0 <= k < cells.size for k in members):
            raise ParseError(f"region {name!r} references a cell outside the lattice")
    return LatticeScene(cells, shape, [np.array(b, dtype=np.int64).reshape(-1, 3) for b in schedule], regions)


def run_lattice(
    scene: LatticeScene, ticks: int, seed: int | None = 0
) -> tuple[LatticeFlow, list[ContinuityReport]]:
    """Run ``ticks`` ticks; with no schedule, draw random feasible neighbour transfers."""
    rng = np.random.default_rng(seed)
    edges = grid_edges(scene.shape) if len(scene.shape) == 2 else _chain_edges(scene.cells.size)
    state = LatticeFlow(scene.cells, shape=scene.shape)
    reports = []
    for t in range(ticks):
        if scene.schedule:
            flows = scene.schedule[t % len(scene.schedule)]
        else:
            flows = random_transfers(state.cells, edges, rng)
        try:
            state = LatticeFlow(state.cells, flows, scene.shape)
        except LatticeError as exc:
            raise LatticeError(f"tick {t}: {exc}") from None
        state, report = lattice_tick(state, scene.regions)
        reports.append(report)
    return state, reports


def _chain_edges(n: int) -> np.ndarray:
    e = [(k, k + 1) for k in range(n - 1)] + [(k + 1, k) for k in range(n - 1)]
    return np.array(e, dtype=np.int64).reshape(-1, 2)
