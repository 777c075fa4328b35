"""Reversible symbolic dynamics across observer/object interfaces."""
from .automaton import (
    Automaton,
    Configuration,
    ReversibilityReport,
    Trajectory,
    check_reversible,
    invert,
    load_automaton,
    parse_automaton,
    run_closed,
    run_open,
    step,
    undo_trajectory,
)
from .data import table1
from .errors import RevsymError
from .permutation import (
    CycleDecomposition,
    Permutation,
    apply_power,
    cycle_decomposition,
    permutation_matrix,
    to_permutation,
)

__version__ = "0.1.0"
