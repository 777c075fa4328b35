from importlib import resources


def table1_text() -> str:
    return resources.files(__name__).joinpath("table1.aut").read_text(encoding="utf-8")


def table1():
    """The two-state, three-symbol reversible machine shipped with the package."""
    from ..automaton import parse_automaton

    return parse_automaton(table1_text())
