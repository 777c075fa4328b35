"""Command-line front end.

Exit status: 0 on success, 1 on a domain error (bad document, irreversible
machine, inconsistent observations, ...), 2 on a usage error.
"""
from __future__ import annotations

import argparse
import sys
from typing import Sequence

import numpy as np

from . import experiments, information
from .automaton import (
    Automaton,
    Configuration,
    check_reversible,
    load_automaton,
    run_closed,
    run_open,
    undo_trajectory,
)
from .errors import RevsymError
from .interface import (
    candidate_filter,
    classify_interface,
    coarse_grain,
    initial_candidates,
    load_interface,
    reconstructibility_report,
)
from .permutation import cycle_decomposition, format_matrix, to_permutation


def fmt(x: float) -> str:
    return f"{x:.6g}"


def table(headers: Sequence[str], rows: Sequence[Sequence[object]]) -> str:
    cells = [list(map(str, headers))] + [[str(v) for v in r] for r in rows]
    widths = [max(len(r[c]) for r in cells) for c in range(len(headers))]
    return "\n".join("  ".join(v.ljust(w) for v, w in zip(r, widths)).rstrip() for r in cells)


def footer(**kv) -> str:
    return " ".join(f"{k}={v}" for k, v in kv.items())


def _bool(b: bool) -> str:
    return "true" if b else "false"


def export_dot(a: Automaton) -> str:
    """Flow diagram of ``U``: one node per configuration, one edge per step."""
    p = to_permutation(a)
    configs = a.configurations()
    lines = ["digraph U {", "  rankdir=LR;"]
    for k, c in enumerate(configs):
        lines.append(f'  n{k} [label="{c}"];')
    for k, target in enumerate(p.image):
        lines.append(f"  n{k} -> n{int(target)};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def _pair(text: str, what: str) -> tuple[str, str]:
    parts = text.split(",")
    if len(parts) != 2 or not all(parts):
        raise argparse.ArgumentTypeError(f"{what} must look like 'a,b', got {text!r}")
    return parts[0], parts[1]


def _start(text):
    return Configuration(*_pair(text, "--start"))


def _floats(n):
    def parse(text):
        try:
            vals = [float(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None
        if n is not None and len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated numbers, got {len(vals)}")
        return vals

    return parse


def _ints(n):
    def parse(text):
        try:
            vals = [int(x) for x in text.split(",")]
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
        if len(vals) != n:
            raise argparse.ArgumentTypeError(f"expected {n} comma-separated integers, got {len(vals)}")
        return vals

    return parse


def _symbols(text):
    return [s for s in text.split(",") if s]


# -- subcommands -------------------------------------------------------------


def cmd_validate(args, out):
    a = load_automaton(args.automaton)
    rep = check_reversible(a)
    out.append(
        footer(states=len(a.states), inputs=len(a.inputs), outputs=len(a.outputs), configurations=a.size)
    )
    for group in rep.collisions:
        out.append("collision: " + " ".join(map(str, group)))
    out.append(footer(reversible=_bool(rep.reversible)))


def cmd_run(args, out):
    a = load_automaton(args.automaton)
    if args.inputs:
        t = run_open(a, args.start.state, [args.start.symbol] + args.inputs)
    else:
        t = run_closed(a, args.start, args.steps)
    out.append(table(["step", "state", "symbol"], [(k, c.state, c.symbol) for k, c in enumerate(t.steps)]))
    out.append(footer(steps=len(t.steps) - 1, closed_loop=_bool(t.closed_loop), final=t.steps[-1]))
    if args.undo:
        out.append(f"undo: {undo_trajectory(a, t)}")


def cmd_perm(args, out):
    p = to_permutation(load_automaton(args.automaton))
    if args.matrix:
        out.append(format_matrix(p).rstrip("\n"))
    elif args.cycles:
        out.append(str(cycle_decomposition(p)))
    else:
        out.append("image: " + " ".join(map(str, p.image.tolist())))
        out.append(str(cycle_decomposition(p)))


def cmd_coarse(args, out):
    a = load_automaton(args.automaton)
    m = load_interface(args.interface, a)
    t = run_closed(a, args.start, args.steps)
    macro = coarse_grain(t, m, args.question)
    out.append(table(["step", "micro", "macro"], [(k, c, s) for k, (c, s) in enumerate(zip(t.steps, macro))]))
    cls = classify_interface(m)
    out.append(footer(question=args.question, interface=cls.per_question[args.question]))


def cmd_estimate(args, out):
    a = load_automaton(args.automaton)
    m = load_interface(args.interface, a)
    configs = a.configurations()
    if args.horizon is not None:
        rep = reconstructibility_report(a, m, args.question, args.horizon)
        out.append(
            table(["start", "final_size"], [(configs[k], s) for k, s in enumerate(rep.final_sizes)])
        )
        out.append(
            footer(horizon=rep.horizon, fraction_unique=fmt(rep.fraction_unique), mean_size=fmt(rep.mean_size))
        )
        return
    if not args.obs:
        raise RevsymError("estimate needs --obs or --horizon")
    trace = candidate_filter(a, m, args.question, args.obs)
    rows = [
        (t, o, len(c), " ".join(str(configs[i]) for i in sorted(c.indices)))
        for t, (o, c) in enumerate(zip(args.obs, trace))
    ]
    out.append(table(["step", "obs", "size", "candidates"], rows))
    start = initial_candidates(a, trace)
    initial = " ".join(str(configs[i]) for i in sorted(start.indices))
    out.append(footer(unique=_bool(trace[-1].unique), initial=initial.replace(" ", ",") if initial else "-"))


def cmd_entropy(args, out):
    d = information.Distribution(args.dist)
    h = information.entropy(d)
    out.append(footer(size=len(d), entropy_bits=fmt(h)))
    if args.automaton:
        p = to_permutation(load_automaton(args.automaton))
        h2 = information.entropy(information.push_forward(d, p))
        out.append(footer(pushed_entropy_bits=fmt(h2), change=fmt(h2 - h)))


def cmd_flux(args, out):
    if args.sphere:
        x, c, i = args.sphere
        flow = information.sphere_flow(x, c, i)
        out.append(f"{fmt(flow)} bits/s through a sphere of radius {fmt(x)} m")
        out.append(footer(flow=fmt(flow), radius=fmt(x), speed=fmt(c), bits=fmt(i)))
    elif args.patches:
        with open(args.patches, encoding="utf-8") as fh:
            patches = information.parse_patches(fh.read())
        flow = information.surface_flow(patches)
        out.append(f"{fmt(flow)} bits/s through {len(patches)} patches")
        out.append(footer(flow=fmt(flow), patches=len(patches)))
    else:
        n, v, i = args.density
        out.append(footer(flux_density=fmt(information.flux_density(n, v, i))))


def cmd_lattice(args, out):
    with open(args.lattice, encoding="utf-8") as fh:
        scene = information.parse_lattice(fh.read())
    state, reports = information.run_lattice(scene, args.ticks, args.seed)
    rows = [(t + 1, r.total_after, r.residual_max, _bool(r.conserved)) for t, r in enumerate(reports)]
    out.append(table(["tick", "total_bits", "residual_max", "conserved"], rows))
    if len(scene.shape) == 2:
        grid = state.cells.reshape(scene.shape)
        out.append(table([""] * scene.shape[1], grid.tolist()).split("\n", 1)[-1])
    else:
        out.append(" ".join(map(str, state.cells.tolist())))
    residual = max((r.residual_max for r in reports), default=0)
    out.append(footer(ticks=args.ticks, total_bits=state.total, residual_max=residual))


def cmd_eraser(args, out):
    m, r = args.state
    rep = experiments.eraser_experiment(args.k, experiments.CompositeSystem(args.k, m, r))
    labels = ["initial", "measured", "erased"]
    out.append(
        table(["phase", "object", "register"], [(l, s.object_state, s.observer_register) for l, s in zip(labels, rep.steps)])
    )
    out.append(footer(restored=_bool(rep.restored), trace_left=_bool(rep.trace_left), mid_register=rep.mid_register))


def cmd_transcend(args, out):
    rep = experiments.transcendence_experiment(args.k, args.agent, args.trials, args.seed)
    out.append(
        footer(
            k=rep.k,
            agent=rep.agent,
            trials=rep.trials,
            matches=rep.matches,
            match_rate=fmt(rep.match_rate),
            verdict=rep.verdict,
            seed=rep.seed,
        )
    )


def cmd_export_dot(args, out):
    out.append(export_dot(load_automaton(args.automaton)).rstrip("\n"))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="revsym", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="parse an automaton and check reversibility")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("run", help="closed-loop (or open-loop with --inputs) run")
    p.add_argument("automaton")
    p.add_argument("--start", type=_start, required=True, metavar="STATE,SYM")
    p.add_argument("--steps", type=int, default=1)
    p.add_argument("--inputs", type=_symbols, default=None, help="open loop: further inputs after the start symbol")
    p.add_argument("--undo", action="store_true")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("perm", help="combined map as a permutation")
    p.add_argument("automaton")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--matrix", action="store_true")
    g.add_argument("--cycles", action="store_true")
    p.set_defaults(func=cmd_perm)

    p = sub.add_parser("coarse", help="macro sequence of a closed-loop run")
    p.add_argument("automaton")
    p.add_argument("interface")
    p.add_argument("--question", required=True)
    p.add_argument("--start", type=_start, required=True, metavar="STATE,SYM")
    p.add_argument("--steps", type=int, default=1)
    p.set_defaults(func=cmd_coarse)

    p = sub.add_parser("estimate", help="candidate filtering from macro observations")
    p.add_argument("automaton")
    p.add_argument("interface")
    p.add_argument("--question", required=True)
    p.add_argument("--obs", type=_symbols)
    p.add_argument("--horizon", type=int, help="report reconstructibility over all starts instead")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("entropy", help="Shannon entropy of a distribution")
    p.add_argument("--dist", type=_floats(None), required=True)
    p.add_argument("--automaton", help="also push the distribution through this machine")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("flux", help="information flow through a surface")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--sphere", type=_floats(3), metavar="X,C,I")
    g.add_argument("--patches", metavar="FILE")
    g.add_argument("--density", type=_floats(3), metavar="N,V,I")
    p.set_defaults(func=cmd_flux)

    p = sub.add_parser("lattice", help="integer lattice continuity audit")
    p.add_argument("lattice")
    p.add_argument("--ticks", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_lattice)

    p = sub.add_parser("eraser", help="measure then erase on a composite system")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--state", type=_ints(2), required=True, metavar="OBJECT,REGISTER")
    p.set_defaults(func=cmd_eraser)

    p = sub.add_parser("transcend", help="four-step undo-and-predict protocol")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--agent", choices=[experiments.IMMANENT, experiments.TRANSCENDENT], required=True)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_transcend)

    p = sub.add_parser("export-dot", help="DOT flow diagram of the combined map")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_export_dot)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out: list[str] = []
    try:
        args.func(args, out)
    except (RevsymError, OSError) as exc:
        print("\n".join(out), end="\n" if out else "")
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print("\n".join(out))
    return 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
