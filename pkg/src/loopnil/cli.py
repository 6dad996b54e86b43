"""Command line interface: validate | analyze | decompose | fork | corpus.

Inputs are Cayley-table files (several tables per file, separated by blank
lines) or ``builtin:NAME`` / ``builtin`` for the shipped corpus.

Exit codes: 0 success, 1 invalid input, 2 internal verification failure.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from . import corpus
from .analysis import AnalysisOptions, analyze_loop
from .decomp import prime_decompose
from .errors import LoopError, MltNotNilpotent, VerificationFailed
from .loop import Loop, parse_many
from .permgrp import DEFAULT_GROUP_BUDGET
from .report import format_delimited, format_table, plot_classes, plot_closure_growth, to_json_line
from .supernil import DEFAULT_TUPLE_BUDGET, ForkStatus, fork_search, replay_trace

log = logging.getLogger("loopnil")

EXIT_OK, EXIT_INPUT, EXIT_VERIFY = 0, 1, 2


def _count(text: str) -> int:
    return int(float(text))


def load_inputs(paths: list[str]) -> list[tuple[str, Loop]]:
    """Resolve paths to (loop id, loop) pairs; raises LoopError/OSError on bad input."""
    out = []
    for path in paths:
        if path == "builtin":
            out.extend((f"builtin:{name}", Q) for name, Q in corpus.builtin())
        elif path.startswith("builtin:"):
            name = path.split(":", 1)[1]
            try:
                out.append((path, corpus.load(name)))
            except KeyError as exc:
                raise LoopError(str(exc)) from None
        else:
            loops = parse_many(Path(path).read_text())
            out.extend((f"{path}#{i}", Q) for i, Q in enumerate(loops))
    return out


def _error_line(where: str, exc: Exception) -> str:
    return f"{where}: {type(exc).__name__}: {exc}"


def cmd_validate(args) -> int:
    status = EXIT_OK
    for path in args.paths:
        try:
            loops = load_inputs([path])
        except (LoopError, OSError) as exc:
            print(_error_line(path, exc))
            status = EXIT_INPUT
            continue
        for loop_id, Q in loops:
            kind = "group" if Q.is_group() else "loop"
            print(f"{loop_id}: OK order {Q.order} ({kind})")
    return status


def _analyze_one(item):
    loop_id, Q, opts = item
    return analyze_loop(Q, loop_id, opts)


def cmd_analyze(args) -> int:
    try:
        loops = load_inputs(args.paths)
    except (LoopError, OSError) as exc:
        print(_error_line("input", exc), file=sys.stderr)
        return EXIT_INPUT
    opts = AnalysisOptions(
        k_max=args.kmax,
        budget_tuples=args.budget_tuples,
        budget_group=args.budget_group,
        seed=args.seed,
        trials=args.trials,
        time_limit=args.time_limit,
        traces=args.traces,
    )
    items = [(loop_id, Q, opts) for loop_id, Q in loops]
    reports = []
    try:
        if args.workers > 1:
            with ProcessPoolExecutor(args.workers) as pool:
                # map keeps input order whatever the completion order
                for rep in pool.map(_analyze_one, items):
                    reports.append(rep)
                    if args.json:
                        print(to_json_line(rep), flush=True)
        else:
            for item in items:
                log.info("analyzing %s", item[0])
                rep = _analyze_one(item)
                reports.append(rep)
                if args.json:
                    print(to_json_line(rep), flush=True)
    except VerificationFailed as exc:
        print(_error_line("verification", exc), file=sys.stderr)
        return EXIT_VERIFY
    if not args.json:
        sys.stdout.write(format_table(reports))
    if args.tsv:
        Path(args.tsv).write_text(format_delimited(reports))
    if args.figures:
        fig_dir = Path(args.figures)
        fig_dir.mkdir(parents=True, exist_ok=True)
        plot_classes(reports, fig_dir / "classes.png")
        plot_closure_growth(reports, fig_dir / "closure_growth.png")
    return EXIT_OK


def cmd_decompose(args) -> int:
    try:
        loops = load_inputs(args.paths)
    except (LoopError, OSError) as exc:
        print(_error_line("input", exc), file=sys.stderr)
        return EXIT_INPUT
    status = EXIT_OK
    for loop_id, Q in loops:
        try:
            dec = prime_decompose(Q, args.budget_group)
        except MltNotNilpotent as exc:
            status = max(status, EXIT_INPUT)
            if args.json:
                print(to_json_line({"id": loop_id, "error": type(exc).__name__, "message": str(exc)}))
            else:
                print(_error_line(loop_id, exc))
            continue
        except VerificationFailed as exc:
            print(_error_line(loop_id, exc), file=sys.stderr)
            return EXIT_VERIFY
        if args.json:
            print(to_json_line({"id": loop_id, **dec.to_dict(Q)}))
        else:
            parts = " x ".join(f"{f.order} (p={f.prime})" for f in dec.factors)
            print(f"{loop_id}: {parts}")
    return status


def cmd_fork(args) -> int:
    try:
        loops = load_inputs([args.path])
    except (LoopError, OSError) as exc:
        print(_error_line(args.path, exc), file=sys.stderr)
        return EXIT_INPUT
    if not 0 <= args.index < len(loops):
        print(f"{args.path}: no table with index {args.index}", file=sys.stderr)
        return EXIT_INPUT
    loop_id, Q = loops[args.index]
    res = fork_search(Q, args.k, args.budget, args.time_limit)
    if res.status is ForkStatus.FORK:
        for trace, witness in zip(res.traces, res.witnesses):
            if replay_trace(Q, args.k, json.loads(json.dumps(trace))) != tuple(witness):
                print(f"{loop_id}: witness trace does not replay", file=sys.stderr)
                return EXIT_VERIFY
    print(to_json_line({"id": loop_id, **res.to_dict(Q)}))
    return EXIT_OK


def cmd_corpus(args) -> int:
    if args.export:
        out = Path(args.export)
        out.mkdir(parents=True, exist_ok=True)
        for name in corpus.NAMES:
            (out / f"{name}.tbl").write_text(Path(corpus.path_of(name)).read_text())
    for name, Q in corpus.builtin():
        print(f"{name}\torder {Q.order}\t{'group' if Q.is_group() else 'loop'}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="loopnil", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check Cayley tables")
    p.add_argument("paths", nargs="+")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("analyze", help="nilpotence classes and supernilpotence bounds")
    p.add_argument("paths", nargs="+")
    p.add_argument("--kmax", type=int, default=2)
    p.add_argument("--budget-tuples", type=_count, default=DEFAULT_TUPLE_BUDGET)
    p.add_argument("--budget-group", type=_count, default=DEFAULT_GROUP_BUDGET)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=200, help="random polynomials per absorber search")
    p.add_argument("--time-limit", type=float, default=None, help="seconds per fork-search level")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--json", action="store_true", help="one JSON object per loop")
    p.add_argument("--traces", action="store_true", help="include witness derivations")
    p.add_argument("--tsv", help="also write a tab-separated summary here")
    p.add_argument("--figures", help="directory for PNG figures")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("decompose", help="prime decomposition (nilpotent Mlt only)")
    p.add_argument("paths", nargs="+")
    p.add_argument("--budget-group", type=_count, default=DEFAULT_GROUP_BUDGET)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("fork", help="fork search at one level, with witness dump")
    p.add_argument("path")
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--index", type=int, default=0)
    p.add_argument("--budget", type=_count, default=DEFAULT_TUPLE_BUDGET)
    p.add_argument("--time-limit", type=float, default=None)
    p.set_defaults(func=cmd_fork)

    p = sub.add_parser("corpus", help="list or export the built-in corpus")
    p.add_argument("--export", help="copy the table files into this directory")
    p.set_defaults(func=cmd_corpus)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
