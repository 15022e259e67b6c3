"""Command-line interface: ``ddreach gen|run|compare|scaling|check``.

Exit codes: 0 success, 1 algorithms disagree (``compare``/``check``),
2 timeout, 3 parse error, 4 dimension or usage error.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys

from .diagrams import DimensionError
from .models import explicit_oracle, gen_counter, gen_philosophers, wrap_bad_case
from .reach import ALGORITHMS, CSV_COLUMNS, ReachTimeout, RunOptions, run
from .store import StructureError, UsageError
from .tsys import TsysError, parse_tsys, write_tsys

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_TIMEOUT = 2
EXIT_PARSE = 3
EXIT_USAGE = 4

MODELS = ("philosophers", "counter", "badcase-counter")
SCALING_COLUMNS = ("size", "reach_calls", "iterations", "wall_time_ms")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_model(model: str, size: int):
    if model == "philosophers":
        return gen_philosophers(size)
    if model == "counter":
        return gen_counter(size)
    if model == "badcase-counter":
        return wrap_bad_case(gen_counter(size))
    raise UsageError(f"unknown model {model!r}")


def parse_range(text: str) -> list[int]:
    """``4..16`` (inclusive), ``4..64:x2`` (geometric) or ``4,8,16``."""
    if ".." in text:
        lo, rest = text.split("..", 1)
        hi, _, step = rest.partition(":")
        lo, hi = int(lo), int(hi)
        if step.startswith("x"):
            factor = int(step[1:])
            out = []
            v = lo
            while v <= hi:
                out.append(v)
                v *= factor
            return out
        return list(range(lo, hi + 1, int(step) if step else 1))
    return [int(v) for v in text.split(",") if v]


def append_csv(path: str, rows: list[dict], columns=CSV_COLUMNS) -> None:
    new = not os.path.exists(path) or os.path.getsize(path) == 0
    with open(path, "a", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=columns, lineterminator="\n")
        if new:
            w.writeheader()
        w.writerows(rows)


def _write_csv_stdout(rows, columns=CSV_COLUMNS) -> None:
    w = csv.DictWriter(sys.stdout, fieldnames=columns, lineterminator="\n")
    w.writeheader()
    w.writerows(rows)


def _load(path: str):
    with open(path, encoding="utf-8") as fh:
        return parse_tsys(fh.read())


def cmd_gen(args) -> int:
    size = args.k if args.model == "philosophers" else args.n
    if size is None:
        raise UsageError(f"{args.model} needs --{'k' if args.model == 'philosophers' else 'n'}")
    text = write_tsys(build_model(args.model, size))
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return EXIT_OK


def cmd_run(args) -> int:
    system = _load(args.file)
    opts = RunOptions(workers=args.workers, timeout=args.timeout,
                      model=os.path.basename(args.file))
    result = run(args.alg, system, opts)
    if args.stats:
        append_csv(args.stats, [result.stats.row()])
    else:
        _write_csv_stdout([result.stats.row()])
    if args.dump_dd:
        with open(args.dump_dd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(result.states.store.dump(result.states.root, result.states.n))
    return EXIT_OK


def cmd_compare(args) -> int:
    if not args.files:
        raise UsageError("compare needs at least one model file")
    algs = args.algs.split(",")
    for a in algs:
        if a not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {a!r}")
    rows = []
    disagree = False
    print(f"{'model':<24} {'alg':<14} {'states':>14} {'iters':>8} {'ms':>10}")
    for path in args.files:
        counts = set()
        for a in algs:
            system = _load(path)
            res = run(a, system, RunOptions(workers=args.workers, timeout=args.timeout,
                                            model=os.path.basename(path)))
            st = res.stats
            counts.add(st.final_sat_count)
            rows.append(st.row())
            print(f"{st.model:<24} {a:<14} {st.final_sat_count:>14} "
                  f"{st.top_loop_iterations:>8} {st.wall_time_ms:>10.2f}")
        if len(counts) != 1:
            disagree = True
            print(f"DISAGREEMENT on {path}: {sorted(counts)}")
    if args.csv:
        append_csv(args.csv, rows)
    return EXIT_DISAGREE if disagree else EXIT_OK


def cmd_scaling(args) -> int:
    rows = []
    for size in parse_range(args.range):
        res = run(args.alg, build_model(args.model, size),
                  RunOptions(workers=args.workers, timeout=args.timeout,
                             model=f"{args.model}-{size}"))
        st = res.stats
        rows.append({"size": size, "reach_calls": st.reach_calls,
                     "iterations": st.top_loop_iterations,
                     "wall_time_ms": f"{st.wall_time_ms:.3f}"})
    if args.csv:
        append_csv(args.csv, rows, SCALING_COLUMNS)
    else:
        _write_csv_stdout(rows, SCALING_COLUMNS)
    return EXIT_OK


def cmd_check(args) -> int:
    system = _load(args.file)
    expected = explicit_oracle(system)
    status = EXIT_OK
    for a in args.algs.split(","):
        got = run(a, _load(args.file), RunOptions(workers=args.workers, timeout=args.timeout))
        ok = got.state_list() == expected
        print(f"{a:<14} {'ok' if ok else 'MISMATCH'} ({got.stats.final_sat_count} states)")
        if not ok:
            status = EXIT_DISAGREE
    return status


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="ddreach", description="Decision-diagram reachability toolkit.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", help="write a generated model as .tsys")
    g.add_argument("model", choices=MODELS)
    g.add_argument("--n", type=int, help="counter bits")
    g.add_argument("--k", type=int, help="number of philosophers")
    g.add_argument("-o", "--output", help="output path (default stdout)")
    g.set_defaults(func=cmd_gen)

    def common(sp):
        sp.add_argument("--workers", type=int, default=1)
        sp.add_argument("--timeout", type=float, default=600.0, help="seconds (default 600)")

    r = sub.add_parser("run", help="compute the reachable states of a model")
    r.add_argument("file")
    r.add_argument("--alg", choices=ALGORITHMS, default="reach-bdd")
    common(r)
    r.add_argument("--stats", help="append the RunStats row to this CSV file")
    r.add_argument("--dump-dd", help="write the result diagram in dump format")
    r.set_defaults(func=cmd_run)

    c = sub.add_parser("compare", help="run several algorithms and compare state counts")
    c.add_argument("files", nargs="*")
    c.add_argument("--algs", default=",".join(ALGORITHMS))
    c.add_argument("--csv")
    common(c)
    c.set_defaults(func=cmd_compare)

    s = sub.add_parser("scaling", help="CSV of counters over a range of model sizes")
    s.add_argument("model", choices=MODELS)
    s.add_argument("--range", required=True, help="e.g. 4..16, 4..64:x2 or 4,8,16")
    s.add_argument("--alg", choices=ALGORITHMS, default="reach-bdd")
    s.add_argument("--csv")
    common(s)
    s.set_defaults(func=cmd_scaling)

    k = sub.add_parser("check", help="compare algorithms against the explicit-state oracle")
    k.add_argument("file")
    k.add_argument("--algs", default=",".join(ALGORITHMS))
    common(k)
    k.set_defaults(func=cmd_check)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        return args.func(args)
    except ReachTimeout as exc:
        print(f"timeout: {exc}", file=sys.stderr)
        return EXIT_TIMEOUT
    except TsysError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (DimensionError, StructureError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
