"""Command line entry point: ``homlab run``, ``homlab dims`` and ``homlab class``."""
from __future__ import annotations

import argparse
import itertools
import json
import logging
import sys

from .errors import HomlabError
from .fox.cover import build_cover_complex, cycle_class
from .fox.words import FreeWord
from .lattice import LatticeParams
from .presentation.lemmas import EXACT_COL_CAP
from .suites import MODES, SUITES, SuiteConfig, dims_table, run_many


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--g", type=int, action="append", help="genus; repeatable")
    p.add_argument("--L", type=int, action="append", help="level; repeatable")
    p.add_argument("--cache-dir", default=None, help="matrix cache directory")
    p.add_argument("--exact-col-cap", type=int, default=EXACT_COL_CAP,
                   help="largest generator count eliminated exactly (default %(default)s)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="homlab", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run verification suites and write a JSON report")
    _common(run)
    run.add_argument("--suite", action="append", choices=SUITES + ("all",),
                     help="suite to run; repeatable (default: all)")
    run.add_argument("--mode", choices=MODES, default="hybrid")
    run.add_argument("--sample", type=int, default=1000, help="random samples per sampled check")
    run.add_argument("--seed", type=int, default=0)
    run.add_argument("--report", default=None, help="path of the JSON report")
    run.add_argument("--threads", type=int, default=1, help="worker pool size")
    run.add_argument("--show", choices=("failed", "all", "none"), default="failed",
                     help="which checks to list on stdout")

    dims = sub.add_parser("dims", help="tabulate exact dimensions as CSV")
    _common(dims)
    dims.add_argument("--output", default=None, help="CSV path (default: stdout)")

    cls = sub.add_parser("class", help="homology class of a kernel word in the cover")
    _common(cls)
    cls.add_argument("--word", required=True, help='word such as "a1 b1 A1 B1"; upper case is the inverse')
    cls.add_argument("--bounded", action="store_true", help="use the cover of the surface with one boundary")
    return parser


def _grid(args) -> list[tuple[int, int]]:
    gs = args.g or [1]
    Ls = args.L or [2]
    return list(itertools.product(gs, Ls))


def cmd_run(args) -> int:
    configs = [SuiteConfig(g, L, suites=tuple(args.suite or ("all",)), mode=args.mode, sample_count=args.sample,
                           seed=args.seed, cache_dir=args.cache_dir, worker_count=args.threads,
                           exact_col_cap=args.exact_col_cap)
               for g, L in _grid(args)]
    report = run_many(configs, args.report)
    for c in report.checks:
        if args.show == "all" or (args.show == "failed" and c.status == "fail"):
            print(f"{c.status:15s} {c.name}  expected={json.dumps(c.expected)} actual={json.dumps(c.actual)}")
    s = report.summary
    print(f"total={s['total']} passed={s['passed']} failed={s['failed']} skipped={s['skipped']}")
    return 0 if report.ok else 1


def cmd_dims(args) -> int:
    gs = sorted(set(args.g or [1]))
    Ls = sorted(set(args.L or [2]))
    text = dims_table(gs, Ls, args.output, args.cache_dir, args.exact_col_cap)
    if not args.output:
        sys.stdout.write(text)
    return 0


def cmd_class(args) -> int:
    grid = _grid(args)
    if len(grid) != 1:
        raise HomlabError("class takes a single --g and --L")
    params = LatticeParams(*grid[0])
    w = FreeWord.parse(params, args.word)
    c = build_cover_complex(params, closed=not args.bounded)
    print(json.dumps({"g": params.g, "L": params.L, "word": str(w),
                      "surface": "bounded" if args.bounded else "closed",
                      "class": [list(x) if isinstance(x, tuple) else x for x in cycle_class(w, c)]}))
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return {"run": cmd_run, "dims": cmd_dims, "class": cmd_class}[args.command](args)
    except HomlabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
