"""Command-line entry point: ``dic gen|run|verify|bench|omv``.

Exit codes: 0 success, 1 a coloring check failed, 2 usage or input-format
error.  ``DIC_LOG`` (e.g. ``DEBUG``) sets the log level; logs go to stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from . import harness, omv
from .errors import DicError
from .sls import SlsMode
from .trace import KINDS, gen, parse_trace, serialize_trace

EXIT_OK, EXIT_CHECK, EXIT_USAGE = 0, 1, 2

log = logging.getLogger("dyncolor")


def _configure_logging():
    level = os.environ.get("DIC_LOG", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def build_parser() -> argparse.ArgumentParser:
    # argparse itself exits with status 2 (EXIT_USAGE) on bad arguments
    p = argparse.ArgumentParser(prog="dic", description="Dynamic interval coloring harness")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random update trace (JSON Lines)")
    g.add_argument("--kind", choices=KINDS, default="uniform")
    g.add_argument("--n", type=int, default=1000, help="number of updates")
    g.add_argument("--delete-prob", type=float, default=0.0)
    g.add_argument("--coord-max", type=int, default=10**6)
    g.add_argument("--max-len", type=int, default=None,
                   help="longest uniform/mixed interval (default coord-max/100)")
    g.add_argument("--teardown", action="store_true",
                   help="append deletes of all remaining intervals, oldest first")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out", default="-", help="output path (default stdout)")

    def replay_args(sp, checks=True):
        sp.add_argument("--trace", required=True, help="trace path, or - for stdin")
        sp.add_argument("--mode", choices=[m.value for m in SlsMode], default="dynamic")
        sp.add_argument("--seed", type=int, default=None, help="recorded in the report")
        sp.add_argument("--report", default=None, help="write the report here instead of stdout")
        if checks:
            sp.add_argument("--kt-limit", type=int, default=2000,
                            help="skip level domination above this many inserts")

    r = sub.add_parser("run", help="replay a trace and check the final state")
    replay_args(r)
    r.add_argument("--check", choices=harness.CHECK_LEVELS, default="final")

    v = sub.add_parser("verify", help="replay a trace checking after every update")
    replay_args(v)

    b = sub.add_parser("bench", help="time repeated replays with checks disabled")
    replay_args(b, checks=False)
    b.add_argument("--repeat", type=int, default=5)
    b.add_argument("--jobs", type=int, default=1, help="replay in this many processes")

    o = sub.add_parser("omv", help="answer consecutive-ones matrix-vector queries online")
    o.add_argument("--matrix", required=True)
    o.add_argument("--vectors", default="-", help="vector file, or - for stdin")
    o.add_argument("--out", default="-")
    o.add_argument("--naive", action="store_true", help="use the dense product instead")
    return p


def _open_in(path):
    return sys.stdin if path == "-" else open(path, encoding="utf-8")


def _open_out(path):
    return sys.stdout if path == "-" else open(path, "w", encoding="utf-8")


def _emit_report(report: harness.Report, path):
    doc = json.dumps(report.to_dict(), indent=2)
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(doc + "\n")
    else:
        print(doc)


def _load(path):
    fh = _open_in(path)
    try:
        return parse_trace(fh)
    finally:
        if fh is not sys.stdin:
            fh.close()


def cmd_gen(args) -> int:
    events = gen(args.kind, args.n, args.delete_prob, args.coord_max, args.seed,
                 max_len=args.max_len, teardown=args.teardown)
    out = _open_out(args.out)
    try:
        out.write(serialize_trace(events))
    finally:
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def cmd_run(args, check_level=None) -> int:
    trace = _load(args.trace)
    report = harness.run(trace, args.mode, check_level or args.check,
                         seed=args.seed, kt_limit=args.kt_limit)
    _emit_report(report, args.report)
    if report.failed:
        for line in report.violations[:20]:
            log.error("%s", line)
        return EXIT_CHECK
    return EXIT_OK


def cmd_bench(args) -> int:
    trace = _load(args.trace)
    report = harness.bench(trace, args.mode, args.repeat, jobs=args.jobs, seed=args.seed)
    _emit_report(report, args.report)
    return EXIT_OK


def cmd_omv(args) -> int:
    with open(args.matrix, encoding="utf-8") as fh:
        matrix = omv.parse_matrix(fh)
    n = matrix.shape[0]
    src = _open_in(args.vectors)
    out = _open_out(args.out)
    try:
        # flush after every answer: a caller feeding vectors through a pipe
        # sees each product before it sends the next vector
        for product in omv.answer_online(matrix, omv.iter_vectors(src, n), naive=args.naive):
            out.write(omv.format_bits(product) + "\n")
            out.flush()
    finally:
        if src is not sys.stdin:
            src.close()
        if out is not sys.stdout:
            out.close()
    return EXIT_OK


def main(argv=None) -> int:
    _configure_logging()
    args = build_parser().parse_args(argv)
    try:
        if args.command == "gen":
            return cmd_gen(args)
        if args.command == "run":
            return cmd_run(args)
        if args.command == "verify":
            return cmd_run(args, "every_update")
        if args.command == "bench":
            return cmd_bench(args)
        return cmd_omv(args)
    except (DicError, ValueError, OSError) as exc:
        print(f"dic {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
