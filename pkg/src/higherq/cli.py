"""Command line driver: coefficient tables and the verification suites.

    higherq table qbinom --max-index 4
    higherq verify --suite poincare --suite stratification --p 2 --m 1 --format text

Exit status is 0 when every selected suite passes, 1 on a failure, 2 on a
usage error and 3 when the output file cannot be written.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

from .coeff import LevelCtx, hl_angle, hl_brace, q_binom_pascal
from .report import Report
from .suites import SUITES, RunConfig, run

TABLES = {
    "qbinom": lambda k, kp, ctx: q_binom_pascal(k, kp),
    "hl_brace": hl_brace,
    "hl_angle": lambda k, kp, ctx: hl_angle(k, kp, ctx).value,
}


def table_rows(kind: str, cfg: RunConfig) -> list[tuple[int, int, str]]:
    fn = TABLES[kind]
    ctx = cfg.ctx
    return [(k, kp, str(fn(k, kp, ctx))) for k in range(cfg.max_index + 1) for kp in range(k + 1)]


def render_table(kind: str, rows: Sequence[tuple[int, int, str]], fmt: str) -> str:
    if fmt == "json":
        return json.dumps([{"k": k, "k'": kp, "value": v} for k, kp, v in rows], indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "k'", kind])
        w.writerows(rows)
        return buf.getvalue()
    width = max((len(v) for _, _, v in rows), default=0)
    head = ("k", "k'")
    lines = [f"{head[0]:>3} {head[1]:>3}  {kind}"]
    lines += [f"{k:>3} {kp:>3}  {v:<{width}}".rstrip() for k, kp, v in rows]
    return "\n".join(lines) + "\n"


def render_reports(reports: Sequence[Report], fmt: str, timings: bool = False) -> str:
    if fmt == "json":
        return json.dumps([r.to_dict(timings) for r in reports], indent=2, sort_keys=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["suite", "cases", "passed", "failed", "millis"])
        for r in reports:
            w.writerow([r.suite, r.cases, r.passed, len(r.failures), r.millis if timings else 0])
        return buf.getvalue()
    lines = []
    for r in reports:
        status = "PASS" if r.ok else "FAIL"
        line = f"{status} {r.suite}: {r.passed}/{r.cases} cases"
        if timings:
            line += f" in {r.millis} ms"
        lines.append(line)
        for f in r.failures[:20]:
            lines.append(f"    {json.dumps(f['input'])}: expected {f['expected']}, got {f['actual']}")
        if len(r.failures) > 20:
            lines.append(f"    ... {len(r.failures) - 20} more")
    return "\n".join(lines) + "\n"


def _prime(text: str) -> int:
    p = int(text)
    try:
        LevelCtx(p, 0)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None
    return p


def _natural(text: str) -> int:
    n = int(text)
    if n < 0:
        raise argparse.ArgumentTypeError(f"{n} is negative")
    return n


def _positive(text: str) -> int:
    n = int(text)
    if n < 1:
        raise argparse.ArgumentTypeError(f"{n} is not positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=_prime, default=2, help="the prime (default 2)")
    common.add_argument("--m", type=_natural, default=1, help="the level (default 1)")
    common.add_argument("--d", type=_positive, default=1, help="number of variables (default 1)")
    common.add_argument("--max-index", type=_natural, default=8, help="truncation bound N (default 8)")
    common.add_argument("--max-degree", type=_natural, default=2, help="complex degree cap (default 2)")
    common.add_argument("--xdeg-bound", type=_natural, default=6,
                        help="x-degree guard of the relation oracle (default 6)")
    common.add_argument("--format", choices=("json", "csv", "text"), default=None,
                        help="output format (default: text on stdout, json with --out)")
    common.add_argument("--out", help="write to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="higherq", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    t = sub.add_parser("table", parents=[common], help="print a table of coefficients for 0 <= k' <= k <= N")
    t.add_argument("kind", choices=sorted(TABLES))
    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--suite", action="append", choices=list(SUITES), metavar="NAME",
                   help="suite to run, repeatable; all suites when omitted. One of: " + ", ".join(SUITES))
    v.add_argument("--timings", action="store_true",
                   help="record wall times (the JSON output is then no longer reproducible)")
    return parser


def _config(args) -> RunConfig:
    fmt = args.format or ("json" if args.out else "text")
    return RunConfig(p=args.p, m=args.m, d=args.d, max_index=args.max_index, max_degree=args.max_degree,
                     xdeg_bound=args.xdeg_bound, suites=tuple(getattr(args, "suite", None) or ()), format=fmt)


def _emit(text: str, out: str | None) -> int:
    if out is None:
        sys.stdout.write(text)
        return 0
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        print(f"higherq: cannot write {out}: {exc}", file=sys.stderr)
        return 3
    return 0


def cmd_table(kind: str, cfg: RunConfig, out: str | None = None) -> int:
    return _emit(render_table(kind, table_rows(kind, cfg), cfg.format), out)


def cmd_verify(cfg: RunConfig, out: str | None = None, timings: bool = False) -> int:
    reports = run(cfg)
    status = _emit(render_reports(reports, cfg.format, timings), out)
    if status:
        return status
    return 0 if all(r.ok for r in reports) else 1


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _config(args)
    except ValueError as exc:
        parser.error(str(exc))
    if args.command == "table":
        return cmd_table(args.kind, cfg, args.out)
    return cmd_verify(cfg, args.out, args.timings)


if __name__ == "__main__":
    sys.exit(main())
