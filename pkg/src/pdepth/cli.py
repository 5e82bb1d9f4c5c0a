"""Command line entry point: ``pdepth verify|search|table``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import re
import sys
import time

from .bounds import ParamSet, e_of, theorem_bound
from .errors import NotFoundError, PDepthError
from .generic import witness_search
from .report import RunReport
from .suites import SUITES, Grid, Item

_TERM = re.compile(r"^\s*(k)?\s*([+-]\s*\d+)?\s*$|^\s*(\d+)\s*$")


class UsageError(ValueError):
    pass


def _bound(text: str, k: int | None) -> int:
    m = _TERM.match(text)
    if not m:
        raise UsageError(f"bad grid bound {text!r}")
    if m.group(3) is not None:
        return int(m.group(3))
    if m.group(1) is None:
        if m.group(2) is None:
            raise UsageError(f"bad grid bound {text!r}")
        return int(m.group(2).replace(" ", ""))
    if k is None:
        raise UsageError("'k' may only appear in n bounds")
    return k + int((m.group(2) or "0").replace(" ", ""))


def parse_grid(text: str, k: int | None = None) -> list[int]:
    """Parse inclusive ranges a..b and comma lists; bounds may use k (``k..k+4``)."""
    out: list[int] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            raise UsageError(f"empty item in grid {text!r}")
        if ".." in part:
            lo, hi = part.split("..", 1)
            a, b = _bound(lo, k), _bound(hi, k)
            if a > b:
                raise UsageError(f"empty range {part!r}")
            out.extend(range(a, b + 1))
        else:
            out.append(_bound(part, k))
    return out


def _n_spec(text: str | None):
    if text is None:
        return None
    if "k" not in text:
        values = parse_grid(text)
        return lambda k: values
    parse_grid(text, 1)  # validate early
    return lambda k: parse_grid(text, k)


def _grid_from_args(args) -> Grid:
    return Grid(
        p=parse_grid(args.p) if args.p else None,
        k=parse_grid(args.k) if args.k else None,
        n=_n_spec(args.n),
        m=args.m,
        seed=args.seed,
        budget=args.budget,
        jmax=args.jmax,
        precision=args.precision_override,
    )


def _emit(report: RunReport, args, out) -> None:
    if args.json:
        out.write(report.to_json() + "\n")
    else:
        out.write(report.to_text() + "\n")


def cmd_verify(args, out) -> RunReport:
    grid = _grid_from_args(args)
    start = time.perf_counter()
    items = SUITES[args.suite](grid)
    echo = {key: getattr(args, key) for key in ("p", "k", "n", "m", "budget", "jmax", "precision_override")}
    return RunReport(["verify", args.suite], echo, args.seed, items, time.perf_counter() - start)


def _single(text: str | None, name: str) -> int:
    if text is None:
        raise UsageError(f"--{name} is required")
    values = parse_grid(text)
    if len(values) != 1:
        raise UsageError(f"--{name} takes a single value")
    return values[0]


def cmd_search(args, out) -> RunReport:
    p, k = _single(args.p, "p"), _single(args.k, "k")
    n = parse_grid(args.n, k) if args.n else None
    if not n or len(n) != 1:
        raise UsageError("--n takes a single value")
    n = n[0]
    ParamSet(p, k, n)
    budget = 200 if args.budget is None else args.budget
    start = time.perf_counter()
    params = {"p": p, "k": k, "n": n}
    try:
        w = witness_search(p, k, n, budget=budget, seed=args.seed)
        item = Item(params, "pass", w.to_json())
    except NotFoundError as exc:
        item = Item(params, "fail", {"error": "not found", "message": str(exc), "budget": budget})
    rep = RunReport(["search"], dict(params, budget=budget), args.seed, [item], time.perf_counter() - start)
    if not args.json:
        if item.verdict == "pass":
            d = item.details
            out.write(f"f = {d['f']}\ng = {d['g']}\ndepth = {d['achieved_depth']} (stage {d['stage']})\n")
        else:
            out.write(f"no witness found: {item.details['message']}\n")
    return rep


def table_rows(p: int, ks, nmax: int) -> list[dict]:
    rows = []
    for k in ks:
        for n in range(k, nmax + 1):
            ps = ParamSet(p, k, n)
            rows.append({"p": p, "k": k, "n": n, "e": e_of(ps), "bound": theorem_bound(ps)})
    return rows


def cmd_table(args, out) -> RunReport:
    ps = parse_grid(args.p) if args.p else [2]
    if args.k:
        ks = parse_grid(args.k)
    else:
        ks = range(1, (args.kmax or 4) + 1)
    nmax = args.nmax if args.nmax is not None else 12
    rows = [r for p in ps for r in table_rows(p, ks, nmax)]
    rep = RunReport(["table"], {"p": ps, "k": list(ks), "nmax": nmax}, args.seed, [], 0.0, {"rows": rows})
    if args.csv:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["p", "k", "n", "e", "bound"], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    elif args.json:
        out.write(json.dumps(rows, indent=2) + "\n")
    else:
        for r in rows:
            out.write(f"p={r['p']} k={r['k']} n={r['n']} e={r['e']} bound={r['bound']}\n")
    return rep


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", help="prime(s): '3', '2,3,5' or '2..7'")
    common.add_argument("--k", help="k values, e.g. '1..4'")
    common.add_argument("--n", help="n values; bounds may use k, e.g. 'k..8'")
    common.add_argument("--m", type=int, help="exponent m (corollary-pm); max s (ens); max a (genfun)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--budget", type=int, help="random trials or search budget")
    common.add_argument("--jmax", type=int)
    common.add_argument("--json", action="store_true", help="machine-readable report")
    common.add_argument("--csv", action="store_true", help="CSV output (table)")
    common.add_argument("--precision-override", type=int, dest="precision_override")

    parser = argparse.ArgumentParser(prog="pdepth", description="Depth of p-th powers in the Nottingham group.")
    sub = parser.add_subparsers(dest="command", required=True)
    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES))
    sub.add_parser("search", parents=[common], help="search for a sharpness witness")
    t = sub.add_parser("table", parents=[common], help="tabulate e(k,n) and the bound")
    t.add_argument("--kmax", type=int)
    t.add_argument("--nmax", type=int)
    return parser


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    handlers = {"verify": cmd_verify, "search": cmd_search, "table": cmd_table}
    try:
        report = handlers[args.command](args, out)
    except (UsageError, PDepthError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.command == "verify" or (args.command == "search" and args.json):
        _emit(report, args, out)
    return report.exit_status


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":
    main_exit()
