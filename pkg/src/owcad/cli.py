"""Command-line front end.

Subcommands map onto the library pipelines: ``owcad`` (projection
polynomials), ``opencad`` (full open CAD sample), ``sample`` (open sample by
method), ``psd`` (global nonnegativity), ``cmt`` (copositive matrix test),
``bench-roots`` (seeded root-count benchmark).  All numeric output is exact
(rationals as "p/q"); JSON output is deterministic for a fixed input.

Exit codes: 0 when a decision is reached, 2 for an Inconclusive verdict,
1 on errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from .polyring import Context, MPoly, PolyError
from .parsing import ParseError, parse_poly
from .projection import WellDefinednessBreach
from . import bench
from .cad import SamplePoint, hptwo_sample, open_cad, open_weak_cad, reduced_open_cad
from .copositive import INCONCLUSIVE, QForm, cmt
from .psd import psd_hptwo


class CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise CliError(message)


def _rat(q) -> str:
    return "%d/%d" % (q.numerator, q.denominator) if q.denominator != 1 else str(q.numerator)


def _points_json(points) -> list:
    return [[_rat(c) for c in p.coords] for p in points]


def _read_poly_input(args) -> str:
    if getattr(args, "poly", None):
        return args.poly
    if getattr(args, "file", None):
        with open(args.file) as fh:
            return fh.read()
    return sys.stdin.read()


def _parse_order(args) -> list:
    if not args.order:
        raise CliError("--order is required (comma-separated variable names)")
    names = [s.strip() for s in args.order.split(",") if s.strip()]
    if not names:
        raise CliError("empty --order")
    return names


def _load_poly(args) -> MPoly:
    names = _parse_order(args)
    text = _read_poly_input(args)
    f = parse_poly(text, names)
    declared = set(names)
    present = {v.name for v in f.variables_present()}
    extra = declared - present
    if extra and f.level() != len(names):
        # the order must cover exactly the variables appearing in the input;
        # trailing unused names change every level-indexed algorithm
        raise CliError(
            "order lists variables not present in the polynomial: %s"
            % ", ".join(sorted(extra))
        )
    return f


def _emit(doc, stream=None) -> None:
    (stream or sys.stdout).write(json.dumps(doc, indent=2, sort_keys=False) + "\n")


def _counts_json(counts) -> dict:
    return {"base": counts[0], "per_level": counts[1:]}


def cmd_owcad(args) -> int:
    f = _load_poly(args)
    out = open_weak_cad(f)
    doc = {
        "order": list(out.order),
        "h": [
            {
                "level": j + 1,
                "factors": [
                    str(_branch_product(f.ctx, fs))
                    for t, fs in sorted(out.branch_factors[j].items())
                ],
                "sum_of_squares": str(out.h[j]),
            }
            for j in range(len(out.h))
        ],
        "samples": [],
        "counts": {},
    }
    _emit(doc)
    return 0


def _branch_product(ctx, factors):
    acc = MPoly.const(ctx, 1)
    for p in factors:
        acc = acc * p
    return acc


def cmd_opencad(args) -> int:
    f = _load_poly(args)
    pts, counts = open_cad(f)
    _emit(
        {
            "order": list(f.ctx.names),
            "h": [],
            "samples": _points_json(pts),
            "counts": _counts_json(counts),
        }
    )
    return 0


def cmd_sample(args) -> int:
    f = _load_poly(args)
    if args.method == "hptwo":
        pts, counts = hptwo_sample(f)
    elif args.method == "opencad":
        pts, counts = open_cad(f)
    elif args.method == "reduced":
        pts, counts = reduced_open_cad(f, args.j)
    else:
        raise CliError("unknown method %r" % args.method)
    _emit(
        {
            "order": list(f.ctx.names),
            "method": args.method,
            "samples": _points_json(pts),
            "counts": _counts_json(counts),
            "count": len(pts),
        }
    )
    return 0


def cmd_psd(args) -> int:
    f = _load_poly(args)
    t0 = time.time()
    verdict = psd_hptwo(f)
    doc = {
        "answer": verdict.answer,
        "witness": None if verdict.witness is None else [_rat(c) for c in verdict.witness.coords],
        "trace": verdict.trace,
        "seconds": round(time.time() - t0, 3),
    }
    _emit(doc)
    return 0


def _load_matrix(path: str):
    with open(path) as fh:
        text = fh.read()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        rows = doc["A"]
        n = doc.get("n")
        return QForm.from_matrix(rows, n)
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        rows.append([int(tok) for tok in line.replace(",", " ").split()])
    return QForm.from_matrix(rows)


def cmd_cmt(args) -> int:
    q = _load_matrix(args.matrix)
    t0 = time.time()
    verdict = cmt(q, two_point=args.two_point)
    doc = {
        "answer": verdict.answer,
        "witness": None if verdict.witness is None else [_rat(c) for c in verdict.witness],
        "genericity_flags": verdict.genericity_flags,
        "face_cache": verdict.face_cache,
        "samples_checked": verdict.samples_checked,
        "seconds": round(time.time() - t0, 3),
    }
    _emit(doc)
    return 2 if verdict.answer == INCONCLUSIVE else 0


def cmd_bench_roots(args) -> int:
    if args.trials < 1:
        raise CliError("--trials must be >= 1")
    t0 = time.time()
    rows = bench.bench_roots(args.trials, args.degree, args.seed, args.vars)
    table = bench.render_table(rows)
    if args.csv:
        with open(args.csv, "w") as fh:
            fh.write(table.replace("\t", ",") + "\n")
    print(table)
    dominated = sum(1 for r in rows if r.dominant)
    print(
        "# dominant %d/%d trials; %.2fs total" % (dominated, len(rows), time.time() - t0)
    )
    if args.plot:
        bench.save_plot(rows, args.plot)
        print("# plot written to %s" % args.plot)
    return 0


def build_parser() -> _Parser:
    ap = _Parser(prog="owcad", description="Open weak CAD toolkit")
    sub = ap.add_subparsers(dest="command", required=True)

    def poly_opts(p):
        p.add_argument("--order", required=True, help="comma-separated variable names, ascending")
        p.add_argument("--poly", help="polynomial text (default: read stdin)")
        p.add_argument("--file", help="read polynomial text from a file")

    p = sub.add_parser("owcad", help="projection polynomials of an open weak CAD")
    poly_opts(p)
    p.set_defaults(func=cmd_owcad)

    p = sub.add_parser("opencad", help="full open CAD sample points")
    poly_opts(p)
    p.set_defaults(func=cmd_opencad)

    p = sub.add_parser("sample", help="open sample points by method")
    poly_opts(p)
    p.add_argument("--method", choices=["hptwo", "reduced", "opencad"], default="hptwo")
    p.add_argument("--j", type=int, default=1, help="base level for --method reduced")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("psd", help="decide global nonnegativity")
    poly_opts(p)
    p.set_defaults(func=cmd_psd)

    p = sub.add_parser("cmt", help="copositive matrix test")
    p.add_argument("--matrix", required=True, help="JSON {\"n\":k,\"A\":[[...]]} or CSV file")
    p.add_argument("--two-point", action="store_true", help="at most two samples per axis interval")
    p.set_defaults(func=cmd_cmt)

    p = sub.add_parser("bench-roots", help="root-count benchmark over seeded random polynomials")
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--degree", type=int, default=8)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--vars", type=int, default=3)
    p.add_argument("--csv", help="also write the table as CSV")
    p.add_argument("--plot", help="write a PNG scatter of the root counts (needs matplotlib)")
    p.set_defaults(func=cmd_bench_roots)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
        return args.func(args)
    except CliError as e:
        print(json.dumps({"error": "usage", "message": str(e)}), file=sys.stderr)
        return 1
    except ParseError as e:
        print(
            json.dumps({"error": "parse", "message": str(e), "line": e.line, "column": e.column}),
            file=sys.stderr,
        )
        return 1
    except WellDefinednessBreach as e:
        print(json.dumps({"error": "well-definedness", "message": str(e)}), file=sys.stderr)
        return 1
    except (PolyError, OSError, ValueError, KeyError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
