"""Command-line front end: ``rdfields {analyze,scan,verify-theorems,zeta,sums}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys

from . import records, theorems
from .arith import square_factor
from .dedekind import dedekind_sum
from .errors import DomainError
from .forms import all_classes
from .quadfield import make_field
from .zeta import partial_zetas, zagier_from_discriminant

EXIT_OK, EXIT_VIOLATION, EXIT_DOMAIN, EXIT_IO = 0, 1, 2, 3


def _human(rec):
    lines = [
        f"n={rec.n} r={rec.r} d={rec.d} D={rec.D}",
        f"case: {rec.case} (predicts {rec.case.predicted_group})",
        f"h={rec.h} invariants={rec.invariant_factors}",
        f"zeta(-1) Zagier:     {records.rat_to_str(rec.zeta_total)}",
        f"zeta(-1) by classes: {records.rat_to_str(rec.zeta_by_classes)}",
    ]
    if rec.closed_zeta is not None:
        lines.append(f"zeta(-1) formula:    {records.rat_to_str(rec.closed_zeta)}")
    lines.append(f"status: {rec.status}")
    lines += [f"note: {x}" for x in rec.notes]
    return "\n".join(lines)


def _summary_text(summary):
    counts = " ".join(f"{k}={v}" for k, v in summary["status_counts"].items())
    lines = [f"status counts: {counts}", "odd primes | fields | min h | max h"]
    for N, (cnt, lo, hi) in summary["trend"].items():
        lines.append(f"{N:10d} | {cnt:6d} | {lo:5d} | {hi:5d}")
    return "\n".join(lines)


def cmd_analyze(args):
    rec = theorems.verify_instance(args.n, args.r)
    if rec.status == theorems.REJECTED:
        print(f"error: {rec.notes[0]}", file=sys.stderr)
        return EXIT_DOMAIN
    if args.format == "json":
        print(json.dumps(records.record_to_dict(rec), sort_keys=True, indent=2))
    elif args.format in ("csv", "jsonl"):
        _write_records([rec], args.format, sys.stdout)
    else:
        print(_human(rec))
    return EXIT_VIOLATION if rec.status == theorems.VIOLATION else EXIT_OK


def _write_records(recs, fmt, stream):
    if fmt == "csv":
        records.write_csv(recs, stream)
    else:
        for rec in recs:
            stream.write(records.to_json(rec) + "\n")


def cmd_scan(args):
    fmt = args.format if args.format in ("csv", "jsonl") else "csv"
    recs = list(theorems.scan(args.n_min, args.n_max, args.r, jobs=args.jobs))
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                _write_records(recs, fmt, fh)
        else:
            _write_records(recs, fmt, sys.stdout)
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    print(_summary_text(theorems.summarize(recs)), file=sys.stderr if not args.out else sys.stdout)
    return EXIT_VIOLATION if any(r.status == theorems.VIOLATION for r in recs) else EXIT_OK


def cmd_verify_theorems(args):
    r_set = (1, 4) if args.r is None else (args.r,)
    violations = 0
    try:
        dump = open(args.out, "w", encoding="utf-8") if args.out else None
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_IO
    for r in r_set:
        recs = list(theorems.scan(1, args.n_max, r, jobs=args.jobs))
        if dump:
            _write_records(recs, "jsonl", dump)
        for rec in recs:
            if rec.status == theorems.CONFIRMED:
                extra = f" zeta={records.rat_to_str(rec.zeta_total)}" if rec.closed_zeta is not None else ""
                print(f"CONFIRMED r={r} n={rec.n} d={rec.d} {rec.case} group={rec.case.predicted_group}{extra}")
            elif rec.status == theorems.VIOLATION:
                violations += 1
                print(f"VIOLATION {records.to_json(rec)}")
            if rec.status != theorems.VIOLATION:
                for note in rec.notes:
                    if note.startswith("flag:"):
                        print(f"FLAG r={r} n={rec.n} h={rec.h} {rec.case}: {note[6:]}")
        print(f"r={r}: " + _summary_text(theorems.summarize(recs)))
    if dump:
        dump.close()
    print("violations:", violations)
    return EXIT_VIOLATION if violations else EXIT_OK


def cmd_zeta(args):
    if args.d is not None:
        d = args.d
        if d < 2 or square_factor(d) != 1:
            raise DomainError(f"d={d} must be a square-free integer > 1")
        print(records.rat_to_str(zagier_from_discriminant(d if d % 4 == 1 else 4 * d)))
        return EXIT_OK
    if args.n is None:
        raise DomainError("zeta needs --n or --d")
    F = make_field(args.n, args.r)
    print(records.rat_to_str(zagier_from_discriminant(F.D)))
    if args.classes:
        G = all_classes(F.D)
        for rep in partial_zetas(F, G):
            print(f"class {rep.class_index} {G.representative(rep.class_index)}: {records.rat_to_str(rep.value)}")
    return EXIT_OK


def cmd_sums(args):
    print(records.rat_to_str(dedekind_sum(args.p, args.h, args.k)))
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="rdfields", description="Class groups and zeta values of Q(sqrt(n^2 + r)).")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def r_flag(p, default=1):
        p.add_argument("--r", type=int, choices=(1, 4), default=default)

    p = sub.add_parser("analyze", help="full record for one field")
    p.add_argument("--n", type=int, required=True)
    r_flag(p)
    p.add_argument("--format", choices=("human", "json", "csv", "jsonl"), default="human")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("scan", help="records for a range of n")
    p.add_argument("--n-min", type=int, default=1)
    p.add_argument("--n-max", type=int, required=True)
    r_flag(p)
    p.add_argument("--format", choices=("csv", "jsonl"), default="csv")
    p.add_argument("--out")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("verify-theorems", help="check every classification prediction up to n-max")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--r", type=int, choices=(1, 4), default=None, help="default: both")
    p.add_argument("--out", help="also write every record as JSON lines")
    p.add_argument("--jobs", type=int, default=1)
    p.set_defaults(func=cmd_verify_theorems)

    p = sub.add_parser("zeta", help="zeta(-1) of a real quadratic field")
    p.add_argument("--n", type=int)
    p.add_argument("--d", type=int)
    r_flag(p)
    p.add_argument("--classes", action="store_true", help="also print the per-class values")
    p.set_defaults(func=cmd_zeta)

    p = sub.add_parser("sums", help="one generalized Dedekind sum S^p(h, k)")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--h", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_sums)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.ERROR, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
