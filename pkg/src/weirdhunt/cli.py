"""Command-line front end.

Exit codes are stable: 0 affirmative (weird / hits found / all rows pass),
1 negative, 2 usage or runtime error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from contextlib import ExitStack
from decimal import Decimal
from fractions import Fraction
from math import floor
from pathlib import Path

from .arith import divisors_up_to, parse_factored, sigma
from .errors import (
    CapExceeded,
    FactoringBudgetExceeded,
    ParseError,
    TargetTooLarge,
    WeirdHuntError,
)
from .gates import abundance_window
from .primality import PrimeWindow
from .records import CertificateRecord, CsvTable
from .reproduce import reproduce_small, reproduce_table
from .search import Checkpoint, HuntRun, SearchJob
from .seeds import seed_catalog
from .weirdness import DEFAULT_PROPER_DIVISOR_CAP, DEFAULT_TARGET_CAP, Primitivity, certify

EXIT_YES, EXIT_NO, EXIT_ERROR = 0, 1, 2


def _fail(msg: str) -> int:
    print(f"error: {msg}", file=sys.stderr)
    return EXIT_ERROR


# -- verify --------------------------------------------------------------------

def cmd_verify(args: argparse.Namespace) -> int:
    n = parse_factored(args.number)
    cert = certify(n, cap=args.target_cap, divisor_cap=args.divisor_cap)
    rep = cert.report
    semiperfect = None
    if cert.witness is not None and rep.delta > 0:
        dropped = set(cert.witness)
        semiperfect = [d for d in divisors_up_to(n, n.value - 1) if d not in dropped]

    if args.json:
        doc = CertificateRecord.from_certificate(cert).to_dict()
        doc.update(
            weird=cert.weird,
            sigma=str(rep.sigma),
            abundance_class=rep.cls.value,
            witness=None if cert.witness is None else [str(d) for d in cert.witness],
        )
        print(json.dumps(doc, indent=2))
        return EXIT_YES if cert.weird else EXIT_NO

    print(f"n = {n.value} = {n}")
    print(f"sigma(n) = {rep.sigma}")
    print(f"abundance = {rep.delta} ({rep.cls.value}), deficience = {rep.deficience}")
    if cert.weird:
        print(f"weird: yes; no set of distinct proper divisors sums to {rep.delta} (search exhausted)")
        if cert.primitivity is Primitivity.UNCHECKED:
            print("primitivity: unchecked (not primitive abundant and too many divisors for the exact check)")
        else:
            print(f"primitivity: {cert.primitivity.value}")
    elif rep.delta < 0:
        print("weird: no (deficient)")
    elif rep.delta == 0:
        print("weird: no (perfect)")
    else:
        print(f"weird: no; {rep.delta} = {' + '.join(map(str, cert.witness))}")
        if semiperfect is not None and len(semiperfect) <= 64:
            print(f"semiperfect: {n.value} = {' + '.join(map(str, semiperfect))}")
    print(f"primality: {cert.primality_certainty.value}")
    return EXIT_YES if cert.weird else EXIT_NO


# -- hunt ------------------------------------------------------------------------

def cmd_hunt(args: argparse.Namespace) -> int:
    if args.resume and not args.checkpoint:
        return _fail("--resume needs --checkpoint")
    if args.k < 2:
        return _fail("--k must be at least 2")
    window = PrimeWindow.parse(args.window) if args.window else None
    kw = {}
    if args.width is not None:
        kw["width_factor"] = Fraction(args.width)
    job = SearchJob.make(
        parse_factored(args.m),
        args.k,
        args.mode,
        window=window,
        max_tuples=args.max_tuples,
        parallelism=args.jobs,
        prune=not args.no_prune,
        **kw,
    )
    checkpoint = None
    if args.resume:
        path = Path(args.checkpoint)
        if not path.exists():
            return _fail(f"checkpoint {path} does not exist")
        checkpoint = Checkpoint.load(path)

    save = (lambda cp: cp.save(args.checkpoint)) if args.checkpoint else None
    run = HuntRun(job, checkpoint, on_checkpoint=save)
    w = job.resolved_window()
    print(f"# hunting m={job.m} k={job.k} mode={job.mode.value} window={w}", file=sys.stderr)

    start = time.monotonic()
    found = 0
    with ExitStack() as stack:
        if args.out:
            out = stack.enter_context(open(args.out, "a" if args.resume else "w"))
        else:
            out = sys.stdout
        table = CsvTable(stack.enter_context(open(args.csv, "w", newline=""))) if args.csv else None
        for cert in run:
            rec = CertificateRecord.from_certificate(cert)
            out.write(rec.to_json() + "\n")
            out.flush()
            if table:
                table.add(rec)
            found += 1
    elapsed = time.monotonic() - start
    cp = run.checkpoint
    tail = "; budget exhausted, continue with --resume" if run.exhausted else ""
    print(
        f"# examined {cp.tuples_examined} tuples, {found} hits this run "
        f"({cp.hits} total), {elapsed:.2f}s wall{tail}",
        file=sys.stderr,
    )
    for msg in run.errors:
        print(f"# candidate error: {msg}", file=sys.stderr)
    return EXIT_YES if found or (args.resume and cp.hits) else EXIT_NO


# -- window ------------------------------------------------------------------------

def cmd_window(args: argparse.Namespace) -> int:
    m = parse_factored(args.m)
    d = 2 * m.value - sigma(m)
    if d <= 0:
        kind = "perfect" if d == 0 else "abundant"
        return _fail(f"m={m.value} is {kind}; a deficient m is required")
    w = abundance_window(m, args.k)
    print(f"m = {m} (deficience {d}), k = {args.k}")
    for label, x in (
        ("abundant_threshold", w.abundant_threshold),
        ("deficient_threshold", w.deficient_threshold),
        ("center", w.center),
    ):
        if x.denominator == 1:
            print(f"{label}: {x}")
        else:
            dec = Decimal(x.numerator) / Decimal(x.denominator)
            print(f"{label}: {x} = {dec.normalize():f} (rounded {floor(x + Fraction(1, 2))})")
    return EXIT_YES


# -- reproduce -----------------------------------------------------------------------

def cmd_reproduce(args: argparse.Namespace) -> int:
    if args.table == "small":
        res = reproduce_small()
        status = "PASS" if res.ok else "FAIL"
        print(f"{status} weird numbers <= 10^4: found {len(res.found)} {res.found}")
        if not res.ok:
            print(f"expected {res.expected}")
        return EXIT_YES if res.ok else EXIT_NO

    results = reproduce_table(int(args.table))
    table = None
    with ExitStack() as stack:
        if args.csv:
            table = CsvTable(stack.enter_context(open(args.csv, "w", newline="")))
        for r in results:
            status = "PASS" if r.ok else "FAIL"
            v = r.verdict
            gate = f"h*={v.h_star} j={v.u_j}" if v and v.passed else "gate failed"
            print(f"{status} {r.row.w} = {r.row.n}  m={r.row.m}  delta={r.row.delta}  {gate}")
            for p in r.problems:
                print(f"     {p}")
            if table and r.certificate:
                table.add(CertificateRecord.from_certificate(r.certificate))
    bad = sum(not r.ok for r in results)
    print(f"table {args.table}: {len(results) - bad}/{len(results)} rows pass")
    return EXIT_YES if not bad else EXIT_NO


# -- seeds ---------------------------------------------------------------------------

def cmd_seeds(args: argparse.Namespace) -> int:
    for s in seed_catalog():
        print(f"{s.m.value:>12}  {str(s.m):<16} d={s.deficience}  {s.parity}")
    return EXIT_YES


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weirdhunt", description=__doc__.splitlines()[0])
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="decide whether a number is weird")
    p.add_argument("number", help="decimal or factorization such as 2^4*83*89")
    p.add_argument("--json", action="store_true")
    p.add_argument("--target-cap", type=int, default=DEFAULT_TARGET_CAP)
    p.add_argument("--divisor-cap", type=int, default=DEFAULT_PROPER_DIVISOR_CAP)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("hunt", help="search for primitive weird numbers m*p1*...*pk")
    p.add_argument("--m", required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--mode", choices=["t1", "t2", "T1", "T2"], default="t1")
    p.add_argument("--window", help="LO:HI prime window (default: derived from m and k)")
    p.add_argument("--width", help="half-width of the derived window as a fraction of its center")
    p.add_argument("--max-tuples", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", help="JSONL output file (default stdout)")
    p.add_argument("--csv", help="also write hits as CSV")
    p.add_argument("--checkpoint", help="checkpoint file, rewritten after each leading prime")
    p.add_argument("--resume", action="store_true", help="continue from --checkpoint")
    p.add_argument("--no-prune", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_hunt)

    p = sub.add_parser("window", help="print the abundance/deficience prime thresholds")
    p.add_argument("--m", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_window)

    p = sub.add_parser("reproduce", help="re-check the published tables")
    p.add_argument("table", choices=["1", "2", "small"])
    p.add_argument("--csv")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("seeds", help="list built-in deficient seeds")
    p.set_defaults(func=cmd_seeds)
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ParseError as exc:
        return _fail(f"cannot parse input: {exc}")
    except FactoringBudgetExceeded as exc:
        return _fail(f"factoring budget exceeded: {exc}")
    except TargetTooLarge as exc:
        return _fail(f"abundance too large for the subset-sum oracle: {exc}")
    except CapExceeded as exc:
        return _fail(f"divisor cap exceeded: {exc}")
    except (WeirdHuntError, ValueError) as exc:
        return _fail(str(exc))
