"""Command-line entry point.

Exit codes: 0 certified / member / ok, 1 refuted / non-member, 2 inconclusive,
64 bad usage (unknown flag, unparsable value), 65 well-formed input that the
operation rejects (negative entries, r below a threshold, ...).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import random
import sys
from typing import Optional, Sequence

import mpmath

from . import __version__
from .criteria import certify_infinite, compare_criteria, quartic_check, symmetric_criterion
from .errors import LogcaveError, ParseError
from .exactnum import R0, R1, format_number, parse_number, parse_numbers, to_mpf
from .pascal import MODES, summarize, verify_range
from .region import boundary_rows, closure_test, clause_signs, decompose
from .sampling import random_witness_spec
from .seqcore import PARITIES, Seq, SymSeq, first_lc_violation, is_ifold_lc, iterate_lr
from .witness import SCHEMES, WitnessSpec, build_witness

EXIT_OK, EXIT_REFUTED, EXIT_INCONCLUSIVE, EXIT_USAGE, EXIT_DATA = 0, 1, 2, 64, 65

FORMATS = ("json", "csv", "text")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_USAGE)


# -- argument types -------------------------------------------------------------

def _number(text: str):
    try:
        return parse_number(text)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _numbers(text: str):
    try:
        return parse_numbers(text)
    except ParseError as e:
        raise argparse.ArgumentTypeError(str(e)) from None


def _count(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text!r}")
    return v


# -- output ---------------------------------------------------------------------

def _emit(out, fmt: str, payload, rows: Optional[list] = None, text: Optional[str] = None):
    if fmt == "json":
        out.write(json.dumps(payload, indent=2) + "\n")
    elif fmt == "csv":
        if rows is None:
            rows = [_flatten(payload)]
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=list(rows[0]) if rows else [], lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
        out.write(buf.getvalue())
    else:
        out.write((text if text is not None else json.dumps(payload, indent=2)) + "\n")


def _flatten(obj, prefix: str = "") -> dict:
    flat = {}
    for k, v in obj.items():
        key = f"{prefix}{k}"
        if isinstance(v, dict):
            flat.update(_flatten(v, key + "."))
        elif isinstance(v, list):
            flat[key] = " ".join(str(x) for x in v)
        else:
            flat[key] = "" if v is None else v
    return flat


def _fmt(v):
    return None if v is None else format_number(v)


# -- subcommands ----------------------------------------------------------------

def cmd_apply(args, out) -> int:
    s = iterate_lr(Seq(tuple(args.seq)), args.r, args.iters, allow_small_r=args.allow_small_r)
    payload = {"r": format_number(args.r), "iters": args.iters, "sequence": s.text()}
    _emit(out, args.format or "text", payload, text=str(s))
    return EXIT_OK


def cmd_check(args, out) -> int:
    s = Seq(tuple(args.seq))
    s.require_nonnegative()
    k = first_lc_violation(s, args.r)
    payload = {"r": format_number(args.r), "r_factor_lc": k is None, "failing_index": k}
    ok = k is None
    if args.fold:
        v = is_ifold_lc(s, args.r, args.fold, allow_small_r=args.allow_small_r)
        payload["fold"] = {"i": args.fold, "ok": v.ok,
                           "failing": None if v.ok else {"iteration": v.iteration, "index": v.index}}
        ok = ok and v.ok
    if args.quartic:
        payload["quartic_failing_index"] = quartic_check(s, args.r) if k is None else None
    text = "ok" if ok else "fails"
    _emit(out, args.format or "json", payload, text=text)
    return EXIT_OK if ok else EXIT_REFUTED


_VERDICT_EXIT = {"certified": EXIT_OK, "refuted": EXIT_REFUTED, "inconclusive": EXIT_INCONCLUSIVE}


def _sym_from_full(values) -> SymSeq:
    """Core of a full symmetric sequence ``1, x_0, ..., x_0, 1``."""
    vals = list(values)
    if len(vals) < 3 or vals[0] != 1 or vals[-1] != 1 or vals != vals[::-1]:
        raise UsageError("--seq must be symmetric and start and end with 1")
    inner = vals[1:-1]
    parity = "even" if len(inner) % 2 == 0 else "odd"
    return SymSeq(tuple(inner[: (len(inner) + 1) // 2]), parity)


def cmd_certify(args, out) -> int:
    s = Seq(tuple(args.seq))
    if args.criterion == "symmetric":
        cert = symmetric_criterion(_sym_from_full(args.seq), args.r if args.r is not None else 1)
    else:
        thr = args.r if args.r is not None else (R0 if args.criterion == "r0" else R1)
        s.require_nonnegative()
        if args.criterion == "r0":
            cert = certify_infinite(s, thr, 1, args.max_iters)
        elif args.step == "1":
            cert = certify_infinite(s, thr, 1, args.max_iters, comparison=True)
        else:
            cert = certify_infinite(s, thr, thr, args.max_iters)
    _emit(out, args.format or "json", cert.to_json(), text=cert.verdict)
    return _VERDICT_EXIT[cert.verdict]


def cmd_compare(args, out) -> int:
    cmp = compare_criteria(Seq(tuple(args.seq)), args.max_iters)
    _emit(out, args.format or "json", cmp.to_json())
    verdicts = {cmp.r0.verdict, cmp.r1.verdict}
    if verdicts == {"certified"}:
        return EXIT_OK
    return EXIT_REFUTED if "refuted" in verdicts else EXIT_INCONCLUSIVE


def _point(args) -> SymSeq:
    return SymSeq(tuple(args.point), args.parity)


def cmd_region_check(args, out) -> int:
    p = _point(args)
    signs = clause_signs(p, args.r)
    member = all(x >= 0 for x in signs)
    payload = {
        "point": p.to_json(),
        "r": format_number(args.r),
        "member": member,
        "surfaces": [{"surface": j, "correct_side": x >= 0, "on_boundary": x == 0}
                     for j, x in enumerate(signs)],
    }
    _emit(out, args.format or "json", payload, text="member" if member else "non-member")
    return EXIT_OK if member else EXIT_REFUTED


def cmd_region_closure(args, out) -> int:
    rep = closure_test(_point(args), args.r, args.iters)
    _emit(out, args.format or "json", rep.to_json(), text="ok" if rep.ok else "violated")
    return EXIT_OK if rep.ok else EXIT_REFUTED


def cmd_region_decompose(args, out) -> int:
    d = decompose(_point(args), args.dps)
    gaps = [format_number(g) if e else _nstr(g, args.dps)
            for g, e in zip(d.gaps, d.exact)]
    payload = {"x": format_number(d.x), "gaps": gaps, "exact": list(d.exact),
               "geometric": d.geometric, "reason": d.reason}
    _emit(out, args.format or "json", payload)
    return EXIT_OK if d.geometric else EXIT_REFUTED


def _nstr(v, dps: int) -> str:
    return mpmath.nstr(v, dps)


def cmd_region_boundary(args, out) -> int:
    rows = []
    for row in boundary_rows(args.n, args.r, args.samples, args.x_max, args.parity):
        rec = {k: (_fmt(v) if k != "surface" else v) for k, v in row.items()}
        if args.approx:
            rec["coord0_approx"] = _nstr(to_mpf(row["coord0"], args.approx + 5), args.approx)
            rec["coord1_approx"] = _nstr(to_mpf(row["coord1"], args.approx + 5), args.approx)
        rows.append(rec)
    fmt = args.format or "csv"
    _emit(out, fmt, rows, rows=rows, text=_table(rows))
    return EXIT_OK


def _table(rows) -> str:
    if not rows:
        return ""
    cols = list(rows[0])
    lines = ["\t".join(cols)]
    lines += ["\t".join("" if r[c] is None else str(r[c]) for c in cols) for r in rows]
    return "\n".join(lines)


def _witness_payload(spec: WitnessSpec) -> dict:
    w = build_witness(spec)
    rep = closure_test(w, spec.r, 3)
    signs = clause_signs(w, spec.r)
    return {
        "spec": spec.to_json(),
        "witness": w.to_json(),
        "member": all(x >= 0 for x in signs),
        "surfaces": [{"surface": j, "correct_side": x >= 0} for j, x in enumerate(signs)],
        "closure": rep.to_json(),
    }


def cmd_witness_build(args, out) -> int:
    spec = WitnessSpec(args.r, args.C, args.n, args.scheme, args.parity, args.a,
                       tuple(args.q) if args.q else None)
    payload = _witness_payload(spec)
    _emit(out, args.format or "json", payload)
    return EXIT_OK if payload["member"] else EXIT_REFUTED


def cmd_witness_sample(args, out) -> int:
    rng = random.Random(args.seed)
    payloads = [_witness_payload(random_witness_spec(rng, args.scheme))
                for _ in range(args.count)]
    rows = [{"r": p["spec"]["r"], "C": p["spec"]["C"], "a": p["spec"]["a"],
             "n": p["spec"]["n"], "scheme": p["spec"]["scheme"],
             "parity": p["spec"]["parity"], "member": p["member"],
             "closure_ok": p["closure"]["ok"]} for p in payloads]
    _emit(out, args.format or "json", payloads, rows=rows)
    return EXIT_OK if all(p["member"] and p["closure"]["ok"] for p in payloads) else EXIT_REFUTED


def cmd_pascal_verify(args, out) -> int:
    lo, hi = args.lo, args.hi
    if lo > hi:
        raise UsageError("--from must not exceed --to")
    reports = verify_range(lo, hi, args.mode, args.max_iters, args.jobs)
    summary = summarize(reports)
    fmt = "csv" if args.csv else (args.format or "json")
    rows = [r.csv_row() for r in reports]
    if args.timing:
        for row, rep in zip(rows, reports):
            row["wall_time"] = round(rep.wall_time, 6)
    payload = [r.to_json(args.timing) for r in reports]
    if args.out:
        with open(args.out, "w", newline="") as fh:
            _emit(fh, fmt, payload, rows=rows)
        _emit(out, args.format or "json", summary.to_json(args.timing))
    else:
        _emit(out, fmt, payload, rows=rows)
    if args.out is None and args.summary:
        sys.stderr.write(json.dumps({"summary": summary.to_json(args.timing)}) + "\n")
    if summary.certified == summary.rows:
        return EXIT_OK
    verdicts = {c.verdict for r in reports for c in (r.certificate_r0, r.certificate_r1) if c}
    return EXIT_REFUTED if "refuted" in verdicts else EXIT_INCONCLUSIVE


# -- parser ---------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=FORMATS, default=argparse.SUPPRESS,
                        help="output format (default depends on the command)")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS,
                        help="seed for randomized subcommands (default 0)")

    p = _Parser(prog="logcave", parents=[common],
                description="Exact tools for r-factor log-concavity and the operator L_r.")
    p.add_argument("--version", action="version", version=f"logcave {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    def seq_arg(sp):
        sp.add_argument("--seq", type=_numbers, required=True,
                        help='comma-separated exact values, e.g. "1,3,3,1" or "1,r1,1/2"')

    def small_r(sp):
        sp.add_argument("--allow-small-r", action="store_true",
                        help="accept 0 < r < 1 (with a warning)")

    sp = add("apply", cmd_apply, "apply L_r repeatedly and print the result")
    seq_arg(sp)
    sp.add_argument("--r", type=_number, default=1)
    sp.add_argument("--iters", type=_count, default=1)
    small_r(sp)

    sp = add("check", cmd_check, "test r-factor log-concavity (and optionally i-fold)")
    seq_arg(sp)
    sp.add_argument("--r", type=_number, default=1)
    sp.add_argument("--fold", type=_count, default=0,
                    help="also require L_r^j nonnegative for j <= FOLD")
    sp.add_argument("--quartic", action="store_true",
                    help="report the quartic necessary condition")
    small_r(sp)

    sp = add("certify", cmd_certify, "certify infinite log-concavity")
    seq_arg(sp)
    sp.add_argument("--criterion", choices=("r0", "r1", "symmetric"), default="r0")
    sp.add_argument("--r", type=_number, default=None,
                    help="threshold (default r0 or r1); for 'symmetric' the r of the centre clause")
    sp.add_argument("--step", choices=("1", "r"), default="r",
                    help="for --criterion r1: iterate L_r (default) or L (comparison count)")
    sp.add_argument("--max-iters", type=_count, default=None)

    sp = add("compare", cmd_compare, "iterations of L to reach r0- and r1-factor log-concavity")
    seq_arg(sp)
    sp.add_argument("--max-iters", type=_count, default=None)

    region = add("region", None, "membership in the region R")
    rsub = region.add_subparsers(dest="region_command", required=True, parser_class=_Parser)

    def radd(name, fn, help_):
        sp = rsub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=fn)
        return sp

    def point_args(sp):
        sp.add_argument("--r", type=_number, default=1)
        sp.add_argument("--parity", choices=PARITIES, default="even")
        sp.add_argument("--point", type=_numbers, required=True, help="core x_0,...,x_n")

    point_args(radd("check", cmd_region_check, "which side of each hypersurface a point is on"))
    sp = radd("closure", cmd_region_closure, "apply L_r and re-test membership")
    point_args(sp)
    sp.add_argument("--iters", type=_count, default=5)
    sp = radd("decompose", cmd_region_decompose, "exponent gaps of a core")
    point_args(sp)
    sp.add_argument("--dps", type=_count, default=30)

    def boundary_args(sp):
        sp.add_argument("--n", type=_count, default=1)
        sp.add_argument("--r", type=_number, default=1)
        sp.add_argument("--samples", type=_count, default=16)
        sp.add_argument("--x-max", type=_number, default=4)
        sp.add_argument("--parity", choices=PARITIES, default="even")
        sp.add_argument("--approx", type=_count, default=0, metavar="DIGITS",
                        help="add decimal columns (these do not round-trip)")

    boundary_args(radd("boundary", cmd_region_boundary, "sample the planar hypersurfaces as CSV"))
    boundary_args(add("boundary", cmd_region_boundary, "alias of 'region boundary'"))

    witness = add("witness", None, "explicit members of R")
    wsub = witness.add_subparsers(dest="witness_command", required=True, parser_class=_Parser)
    sp = wsub.add_parser("build", parents=[common], help="build one witness")
    sp.set_defaults(func=cmd_witness_build)
    sp.add_argument("--scheme", choices=sorted(SCHEMES), default="pentagonal")
    sp.add_argument("--r", type=_number, default=1)
    sp.add_argument("--C", type=_number, required=True)
    sp.add_argument("--n", type=_count, required=True)
    sp.add_argument("--parity", choices=PARITIES, default="even")
    sp.add_argument("--a", type=_number, default=None, help="default: a_bound + 1")
    sp.add_argument("--q", type=_numbers, default=None, help="r-factor log-concave core q_0..q_n")
    sp = wsub.add_parser("sample", parents=[common], help="build random witnesses (uses --seed)")
    sp.set_defaults(func=cmd_witness_sample)
    sp.add_argument("--count", type=_count, default=5)
    sp.add_argument("--scheme", choices=sorted(SCHEMES), default=None)

    pascal = add("pascal", None, "rows of Pascal's triangle")
    psub = pascal.add_subparsers(dest="pascal_command", required=True, parser_class=_Parser)
    sp = psub.add_parser("verify", parents=[common], help="certify a range of rows")
    sp.set_defaults(func=cmd_pascal_verify)
    sp.add_argument("--from", dest="lo", type=_count, default=0)
    sp.add_argument("--to", dest="hi", type=_count, default=100)
    sp.add_argument("--mode", choices=MODES, default="both")
    sp.add_argument("--max-iters", type=_count, default=None)
    sp.add_argument("--out", default=None, help="write the report here; the summary goes to stdout")
    sp.add_argument("--csv", action="store_true", help="columns n, r0_iters, r1_iters, verdicts")
    sp.add_argument("--jobs", type=_count, default=1)
    sp.add_argument("--timing", action="store_true", help="include wall times (not deterministic)")
    sp.add_argument("--summary", action="store_true", help="print the summary to stderr")
    return p


def run(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if e.code is not None else EXIT_OK
    args.format = getattr(args, "format", None)
    args.seed = getattr(args, "seed", 0)
    try:
        return args.func(args, out)
    except UsageError as e:
        sys.stderr.write(f"logcave: error: {e}\n")
        return EXIT_USAGE
    except (LogcaveError, ValueError) as e:
        sys.stderr.write(f"logcave: {type(e).__name__}: {e}\n")
        return EXIT_DATA


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
