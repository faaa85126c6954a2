"""Command-line front end.

Exit status: 0 when the requested check passes, 1 when it fails, 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import sys

from . import reduction
from .engine import MODES, crosscheck, verify_all, verify_weighting
from .errors import DiscrepancyError, ParameterError, ScanInterrupted, UnsupportedOperationError
from .report import FORMATTERS, Report, counterexample_line
from .rootsys import CLASSICAL, FAMILIES, build_root_system
from .weights import (all_weightings, as_weighting, is_distinguished_cardinality,
                      is_distinguished_closed_form)

LONG_SYSTEMS = {("E", 7), ("E", 8)}
VERBS = ("verify", "classify", "counterexamples", "crosscheck", "reduction-check")


class UsageError(Exception):
    pass


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="zetacheck",
        description="Check that a weighting is distinguished exactly when zeta(w) is "
                    "strictly positive for every Weyl group element w.")
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("--family", required=True, type=str.upper, choices=FAMILIES)
    parser.add_argument("--rank", required=True, type=int)
    parser.add_argument("--rho", help="weighting as a string over {0,2}, first simple root first")
    parser.add_argument("--mode", choices=MODES, default="brute")
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out", help="write the report here instead of standard output")
    parser.add_argument("--format", choices=sorted(FORMATTERS), default="json")
    parser.add_argument("--long", action="store_true", help="allow E7/E8 scans and checkpointing")
    parser.add_argument("--checkpoint", help="checkpoint file (with --rho) or directory")
    parser.add_argument("--extended", action="store_true",
                        help="type D: scan W' and skip the gamma_{n-1} coordinate")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scan_guard(args, rs) -> None:
    if args.jobs < 1:
        raise UsageError("--jobs must be positive")
    if (rs.family, rs.rank) in LONG_SYSTEMS and args.mode != "closedform" and not args.long:
        raise UsageError(f"{rs.name} scans are long jobs; pass --long to run them")
    if args.checkpoint and not args.long:
        raise UsageError("--checkpoint requires --long")
    if args.extended and rs.family != "D":
        raise UsageError("--extended applies to type D only")
    if args.mode != "brute" and rs.family not in CLASSICAL:
        raise UsageError(f"--mode {args.mode} needs a classical family")


def _report(args, rs):
    _scan_guard(args, rs)
    rhos = None
    if args.rho is not None:
        rhos = [as_weighting(rs, args.rho)]
    checkpoint = args.checkpoint
    if checkpoint and rhos is not None:
        # a single weighting checkpoints to one file
        v = verify_weighting(rs, rhos[0], args.mode, args.jobs, extended=args.extended, checkpoint=checkpoint)
        return Report(rs.family, rs.rank, (v,))
    return verify_all(rs, args.mode, args.jobs, extended=args.extended, checkpoint=checkpoint, rhos=rhos)


def cmd_verify(args, rs) -> int:
    report = _report(args, rs)
    _emit(FORMATTERS[args.format](report), args.out)
    return 0 if report.theorem_holds else 1


def cmd_counterexamples(args, rs) -> int:
    report = _report(args, rs)
    rows = [v for v in report.verdicts if not v.distinguished_cardinality]
    if args.format == "text":
        text = "".join(counterexample_line(v) + "\n" for v in rows)
    elif args.format == "json":
        text = json.dumps([{"rho": str(v.weighting), "counterexample": v.counterexample.to_dict()
                            if v.counterexample else None} for v in rows], indent=2) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rho", "word", "gamma_index", "zeta"])
        for v in rows:
            ce = v.counterexample.to_dict() if v.counterexample else {}
            writer.writerow([str(v.weighting), ce.get("word", ""), ce.get("gamma_index", ""), ce.get("zeta", "")])
        text = buf.getvalue()
    _emit(text, args.out)
    return 0 if report.theorem_holds else 1


def cmd_classify(args, rs) -> int:
    rhos = [as_weighting(rs, args.rho)] if args.rho else all_weightings(rs)
    rows = []
    for rho in rhos:
        closed = is_distinguished_closed_form(rs, rho) if rs.family in CLASSICAL else None
        rows.append({"rho": str(rho), "distinguished": is_distinguished_cardinality(rs, rho),
                     "bala_carter": closed})
    agree = all(r["bala_carter"] is None or r["bala_carter"] == r["distinguished"] for r in rows)
    count = sum(r["distinguished"] for r in rows)
    if args.format == "json":
        text = json.dumps({"family": rs.family, "rank": rs.rank, "weightings": rows,
                           "distinguished_count": count, "agree": agree}, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.DictWriter(buf, fieldnames=["rho", "distinguished", "bala_carter"], lineterminator="\n")
        writer.writeheader()
        for r in rows:
            writer.writerow({**r, "bala_carter": "" if r["bala_carter"] is None else r["bala_carter"]})
        text = buf.getvalue()
    else:
        lines = [f"{rs.name}: {count} of {len(rows)} weightings distinguished"]
        for r in rows:
            bc = "-" if r["bala_carter"] is None else r["bala_carter"]
            lines.append(f"  {r['rho']}  cardinality={r['distinguished']}  closed_form={bc}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0 if agree else 1


def cmd_crosscheck(args, rs) -> int:
    if rs.family not in CLASSICAL:
        raise UsageError(f"crosscheck needs a classical family, not {rs.name}")
    ok = crosscheck(rs)
    result = {"family": rs.family, "rank": rs.rank, "crosscheck": ok}
    _emit(json.dumps(result) + "\n" if args.format != "text" else f"{rs.name}: crosscheck={ok}\n", args.out)
    return 0 if ok else 1


def cmd_reduction_check(args, rs) -> int:
    if rs.family not in ("B", "C", "D") and (rs.family, rs.rank) != ("G", 2):
        raise UsageError(f"no reduction map for {rs.name}")
    fmap, emb = reduction.build_reduction(rs.family, rs.rank)
    elements = reduction.group_elements(fmap.target)
    props = reduction.check_reduction_properties(fmap, emb, elements)
    rhos = [as_weighting(rs, args.rho)] if args.rho else all_weightings(rs)
    result = {
        "family": rs.family,
        "rank": rs.rank,
        "positive": props.positive,
        "root_surjective": props.root_surjective,
        "compatible": props.compatible,
        "abs_fiber": reduction.abs_fiber_identity(fmap),
        "weight_classes": all(reduction.pulled_back_weight_classes(fmap, r) for r in rhos),
        "score_identity": all(reduction.score_identity(fmap, emb, r, w) for r in rhos for w in elements),
        "coefficient_form_checked": fmap.constant_multiplicity is not None,
        "elements": len(elements),
    }
    ok = all(v for k, v in result.items() if isinstance(v, bool) and k != "coefficient_form_checked")
    result["ok"] = ok
    if args.format == "text":
        text = "".join(f"{k}: {v}\n" for k, v in result.items())
    else:
        text = json.dumps(result, indent=2) + "\n"
    _emit(text, args.out)
    return 0 if ok else 1


COMMANDS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "counterexamples": cmd_counterexamples,
    "crosscheck": cmd_crosscheck,
    "reduction-check": cmd_reduction_check,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(levelname)s %(message)s")
    try:
        rs = build_root_system(args.family, args.rank)
        return COMMANDS[args.verb](args, rs)
    except (UsageError, ParameterError, UnsupportedOperationError) as exc:
        parser.print_usage(sys.stderr)
        print(f"zetacheck: error: {exc}", file=sys.stderr)
        return 2
    except DiscrepancyError as exc:
        print(f"zetacheck: discrepancy: {exc}", file=sys.stderr)
        return 1
    except ScanInterrupted as exc:
        print(f"zetacheck: interrupted: {exc}", file=sys.stderr)
        return 1
