"""Command-line front end.

Exit codes: 0 when the requested check passes, 1 when it fails, 2 on bad input
(malformed files, illegal parameters, exceeded budgets).  JSON output uses
sorted keys and CSV output a fixed column order, so equal inputs give
byte-identical output.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys

from .forms import FAMILIES, classify_hyperplane
from .geometry import BudgetExceeded
from .gf import field_make
from .polarspace import (
    DEFAULT_BUDGET,
    SCHEMA_VERSION,
    GeneratorSet,
    InvalidGeneratorSet,
    PolarSpace,
)
from .pseudopolar import (
    SectionError,
    check_alt,
    check_pseudopolar,
    check_strong_pseudopolar,
    dual_hyperoval_example,
    dual_points,
    equivalence_harness,
    section_set,
)

CHECKERS = {"strong": check_strong_pseudopolar, "pseudo": check_pseudopolar, "alt": check_alt}


class InputError(Exception):
    pass


def _space(args) -> PolarSpace:
    F = field_make(args.p, args.h)
    return PolarSpace(args.family, args.rank, F, budget=args.budget_generators)


def _covector(text: str) -> list[int]:
    try:
        return [int(x) for x in text.replace(",", " ").split()]
    except ValueError as exc:
        raise InputError(f"bad covector {text!r}") from exc


def _emit(args, payload: dict | None = None, rows: list[dict] | None = None, text: str | None = None):
    if text is None:
        if rows is not None and args.format == "csv":
            buf = io.StringIO()
            fields = ["schema_version"] + [k for k in rows[0] if k != "schema_version"] if rows else \
                ["schema_version"]
            w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
            w.writeheader()
            for r in rows:
                w.writerow({"schema_version": SCHEMA_VERSION, **r})
            text = buf.getvalue()
        else:
            payload = {"schema_version": SCHEMA_VERSION, **(payload or {})}
            text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cell(value) -> str:
    return value if isinstance(value, str) else json.dumps(value)


# -- commands -------------------------------------------------------------------

def cmd_construct(args) -> int:
    P = _space(args)
    summary = {
        "space": P.name, "family": P.family, "rank": P.rank, "q": P.q,
        "param_half": P.param_half, "ambient_dim": P.ambient_dim,
        "points": P.expected_points(), "generators": P.expected_generators(),
        "generators_per_point": P.expected_generators_through_point(),
        "points_per_generator": P.points_per_generator,
    }
    ok = True
    if args.enumerate:
        through = [len(t) for t in P.generators_by_point]
        enum = {"points": P.npoints, "generators": P.ngenerators,
                "generators_per_point": sorted(set(through))}
        summary["enumerated"] = enum
        ok = (enum["points"] == summary["points"]
              and enum["generators"] == summary["generators"]
              and enum["generators_per_point"] == [summary["generators_per_point"]])
        summary["matches"] = ok
        if args.dump:
            GeneratorSet(P, indices=range(P.ngenerators)).save(args.dump)
    if args.format == "csv":
        _emit(args, rows=[{k: v for k, v in summary.items() if not isinstance(v, dict)}])
    else:
        _emit(args, summary)
    return 0 if ok else 1


def cmd_check(args) -> int:
    S = GeneratorSet.load(args.set, budget=args.budget_generators)
    report = CHECKERS[args.mode](S.space, S)
    if args.format == "csv":
        _emit(args, rows=[{"condition": c.name, "passed": c.passed,
                           "observed": _cell(c.to_dict()["observed"]),
                           "expected": _cell(c.to_dict()["expected"]),
                           "vacuous": c.vacuous} for c in report.conditions])
    else:
        _emit(args, report.to_dict())
    return 0 if report.passed else 1


def cmd_section(args) -> int:
    P = _space(args)
    if args.all:
        rows = []
        for a in dual_points(P.ambient_dim, P.field):
            klass = classify_hyperplane(P, a)
            rows.append({"hyperplane": " ".join(str(int(x)) for x in a), "class": klass.tag,
                         "family": klass.family or "", "rank": klass.rank or ""})
        if args.format == "json":
            _emit(args, {"space": P.name, "hyperplanes": rows})
        else:
            _emit(args, rows=rows)
        return 0
    if not args.hyperplane:
        raise InputError("give --hyperplane or --all")
    a = _covector(args.hyperplane)
    if len(a) != P.ambient_dim + 1:
        raise InputError(f"covector needs {P.ambient_dim + 1} entries")
    if min(a) < 0 or max(a) >= P.q:
        raise InputError("covector entries must be field elements")
    S = section_set(P, a)
    _emit(args, text=S.dumps())
    return 0


def cmd_verify_theorem(args) -> int:
    P = _space(args)
    hyperplanes = "all" if args.max_hyperplanes is None else args.max_hyperplanes
    summary = equivalence_harness(P, hyperplanes=hyperplanes, samples=args.samples,
                                  seed=args.seed, budget_seconds=args.budget_seconds)
    if args.format == "csv":
        rows = [{"kind": "positive", "label": r.label, "size": r.size, "strong": r.strong,
                 "pseudo": r.pseudo, "alt": r.alt, "embedded": r.embedded, "rank": r.rank,
                 "param_half": r.param_half, "passed": r.passed} for r in summary.positives]
        rows += [{"kind": "negative", "label": f"sample {n.sample}", "size": "",
                  "strong": n.strong, "pseudo": n.pseudo, "alt": n.alt,
                  "embedded": "" if n.embedded is None else n.embedded, "rank": "",
                  "param_half": "", "passed": n.rejected} for n in summary.negatives]
        _emit(args, rows=rows)
    else:
        _emit(args, summary.to_dict())
    return 0 if summary.passed else 1


def cmd_demo_dual_hyperoval(args) -> int:
    F = field_make(args.p, args.h)
    lines, report = dual_hyperoval_example(F, args.n)
    payload = report.to_dict()
    payload["lines"] = [U.to_rows() for U in lines]
    _emit(args, payload)
    return 0 if report.passed else 1


# -- argument parsing --------------------------------------------------------------

def _space_args(sp, family_required=True):
    sp.add_argument("--family", required=family_required, choices=sorted(FAMILIES))
    sp.add_argument("--rank", type=int, required=family_required)
    sp.add_argument("--p", type=int, required=family_required)
    sp.add_argument("--h", type=int, default=1)


def _common(sp, fmt="json"):
    sp.add_argument("--out", help="write output here instead of stdout")
    sp.add_argument("--format", choices=["json", "csv"], default=fmt)
    sp.add_argument("--budget-generators", type=int, default=DEFAULT_BUDGET,
                    help="refuse spaces with more generators than this")
    sp.add_argument("--budget-seconds", type=float, default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="polarscope",
                                 description="Finite classical polar spaces and pseudopolar sets.")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("construct", help="closed-form counts, optionally checked by enumeration")
    _space_args(sp)
    _common(sp)
    sp.add_argument("--enumerate", action="store_true")
    sp.add_argument("--dump", help="with --enumerate, write all generators as a set file")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("check", help="run a checker on a generator set file")
    sp.add_argument("--set", required=True)
    sp.add_argument("--mode", choices=sorted(CHECKERS), default="pseudo")
    _common(sp)
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("section", help="hyperplane sections and their classification")
    _space_args(sp)
    sp.add_argument("--hyperplane", help="covector, e.g. '1,0,0,0,0,0,0'")
    sp.add_argument("--all", action="store_true", help="classify every hyperplane")
    _common(sp, fmt="csv")
    sp.set_defaults(func=cmd_section)

    sp = sub.add_parser("verify-theorem", help="equivalence harness on one space")
    _space_args(sp)
    sp.add_argument("--samples", type=int, default=100)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--max-hyperplanes", type=int, default=None,
                    help="stop after this many non-tangent hyperplanes (seeded order)")
    _common(sp)
    sp.set_defaults(func=cmd_verify_theorem)

    sp = sub.add_parser("demo-dual-hyperoval", help="two dual hyperovals sharing a line")
    sp.add_argument("--p", type=int, default=2)
    sp.add_argument("--h", type=int, default=1)
    sp.add_argument("--n", type=int, default=4)
    _common(sp)
    sp.set_defaults(func=cmd_demo_dual_hyperoval)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, InvalidGeneratorSet, SectionError, BudgetExceeded,
            ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
