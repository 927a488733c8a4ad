"""Command-line interface: ``arithvol {volumes,zeta,bounds,search,growth}``.

Exit codes: 0 success, 1 usage or input error, 2 precision failure,
3 survivors differ from the expected ones (``search --expect-paper``).
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from typing import Optional

from .bounds import CaseKind, covolume_lower_bound, discriminant_cutoff, exceeds, \
    growth_ratio, log_margin, target
from .errbounded import ErrBounded
from .errors import ArithVolError, ParseError, PrecisionError
from .fields import FieldTable, builtin_table
from .lfun import dedekind_zeta
from .search import Options, eliminate
from .volume import RankDim, formula_case, minimal_index_constants, vol_minimal

EXIT_OK, EXIT_USAGE, EXIT_PRECISION, EXIT_MISMATCH = 0, 1, 2, 3

# (D_k, D_l) of the pairs that should remain at the end of each search
EXPECTED_SURVIVORS = {
    "compact-odd": {(5, 275)},
    "compact-even": {(5, 275)},
    "triality": set(),
    "noncompact-inner": {(1, 1)},
    "noncompact-outer-odd": {(1, 1)},
    "noncompact-even": {(1, 3)},
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_n_range(text: str) -> list[int]:
    """'5..29', '7' or '5,7,9' -> odd integers."""
    try:
        if ".." in text:
            a, b = (int(x) for x in text.split(".."))
            vals = list(range(a, b + 1, 2)) if a % 2 else None
            if vals is None:
                raise UsageError(f"range must start at an odd n: {text}")
        else:
            vals = [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"cannot parse n range {text!r}") from None
    if not vals:
        raise UsageError(f"empty range {text!r}")
    for n in vals:
        if n % 2 == 0:
            raise UsageError(f"n = {n} is even; only odd dimensions are supported")
    return vals


def _value(x: ErrBounded, digits: int) -> dict:
    return {"decimal": x.format(digits), "log": float(f"{x.log_value:.15g}"),
            "rel_err": float(f"{x.rel_err:.3g}")}


def _emit(rows: list[dict], fmt: str, columns: list[str], out) -> None:
    if fmt == "json":
        out.write(json.dumps(rows, indent=2) + "\n")
        return
    out.write("\t".join(columns) + "\n")
    for row in rows:
        out.write("\t".join(_cell(_get(row, c)) for c in columns) + "\n")


def _get(row: dict, dotted: str):
    cur = row
    for part in dotted.split("."):
        cur = cur[part]
    return cur


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return ",".join(str(x) for x in v)
    return str(v)


def _table(args) -> FieldTable:
    if getattr(args, "fields", None):
        return FieldTable.from_path(args.fields)
    return builtin_table()


# ---------------------------------------------------------------------------
# commands


def cmd_volumes(args, out) -> int:
    ns = parse_n_range(args.n)
    for n in ns:
        if not 5 <= n <= 61:
            raise UsageError(f"n = {n} outside 5..61")
    cases = ["compact", "noncompact"] if args.case == "both" else [args.case]
    rows = []
    for n in ns:
        rd = RankDim.from_n(n)
        for case in cases:
            v = vol_minimal(rd, case, args.tol)
            idx = minimal_index_constants(rd, case).index
            rows.append({"n": n, "case": case, "volume": _value(v, args.prec_digits),
                         "index": str(idx), "formula": formula_case(rd, case)})
    _emit(rows, args.format, ["n", "case", "volume.decimal", "volume.log", "volume.rel_err",
                              "index", "formula"], out)
    return EXIT_OK


def cmd_zeta(args, out) -> int:
    table = _table(args)
    F = table[args.field]
    strategy = args.strategy
    v = dedekind_zeta(F, args.s, args.tol, strategy=strategy)
    if strategy == "auto":
        used = "Bernoulli/Hurwitz" if F.degree == 1 else \
            "character sum" if F.degree == 2 else "Euler product"
    else:
        used = strategy
    rec = {"command": "zeta", "inputs": {"field": F.label, "s": args.s, "tol": args.tol},
           "value": _value(v, args.prec_digits), "strategy": used}
    _emit([rec], args.format, ["command", "inputs.field", "inputs.s", "value.decimal",
                               "value.log", "value.rel_err", "strategy"], out)
    return EXIT_OK


def cmd_bounds(args, out) -> int:
    case = CaseKind.parse(args.case)
    r = args.r if args.r is not None else (4 if case is CaseKind.TRIALITY else None)
    if r is None:
        raise UsageError("--r is required")
    if case is CaseKind.TRIALITY and r != 4:
        raise UsageError("triality forms exist only in rank 4")
    try:
        case.check_rank(r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    d = args.d if args.d is not None else (2 if case.compact else 1)
    mode = "parity" if args.parity else "exact"
    tgt = target(case, r, mode)
    inputs = {"case": case.value, "r": r, "d": d, "D_k": args.dk, "D_ell": args.dl,
              "h": args.h, "card_R": args.card_r, "mode": mode}
    rec = {"command": "bounds", "inputs": inputs, "target": _value(tgt, args.prec_digits)}
    kw = dict(h=args.h, card_R=args.card_r)
    dk = args.dk if case.compact else 1
    if args.dl is not None:
        if case.compact and dk is None:
            raise UsageError("--dk is required with --dl")
        lb = covolume_lower_bound(case, r, d, dk, args.dl, **kw)
        rec.update(quantity="covolume lower bound", value=_value(lb, args.prec_digits),
                   excluded=exceeds(lb, tgt), margin_log10=round(log_margin(lb, tgt), 6))
        cols = ["command", "inputs.case", "inputs.r", "inputs.d", "quantity",
                "value.decimal", "target.decimal", "excluded", "margin_log10"]
    else:
        if case.compact and dk is None:
            cut = discriminant_cutoff(case, r, d, tgt, "D_k", **kw)
            name = "D_k cutoff (D_k-only covolume bound)"
        else:
            cut = discriminant_cutoff(case, r, d, tgt, "D_ell", dk, **kw)
            name = "D_ell cutoff (covolume bound at fixed D_k)"
        rec.update(quantity=name, cutoff_int=cut.integer, cutoff_real=round(cut.real, 2))
        cols = ["command", "inputs.case", "inputs.r", "inputs.d", "quantity",
                "cutoff_int", "cutoff_real", "target.decimal"]
    _emit([rec], args.format, cols, out)
    return EXIT_OK


def cmd_search(args, out) -> int:
    case = CaseKind.parse(args.case)
    try:
        case.check_rank(args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    opts = Options(mode="parity" if args.parity else "exact", units=not args.no_units)
    rep = eliminate(case, args.r, _table(args), opts)
    if args.format == "json":
        out.write(rep.to_json() + "\n")
    elif args.format == "text":
        out.write(rep.to_text())
    else:
        out.write(_search_tsv(rep))
    for w in rep.warnings:
        print(f"warning: {w}", file=sys.stderr)
    if args.expect_paper:
        got = {(p.k.disc, p.ell.disc) for p in rep.survivors}
        want = EXPECTED_SURVIVORS[case.value]
        if got != want:
            print(f"survivors {sorted(got)} differ from expected {sorted(want)}",
                  file=sys.stderr)
            return EXIT_MISMATCH
    return EXIT_OK


def _search_tsv(rep) -> str:
    d = rep.as_dict()
    lines = ["kind\tsubject\tstage\tvalue\tdetail",
             f"target\t{d['case']}\t{d['mode']}\t{d['target']['log']}\t{d['target']['value']}"]
    for c in d["degree_cutoffs"]:
        lines.append(f"degree\t{c['degree']}\tD_k-cutoff\t{_cell(c['cutoff_int'])}\t"
                     f"{c['excluded_by'] or _cell(c['fields'])}")
    for fc in d["field_cutoffs"]:
        for st in fc["steps"]:
            lines.append(f"field-cutoff\t{fc['k']}\t{st['basis']}\t{st['cutoff_real']}\t")
    for e in d["eliminated"]:
        lines.append(f"eliminated\t{e['subject']}\t{e['stage']}\t{e['margin']}\t"
                     f"{e['inequality']}; {e['detail']}")
    for s in d["survivors"]:
        lines.append(f"survivor\t{s}\t\t\t")
    return "\n".join(lines) + "\n"


def cmd_growth(args, out) -> int:
    ns = parse_n_range(args.n)
    rows = []
    for n in ns:
        if n < 5:
            raise UsageError("n must be >= 5")
        q = growth_ratio(n)
        r = (n + 1) // 2
        fact = math.factorial(r - 1)
        lo = q.log_value - q.abs_err_log
        rows.append({"n": n, "ratio": _value(q, args.prec_digits),
                     "factorial": fact, "exceeds_factorial": lo > math.log(fact)})
    _emit(rows, args.format, ["n", "ratio.decimal", "ratio.log", "factorial",
                              "exceeds_factorial"], out)
    return EXIT_OK


# ---------------------------------------------------------------------------


def _common(parser, formats=("tsv", "json"), default="tsv"):
    parser.add_argument("--tol", type=float, default=1e-12)
    parser.add_argument("--prec-digits", type=int, default=6)
    parser.add_argument("--format", choices=list(formats), default=default)


def _tables(parser):
    g = parser.add_mutually_exclusive_group()
    g.add_argument("--fields", metavar="PATH", help="field table (TSV)")
    g.add_argument("--builtin", action="store_true", help="use the shipped table")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="arithvol", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    v = sub.add_parser("volumes", help="minimal volumes")
    _common(v)
    v.add_argument("--n", default="5..29")
    v.add_argument("--case", choices=["compact", "noncompact", "both"], default="both")
    v.set_defaults(func=cmd_volumes)

    z = sub.add_parser("zeta", help="Dedekind zeta value")
    _common(z)
    _tables(z)
    z.add_argument("--field", required=True)
    z.add_argument("--s", type=int, required=True)
    z.add_argument("--strategy", choices=["auto", "euler", "character"], default="auto")
    z.set_defaults(func=cmd_zeta)

    cases = [c.value for c in CaseKind]
    b = sub.add_parser("bounds", help="cutoffs and lower bounds")
    _common(b)
    b.add_argument("--case", choices=cases, required=True)
    b.add_argument("--r", type=int)
    b.add_argument("--d", type=int)
    b.add_argument("--dk", type=float)
    b.add_argument("--dl", type=float)
    b.add_argument("--h", type=int)
    b.add_argument("--card-r", type=int)
    b.add_argument("--parity", action="store_true", help="use the looser reference targets")
    b.set_defaults(func=cmd_bounds)

    # search also offers a readable report, and defaults to it
    s = sub.add_parser("search", help="eliminate field pairs")
    _common(s, ("tsv", "json", "text"), "text")
    _tables(s)
    s.add_argument("--case", choices=cases, required=True)
    s.add_argument("--r", type=int, required=True)
    s.add_argument("--parity", action="store_true")
    s.add_argument("--no-units", action="store_true")
    s.add_argument("--expect-paper", action="store_true",
                   help="exit 3 unless the survivors are the expected ones")
    s.set_defaults(func=cmd_search)

    gr = sub.add_parser("growth", help="compact / non-compact ratio")
    _common(gr)
    gr.add_argument("--n", default="29..59")
    gr.set_defaults(func=cmd_growth)
    return p


def main(argv: Optional[list[str]] = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args, out)
    except UsageError as exc:
        print(f"arithvol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except PrecisionError as exc:
        print(f"arithvol: precision: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    except KeyError as exc:
        print(f"arithvol: {exc.args[0]}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, OSError) as exc:
        where = getattr(args, "fields", None) or "<builtin>"
        print(f"arithvol: {where}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithVolError, ValueError) as exc:
        print(f"arithvol: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
