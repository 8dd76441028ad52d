"""Command-line surface: classification, counting, module enumeration,
oracle crosschecks, and polynomial search.

Commands
--------
analyze     Newton stratum, local factor tags, and lift profile of one
            Weil polynomial.
count       exact isogeny-class counts along field extensions (one report
            per requested level n).
modules     the enumerated lattice modules at one level, serialized.
crosscheck  curve-enumeration oracle vs. the counting pipeline over a
            small field.
search      all valid Weil polynomials within a coefficient box.

Conventions
-----------
JSON documents carry "schema": 1, sort their keys, and serialize integers
whose magnitude exceeds 2^53 - 1 as decimal strings so double-based
consumers never lose precision.  Re-emitting a parsed document reproduces
it byte for byte.  Diagnostics go to stderr; stdout carries only the
report.  A config file of key=value lines may supply flag defaults;
explicit flags win.

Exit codes: 0 success, 2 invalid polynomial or argument, 3 unsupported
stratum or degenerate level, 4 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .deligne import enumerate_icm, module_dict
from .errors import (BudgetError, DegenerateError, UnsupportedStratumError,
                     WeilValidationError)
from .isocount import count_report
from .localdata import analyze, newton_polygon
from .oracle import crosscheck_ordinary, crosscheck_sweep, enumerate_ec_classes
from .poly import search_weil, validate_weil

_BIG = 2**53 - 1


# ---------------------------------------------------------------------------
# input parsing


def parse_poly(text: str):
    """Coefficient list (constant first) from either a comma/space separated
    integer list or a symbolic polynomial in x such as "x^2 - x + 3"."""
    text = text.strip()
    seps = text.replace(",", " ").split()
    if seps and all(_is_int(tok) for tok in seps):
        return [int(tok) for tok in seps]
    import re

    import sympy

    x = sympy.Symbol("x")
    src = re.sub(r"(\d)\s*x", r"\1*x", text.replace("^", "**"))
    try:
        expr = sympy.sympify(src, locals={"x": x})
        p = sympy.Poly(expr, x)
    except (sympy.SympifyError, sympy.PolynomialError, SyntaxError, TypeError) as e:
        raise WeilValidationError(f"cannot parse polynomial {text!r}: {e}")
    coeffs = p.all_coeffs()[::-1]      # constant first
    if any(not c.is_integer for c in coeffs):
        raise WeilValidationError("polynomial must have integer coefficients")
    return [int(c) for c in coeffs]


def _is_int(tok: str) -> bool:
    if tok and tok[0] in "+-":
        tok = tok[1:]
    return tok.isdigit()


def parse_levels(text: str):
    """Level list from "3", "1,3,5", or an inclusive range "1..8"."""
    out = []
    for part in text.split(","):
        part = part.strip()
        if ".." in part:
            lo, hi = part.split("..")
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty level range {part!r}")
            out.extend(range(lo, hi + 1))
        else:
            out.append(int(part))
    if not out or any(n < 1 for n in out):
        raise ValueError(f"levels must be positive: {text!r}")
    return out


def load_config(path: str) -> dict:
    """key=value lines; '#' starts a comment, blank lines are skipped."""
    cfg = {}
    with open(path) as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value")
            key, val = line.split("=", 1)
            cfg[key.strip().replace("-", "_")] = val.strip()
    return cfg


_CONFIG_TYPES = {
    "p": int, "m": int, "q": int, "t": int, "g": int, "bound": int,
    "precision": int, "budget": int,
    "json": lambda s: s.lower() in ("1", "true", "yes", "on"),
}


def _apply_config(parser: argparse.ArgumentParser, cfg: dict):
    known = {a.dest for a in parser._actions}
    vals = {}
    for key, raw in cfg.items():
        if key not in known:
            continue
        vals[key] = _CONFIG_TYPES.get(key, str)(raw)
    parser.set_defaults(**vals)


# ---------------------------------------------------------------------------
# JSON emission


def jsonable(v):
    """Canonical JSON value: big ints as decimal strings, fractions as
    "p/q" strings, tuples as lists, None dropped from dicts."""
    if isinstance(v, bool) or v is None:
        return v
    if isinstance(v, int):
        return str(v) if abs(v) > _BIG else v
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, float):
        return v
    if isinstance(v, str):
        return v
    if isinstance(v, dict):
        return {k: jsonable(x) for k, x in v.items() if x is not None}
    if isinstance(v, (list, tuple)):
        return [jsonable(x) for x in v]
    raise TypeError(f"cannot serialize {type(v).__name__}")


def emit(doc: dict, args) -> int:
    doc = dict(doc)
    doc["schema"] = 1
    if args.json:
        text = json.dumps(jsonable(doc), sort_keys=True, indent=2) + "\n"
    else:
        text = _render_text(doc)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _render_text(doc: dict) -> str:
    lines = []

    def walk(obj, indent=""):
        if isinstance(obj, dict):
            width = max((len(k) for k in obj), default=0)
            for k, v in obj.items():
                if v is None:
                    continue
                if isinstance(v, (dict, list, tuple)) and any(
                        isinstance(x, (dict, list, tuple))
                        for x in (v.values() if isinstance(v, dict) else v)):
                    lines.append(f"{indent}{k}:")
                    walk(v, indent + "  ")
                else:
                    lines.append(f"{indent}{k:<{width}}  {_scalar(v)}")
        else:
            for item in obj:
                if isinstance(item, dict) or (
                        isinstance(item, (list, tuple)) and any(
                            isinstance(x, (dict, list, tuple)) for x in item)):
                    walk(item, indent)
                    lines.append("")
                else:
                    lines.append(f"{indent}{_scalar(item)}")

    walk(doc)
    while lines and not lines[-1]:
        lines.pop()
    return "\n".join(lines) + "\n"


def _scalar(v):
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(str(x) for x in v) + "]"
    return str(v)


# ---------------------------------------------------------------------------
# report builders


def _require(args, *names):
    missing = [f"--{n}" for n in names if getattr(args, n) is None]
    if missing:
        raise ValueError(f"{args.command} requires {', '.join(missing)}")


def _analyze_doc(args) -> dict:
    _require(args, "poly", "p")
    h = parse_poly(args.poly)
    w = validate_weil(h, args.p, args.m)
    rep = analyze(w, precision=args.precision)
    prof = rep.profile
    return {
        "command": "analyze",
        "poly": list(w.h),
        "p": w.p, "m": w.m, "q": w.q, "g": w.g, "e": w.e,
        "slopes": [str(s) for s in rep.newton.slopes],
        "p_rank": rep.newton.p_rank,
        "a": rep.newton.a,
        "real_degree": rep.real_degree,
        "real_disc": rep.real_disc,
        "split": rep.split,
        "unit_factors": [list(f) for f in rep.factorization.unit_factors],
        "ss_factors": [{"factor": list(f), "tag": tag}
                       for f, tag in rep.factorization.ss_factors],
        "k_ramified": prof.k_ramified,
        "k_inert": prof.k_inert,
        "lifts": prof.lifts,
        "subcategories": prof.subcategories,
        "notes": list(rep.notes),
    }


def _count_item(w, n: int) -> dict:
    r = count_report(w, n)
    item = {"n": r.n, "h_n": list(r.h_n), "degenerate": r.degenerate}
    if r.degenerate:
        item["reason"] = r.reason
        return item
    item.update({
        "i_n": r.i_n,
        "table": [{"d": d, "disc": disc, "h": h}
                  for d, disc, h in r.divisor_table],
        "N": r.N,
        "N_min": r.N_min,
        "kernel_size": r.kernel_size,
        "kernel_invariants": list(r.kernel_invariants),
        "a": r.lift_profile.a,
        "k_ramified": r.lift_profile.k_ramified,
        "k_inert": r.lift_profile.k_inert,
        "lifts": r.lift_profile.lifts,
        "subcategories": r.lift_profile.subcategories,
        "exponent": r.exponent,
    })
    return item


def _count_doc(args) -> dict:
    _require(args, "poly", "p")
    h = parse_poly(args.poly)
    w = validate_weil(h, args.p, args.m)
    levels = parse_levels(args.n)
    return {
        "command": "count",
        "poly": list(w.h),
        "p": w.p, "m": w.m, "q": w.q,
        "reports": [_count_item(w, n) for n in levels],
    }


def _modules_doc(args) -> dict:
    _require(args, "poly", "p")
    h = parse_poly(args.poly)
    w = validate_weil(h, args.p, args.m)
    n = int(args.n)
    mods = enumerate_icm(w, n, budget=args.budget)
    return {
        "command": "modules",
        "poly": list(w.h),
        "p": w.p, "m": w.m, "q": w.q, "n": n,
        "count": len(mods),
        "modules": [module_dict(M) for M in mods],
    }


def _crosscheck_doc(args) -> dict:
    _require(args, "q")
    doc = {"command": "crosscheck", "q": args.q, "records": []}
    if args.t is not None:
        recs = [crosscheck_ordinary(args.q, args.t)]
    else:
        recs = crosscheck_sweep(args.q)
    for r in recs:
        doc["records"].append({
            "t": r.t, "oracle_count": r.oracle_count,
            "report_N": r.report_N, "equal": r.equal,
        })
    if args.t is None:
        # supersingular traces: enumeration only, no count to compare
        from .nt import factorint
        from math import isqrt
        (p, _), = factorint(args.q).items()
        for t in range(0, isqrt(4 * args.q) + 1):
            if t % p == 0 and t * t <= 4 * args.q:
                c = enumerate_ec_classes(args.q, t)
                doc["records"].append({
                    "t": t, "oracle_count": c.count, "informational": True,
                })
    doc["all_equal"] = all(r.equal for r in recs)
    return doc


def _search_doc(args) -> dict:
    _require(args, "g", "p", "bound")
    slopes = None
    if args.slopes:
        slopes = tuple(sorted(Fraction(s) for s in args.slopes.split(",")))
    found = search_weil(args.g, args.p, args.m, args.bound, constraints=slopes)
    rows = []
    for w in found:
        prof = newton_polygon(w)
        rows.append({
            "coeffs": list(w.h),
            "slopes": [str(s) for s in prof.slopes],
            "p_rank": prof.p_rank,
        })
    return {
        "command": "search",
        "g": args.g, "p": args.p, "m": args.m, "bound": args.bound,
        "count": len(rows),
        "polys": rows,
    }


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser():
    """(parser, {command: subparser}) pair."""
    ap = argparse.ArgumentParser(
        prog="rmisog",
        description="isogeny classes with real multiplication: "
                    "classification and exact counting")
    sub = ap.add_subparsers(dest="command", required=True)
    parsers = {}

    # "required" flags stay optional at the argparse level so a config file
    # can supply them; builders check presence and exit 2 when missing
    def common(sp, poly=True):
        if poly:
            sp.add_argument("--poly",
                            help="Weil polynomial: 'x^2-x+3' or '3,-1,1' "
                                 "(constant first)")
            sp.add_argument("--p", type=int, help="prime")
            sp.add_argument("--m", type=int, default=1,
                            help="field is F_{p^m} (default 1)")
        sp.add_argument("--json", action="store_true",
                        help="emit a canonical JSON document")
        sp.add_argument("--out", help="write the report to this path")
        sp.add_argument("--config",
                        help="key=value file supplying flag defaults")

    sp = parsers["analyze"] = sub.add_parser(
        "analyze", help="stratum and lift profile")
    common(sp)
    sp.add_argument("--precision", type=int, default=0,
                    help="extra p-adic working precision")

    sp = parsers["count"] = sub.add_parser(
        "count", help="exact isogeny-class counts")
    common(sp)
    sp.add_argument("--n", default="1",
                    help="levels: '3', '1,3,5', or '1..8' (default 1)")

    sp = parsers["modules"] = sub.add_parser(
        "modules", help="enumerate lattice modules")
    common(sp)
    sp.add_argument("--n", default="1", help="level (default 1)")
    sp.add_argument("--budget", type=int, default=200000,
                    help="enumeration budget")

    sp = parsers["crosscheck"] = sub.add_parser(
        "crosscheck", help="curve oracle vs. count pipeline")
    common(sp, poly=False)
    sp.add_argument("--q", type=int, help="odd prime power <= 49")
    sp.add_argument("--t", type=int, help="single trace (default: sweep)")

    sp = parsers["search"] = sub.add_parser(
        "search", help="Weil polynomials in a box")
    common(sp, poly=False)
    sp.add_argument("--g", type=int, choices=(1, 2))
    sp.add_argument("--p", type=int, help="prime")
    sp.add_argument("--m", type=int, default=1)
    sp.add_argument("--bound", type=int,
                    help="coefficient box half-width")
    sp.add_argument("--slopes",
                    help="required slope multiset, e.g. '0,1/2,1/2,1'")

    return ap, parsers


_BUILDERS = {
    "analyze": _analyze_doc,
    "count": _count_doc,
    "modules": _modules_doc,
    "crosscheck": _crosscheck_doc,
    "search": _search_doc,
}


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    ap, parsers = build_parser()
    if "--config" in argv:
        idx = argv.index("--config")
        if idx + 1 >= len(argv):
            print("error: --config needs a path", file=sys.stderr)
            return 2
        path = argv[idx + 1]
        try:
            cfg = load_config(path)
        except OSError as e:
            print(f"error: {e}", file=sys.stderr)
            return 2
        for sp in parsers.values():
            _apply_config(sp, cfg)
    args = ap.parse_args(argv)
    try:
        doc = _BUILDERS[args.command](args)
    except WeilValidationError as e:
        print(f"error: invalid polynomial: {e}", file=sys.stderr)
        return 2
    except (UnsupportedStratumError, DegenerateError) as e:
        print(f"error: unsupported stratum: {e}", file=sys.stderr)
        return 3
    except BudgetError as e:
        print(f"error: resource cap: {e}", file=sys.stderr)
        return 4
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    return emit(doc, args)


if __name__ == "__main__":
    sys.exit(main())
