"""Command-line front end.

Subcommands: class, count, verify-classic, verify-extended,
verify-partition, probe, lw-check, averaged-table.  Exit codes: 0 all
asserted identities hold, 1 identity failure, 2 usage error, 3 clean
run with flagged positive-dimensional exclusions, 4 i/o error.
Reports are deterministic: running the same configuration twice (at
any worker count) produces byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import geom, yfy
from .lring import render, specialize
from .motivic import parse_class
from .params import ParamSet, ParameterViolation, RegimeMismatch
from .yfy import InsufficientSamples

CSV_SCHEMA = "lfano-profiles-v1"

EXIT_OK = 0
EXIT_IDENTITY = 1
EXIT_USAGE = 2
EXIT_EXCLUSIONS = 3
EXIT_IO = 4


class UsageError(ValueError):
    pass


def _int_list(text):
    try:
        return [int(t) for t in text.split(",") if t.strip() != ""]
    except ValueError as exc:
        raise UsageError(f"bad integer list {text!r}") from exc


def _parse_params(text):
    vals = _int_list(text)
    if len(vals) != 4:
        raise UsageError("--params needs n,m,d,k")
    return ParamSet(*vals)


def _prime_power(q):
    p = 2
    while p * p <= q:
        if q % p == 0:
            e = 0
            t = q
            while t % p == 0:
                t //= p
                e += 1
            if t != 1:
                raise UsageError(f"{q} is not a prime power")
            return p, e
        p += 1
    return q, 1


def _load_variety(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        return geom.parse_variety(text)
    except OSError as exc:
        raise IOError(f"cannot read {path}: {exc}") from exc
    except geom.VarietyFormatError as exc:
        raise IOError(f"bad variety file {path}: {exc}") from exc


def _variety_mod(text, q):
    """Reinterpret an integer-coefficient variety file over F_q."""
    p, e = _prime_power(q)
    lines = []
    for raw in text.splitlines():
        if raw.split("#", 1)[0].strip().startswith("field"):
            lines.append(f"field {p} 1")
        else:
            lines.append(raw)
    Y = geom.parse_variety("\n".join(lines))
    return Y.base_change(e)


def build_parser():
    ap = argparse.ArgumentParser(prog="lfano", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, variety=True):
        if variety:
            p.add_argument("--variety", required=True, help="variety file path")
        p.add_argument("--format", choices=("json", "csv", "text"), default="text")
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--depth", type=int, default=32)

    p = sub.add_parser("class", help="print a catalog class as an L-polynomial")
    p.add_argument("expr", help='e.g. "G(2,5)", "Sym(3,P(2))", "I(2,3,4)"')
    p.add_argument("--q", default="", help="optional list of specializations")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")

    p = sub.add_parser("count", help="point/sym/fano counts of a variety")
    common(p)
    p.add_argument("--e", default="1", help="extension degrees")
    p.add_argument("--what", choices=("points", "sym2", "hilb2", "fano"),
                   default="points")
    p.add_argument("--k", type=int, default=1, help="plane dimension for fano")

    p = sub.add_parser("verify-classic", help="cubic hypersurface identities")
    common(p)
    p.add_argument("--e", default="1", help="extension degrees")
    p.add_argument("--allow-singular", action="store_true")

    p = sub.add_parser("verify-extended", help="extended plane-count relation")
    common(p)
    p.add_argument("--params", required=True, help="n,m,d,k")
    p.add_argument("--e", default="1")

    p = sub.add_parser("verify-partition", help="low-regime partition identities")
    common(p)
    p.add_argument("--params", required=True)
    p.add_argument("--e", default="1")

    p = sub.add_parser("probe", help="dimension probe by log-slope")
    p.add_argument("--variety", help="variety file (integer coefficients)")
    p.add_argument("--class", dest="expr", help="catalog class expression")
    p.add_argument("--q", required=True, help="sample field sizes")
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--depth", type=int, default=32)

    p = sub.add_parser("lw-check", help="Lang-Weil dichotomy at dimension 0")
    common(p)
    p.add_argument("--params", required=True)
    p.add_argument("--e", default="1,2,3,4")

    p = sub.add_parser("averaged-table", help="averaged relation term table")
    p.add_argument("--variety", action="append", required=True,
                   help="variety file (repeat per sequence entry)")
    p.add_argument("--params", action="append", required=True,
                   help="n,m,d,k (repeat per sequence entry)")
    p.add_argument("--q", required=True)
    p.add_argument("--format", choices=("json", "csv", "text"), default="text")
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--depth", type=int, default=32)
    p.add_argument("--plane-budget", type=int, default=2_000_000)
    return ap


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, yfy.SlopeEstimate):
        return {"estimate": None if obj.is_bottom else _jsonable(obj.dimension_estimate),
                "rounded": obj.rounded(), "q_list": list(obj.q_list)}
    return obj


def _emit(report, fmt):
    if fmt == "json":
        return json.dumps(_jsonable(report), sort_keys=True, indent=1)
    return _text_report(report)


def _text_report(report, indent=0):
    pad = "  " * indent
    lines = []
    if isinstance(report, dict):
        for k in report:
            v = report[k]
            if isinstance(v, (dict, list, tuple)) and v and not _flat(v):
                lines.append(f"{pad}{k}:")
                lines.append(_text_report(v, indent + 1))
            else:
                lines.append(f"{pad}{k:<24} {_scalar(v)}")
    elif isinstance(report, (list, tuple)):
        for v in report:
            if isinstance(v, (dict, list, tuple)) and v and not _flat(v):
                lines.append(_text_report(v, indent))
                lines.append(pad + "-")
            else:
                lines.append(f"{pad}- {_scalar(v)}")
    else:
        lines.append(f"{pad}{_scalar(report)}")
    return "\n".join(lines)


def _flat(v):
    if isinstance(v, dict):
        return all(not isinstance(x, (dict, list, tuple)) for x in v.values()) and len(v) <= 6
    return all(not isinstance(x, (dict, list, tuple)) for x in v) and len(v) <= 8


def _scalar(v):
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, yfy.SlopeEstimate):
        if v.is_bottom:
            return "BOTTOM"
        return f"{float(v.dimension_estimate):+.3f} (rounded {v.rounded()})"
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {_scalar(x)}" for k, x in v.items()) + "}"
    if isinstance(v, (list, tuple)):
        return "[" + ", ".join(_scalar(x) for x in v) + "]"
    return str(v)


def _profiles_csv(Y, params, e, workers):
    sc = yfy.stratum_counts(Y, params, e, pq=False, with_mn=False,
                            workers=workers, collect=True)
    lines = [f"# schema={CSV_SCHEMA} variety={Y.content_hash()[:16]} "
             f"params={params.n},{params.m},{params.d},{params.k} e={e}"]
    lines.append("plane_id,kind,orbit_sizes")
    from ._core import KIND_NAMES
    for pid, (kind, prof) in enumerate(zip(sc.kinds, sc.profiles)):
        sizes = yfy.unpack_profile(prof)
        lines.append(f"{pid},{KIND_NAMES[kind]},{'+'.join(map(str, sizes))}")
    return "\n".join(lines)


def run(args):
    """Execute a parsed command; returns (exit_code, text)."""
    cmd = args.command
    if cmd == "class":
        cls = parse_class(args.expr)
        rep = {"class": cls.label, "polynomial": render(cls.value),
               "degree": cls.value.top_exponent()}
        if args.q:
            rep["values"] = {q: int(specialize(cls.value, q)) for q in _int_list(args.q)}
        return EXIT_OK, _emit(rep, args.format)

    if cmd == "probe":
        qs = _int_list(args.q)
        if args.expr:
            cls = parse_class(args.expr)
            est = yfy.dimension_probe(lambda q: int(specialize(cls.value, q)), qs)
            label = cls.label
        elif args.variety:
            try:
                with open(args.variety, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise IOError(str(exc)) from exc
            counts = {}
            for q in qs:
                Yq = _variety_mod(text, q)
                counts[q] = geom.count_points(Yq, 1)
            est = yfy.dimension_probe(lambda q: counts[q], qs)
            label = args.variety
        else:
            raise UsageError("probe needs --class or --variety")
        rep = {"check": "probe", "target": label, "q_list": qs, "estimate": est}
        return EXIT_OK, _emit(rep, args.format)

    if cmd == "averaged-table":
        if len(args.variety) != len(args.params):
            raise UsageError("need one --params per --variety")
        entries = []
        for path, ptxt in zip(args.variety, args.params):
            try:
                with open(path, "r", encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise IOError(str(exc)) from exc
            params = _parse_params(ptxt)
            entries.append(((lambda t: (lambda q: _variety_mod(t, q)))(text), params))
        rep = yfy.averaged_table(entries, _int_list(args.q), depth=args.depth,
                                 plane_budget=args.plane_budget, workers=args.workers)
        rep["workers"] = args.workers
        return EXIT_OK, _emit(rep, args.format)

    # variety-based commands
    Y = _load_variety(args.variety)
    if cmd == "count":
        es = _int_list(args.e)
        rows = []
        for e in es:
            if args.what == "points":
                val = geom.count_points(Y, e)
            elif args.what == "sym2":
                val = geom.sym_count(Y, 2, e)
            elif args.what == "hilb2":
                val = geom.hilb2_count(Y, e)
            else:
                val = geom.fano_count(Y, args.k, e)
            rows.append({"e": e, "q_e": Y.field.order ** e, "count": val})
        rep = {"check": f"count-{args.what}", "variety_hash": Y.content_hash(),
               "rows": rows, "workers": args.workers}
        return EXIT_OK, _emit(rep, args.format)

    if cmd == "verify-classic":
        if not args.allow_singular:
            smooth, _ = Y.smooth_at_checked_points()
            if not smooth:
                raise UsageError("variety failed the smoothness flag "
                                 "(use --allow-singular to force)")
        rep = yfy.verify_classic(Y, _int_list(args.e))
        rep["workers"] = args.workers
        code = EXIT_OK if rep["ok"] else EXIT_IDENTITY
        return code, _emit(rep, args.format)

    params = _parse_params(args.params)
    try:
        params.validate_for(Y)
        params.check_structural()
    except ParameterViolation as exc:
        raise UsageError(str(exc)) from exc

    if cmd == "verify-extended":
        es = _int_list(args.e)
        if args.format == "csv":
            return EXIT_OK, "\n".join(
                _profiles_csv(Y, params, e, args.workers) for e in es)
        rep = yfy.verify_extended(Y, params, es, workers=args.workers)
        rep["workers"] = args.workers
        if not rep["ok"]:
            return EXIT_IDENTITY, _emit(rep, args.format)
        return (EXIT_EXCLUSIONS if rep["has_exclusions"] else EXIT_OK), _emit(rep, args.format)

    if cmd == "verify-partition":
        try:
            rep = yfy.verify_partition(Y, params, _int_list(args.e)[0],
                                       workers=args.workers)
        except RegimeMismatch as exc:
            raise UsageError(str(exc)) from exc
        rep["workers"] = args.workers
        code = EXIT_OK if rep["ok"] else EXIT_IDENTITY
        posdim = rep["counts"]["posdim_plane_count"]
        if code == EXIT_OK and posdim:
            code = EXIT_EXCLUSIONS
        return code, _emit(rep, args.format)

    if cmd == "lw-check":
        diag = yfy.langweil_check(Y, params, _int_list(args.e), workers=args.workers)
        ok = (diag.dichotomy_ok and diag.alpha_range_ok and diag.alpha_zero_rule_ok
              and diag.alpha_full_rule_ok)
        rep = {"check": "lw-check", "params": params.as_dict(),
               "variety_hash": Y.content_hash(),
               "n_transversal": diag.n_transversal,
               "dichotomy_ok": diag.dichotomy_ok,
               "alpha_range_ok": diag.alpha_range_ok,
               "alpha_zero_rule_ok": diag.alpha_zero_rule_ok,
               "alpha_full_rule_ok": diag.alpha_full_rule_ok,
               "alpha_extremes": {e: [min(v), max(v)] for e, v in
                                  sorted(diag.alpha_by_e.items())},
               "workers": args.workers, "ok": ok}
        return (EXIT_OK if ok else EXIT_IDENTITY), _emit(rep, args.format)

    raise UsageError(f"unknown command {cmd!r}")


def main(argv=None):
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        code, text = run(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InsufficientSamples as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParameterViolation, RegimeMismatch) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except IOError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
