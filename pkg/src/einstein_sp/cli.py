"""Command-line entry point: ``einstein-sp <subcommand> ...``.

Exit status is 0 on success, 1 on invalid input and 2 when a resource
budget is exhausted. Output is deterministic; timings are only printed
with ``--timing``.
"""

from __future__ import annotations

import argparse
import json
import sys
from decimal import Decimal, InvalidOperation
from fractions import Fraction
from pathlib import Path

from .algebra import MonomialOrder, format_poly, loads, rat
from .errors import BudgetExceeded, EinsteinSpError
from .geometry import FibrationSpec, ricci_closed_form
from .groebner import Budget, IdealBasis, basis_to_json, buchberger, dumps_json, ideal_from_json
from .univar import DEFAULT_WIDTH, loads_univariate, real_roots

EXIT_OK, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


# --------------------------------------------------------------------------
# argument types


def _positive_decimal(text: str) -> Fraction:
    try:
        v = Fraction(Decimal(text))
    except (InvalidOperation, ValueError):
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if v <= 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _digits(text: str) -> int:
    d = int(text)
    if not 1 <= d <= 30:
        raise argparse.ArgumentTypeError("digits must be in 1..30")
    return d


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rat_list(text: str) -> list[Fraction]:
    try:
        return [rat(s.strip()) for s in text.split(",")]
    except (ValueError, ZeroDivisionError, TypeError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals, got {text!r}")


def _add_spec_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fibration", choices=["wallach", "flag"], required=True)
    p.add_argument("--k", type=_int_list, help="Wallach parameters k1,k2,k3")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)


def _add_budget_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--budget-seconds", type=_positive_decimal, default=None)
    p.add_argument("--max-pairs", type=_positive_int, default=None)


def _add_output_args(p: argparse.ArgumentParser, digits=True) -> None:
    p.add_argument("--json", action="store_true", help="emit JSON")
    if digits:
        p.add_argument("--digits", type=_digits, default=6)


def _spec(args, allow_symbolic=False) -> FibrationSpec:
    if args.fibration == "wallach":
        if args.k is None:
            raise EinsteinSpError("--fibration wallach needs --k k1,k2,k3")
        if len(args.k) != 3:
            raise EinsteinSpError("--k takes exactly three integers")
        return FibrationSpec.wallach(*args.k)
    if args.n is None and args.p is None and allow_symbolic:
        return FibrationSpec.flag()
    if args.n is None or args.p is None:
        raise EinsteinSpError("--fibration flag needs --n and --p")
    return FibrationSpec.flag(args.n, args.p)


def _budget(args) -> Budget:
    secs = getattr(args, "budget_seconds", None)
    b = Budget.from_env(max_pairs=getattr(args, "max_pairs", None))
    if secs is not None and b.max_seconds is None:
        b.max_seconds = float(secs)
    return b


def _resolve_data(path: str) -> Path:
    """A path as given, or else a file shipped in the package data directory."""
    p = Path(path)
    if p.exists():
        return p
    from .proofs import data_path

    cand = data_path(p.name)
    if p.parent.name in ("data", "") and cand.is_file():
        return Path(str(cand))
    raise EinsteinSpError(f"no such file: {path}")


def _fmt(x: Fraction, digits: int) -> str:
    return f"{float(x):.{digits}g}"


def _emit_json(doc) -> None:
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")


# --------------------------------------------------------------------------
# subcommands


def cmd_solve(args) -> int:
    from .solver import solve_einstein

    spec = _spec(args)
    branches = args.branch.split(",") if args.branch else None
    sols = solve_einstein(spec, tol=args.tol, budget=_budget(args), branches=branches)
    if args.json:
        _emit_json({"spec": str(spec), "count": len(sols),
                    "solutions": [s.to_json(args.digits) for s in sols]})
        return EXIT_OK
    print(f"{spec}: {len(sols)} certified Einstein metrics")
    for i, s in enumerate(sols):
        coords = ", ".join(f"{v}={_fmt(s.coords[v].mid, args.digits)}" for v in spec.metric_vars)
        partner = "" if s.symmetry_partner is None else f"  partner={s.symmetry_partner}"
        print(f"[{i}] {s.classification:<6} {s.branch:<8} {coords}  "
              f"lambda={_fmt(s.einstein_constant.mid, args.digits)}  "
              f"residual<={float(s.residual_bound):.2e}{partner}")
    return EXIT_OK


def cmd_system(args) -> int:
    from .solver import assemble_system

    system = assemble_system(_spec(args, allow_symbolic=True))
    if args.json:
        _emit_json({"spec": str(system.spec), "vars": list(system.ctx.names),
                    "normalized": system.normalized_variable,
                    "polys": [format_poly(f) for f in system.polys],
                    "provenance": system.provenance})
    else:
        sys.stdout.write(system.text())
    return EXIT_OK


def cmd_ricci(args) -> int:
    spec = _spec(args, allow_symbolic=args.metric is None)
    labels = spec.labels
    if args.metric is None:
        comps = ricci_closed_form(spec)
        out = {lab: str(comps[lab]) for lab in labels}
    else:
        if len(args.metric) != len(labels):
            raise EinsteinSpError(f"{spec} needs {len(labels)} metric values, got {len(args.metric)}")
        comps = ricci_closed_form(spec, args.metric)
        out = {lab: str(Fraction(comps[lab])) for lab in labels}
    if args.json:
        _emit_json({"spec": str(spec), "labels": list(labels), "ricci": out})
    else:
        for lab in labels:
            print(f"r{lab} = {out[lab]}")
    return EXIT_OK


def cmd_groebner(args) -> int:
    text = _resolve_data(args.input).read_text()
    if args.input.endswith(".json"):
        ideal, order = ideal_from_json(json.loads(text))
    else:
        ctx, polys = loads(text)
        ideal, order = IdealBasis(ctx, polys), None
    if args.order or order is None:
        prec = args.vars.split(",") if args.vars else list(ideal.ctx.names)
        order = MonomialOrder(args.order or "grevlex", tuple(prec))
    gb = buchberger(ideal, order, budget=_budget(args), method=args.method)
    doc = basis_to_json(gb)
    if not args.timing:
        doc["stats"].pop("seconds", None)
    if args.json:
        sys.stdout.write(dumps_json(doc))
    else:
        print("vars: " + ", ".join(doc["vars"]))
        for line in doc["polys"]:
            print(line)
    return EXIT_OK


def cmd_roots(args) -> int:
    f = loads_univariate(_resolve_data(args.poly).read_text())
    ivs = real_roots(f, positive_only=args.positive, width=args.width)
    if args.json:
        _emit_json({"var": f.var, "degree": f.degree,
                    "roots": [{"interval": [str(iv.lo), str(iv.hi)],
                               "approx": round(float(iv.mid), args.digits)} for iv in ivs]})
    else:
        for iv in ivs:
            print(f"{_fmt(iv.mid, args.digits)}  in [{float(iv.lo):.15g}, {float(iv.hi):.15g}]")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .proofs import verify_certificates

    if (args.n is None) != (args.p is None):
        raise EinsteinSpError("--n and --p go together")
    rows = verify_certificates(args.n, args.p, n_max=args.grid)
    ok = all(r[1] for r in rows)
    if args.json:
        _emit_json({"ok": ok, "claims": [{"claim": c, "pass": bool(p), "detail": d} for c, p, d in rows]})
    else:
        for claim, passed, detail in rows:
            print(f"{'PASS' if passed else 'FAIL'}  {claim}" + (f"  [{detail}]" if detail else ""))
        print("all claims verified" if ok else "SOME CLAIMS FAILED")
    return EXIT_OK if ok else EXIT_INPUT


def cmd_census(args) -> int:
    from .solver import census

    secs = _budget(args).max_seconds
    rows = census(args.family, range(args.n_min, args.n_max + 1), budget_seconds=secs)
    if not args.timing:
        for r in rows:
            r.pop("seconds", None)
    if args.json:
        _emit_json({"family": args.family, "note": "exploratory; reference values are conjectural",
                    "rows": rows})
        return EXIT_OK
    print(f"census of family ({args.family}); reference column is conjectural, agreement is informative only")
    print(f"{'n':>3} {'k':>9} {'status':>10} {'total':>5} {'Jensen':>6} {'ADN':>4} {'New':>4} {'New+ADN':>7}  ref(J,New)  agree(J, New+ADN, New)")
    for r in rows:
        k = ",".join(map(str, r["k"]))
        ref = r["reference"]
        ref_s = "-" if ref is None else f"({ref['jensen']},{ref['new']})"
        if r["status"] != "complete":
            print(f"{r['n']:>3} {k:>9} {r['status']:>10}  {r.get('reason', '')}")
            continue
        ag = r.get("agrees_with_reference")
        ag_s = "-" if ag is None else f"{ag['jensen']}, {ag['new_including_adn']}, {ag['new_excluding_adn']}"
        print(f"{r['n']:>3} {k:>9} {r['status']:>10} {r['total']:>5} {r['jensen']:>6} {r['adn']:>4} "
              f"{r['new_excluding_adn']:>4} {r['new_including_adn']:>7}  {ref_s:>10}  {ag_s}")
    return EXIT_OK


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="einstein-sp", description="Invariant Einstein metrics on fibrations of flag manifolds.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("solve", help="certified positive Einstein metrics")
    _add_spec_args(p)
    _add_output_args(p)
    _add_budget_args(p)
    p.add_argument("--tol", type=_positive_decimal, default=Fraction(1, 10**9))
    p.add_argument("--branch", help="comma-separated branch names (default: all)")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("system", help="print the polynomial Einstein system")
    _add_spec_args(p)
    _add_output_args(p, digits=False)
    p.set_defaults(func=cmd_system)

    p = sub.add_parser("ricci", help="Ricci components, closed form or at a metric")
    _add_spec_args(p)
    _add_output_args(p, digits=False)
    p.add_argument("--metric", type=_rat_list, help="comma-separated metric coefficients")
    p.set_defaults(func=cmd_ricci)

    p = sub.add_parser("groebner", help="reduced Groebner basis of an ideal file")
    p.add_argument("--input", required=True, help="polynomial text file or JSON ideal")
    p.add_argument("--order", choices=["lex", "grevlex"])
    p.add_argument("--vars", help="variable precedence, largest first")
    p.add_argument("--method", choices=["auto", "direct", "fglm"], default="auto")
    p.add_argument("--timing", action="store_true")
    _add_output_args(p, digits=False)
    _add_budget_args(p)
    p.set_defaults(func=cmd_groebner)

    p = sub.add_parser("roots", help="isolate real roots of a univariate polynomial file")
    p.add_argument("--poly", required=True)
    p.add_argument("--positive", action="store_true")
    p.add_argument("--width", type=_positive_decimal, default=DEFAULT_WIDTH)
    _add_output_args(p)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("verify-theorem-b", help="exact checks of the flag existence certificates")
    p.add_argument("--n", type=int)
    p.add_argument("--p", type=int)
    p.add_argument("--grid", type=_positive_int, metavar="N_MAX")
    _add_output_args(p, digits=False)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="classification counts along a family (exploratory)")
    p.add_argument("--family", choices=["n-2,1,1", "n-3,1,2"], required=True)
    p.add_argument("--n-min", type=_positive_int, default=None)
    p.add_argument("--n-max", type=_positive_int, required=True)
    p.add_argument("--timing", action="store_true")
    _add_output_args(p, digits=False)
    _add_budget_args(p)
    p.set_defaults(func=cmd_census)
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    if getattr(args, "command", None) == "census" and args.n_min is None:
        args.n_min = 3 if args.family == "n-2,1,1" else 4
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"einstein-sp: budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (EinsteinSpError, ValueError, OSError, KeyError) as exc:
        print(f"einstein-sp: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def main(argv=None) -> None:
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
