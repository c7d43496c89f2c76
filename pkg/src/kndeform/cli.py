"""Command-line front end.

Exit status: 0 on success, 1 when a verification fails (the report is
still printed), 2 on usage or input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

from . import cocycles, cohomology, deform, families, geometry
from .errors import KNDeformError
from .exactnum import PARAMETERS, Poly, as_rational, parse_poly, rational_str
from .liecore import Report, Window, fd_validate, killing_matrix, load_fd_algebra, sl2

VERBS = (
    "table", "jacobi", "assoc", "cocycle-check", "coboundary-solve", "h2", "first-order",
    "rescale-check", "jump-witness", "curve", "j", "classify", "validate-fd",
)


class UsageError(Exception):
    pass


def _binding(text: str) -> tuple[str, object]:
    if "=" not in text:
        raise argparse.ArgumentTypeError(f"expected name=value, got {text!r}")
    name, value = text.split("=", 1)
    name = name.strip()
    if name not in PARAMETERS:
        raise argparse.ArgumentTypeError(f"unknown parameter {name!r}")
    try:
        return name, as_rational(value)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"{text!r}: value must be an exact rational") from None


def _rational(text: str):
    try:
        return as_rational(text)
    except (ValueError, TypeError):
        raise argparse.ArgumentTypeError(f"{text!r} is not an exact rational") from None


def _poly(text: str) -> Poly:
    try:
        return parse_poly(text)
    except (ValueError, KNDeformError) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="kndeform",
        description="Exact verification of Krichever-Novikov type deformation families.",
    )
    sub = parser.add_subparsers(dest="verb", required=True, metavar="VERB")

    def common(p, family=None, window=(-4, 4)):
        p.add_argument("--family", default=family, choices=families.FAMILY_NAMES)
        p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"), default=list(window))
        p.add_argument("--param", action="append", type=_binding, default=[],
                       metavar="NAME=RATIONAL", help="bind a parameter (repeatable)")
        p.add_argument("--symbolic", action="store_true",
                       help="keep coefficients as polynomials in the parameters")
        p.add_argument("--fd", type=Path, help="finite-dimensional algebra JSON (default sl2)")
        output(p)

    def output(p):
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--output", type=Path, help="write the report here instead of stdout")

    common(sub.add_parser("table", help="bracket table on a window"), "witt", (0, 2))
    common(sub.add_parser("jacobi", help="Jacobi identity on a window"), "genus1_vf_2param")
    common(sub.add_parser("assoc", help="associativity of the function algebra"), "function_algebra")

    for verb in ("cocycle-check", "coboundary-solve"):
        p = sub.add_parser(verb, help="scalar 2-cocycle " + ("check" if verb == "cocycle-check" else "coboundary solve"))
        common(p, "witt")
        p.add_argument("--cocycle", choices=("virasoro", "current_geometric"), default="virasoro")
        p.add_argument("--prefactor", type=_poly, default=Poly.const(1),
                       help="polynomial p(e1,e2) multiplying the current cocycle")

    p = sub.add_parser("h2", help="windowed H^2 evidence")
    common(p, "witt", (-8, 8))
    p.add_argument("--degree", type=int, default=-2)
    p.add_argument("--coefficients", choices=("adjoint", "trivial"), default="adjoint")

    p = sub.add_parser("first-order", help="first-order cocycle and its coboundary solve")
    common(p, "genus1_vf_Ds", (-8, 8))
    p.add_argument("--parameter", default="e1", choices=PARAMETERS)
    p.add_argument("--base", action="append", type=_binding, default=[], metavar="NAME=RATIONAL",
                   help="fix another parameter at the base point")

    p = sub.add_parser("rescale-check", help="rescaling isomorphism of the D_s family")
    common(p, "genus1_vf_Ds", (-8, 8))

    p = sub.add_parser("jump-witness", help="jump-deformation witness on the line D_s")
    p.add_argument("--s", type=_rational, required=True)
    p.add_argument("--window", nargs=2, type=int, metavar=("LO", "HI"), default=[-6, 6])
    p.add_argument("--table", action="store_true", help="include the coefficient table")
    output(p)

    for verb in ("curve", "classify"):
        p = sub.add_parser(verb, help="curve invariants" if verb == "curve" else "singularity type")
        p.add_argument("--e1", type=_rational, nargs="+", required=True)
        p.add_argument("--e2", type=_rational, nargs="+", required=True)
        output(p)

    p = sub.add_parser("j", help="j-invariant")
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--s", type=_rational, help="value along the line e2 = s*e1")
    group.add_argument("--curve-c", type=_rational, metavar="E1", help="value along e2 = 2*e1^2")
    group.add_argument("--point", nargs=2, type=_rational, metavar=("E1", "E2"))
    group.add_argument("--symbolic", action="store_true", help="verify the symbolic identities")
    output(p)

    p = sub.add_parser("validate-fd", help="validate a finite-dimensional Lie algebra")
    p.add_argument("--fd", type=Path, help="algebra JSON (default sl2)")
    output(p)
    return parser


def _window(args) -> Window:
    lo, hi = args.window
    if lo > hi:
        raise UsageError(f"--window: lower bound {lo} exceeds upper bound {hi}")
    return Window(lo, hi)


def _fd(args):
    return load_fd_algebra(args.fd) if getattr(args, "fd", None) else sl2()


def _family(args):
    return families.get_family(args.family, _fd(args) if args.family.endswith("current") else None)


def _bindings(args) -> dict:
    return dict(args.param)


def _reject_symbolic(args):
    if getattr(args, "symbolic", False):
        raise UsageError(f"--symbolic is not accepted by '{args.verb}' (it needs rational bindings)")


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _report_csv(report: Report) -> str:
    d = report.to_dict()
    rows = [[k, json.dumps(v, ensure_ascii=False) if isinstance(v, (dict, list)) else v]
            for k, v in d.items()]
    return _emit_csv(["field", "value"], rows)


def _render(args, payload) -> tuple[str, int]:
    if isinstance(payload, Report):
        text = _report_csv(payload) if args.format == "csv" else payload.to_json() + "\n"
        return text, 0 if payload.passed else 1
    text, status = payload
    return text, status


def cmd_table(args):
    f = _family(args)
    if args.param and not args.symbolic:
        f = families.specialize(f, _bindings(args))
    table = families.structure_table(f, _window(args))
    if args.format == "csv":
        return table.to_csv(), 0
    return json.dumps(table.to_dict(), indent=2, ensure_ascii=False) + "\n", 0


def cmd_jacobi(args):
    f = _family(args)
    if args.symbolic and args.param:
        raise UsageError("--symbolic and --param are mutually exclusive for 'jacobi'")
    if not args.symbolic:
        missing = f.parameters - set(_bindings(args))
        if missing:
            raise UsageError(f"--param: bind {', '.join(sorted(missing))} or pass --symbolic")
    return families.jacobi_check(f, _window(args), None if args.symbolic else _bindings(args))


def cmd_assoc(args):
    f = _family(args)
    if not f.symmetric:
        raise UsageError("--family: 'assoc' needs the function_algebra family")
    if args.param:
        f = families.specialize(f, _bindings(args))
    return families.associativity_check(f, _window(args))


def _cocycle(args, f):
    if args.cocycle == "virasoro":
        return cocycles.virasoro(args.prefactor)
    if f.fd_algebra is None:
        raise UsageError("--cocycle current_geometric needs a current family")
    return cocycles.current_geometric(f.fd_algebra, args.prefactor)


def cmd_cocycle_check(args):
    f = _family(args)
    c = _cocycle(args, f)
    if args.param:
        f = families.specialize(f, _bindings(args))
        c = c.substitute(_bindings(args))
    return cocycles.scalar_cocycle_check(c, f, _window(args))


def cmd_coboundary_solve(args):
    _reject_symbolic(args)
    f = _family(args)
    c = _cocycle(args, f)
    result = cocycles.scalar_coboundary_solve(c, f, _window(args), _bindings(args))
    return Report("scalar_coboundary_solve", result.kappa is not None, {
        "cocycle": c.name, "family": f.name, "window": args.window, **result.to_dict(f),
    })


def cmd_h2(args):
    _reject_symbolic(args)
    f = _family(args)
    spec = cohomology.GradedCochainSpec(args.degree, _window(args))
    return cohomology.graded_h2_report(f, spec, _bindings(args), args.coefficients)


def cmd_first_order(args):
    _reject_symbolic(args)
    f = _family(args)
    c = deform.first_order_cocycle(f, args.parameter, dict(args.base))
    return deform.verify_infinitesimal_triviality(c, _window(args), _bindings(args))


def cmd_rescale_check(args):
    f = _family(args)
    if args.param:
        f = families.specialize(f, _bindings(args))
    w = _window(args)
    starred = deform.rescale_family(f)
    unit = families.specialize(f, {"e1": 1})
    mismatches = families.compare_families(starred, unit, w)
    back = deform.transport(starred, -1)
    squared = families.specialize(f, {"e1": Poly.var("lambda") ** 2})
    round_trip = families.compare_families(back, squared, w)
    lam_free = all(
        "lambda" not in c.variables()
        for x in starred.generators(w) for y in starred.generators(w)
        for _, c in starred.basis_product(x, y).items()
    )
    return Report("rescale_check", not mismatches and not round_trip and lam_free, {
        "family": f.name, "window": w.as_list(),
        "lambda_cancels": lam_free,
        "equals_unit_fiber": not mismatches,
        "inverse_transport_recovers_original": not round_trip,
        "mismatches": [[starred.label(x), starred.label(y), a.format(), b.format()]
                       for x, y, a, b in mismatches[:10]],
    })


def cmd_jump_witness(args):
    return deform.jump_witness(args.s, _window(args), include_table=args.table)


def _curve_rows(args):
    for e1 in args.e1:
        for e2 in args.e2:
            yield geometry.derive_curve(e1, e2)


def cmd_curve(args):
    curves = [c.to_dict() for c in _curve_rows(args)]
    if args.format == "csv":
        header = ["e1", "e2", "e3", "g2", "g3", "delta", "classification", "line", "j"]
        return _emit_csv(header, [[c.get(k, "") for k in header] for c in curves]), 0
    body = curves[0] if len(curves) == 1 else curves
    return json.dumps(body, indent=2) + "\n", 0


def cmd_classify(args):
    rows = [
        {"e1": rational_str(c.e1.constant()), "e2": rational_str(c.e2.constant()),
         "classification": c.classification, "line": c.line,
         "delta": rational_str(c.delta.constant())}
        for c in _curve_rows(args)
    ]
    if args.format == "csv":
        header = ["e1", "e2", "classification", "line", "delta"]
        return _emit_csv(header, [[r[k] if r[k] is not None else "" for k in header] for r in rows]), 0
    return json.dumps(rows[0] if len(rows) == 1 else rows, indent=2) + "\n", 0


def cmd_j(args):
    if args.symbolic:
        ids = geometry.identities()
        return Report("j_identities", all(ids.values()), {
            "identities": ids,
            "j_infinity": rational_str(geometry.J_AT_INFINITY),
        })
    if args.s is not None:
        value, where = geometry.j_along_Ds(args.s), {"s": rational_str(args.s)}
    elif args.curve_c is not None:
        value, where = geometry.j_along_C(args.curve_c), {"curve_C_e1": rational_str(args.curve_c)}
        if args.curve_c == 0:
            where["note"] = "formula value at the cusp, not a curve invariant"
    else:
        e1, e2 = args.point
        value = geometry.j_invariant(geometry.derive_curve(e1, e2))
        where = {"e1": rational_str(e1), "e2": rational_str(e2)}
    body = {**where, "j": rational_str(value)}
    if args.format == "csv":
        return _emit_csv(list(body), [list(body.values())]), 0
    return json.dumps(body, indent=2) + "\n", 0


def cmd_validate_fd(args):
    g = _fd(args)
    report = fd_validate(g)
    if report.passed:
        report.details["killing_form"] = [[rational_str(v) for v in row] for row in killing_matrix(g)]
    report.details["basis_names"] = list(g.basis_names)
    return report


COMMANDS = {
    "table": cmd_table,
    "jacobi": cmd_jacobi,
    "assoc": cmd_assoc,
    "cocycle-check": cmd_cocycle_check,
    "coboundary-solve": cmd_coboundary_solve,
    "h2": cmd_h2,
    "first-order": cmd_first_order,
    "rescale-check": cmd_rescale_check,
    "jump-witness": cmd_jump_witness,
    "curve": cmd_curve,
    "classify": cmd_classify,
    "j": cmd_j,
    "validate-fd": cmd_validate_fd,
}


def run(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        text, status = _render(args, COMMANDS[args.verb](args))
    except UsageError as exc:
        print(f"kndeform {args.verb}: error: {exc}", file=stderr)
        return 2
    except (KNDeformError, KeyError, ValueError, OSError) as exc:
        print(f"kndeform {args.verb}: error: {type(exc).__name__}: {exc}", file=stderr)
        return 2
    if args.output:
        args.output.write_text(text)
    else:
        stdout.write(text)
    return status


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
