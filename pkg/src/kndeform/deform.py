"""First-order cocycles, rescaling isomorphisms and jump-deformation witnesses."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Mapping

from .cohomology import (
    GradedCochainSpec,
    OneCochain,
    TwoCochain,
    coboundary_solve_adjoint,
    d1,
    d2_check,
)
from .errors import KindMismatch, NonPolynomialParameter
from .exactnum import LAMBDA, PARAMETERS, Poly, as_rational, rational_str
from .families import LieFamily, compare_families, genus1_vf_Ds, specialize, witt
from .liecore import VECTOR_FIELD, Element, Gen, Report, Window


@dataclass
class FirstOrderCocycle:
    base_family: LieFamily
    family_name: str
    parameter: str
    cochain: TwoCochain
    base_point: dict

    def degree_shifts(self, w: Window) -> set[int]:
        shifts = set()
        for x, y in combinations(self.base_family.generators(w), 2):
            for g in self.cochain(x, y).gens():
                shifts.add(g.degree - x.degree - y.degree)
        return shifts


def first_order_cocycle(
    f: LieFamily, param: str, base: Mapping[str, object] | None = None
) -> FirstOrderCocycle:
    """Linear-in-``param`` part of the bracket at ``param = 0``.

    ``base`` fixes other parameters (for instance ``{"e1": 0}`` to expand
    the two-parameter family at the origin); unlisted ones stay symbolic.
    """
    if param not in f.parameters:
        raise NonPolynomialParameter(f"{param!r} is not a parameter of {f.name}")
    base = {k: Poly.coerce(v) for k, v in (base or {}).items() if k != param}
    point = {param: 0, **base}
    base_family = specialize(f, point)

    def rule(x: Gen, y: Gen) -> Element:
        out = f.basis_product(x, y)
        return Element({g: c.coefficient(param, 1).substitute(base) for g, c in out.items()})

    return FirstOrderCocycle(base_family, f.name, param, TwoCochain(rule), dict(point))


def verify_infinitesimal_triviality(
    c: FirstOrderCocycle, w: Window, bindings: Mapping[str, object] | None = None
) -> Report:
    """d2 phi1 = 0 on the window, then solve d1 psi = phi1 and re-verify."""
    f = c.base_family
    cocycle = d2_check(f, c.cochain, w)
    shifts = c.degree_shifts(w)
    details = {
        "family": c.family_name,
        "parameter": c.parameter,
        "window": w.as_list(),
        "cocycle_check": cocycle.to_dict(),
        "degree_shifts": sorted(shifts),
    }
    if not cocycle.passed:
        return Report("infinitesimal_triviality", False, details)
    if len(shifts) > 1:
        details["reason"] = "first-order cochain is not homogeneous"
        return Report("infinitesimal_triviality", False, details)
    d = shifts.pop() if shifts else 0
    solve = coboundary_solve_adjoint(f, c.cochain, GradedCochainSpec(d, w), bindings)
    details["coboundary"] = solve.to_dict(f)
    if solve.psi is None:
        return Report("infinitesimal_triviality", False, details)
    # symbolic re-verification of d1 psi = phi1 on the window
    inside = set(f.generators(w))
    mismatches = []
    for x, y in combinations(f.generators(w), 2):
        if not all(g in inside for g in f.basis_product(x, y).gens()):
            continue
        if d1(f, solve.psi, x, y) != c.cochain(x, y):
            mismatches.append([f.label(x), f.label(y)])
    details["reverified"] = not mismatches
    if mismatches:
        details["mismatches"] = mismatches[:10]
    report = Report("infinitesimal_triviality", not mismatches, details)
    report.psi = solve.psi
    report.kernel = solve.kernel
    return report


def _ds_like(f: LieFamily) -> bool:
    return f.kind == VECTOR_FIELD and f.name.startswith("genus1_vf_Ds")


def _divide_lambda(p: Poly, k: int) -> Poly:
    """Exact division by lambda**k (k >= 0)."""
    out = {}
    li = PARAMETERS.index("lambda")
    for mono, c in p.items():
        if mono[li] < k:
            raise ArithmeticError(f"{p} is not divisible by lambda^{k}")
        m = list(mono)
        m[li] -= k
        out[tuple(m)] = c
    return Poly(out)


def transport(f: LieFamily, sign: int = 1, name: str | None = None, parameters=None) -> LieFamily:
    """Bracket in the basis V*_n = lambda^(-sign*n) V_n.

    The coefficient at offset o is multiplied by lambda^(sign*o); with
    sign = +1 and o <= 0 this is an exact division.
    """
    old = f._rule

    def rule(n, m):
        out = []
        for o, c in old(n, m):
            k = sign * o
            out.append((o, c * LAMBDA ** k if k >= 0 else _divide_lambda(c, -k)))
        return out

    if parameters is None:
        parameters = set(f.parameters) | {"lambda"}
    return LieFamily(name or f"{f.name}*", f.kind, parameters, rule, symbol=f.symbol)


def rescale_family(f: LieFamily | None = None) -> LieFamily:
    """Transport the D_s family along V*_n = lambda^(-n) V_n with e1 = lambda^2."""
    f = f or genus1_vf_Ds()
    if not _ds_like(f):
        raise KindMismatch(f"rescaling applies to the D_s family, not {f.name}")
    if "e1" not in f.parameters:
        raise KindMismatch("the D_s family must still depend on e1")
    squared = specialize(f, {"e1": LAMBDA ** 2})
    return transport(squared, 1, name=f"{f.name}*", parameters=squared.parameters - {"lambda"})


def _coefficient_table(f: LieFamily, g: LieFamily, w: Window) -> list[dict]:
    rows = []
    for x, y in combinations(f.generators(w), 2):
        a, b = f.basis_product(x, y), g.basis_product(x, y)
        for gen in sorted(set(a.gens()) | set(b.gens()), key=Gen.sort_key):
            rows.append({
                "pair": [x.degree, y.degree], "generator": f.label(gen),
                "lhs": str(a.coeff(gen)), "rhs": str(b.coeff(gen)),
                "equal": a.coeff(gen) == b.coeff(gen),
            })
    return rows


EXCEPTIONAL_S = (Fraction(1), Fraction(-2), Fraction(-1, 2))


def jump_witness(s, w: Window, include_table: bool = False) -> Report:
    """(a) rescaled D_s equals its e1 = 1 fiber; (b) the e1 = 0 fiber is Witt."""
    s = as_rational(s)
    ds = specialize(genus1_vf_Ds(), {"s": s})
    starred = rescale_family(ds)
    at_one = specialize(ds, {"e1": 1})
    at_zero = specialize(ds, {"e1": 0})
    mis_a = compare_families(starred, at_one, w)
    mis_b = compare_families(at_zero, witt(), w)
    details = {
        "s": rational_str(s),
        "window": w.as_list(),
        "rescaled_equals_unit_fiber": not mis_a,
        "zero_fiber_equals_witt": not mis_b,
        "exceptional_line": s in EXCEPTIONAL_S,
        "non_isomorphy": "cited, not decided; see the j-invariant for geometric evidence",
    }
    if s in EXCEPTIONAL_S:
        details["note"] = "fibers over this line are nodal cubics; the algebra family is still defined"
    if include_table:
        details["table"] = _coefficient_table(starred, at_one, w)
    if mis_a:
        x, y, a, b = mis_a[0]
        details["first_mismatch_a"] = [starred.label(x), starred.label(y), a.format(), b.format()]
    if mis_b:
        x, y, a, b = mis_b[0]
        details["first_mismatch_b"] = [at_zero.label(x), at_zero.label(y), a.format(), b.format()]
    return Report("jump_witness", not mis_a and not mis_b, details)


def ds_explicit_coboundary(w: Window) -> OneCochain:
    """psi(V_k) = -3 V_{k-2} for even k, -(3/2) V_{k-2} for odd k."""
    gens = [Gen(VECTOR_FIELD, k) for k in w]
    return OneCochain(
        {g: Element({Gen(VECTOR_FIELD, g.degree - 2): Fraction(-3) if g.degree % 2 == 0 else Fraction(-3, 2)})
         for g in gens},
        gens,
    )

