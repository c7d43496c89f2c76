"""Invariants of the cubic Y^2 = 4(X-e1)(X-e2)(X-e3) over the (e1, e2) plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ExceptionalLine, ExceptionalPoint, SingularCurve
from .exactnum import E1, E2, S, Poly, as_rational, rational_str

SMOOTH = "Smooth"
NODAL = "Nodal"
CUSPIDAL = "Cuspidal"

# the three lines where two roots collide, keyed by slope s of e2 = s*e1
NODAL_LINES = {"D1": Fraction(1), "D-2": Fraction(-2), "D-1/2": Fraction(-1, 2)}

PULLBACK_NOTES = {
    CUSPIDAL: "cusp at (0,0); normalization P^1 with one point over the cusp; "
              "pulled-back algebras: Witt / classical current algebra",
    "D1": "node at (e1,0), a possible pole; pull-back gives a three-point genus-zero "
          "Krichever-Novikov algebra (cited, not computed)",
    "D-2": "node at (e1,0), a possible pole; pull-back gives a three-point genus-zero "
           "Krichever-Novikov algebra (cited, not computed)",
    "D-1/2": "node away from the poles; pull-back gives a subalgebra of the classical "
             "two-point algebra (cited, not computed)",
}


@dataclass(frozen=True)
class RationalFunction:
    """num/den with polynomial parts; equality is by cross-multiplication."""

    num: Poly
    den: Poly

    def __post_init__(self):
        if self.den.is_zero():
            raise ZeroDivisionError("zero denominator")

    def __eq__(self, other) -> bool:
        if isinstance(other, RationalFunction):
            return self.num * other.den == other.num * self.den
        return self.num == self.den * Poly.coerce(other)

    def __hash__(self):
        return hash((self.num, self.den))

    def substitute(self, bindings) -> "RationalFunction":
        return RationalFunction(self.num.substitute(bindings), self.den.substitute(bindings))

    def diff_numerator(self, name: str) -> Poly:
        """Numerator of the derivative: num' * den - num * den'."""
        return self.num.diff(name) * self.den - self.num * self.den.diff(name)

    def evaluate(self, point) -> Fraction:
        d = self.den.evaluate(point)
        if not d:
            raise ZeroDivisionError("denominator vanishes at this point")
        return self.num.evaluate(point) / d

    def __str__(self):
        return f"({self.num}) / ({self.den})"


@dataclass(frozen=True)
class CurveParams:
    e1: Poly
    e2: Poly
    e3: Poly
    g2: Poly
    g3: Poly
    delta: Poly
    classification: str | None
    line: str | None = None

    @property
    def is_numeric(self) -> bool:
        return self.e1.is_constant() and self.e2.is_constant()

    def to_dict(self) -> dict:
        def val(p: Poly):
            return rational_str(p.constant()) if p.is_constant() else str(p)

        out = {
            "e1": val(self.e1), "e2": val(self.e2), "e3": val(self.e3),
            "g2": val(self.g2), "g3": val(self.g3), "delta": val(self.delta),
            "classification": self.classification,
        }
        if self.line:
            out["line"] = self.line
        if self.classification == SMOOTH and self.is_numeric:
            out["j"] = rational_str(j_invariant(self))
        note = PULLBACK_NOTES.get(self.line or self.classification)
        if note:
            out["note"] = note
        return out


def discriminant_factored(e1, e2) -> Poly:
    e1, e2 = Poly.coerce(e1), Poly.coerce(e2)
    return 16 * ((e1 - e2) * (2 * e1 + e2) * (e1 + 2 * e2)) ** 2


def _classify(e1: Fraction, e2: Fraction) -> tuple[str, str | None]:
    if e1 == 0 and e2 == 0:
        return CUSPIDAL, None
    if e1 == e2:
        return NODAL, "D1"
    if 2 * e1 + e2 == 0:
        return NODAL, "D-2"
    if e1 + 2 * e2 == 0:
        return NODAL, "D-1/2"
    return SMOOTH, None


def derive_curve(e1, e2) -> CurveParams:
    e1 = Poly.coerce(e1 if not isinstance(e1, str) else as_rational(e1))
    e2 = Poly.coerce(e2 if not isinstance(e2, str) else as_rational(e2))
    e3 = -(e1 + e2)
    g2 = -4 * (e1 * e2 + e1 * e3 + e2 * e3)
    g3 = 4 * e1 * e2 * e3
    delta = g2 ** 3 - 27 * g3 ** 2
    cls = line = None
    if e1.is_constant() and e2.is_constant():
        cls, line = _classify(e1.constant(), e2.constant())
    return CurveParams(e1, e2, e3, g2, g3, delta, cls, line)


def j_invariant(c: CurveParams):
    """1728 g2^3 / delta: a Fraction for numeric curves, else a RationalFunction."""
    if c.delta.is_zero():
        raise SingularCurve("discriminant vanishes; j is undefined")
    num = 1728 * c.g2 ** 3
    if c.is_numeric:
        return num.constant() / c.delta.constant()
    return RationalFunction(num, c.delta)


def j_closed_form(e1, e2) -> RationalFunction:
    """1728 * 4(e1^2+e1e2+e2^2)^3 / ((e1-e2)^2 (2e1+e2)^2 (e1+2e2)^2)."""
    e1, e2 = Poly.coerce(e1), Poly.coerce(e2)
    return RationalFunction(
        1728 * 4 * (e1 ** 2 + e1 * e2 + e2 ** 2) ** 3,
        ((e1 - e2) * (2 * e1 + e2) * (e1 + 2 * e2)) ** 2,
    )


def j_along_Ds_symbolic() -> RationalFunction:
    return RationalFunction(
        1728 * 4 * (1 + S + S ** 2) ** 3, ((1 - S) * (2 + S) * (1 + 2 * S)) ** 2
    )


def j_along_Ds(s) -> Fraction:
    s = as_rational(s)
    if s in NODAL_LINES.values():
        raise ExceptionalLine(f"s = {rational_str(s)} is an exceptional line; j has a pole")
    return j_along_Ds_symbolic().evaluate({"s": s})


J_AT_INFINITY = Fraction(1728)


def j_along_C_symbolic() -> RationalFunction:
    return RationalFunction(
        1728 * (1 + 2 * E1 + 4 * E1 ** 2) ** 3,
        ((1 - 2 * E1) * (1 + E1) * (1 + 4 * E1)) ** 2,
    )


def j_along_C(e1) -> Fraction:
    """Formula value along e2 = 2 e1^2.  At e1 = 0 this is the formula's limit,
    not an invariant of the (cuspidal) curve."""
    e1 = as_rational(e1)
    if e1 in (Fraction(1, 2), Fraction(-1), Fraction(-1, 4)):
        raise ExceptionalPoint(f"e1 = {rational_str(e1)} meets an exceptional line")
    return j_along_C_symbolic().evaluate({"e1": e1})


def j_on_line_symbolic() -> RationalFunction:
    """j(e1, s*e1) as a rational function of (e1, s)."""
    return derive_curve_j(E1, S * E1)


def derive_curve_j(e1, e2) -> RationalFunction:
    c = derive_curve(e1, e2)
    return RationalFunction(1728 * c.g2 ** 3, c.delta)


def constancy_along_Ds() -> bool:
    """Formal e1-derivative of j(e1, s*e1) vanishes identically."""
    return j_on_line_symbolic().diff_numerator("e1").is_zero()


def identities() -> dict[str, bool]:
    """The polynomial identities behind the j formulas, checked exactly."""
    c = derive_curve(E1, E2)
    return {
        "delta_factorization": (c.delta - discriminant_factored(E1, E2)).is_zero(),
        "g2_closed_form": c.g2 == 4 * (E1 ** 2 + E1 * E2 + E2 ** 2),
        "j_closed_form": j_invariant(c) == j_closed_form(E1, E2),
        "j_line_matches_Ds_formula": j_on_line_symbolic() == j_along_Ds_symbolic(),
        "j_constant_along_Ds": constancy_along_Ds(),
        "j_curveC_matches_formula": derive_curve_j(E1, 2 * E1 ** 2) == j_along_C_symbolic(),
    }
