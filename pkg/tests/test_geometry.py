from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import SYMBOLS, to_sympy
from kndeform.errors import ExceptionalLine, ExceptionalPoint, SingularCurve
from kndeform.exactnum import E1, E2
from kndeform.geometry import (
    CUSPIDAL, NODAL, SMOOTH, RationalFunction, derive_curve, derive_curve_j, identities,
    j_along_C, j_along_C_symbolic, j_along_Ds, j_along_Ds_symbolic, j_invariant, j_on_line_symbolic,
)

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)


def test_derive_curve_examples():
    assert derive_curve(0, 0).classification == CUSPIDAL
    c = derive_curve(1, 1)
    assert (c.classification, c.line) == (NODAL, "D1")
    assert c.delta.constant() == 0
    c = derive_curve(1, 2)
    assert c.classification == SMOOTH
    assert c.e3.constant() == -3
    assert c.delta.constant() == 6400
    assert derive_curve("1/2", -1).line == "D-2"
    assert derive_curve(2, -1).line == "D-1/2"


def test_j_examples():
    assert j_invariant(derive_curve(1, 2)) == Fraction(148176, 25)
    for e2 in (1, -3, Fraction(7, 2)):
        assert j_invariant(derive_curve(0, e2)) == 1728
    with pytest.raises(SingularCurve):
        j_invariant(derive_curve(0, 0))
    with pytest.raises(SingularCurve):
        j_invariant(derive_curve(3, 3))


def test_j_along_Ds():
    assert j_along_Ds(0) == 1728
    assert j_along_Ds(-1) == 1728
    for s in (1, -2, "-1/2"):
        with pytest.raises(ExceptionalLine):
            j_along_Ds(s)
        with pytest.raises(SingularCurve):
            j_along_Ds(s)


def test_j_along_C():
    assert j_along_C(0) == 1728
    assert j_along_C(1) == Fraction(148176, 25)
    assert j_along_C(1) != j_along_C(0)
    for e1 in ("1/2", -1, "-1/4"):
        with pytest.raises(ExceptionalPoint):
            j_along_C(e1)
    # distinct small parameters give distinct values
    values = {j_along_C(Fraction(1, k)) for k in range(5, 15)}
    assert len(values) == 10


def test_identities():
    assert all(identities().values())


def test_identities_with_sympy():
    e1, e2 = SYMBOLS["e1"], SYMBOLS["e2"]
    c = derive_curve(E1, E2)
    delta = to_sympy(c.delta)
    assert sympy.expand(delta - 16 * ((e1 - e2) * (2 * e1 + e2) * (e1 + 2 * e2)) ** 2) == 0
    for lin in (e1 - e2, 2 * e1 + e2, e1 + 2 * e2):
        assert sympy.rem(delta, lin ** 2, e1) == 0
    s = SYMBOLS["s"]
    j = derive_curve_j(E1, E2)
    on_line = sympy.cancel((to_sympy(j.num) / to_sympy(j.den)).subs(e2, s * e1))
    assert sympy.diff(on_line, e1) == 0
    closed = to_sympy(j_along_Ds_symbolic().num) / to_sympy(j_along_Ds_symbolic().den)
    assert sympy.cancel(on_line - closed) == 0


def test_rational_function_equality():
    a = RationalFunction(2 * E1, 4 * E1 * E2)
    b = RationalFunction(E1 * 1, 2 * E1 * E2)
    assert a == b
    assert a != RationalFunction(E1, E2)
    with pytest.raises(ZeroDivisionError):
        RationalFunction(E1, E1 - E1)
    assert j_on_line_symbolic() == j_along_Ds_symbolic()
    assert derive_curve_j(E1, 2 * E1 ** 2) == j_along_C_symbolic()


@settings(max_examples=200, deadline=None)
@given(rationals, rationals)
def test_classification_coherence(e1, e2):
    c = derive_curve(e1, e2)
    assert (c.delta.constant() == 0) == (c.classification != SMOOTH)
    assert (c.classification == CUSPIDAL) == (e1 == 0 and e2 == 0)
    if c.classification == SMOOTH:
        expected = j_along_Ds(e2 / e1) if e1 else 1728
        assert j_invariant(c) == expected


@settings(max_examples=50, deadline=None)
@given(rationals.filter(lambda t: t != 0), st.sampled_from([("D1", 1), ("D-2", -2), ("D-1/2", Fraction(-1, 2))]))
def test_nodal_lines(e1, line):
    name, slope = line
    c = derive_curve(e1, slope * e1)
    assert (c.classification, c.line) == (NODAL, name)


def test_to_dict_records():
    d = derive_curve(1, 2).to_dict()
    assert d["j"] == "148176/25" and d["delta"] == "6400" and d["e3"] == "-3"
    assert "note" in derive_curve(0, 0).to_dict()
    assert "j" not in derive_curve(1, 1).to_dict()
