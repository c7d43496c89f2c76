import csv
import io
from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import small_rationals
from kndeform.errors import KindMismatch, UnboundParameter
from kndeform.exactnum import E1, E2, S, Poly
from kndeform.families import (
    FAMILY_NAMES, bracket, classical_current, compare_families, current_bracket,
    curve_c_coefficients, function_algebra, function_product, genus1_current,
    genus1_vf_2param, genus1_vf_curveC, genus1_vf_Ds, get_family, jacobi_check,
    mutate_family, specialize, structure_table, witt, associativity_check,
)
from kndeform.liecore import A, Element, J, V, Window

E, H, F = 0, 1, 2
AE = (E1 - E2) * (2 * E1 + E2)  # (e1 - e2)(e1 - e3) with e3 = -(e1 + e2)


@pytest.fixture(scope="module")
def two():
    return genus1_vf_2param()


def test_odd_odd_bracket(two):
    assert bracket(two, V(1), V(3)) == Element({V(4): 2})


def test_diagonal_is_zero(two):
    assert bracket(two, V(0), V(0)).is_zero()


def test_even_even_bracket(two):
    assert bracket(two, V(2), V(4)) == Element({V(6): 2, V(4): 6 * E1, V(2): 2 * AE})


def test_odd_even_bracket(two):
    # m - n = 1: the V_{n+m-2} term has factor 0, the V_{n+m-4} term factor -1
    assert bracket(two, V(1), V(2)) == Element({V(3): 1, V(-1): -AE})
    assert bracket(two, V(2), V(1)) == Element({V(3): -1, V(-1): AE})


def test_kind_mismatch(two):
    with pytest.raises(KindMismatch):
        bracket(two, A(1), V(2))
    with pytest.raises(KindMismatch):
        bracket(function_algebra(), A(1), A(2))


def test_function_products():
    assert function_product(2, 3) == Element.basis(A(5))
    for n in range(-6, 7):
        assert function_product(0, n) == Element.basis(A(n))
    assert function_product(1, 1) == Element({A(2): 1, A(0): 3 * E1, A(-2): AE})


def test_current_brackets():
    g = genus1_current()
    assert current_bracket(g, "h", 1, "e", 2) == Element({J(E, 3): 2})
    assert current_bracket(g, "h", 1, "h", 1).is_zero()
    assert current_bracket(g, "e", 1, "f", 1) == Element({J(H, 2): 1, J(H, 0): 3 * E1, J(H, -2): AE})


def test_witt_specialization(two):
    w = Window(-10, 10)
    assert compare_families(specialize(two, {"e1": 0, "e2": 0}), witt(), w) == []


def test_line_specialization_matches_transcribed_family(two):
    on_line = specialize(two, {"e2": S * E1})
    assert compare_families(on_line, genus1_vf_Ds(), Window(-8, 8)) == []
    assert on_line.degree_terms(2, 4)[2] == (-4, 2 * E1 ** 2 * (1 - S) * (2 + S))


def test_curve_c_is_the_substituted_family(two):
    c = genus1_vf_curveC()
    assert compare_families(c, specialize(two, {"e2": 2 * E1 ** 2}), Window(-6, 6)) == []
    coeffs = curve_c_coefficients()
    assert coeffs["substituted"] == 2 * E1 ** 2 * (1 - 2 * E1) * (1 + E1)
    assert coeffs["substituted"] != coeffs["printed"]
    assert coeffs["substituted"] == E1 * coeffs["printed"]
    assert any("differs by a factor e1" in n for n in c.notes)


def test_line_at_infinity(two):
    d_inf = specialize(two, {"e1": 0})
    for n, m in product(range(-6, 7, 2), repeat=2):
        expected = Element({V(n + m): m - n}) + Element({V(n + m - 4): -(m - n) * E2 ** 2})
        assert bracket(d_inf, V(n), V(m)) == expected


def test_current_degenerates_to_classical():
    assert compare_families(
        specialize(genus1_current(), {"e1": 0, "e2": 0}), classical_current(), Window(-6, 6)
    ) == []


def test_specialize_unknown_parameter():
    with pytest.raises(UnboundParameter):
        specialize(witt(), {"e1": 1})
    with pytest.raises(UnboundParameter):
        specialize(genus1_vf_Ds(), {"e2": 1})


def test_jacobi_reports():
    assert jacobi_check(genus1_vf_2param(), Window(-8, 8)).passed
    assert jacobi_check(witt(), Window(-8, 8)).passed
    mutated = mutate_family(genus1_vf_2param(), -2, "even", Poly.const(4) / 3)
    report = jacobi_check(mutated, Window(-4, 4))
    assert not report.passed
    assert report.details["residual"]


def test_jacobi_at_point():
    report = jacobi_check(genus1_vf_2param(), Window(-5, 5), {"e1": 1, "e2": -3})
    assert report.passed and report.details["mode"] == "at-point"


def test_degenerate_window_is_vacuous():
    report = jacobi_check(genus1_vf_2param(), Window(3, 3))
    assert report.passed and report.details["triples_checked"] == 0


@pytest.mark.parametrize("name", [n for n in FAMILY_NAMES if n != "function_algebra"])
def test_every_shipped_family_is_lie(name):
    assert jacobi_check(get_family(name), Window(-8, 8)).passed


def test_associativity_small_window():
    assert associativity_check(function_algebra(), Window(-4, 4)).passed


def test_structure_table_witt():
    table = structure_table(witt(), Window(0, 2))
    rows = [(x.degree, y.degree, r) for x, y, r in table.rows]
    assert rows == [
        (0, 1, Element({V(1): 1})), (0, 2, Element({V(2): 2})), (1, 2, Element({V(3): 1})),
    ]
    data = table.to_dict()
    assert data["rows"][1]["result"] == [{"generator": "l_2", "coeff": [{"monomial": {}, "coeff": "2"}]}]
    parsed = list(csv.DictReader(io.StringIO(table.to_csv())))
    assert [r["coefficient"] for r in parsed] == ["1", "2", "1"]


def test_structure_table_rows():
    t = structure_table(genus1_vf_2param(), Window(1, 3))
    assert t.lookup(V(1), V(3)) == Element({V(4): 2})
    tc = structure_table(genus1_current(), Window(1, 1))
    assert tc.lookup(J(E, 1), J(F, 1)) == current_bracket(genus1_current(), "e", 1, "f", 1)
    text = tc.to_csv()
    assert text.splitlines()[0] == "n,m,x,y,generator,coefficient"


# properties


def test_antisymmetry_symbolic(two):
    for n, m in product(range(-8, 9), repeat=2):
        assert bracket(two, V(n), V(m)) == -bracket(two, V(m), V(n))


def test_degree_band(two):
    for n, m in product(range(-8, 9), repeat=2):
        for g in bracket(two, V(n), V(m)).gens():
            assert n + m - 4 <= g.degree <= n + m


def test_function_product_commutative():
    fa = function_algebra()
    for n, m in product(range(-5, 6), repeat=2):
        assert fa.basis_product(A(n), A(m)) == fa.basis_product(A(m), A(n))


@settings(max_examples=25, deadline=None)
@given(small_rationals, small_rationals, st.integers(-6, 6), st.integers(-6, 6))
def test_specialization_coherence(a, b, n, m):
    two = genus1_vf_2param()
    point = {"e1": a, "e2": b}
    lhs = bracket(specialize(two, point), V(n), V(m))
    rhs = bracket(two, V(n), V(m)).substitute(point)
    assert lhs == rhs


@settings(max_examples=15, deadline=None)
@given(small_rationals, st.integers(-4, 4), st.integers(-4, 4), st.sampled_from([(E, F), (H, E), (E, H), (F, F)]))
def test_current_specialization_coherence(a, n, m, xy):
    g = genus1_current()
    x, y = xy
    point = {"e1": a, "e2": 2 * E1 ** 2}
    lhs = bracket(specialize(g, point), J(x, n), J(y, m))
    rhs = bracket(g, J(x, n), J(y, m)).substitute(point)
    assert lhs == rhs
