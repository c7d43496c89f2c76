import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from kndeform.cohomology import (
    GradedCochainSpec, OneCochain, TwoCochain, coboundary_solve_adjoint, d1, d1_cochain, d2,
    d2_check, graded_h2_report, in_solution_set, zero_two_cochain,
)
from kndeform.deform import ds_explicit_coboundary, first_order_cocycle
from kndeform.errors import OutOfWindow, UnboundParameter
from kndeform.exactnum import ONE
from kndeform.families import genus1_vf_2param, genus1_vf_Ds, witt
from kndeform.liecore import Element, V, Window, combine
from kndeform.linalg import LinearSystem, rank_of_rows


def shift_cochain(w, scale):
    return OneCochain(lambda g: Element({V(g.degree - 2): scale(g.degree)}), [V(k) for k in w])


def test_d1_zero():
    psi = OneCochain({}, [V(k) for k in range(-4, 5)])
    for n, m in combinations(range(-2, 3), 2):
        assert d1(witt(), psi, n, m).is_zero()


def test_d1_identity():
    psi = OneCochain(lambda g: Element.basis(g), [V(k) for k in range(-6, 7)])
    for n, m in combinations(range(-3, 4), 2):
        assert d1(witt(), psi, n, m) == Element({V(n + m): -(m - n)})


@pytest.mark.parametrize("c", [Fraction(1), Fraction(-3, 2), Fraction(5)])
def test_d1_shift(c):
    psi = shift_cochain(range(-4, 5), lambda k: c)
    assert d1(witt(), psi, 0, 2) == Element({V(0): -2 * c})


def test_d1_out_of_window():
    psi = OneCochain({}, [V(k) for k in range(-1, 2)])
    with pytest.raises(OutOfWindow):
        d1(witt(), psi, 1, 2)


def test_d2_zero_passes():
    assert d2_check(genus1_vf_2param(), zero_two_cochain(), Window(-4, 4)).passed


def test_d2_of_coboundary_vanishes():
    rng = random.Random(7)
    w = range(-4, 5)
    vals = {V(k): Element({V(k + o): Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for o in (-2, 0, 1)})
            for k in w}
    psi = OneCochain(vals, vals.keys())
    for f in (witt(), genus1_vf_2param()):
        report = d2_check(f, TwoCochain(lambda x, y: d1(f, psi, x, y)), Window(-4, 4))
        assert report.passed
        assert report.details["skipped_triples"] > 0
        assert report.details["triples_checked"] > 0


def test_d2_detects_non_cocycle():
    phi = TwoCochain(lambda x, y: Element.basis(V(x.degree + y.degree)))
    report = d2_check(witt(), phi, Window(-3, 3))
    assert not report.passed
    assert not d2(witt(), phi, V(0), V(1), V(2)).is_zero()


def test_printed_sign_of_middle_term_is_inconsistent():
    # flipping the sign of [y, phi(z, x)] breaks d2 d1 = 0
    f = witt()
    psi = shift_cochain(range(-8, 9), lambda k: Fraction(k * k))
    phi = d1_cochain(f, psi)
    x, y, z = (Element.basis(V(k)) for k in (0, 1, 2))
    consistent = d2(f, phi, V(0), V(1), V(2))
    assert consistent.is_zero()
    printed = combine([(ONE, consistent), (2 * ONE, f.bracket(y, phi.apply(z, x)))])
    assert not printed.is_zero()


def test_solve_zero():
    res = coboundary_solve_adjoint(witt(), zero_two_cochain(), GradedCochainSpec(0, Window(-3, 3)))
    assert res.psi is not None and res.verified
    assert all(res.psi(g).is_zero() for g in res.psi.domain)


def test_solve_ds_first_order():
    w = Window(-8, 8)
    c = first_order_cocycle(genus1_vf_Ds(), "e1")
    res = coboundary_solve_adjoint(c.base_family, c.cochain, GradedCochainSpec(-2, w), {"s": 3})
    assert res.psi is not None and res.verified
    explicit = ds_explicit_coboundary(w)
    assert in_solution_set(c.base_family, explicit, c.cochain, w, {"s": 3})


def test_solve_stripped_variant():
    w = Window(-6, 6)
    phi = TwoCochain(lambda x, y: Element({V(x.degree + y.degree - 2): y.degree - x.degree}))
    res = coboundary_solve_adjoint(witt(), phi, GradedCochainSpec(-2, w))
    assert res.psi is not None and res.verified
    assert in_solution_set(witt(), shift_cochain(w, lambda k: -1), phi, w)
    assert len(res.kernel) == 1


def test_solve_unsolvable_reports_conflict():
    # forces a_2 + a_{-2} = -1/4 against a_2 + a_{-2} = 0 for psi(l_k) = a_k l_k
    phi = TwoCochain(lambda x, y: Element({V(0): 1}) if x.degree + y.degree == 0 else Element())
    res = coboundary_solve_adjoint(witt(), phi, GradedCochainSpec(0, Window(-3, 3)))
    assert res.psi is None and res.conflict is not None and res.kernel == []


def test_solve_needs_bindings():
    c = first_order_cocycle(genus1_vf_2param(), "e1")
    with pytest.raises(UnboundParameter):
        coboundary_solve_adjoint(c.base_family, c.cochain, GradedCochainSpec(-2, Window(-4, 4)))


def test_h2_witt_degree_minus_two():
    r = graded_h2_report(witt(), GradedCochainSpec(-2, Window(-8, 8)))
    assert r.details["label"] == "EVIDENCE"
    assert r.details["quotient_dimension"] == 0
    assert r.details["skipped_triples"] > 0
    assert r.details["cocycle_dimension"] == r.details["coboundary_dimension"]


def test_h2_degenerate_window():
    r = graded_h2_report(genus1_vf_2param(), GradedCochainSpec(0, Window(3, 3)), {"e1": 1, "e2": 2})
    for key in ("cochain_dimension", "cocycle_dimension", "coboundary_dimension", "quotient_dimension"):
        assert r.details[key] == 0


@pytest.mark.parametrize("w", [Window(-3, 3), Window(-4, 4)])
def test_h2_trivial_coefficients_sees_virasoro(w):
    r = graded_h2_report(witt(), GradedCochainSpec(0, w), coefficients="trivial")
    assert r.details["quotient_dimension"] >= 1


def test_h2_cocycle_dimension_monotone():
    dims = [graded_h2_report(witt(), GradedCochainSpec(-2, Window(-k, k))).details["cocycle_dimension"]
            for k in (3, 4, 5)]
    assert dims == sorted(dims)


matrices = st.lists(
    st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=4, max_size=4),
    min_size=1, max_size=5,
)


@settings(max_examples=60, deadline=None)
@given(matrices)
def test_rank_matches_sympy(rows):
    expected = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows]).rank()
    assert rank_of_rows([dict(enumerate(r)) for r in rows]) == expected


@settings(max_examples=60, deadline=None)
@given(matrices, st.lists(st.integers(-3, 3), min_size=4, max_size=4))
def test_solve_and_kernel(rows, x0):
    system = LinearSystem(columns=list(range(4)))
    for r in rows:
        system.add_equation(dict(enumerate(r)), sum(c * x for c, x in zip(r, x0)))
    sol = system.solve()
    assert sol is not None
    for r in rows:
        assert sum(c * sol[i] for i, c in enumerate(r)) == sum(c * x for c, x in zip(r, x0))
        for k in system.kernel():
            assert sum(c * k.get(i, 0) for i, c in enumerate(r)) == 0
    assert len(system.kernel()) == 4 - system.rank


def test_inconsistent_system_labels_conflict():
    system = LinearSystem(columns=["a", "b"])
    system.add_equation({"a": 1, "b": 1}, 1, label="first")
    assert not system.add_equation({"a": 2, "b": 2}, 3, label="second")
    assert system.conflict == "second" and system.solve() is None
