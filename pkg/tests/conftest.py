from fractions import Fraction

import pytest
import sympy
from hypothesis import strategies as st

from kndeform.exactnum import PARAMETERS, Poly

SYMBOLS = {name: sympy.Symbol(name if name != "lambda" else "lam") for name in PARAMETERS}

small_rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)

monomials = st.tuples(*[st.integers(0, 3) for _ in PARAMETERS])


@st.composite
def polys(draw, max_terms=4):
    terms = draw(st.lists(st.tuples(monomials, small_rationals), max_size=max_terms))
    return Poly(terms)


def to_sympy(p: Poly):
    """Independent representation used as an oracle."""
    expr = sympy.Integer(0)
    for mono, c in p.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for name, e in zip(PARAMETERS, mono):
            term *= SYMBOLS[name] ** e
        expr += term
    return sympy.expand(expr)


def from_sympy(expr) -> Poly:
    gens = [SYMBOLS[n] for n in PARAMETERS]
    poly = sympy.Poly(sympy.expand(expr), *gens)
    return Poly({mono: Fraction(int(c.p), int(c.q)) for mono, c in poly.terms()})


@pytest.fixture
def sym():
    return SYMBOLS
