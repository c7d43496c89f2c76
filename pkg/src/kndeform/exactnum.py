"""Exact rationals and sparse polynomials in the deformation parameters.

Coefficients are :class:`fractions.Fraction`.  A :class:`Poly` is a sparse
map from exponent tuples (one slot per name in :data:`PARAMETERS`) to
nonzero fractions.  Polynomials are treated as immutable values.
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Union

from .errors import UnboundParameter, UnknownParameter

PARAMETERS: tuple[str, ...] = ("e1", "e2", "s", "lambda")
_INDEX = {name: i for i, name in enumerate(PARAMETERS)}
_NVARS = len(PARAMETERS)
_ONE_MONO = (0,) * _NVARS

Scalar = Union[int, Fraction]


def as_rational(value) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are refused: every number in this package is exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
            raise ValueError(f"not an exact rational: {value!r}")
        return Fraction(text)
    if isinstance(value, Poly) and value.is_constant():
        return value.constant()
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rational_str(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def _check_name(name: str) -> int:
    try:
        return _INDEX[name]
    except KeyError:
        raise UnknownParameter(
            f"unknown parameter {name!r}; expected one of {', '.join(PARAMETERS)}"
        ) from None


class Poly:
    """Sparse multivariate polynomial over Q in the fixed parameter names."""

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping | Iterable = ()):
        clean: dict[tuple[int, ...], Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for mono, coeff in items:
            key = self._mono_key(mono)
            c = as_rational(coeff)
            if c:
                total = clean.get(key, 0) + c
                if total:
                    clean[key] = total
                else:
                    clean.pop(key, None)
        self._terms = clean
        self._hash = None

    @staticmethod
    def _mono_key(mono) -> tuple[int, ...]:
        if isinstance(mono, tuple) and len(mono) == _NVARS and all(
            isinstance(e, int) for e in mono
        ):
            if any(e < 0 for e in mono):
                raise ValueError(f"negative exponent in {mono}")
            return mono
        if isinstance(mono, Mapping):
            exps = [0] * _NVARS
            for name, e in mono.items():
                if e < 0:
                    raise ValueError(f"negative exponent for {name}")
                exps[_check_name(name)] += int(e)
            return tuple(exps)
        raise TypeError(f"bad monomial {mono!r}")

    @classmethod
    def _raw(cls, terms: dict) -> "Poly":
        # terms must already be canonical (no zero coefficients)
        p = object.__new__(cls)
        p._terms = terms
        p._hash = None
        return p

    # constructors

    @classmethod
    def const(cls, c) -> "Poly":
        c = as_rational(c)
        return cls._raw({_ONE_MONO: c} if c else {})

    @classmethod
    def var(cls, name: str) -> "Poly":
        exps = [0] * _NVARS
        exps[_check_name(name)] = 1
        return cls._raw({tuple(exps): Fraction(1)})

    @classmethod
    def coerce(cls, value) -> "Poly":
        if isinstance(value, Poly):
            return value
        return cls.const(value)

    # inspection

    @property
    def terms(self) -> dict:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and _ONE_MONO in self._terms)

    def constant(self) -> Fraction:
        """The constant term (the value when the polynomial is constant)."""
        return self._terms.get(_ONE_MONO, Fraction(0))

    def variables(self) -> set[str]:
        used = set()
        for mono in self._terms:
            for i, e in enumerate(mono):
                if e:
                    used.add(PARAMETERS[i])
        return used

    def degree(self, name: str | None = None) -> int:
        if not self._terms:
            return -1
        if name is None:
            return max(sum(m) for m in self._terms)
        i = _check_name(name)
        return max(m[i] for m in self._terms)

    # arithmetic

    def __add__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        if not other._terms:
            return self
        if not self._terms:
            return other
        out = dict(self._terms)
        for mono, c in other._terms.items():
            total = out.get(mono, 0) + c
            if total:
                out[mono] = total
            else:
                del out[mono]
        return Poly._raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._raw({m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                other = Poly.const(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            try:
                c = as_rational(other)
            except TypeError:
                return NotImplemented
            if not c:
                return ZERO
            return Poly._raw({m: v * c for m, v in self._terms.items()})
        if not self._terms or not other._terms:
            return ZERO
        out: dict = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                mono = tuple(a + b for a, b in zip(m1, m2))
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly._raw({m: c for m, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Poly":
        c = as_rational(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k: int) -> "Poly":
        if not isinstance(k, int) or k < 0:
            raise ValueError("only nonnegative integer powers")
        result, base = ONE, self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self._terms == other._terms
        try:
            return self._terms == Poly.const(other)._terms
        except TypeError:
            return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._terms.items()))
        return self._hash

    # substitution, evaluation, calculus

    def substitute(self, bindings: Mapping[str, object]) -> "Poly":
        """Simultaneous substitution of polynomials (or rationals) for names."""
        if not bindings:
            return self
        slots = {_check_name(k): Poly.coerce(v) for k, v in bindings.items()}
        powers: dict[tuple[int, int], Poly] = {}

        def power(i, e):
            key = (i, e)
            if key not in powers:
                powers[key] = slots[i] ** e
            return powers[key]

        out = ZERO
        for mono, c in self._terms.items():
            rest = list(mono)
            factor = Poly._raw({_ONE_MONO: c})
            for i in slots:
                if mono[i]:
                    factor = factor * power(i, mono[i])
                    rest[i] = 0
            out = out + factor * Poly._raw({tuple(rest): Fraction(1)})
        return out

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        values = {_check_name(k): as_rational(v) for k, v in point.items()}
        total = Fraction(0)
        for mono, c in self._terms.items():
            term = c
            for i, e in enumerate(mono):
                if e:
                    if i not in values:
                        raise UnboundParameter(
                            f"parameter {PARAMETERS[i]!r} has no binding"
                        )
                    term *= values[i] ** e
            total += term
        return total

    def diff(self, name: str) -> "Poly":
        i = _check_name(name)
        out = {}
        for mono, c in self._terms.items():
            if mono[i]:
                m = list(mono)
                m[i] -= 1
                out[tuple(m)] = c * mono[i]
        return Poly._raw(out)

    def coefficient(self, name: str, power: int) -> "Poly":
        """Coefficient of ``name**power``, as a polynomial in the other names."""
        i = _check_name(name)
        out = {}
        for mono, c in self._terms.items():
            if mono[i] == power:
                m = list(mono)
                m[i] = 0
                out[tuple(m)] = c
        return Poly._raw(out)

    # presentation

    def sorted_terms(self) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in graded-lexicographic order (lowest total degree first)."""
        return sorted(
            self._terms.items(), key=lambda t: (sum(t[0]), tuple(-e for e in t[0]))
        )

    def to_records(self) -> list[dict]:
        return [
            {
                "monomial": {PARAMETERS[i]: e for i, e in enumerate(mono) if e},
                "coeff": rational_str(c),
            }
            for mono, c in self.sorted_terms()
        ]

    @classmethod
    def from_records(cls, records: Iterable[Mapping]) -> "Poly":
        return cls((rec["monomial"], as_rational(rec["coeff"])) for rec in records)

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        ordered = sorted(self._terms.items(), key=lambda t: (-sum(t[0]), tuple(-e for e in t[0])))
        for mono, c in ordered:
            factors = []
            for i, e in enumerate(mono):
                if e == 1:
                    factors.append(PARAMETERS[i])
                elif e:
                    factors.append(f"{PARAMETERS[i]}^{e}")
            mag = abs(c)
            if not factors:
                body = rational_str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = rational_str(mag) + "*" + "*".join(factors)
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        text = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            text += f" {sign} {body}"
        return text

    def __repr__(self) -> str:
        return f"Poly({str(self)!r})"


ZERO = Poly._raw({})
ONE = Poly._raw({_ONE_MONO: Fraction(1)})

E1 = Poly.var("e1")
E2 = Poly.var("e2")
S = Poly.var("s")
LAMBDA = Poly.var("lambda")


def parse_poly(text: str) -> Poly:
    """Parse a polynomial written with +, -, *, ^ (or **), parentheses,
    integer or p/q literals and the parameter names.

    >>> str(parse_poly("(e1 - e2)*(2*e1 + e2)"))
    '2*e1^2 - e1*e2 - e2^2'
    """
    tokens = re.findall(r"\s*(\d+/\d+|\d+|[A-Za-z_]\w*|\*\*|[-+*^()])", text)
    if "".join(tokens).replace(" ", "") != re.sub(r"\s+", "", text):
        raise ValueError(f"cannot parse polynomial {text!r}")
    tokens = [t.strip() for t in tokens]
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        return tok

    def expr():
        value = term()
        while peek() in ("+", "-"):
            op = take()
            rhs = term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term():
        value = unary()
        while peek() == "*":
            take()
            value = value * unary()
        return value

    def unary():
        if peek() == "-":
            take()
            return -unary()
        if peek() == "+":
            take()
            return unary()
        return power()

    def power():
        base = atom()
        if peek() in ("^", "**"):
            take()
            exp = take()
            if not exp.isdigit():
                raise ValueError(f"exponent must be a nonnegative integer in {text!r}")
            return base ** int(exp)
        return base

    def atom():
        tok = take() if peek() is not None else None
        if tok is None:
            raise ValueError(f"unexpected end of {text!r}")
        if tok == "(":
            value = expr()
            if take() != ")":
                raise ValueError(f"unbalanced parentheses in {text!r}")
            return value
        if re.fullmatch(r"\d+(/\d+)?", tok):
            return Poly.const(Fraction(tok))
        return Poly.var(tok)

    result = expr()
    if pos != len(tokens):
        raise ValueError(f"trailing input in {text!r}")
    return result


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_substitute(p: Poly, bindings: Mapping[str, object]) -> Poly:
    return p.substitute(bindings)


def poly_eval(p: Poly, point: Mapping[str, object]) -> Fraction:
    return p.evaluate(point)
