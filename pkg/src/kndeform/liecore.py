"""Basis symbols, sparse elements and finite-dimensional Lie algebras."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from pathlib import Path
from typing import Iterable, Iterator, Mapping, NamedTuple

from .errors import InvalidAlgebra, KindMismatch
from .exactnum import ONE, ZERO, Poly, as_rational, rational_str

VECTOR_FIELD = "VectorField"
FUNCTION = "Function"
CURRENT = "Current"
CENTRAL = "Central"
KINDS = (VECTOR_FIELD, FUNCTION, CURRENT, CENTRAL)


class Gen(NamedTuple):
    """A graded basis symbol: V_n, A_n, x(x)A_n or the central element t."""

    kind: str
    degree: int
    fd: int | None = None

    def sort_key(self):
        return (KINDS.index(self.kind), self.degree, -1 if self.fd is None else self.fd)


def V(n: int) -> Gen:
    return Gen(VECTOR_FIELD, n)


def A(n: int) -> Gen:
    return Gen(FUNCTION, n)


def J(x: int, n: int) -> Gen:
    return Gen(CURRENT, n, x)


T = Gen(CENTRAL, 0)


def make_gen(kind: str, degree: int, fd: int | None = None) -> Gen:
    if kind not in KINDS:
        raise KindMismatch(f"unknown generator kind {kind!r}")
    if (fd is not None) != (kind == CURRENT):
        raise KindMismatch("fd index is required for currents and forbidden otherwise")
    if kind == CENTRAL and degree != 0:
        raise KindMismatch("the central element has degree 0")
    return Gen(kind, degree, fd)


def gen_label(g: Gen, fd_names: Iterable[str] | None = None, symbol: str = "V") -> str:
    if g.kind == VECTOR_FIELD:
        return f"{symbol}_{g.degree}"
    if g.kind == FUNCTION:
        return f"A_{g.degree}"
    if g.kind == CENTRAL:
        return "t"
    names = list(fd_names) if fd_names is not None else None
    x = names[g.fd] if names else f"T{g.fd}"
    return f"{x}(x)A_{g.degree}"


class Element:
    """Finite linear combination of generators with polynomial coefficients."""

    __slots__ = ("_support",)

    def __init__(self, support: Mapping[Gen, object] | None = None):
        clean = {}
        for g, c in (support or {}).items():
            c = Poly.coerce(c)
            if c:
                clean[g] = c
        self._support = clean

    @classmethod
    def _raw(cls, support: dict) -> "Element":
        e = object.__new__(cls)
        e._support = support
        return e

    @classmethod
    def basis(cls, g: Gen) -> "Element":
        return cls._raw({g: ONE})

    @property
    def support(self) -> dict[Gen, Poly]:
        return dict(self._support)

    def items(self):
        return self._support.items()

    def gens(self):
        return self._support.keys()

    def coeff(self, g: Gen) -> Poly:
        return self._support.get(g, ZERO)

    def is_zero(self) -> bool:
        return not self._support

    def __bool__(self):
        return bool(self._support)

    def __len__(self):
        return len(self._support)

    def __iter__(self) -> Iterator[tuple[Gen, Poly]]:
        return iter(self._support.items())

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return combine([(ONE, self), (ONE, other)])

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        return combine([(ONE, self), (-ONE, other)])

    def __neg__(self) -> "Element":
        return Element._raw({g: -c for g, c in self._support.items()})

    def scale(self, c) -> "Element":
        c = Poly.coerce(c)
        if not c:
            return ZERO_ELEMENT
        out = {}
        for g, v in self._support.items():
            w = v * c
            if w:
                out[g] = w
        return Element._raw(out)

    def __mul__(self, c):
        if isinstance(c, Element):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def substitute(self, bindings) -> "Element":
        return Element({g: c.substitute(bindings) for g, c in self._support.items()})

    def __eq__(self, other) -> bool:
        if isinstance(other, Element):
            return self._support == other._support
        if other == 0:
            return not self._support
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self._support.items()))

    def sorted_items(self) -> list[tuple[Gen, Poly]]:
        return sorted(self._support.items(), key=lambda gc: gc[0].sort_key())

    def to_records(self, fd_names=None, symbol="V") -> list[dict]:
        return [
            {"generator": gen_label(g, fd_names, symbol), "coeff": c.to_records()}
            for g, c in self.sorted_items()
        ]

    def format(self, fd_names=None, symbol="V") -> str:
        if not self._support:
            return "0"
        parts = []
        for g, c in reversed(self.sorted_items()):
            label = gen_label(g, fd_names, symbol)
            if c == 1:
                parts.append(label)
            elif c == -1:
                parts.append(f"-{label}")
            elif c.is_constant():
                parts.append(f"{rational_str(c.constant())}*{label}")
            else:
                parts.append(f"({c})*{label}")
        return " + ".join(parts).replace("+ -", "- ")

    def __repr__(self):
        return f"Element({self.format()!r})"


ZERO_ELEMENT = Element._raw({})


def combine(xs: Iterable[tuple[object, Element]]) -> Element:
    """Exact linear combination sum(c_i * x_i)."""
    acc: dict[Gen, Poly] = {}
    for c, x in xs:
        c = Poly.coerce(c)
        if not c:
            continue
        for g, v in x._support.items():
            acc[g] = acc.get(g, ZERO) + (v if c is ONE else v * c)
    return Element._raw({g: v for g, v in acc.items() if v})


element_combine = combine


@dataclass(frozen=True)
class Window:
    """Inclusive index range [lo, hi] used for desk-scale verification."""

    lo: int
    hi: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"window lower bound {self.lo} exceeds upper bound {self.hi}")

    def __contains__(self, n: int) -> bool:
        return self.lo <= n <= self.hi

    def __iter__(self):
        return iter(range(self.lo, self.hi + 1))

    def __len__(self):
        return self.hi - self.lo + 1

    def as_list(self) -> list[int]:
        return [self.lo, self.hi]


@dataclass
class Report:
    """Outcome of a verification: pass/fail plus machine-readable details."""

    check: str
    passed: bool
    details: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"check": self.check, "status": "pass" if self.passed else "fail", **self.details}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False, ensure_ascii=False)

    def __bool__(self):
        return self.passed


# finite-dimensional Lie algebras


@dataclass(frozen=True)
class FiniteLieAlgebra:
    """Lie algebra given by structure constants C^c_{a,b}: [T_a, T_b] = sum_c C^c_{a,b} T_c."""

    dim: int
    basis_names: tuple[str, ...]
    structure_constants: Mapping[tuple[int, int, int], Fraction]
    name: str = "g"

    def __post_init__(self):
        if self.dim <= 0 or len(self.basis_names) != self.dim:
            raise InvalidAlgebra("dim must be positive and match the number of basis names")
        clean = {}
        for (a, b, c), v in self.structure_constants.items():
            if not all(0 <= i < self.dim for i in (a, b, c)):
                raise InvalidAlgebra(f"index triple {(a, b, c)} out of range")
            v = as_rational(v)
            if v:
                clean[(a, b, c)] = v
        object.__setattr__(self, "structure_constants", clean)
        object.__setattr__(self, "basis_names", tuple(self.basis_names))
        table: dict[tuple[int, int], dict[int, Fraction]] = {}
        for (a, b, c), v in clean.items():
            table.setdefault((a, b), {})[c] = v
        object.__setattr__(self, "_table", table)

    def index(self, name_or_index) -> int:
        if isinstance(name_or_index, int):
            if not 0 <= name_or_index < self.dim:
                raise IndexError(name_or_index)
            return name_or_index
        return self.basis_names.index(name_or_index)

    def bracket(self, a, b) -> dict[int, Fraction]:
        return dict(self._table.get((self.index(a), self.index(b)), {}))

    def constant(self, a: int, b: int, c: int) -> Fraction:
        return self.structure_constants.get((a, b, c), Fraction(0))

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "basis_names": list(self.basis_names),
            "constants": [
                {"a": a, "b": b, "c": c, "value": rational_str(v)}
                for (a, b, c), v in sorted(self.structure_constants.items())
            ],
        }


def fd_bracket(g: FiniteLieAlgebra, a, b) -> dict[int, Fraction]:
    return g.bracket(a, b)


def sl2() -> FiniteLieAlgebra:
    """sl_2 with basis (e, h, f): [h,e]=2e, [h,f]=-2f, [e,f]=h."""
    e, h, f = 0, 1, 2
    c = {
        (h, e, e): 2, (e, h, e): -2,
        (h, f, f): -2, (f, h, f): 2,
        (e, f, h): 1, (f, e, h): -1,
    }
    return FiniteLieAlgebra(3, ("e", "h", "f"), c, name="sl2")


def abelian(dim: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(dim, tuple(f"T{i}" for i in range(dim)), {}, name=f"abelian{dim}")


def fd_validate(g: FiniteLieAlgebra) -> Report:
    """Brute-force antisymmetry and Jacobi over all index tuples."""
    n = g.dim
    C = g.constant
    for a, b, c in _cartesian(range(n), repeat=3):
        residual = C(a, b, c) + C(b, a, c)
        if residual:
            return Report("fd_validate", False, {
                "violation": "antisymmetry",
                "indices": [a, b, c],
                "residual": rational_str(residual),
            })
    for a, b, c, r in _cartesian(range(n), repeat=4):
        residual = sum(
            (C(a, b, l) * C(l, c, r) + C(b, c, l) * C(l, a, r) + C(c, a, l) * C(l, b, r)
             for l in range(n)),
            Fraction(0),
        )
        if residual:
            return Report("fd_validate", False, {
                "violation": "jacobi",
                "indices": [a, b, c, r],
                "residual": rational_str(residual),
            })
    return Report("fd_validate", True, {"dim": n, "algebra": g.name})


def killing_form(g: FiniteLieAlgebra, a, b) -> Fraction:
    """trace(ad a o ad b), computed from the structure constants."""
    a, b = g.index(a), g.index(b)
    n = g.dim
    C = g.constant
    return sum((C(b, c, d) * C(a, d, c) for c in range(n) for d in range(n)), Fraction(0))


def killing_matrix(g: FiniteLieAlgebra) -> list[list[Fraction]]:
    return [[killing_form(g, a, b) for b in range(g.dim)] for a in range(g.dim)]


def load_fd_algebra(source) -> FiniteLieAlgebra:
    """Read ``{dim, basis_names, constants: [{a, b, c, value}]}`` from JSON.

    ``source`` may be a path, a JSON string or an already-parsed mapping.
    Indices may be integers or basis names.
    """
    if isinstance(source, Mapping):
        data = source
    elif isinstance(source, Path) or (isinstance(source, str) and not source.lstrip().startswith("{")):
        data = json.loads(Path(source).read_text())
    else:
        data = json.loads(source)
    try:
        names = list(data["basis_names"])
        dim = int(data["dim"])
        lookup = {name: i for i, name in enumerate(names)}

        def idx(v):
            return lookup[v] if isinstance(v, str) else int(v)

        constants: dict = {}
        for rec in data["constants"]:
            key = (idx(rec["a"]), idx(rec["b"]), idx(rec["c"]))
            constants[key] = constants.get(key, 0) + as_rational(str(rec["value"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidAlgebra(f"malformed algebra description: {exc}") from exc
    return FiniteLieAlgebra(dim, tuple(names), constants, name=data.get("name", "g"))


def almost_grading_bounds(family, w: Window) -> tuple[int, int]:
    """Smallest R and largest S with every window product inside [n+m+R, n+m+S]."""
    gens = family.generators(w)
    lo = hi = None
    for x in gens:
        for y in gens:
            out = family.basis_product(x, y)
            for g in out.gens():
                off = g.degree - x.degree - y.degree
                lo = off if lo is None else min(lo, off)
                hi = off if hi is None else max(hi, off)
    if lo is None:
        return (0, 0)
    return (lo, hi)
