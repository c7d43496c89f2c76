"""Windowed Chevalley-Eilenberg cochains in degrees 1 and 2.

Cochains live on the generators of a finite window.  Evaluating one
outside its window raises :class:`OutOfWindow`; the checks below count
such cases as skipped rather than guessing a value.

Conventions (adjoint coefficients)::

    d1 psi(x, y)    = psi([x,y]) - [x, psi(y)] + [y, psi(x)]
    d2 phi(x, y, z) = phi([x,y],z) + phi([y,z],x) + phi([z,x],y)
                      - [x, phi(y,z)] - [y, phi(z,x)] - [z, phi(x,y)]
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Callable, Mapping

from .errors import OutOfWindow, UnboundParameter
from .exactnum import ONE, Poly
from .families import LieFamily, specialize
from .liecore import CURRENT, Element, Gen, Report, Window, combine
from .linalg import LinearSystem


def _elem(x) -> Element:
    return x if isinstance(x, Element) else Element.basis(x)


class OneCochain:
    """Linear map psi given on the generators of a window."""

    def __init__(self, values: Mapping[Gen, Element] | Callable[[Gen], Element], domain=None):
        if callable(values):
            if domain is None:
                raise ValueError("a rule-based one-cochain needs an explicit domain")
            self.values = {g: values(g) for g in domain}
        else:
            self.values = {g: v for g, v in values.items()}
        self.domain = frozenset(domain if domain is not None else self.values)

    def __call__(self, g: Gen) -> Element:
        if g not in self.domain:
            raise OutOfWindow(f"one-cochain undefined on {g}")
        return self.values.get(g, Element())

    def apply(self, x) -> Element:
        return combine([(c, self(g)) for g, c in _elem(x).items()])

    def substitute(self, bindings) -> "OneCochain":
        return OneCochain({g: v.substitute(bindings) for g, v in self.values.items()}, self.domain)


class TwoCochain:
    """Antisymmetric bilinear map phi.

    ``rule(x, y)`` is consulted only for ``x < y`` (generator sort order);
    other orders follow from antisymmetry.  If ``domain`` is given, pairs
    with a generator outside it raise :class:`OutOfWindow`.
    """

    def __init__(self, rule: Callable[[Gen, Gen], Element], domain=None):
        self.rule = rule
        self.domain = None if domain is None else frozenset(domain)

    @classmethod
    def from_table(cls, table: Mapping[tuple[Gen, Gen], Element], domain) -> "TwoCochain":
        table = dict(table)
        return cls(lambda x, y: table.get((x, y), Element()), domain)

    def __call__(self, x: Gen, y: Gen) -> Element:
        if self.domain is not None and (x not in self.domain or y not in self.domain):
            raise OutOfWindow(f"two-cochain undefined on ({x}, {y})")
        if x == y:
            return Element()
        if x.sort_key() < y.sort_key():
            return self.rule(x, y)
        return -self.rule(y, x)

    def apply(self, x, y) -> Element:
        terms = []
        for gx, cx in _elem(x).items():
            for gy, cy in _elem(y).items():
                terms.append((cx * cy, self(gx, gy)))
        return combine(terms)

    def substitute(self, bindings) -> "TwoCochain":
        rule = self.rule
        return TwoCochain(lambda x, y: rule(x, y).substitute(bindings), self.domain)


def zero_two_cochain() -> TwoCochain:
    return TwoCochain(lambda x, y: Element())


def _gen(f: LieFamily, x) -> Gen:
    if isinstance(x, Gen):
        return x
    if f.kind == CURRENT:
        raise TypeError("current generators need an fd index; pass a Gen")
    return Gen(f.kind, int(x))


def d1(f: LieFamily, psi: OneCochain, x, y) -> Element:
    """(d1 psi)(x, y) = psi([x,y]) - [x, psi(y)] + [y, psi(x)]."""
    X = _elem(_gen(f, x) if not isinstance(x, Element) else x)
    Y = _elem(_gen(f, y) if not isinstance(y, Element) else y)
    return combine([
        (ONE, psi.apply(f.bracket(X, Y))),
        (-ONE, f.bracket(X, psi.apply(Y))),
        (ONE, f.bracket(Y, psi.apply(X))),
    ])


def d1_cochain(f: LieFamily, psi: OneCochain) -> TwoCochain:
    return TwoCochain(lambda x, y: d1(f, psi, x, y))


def d2(f: LieFamily, phi: TwoCochain, x, y, z) -> Element:
    X, Y, Z = _elem(x), _elem(y), _elem(z)
    br = f.bracket
    return combine([
        (ONE, phi.apply(br(X, Y), Z)),
        (ONE, phi.apply(br(Y, Z), X)),
        (ONE, phi.apply(br(Z, X), Y)),
        (-ONE, br(X, phi.apply(Y, Z))),
        (-ONE, br(Y, phi.apply(Z, X))),
        (-ONE, br(Z, phi.apply(X, Y))),
    ])


def d2_check(f: LieFamily, phi: TwoCochain, w: Window) -> Report:
    """Cocycle condition on every triple of distinct window generators."""
    gens = f.generators(w)
    checked = skipped = 0
    details = {"family": f.name, "window": w.as_list()}
    for x, y, z in combinations(gens, 3):
        try:
            r = d2(f, phi, x, y, z)
        except OutOfWindow:
            skipped += 1
            continue
        checked += 1
        if r:
            return Report("d2", False, {
                **details, "triples_checked": checked, "skipped_triples": skipped,
                "violation": [f.label(x), f.label(y), f.label(z)],
                "residual": r.to_records(f.fd_names(), f.symbol),
            })
    return Report("d2", True, {**details, "triples_checked": checked, "skipped_triples": skipped})


@dataclass(frozen=True)
class GradedCochainSpec:
    """Degree shift d and window: psi(V_k) lies in the span of V_{k+d}."""

    degree_shift: int
    window: Window


def _bind(f: LieFamily, bindings) -> LieFamily:
    bindings = dict(bindings or {})
    # parameters left unbound are only an error once a coefficient depends on them
    return specialize(f, {k: v for k, v in bindings.items() if k in f.parameters})


def _constant(p: Poly) -> Fraction:
    if not p.is_constant():
        raise UnboundParameter(f"coefficient {p} is not a rational number; bind all parameters")
    return p.constant()


def _targets(f: LieFamily, degree: int) -> list[Gen]:
    if f.kind == CURRENT:
        return [Gen(CURRENT, degree, c) for c in range(f.fd_algebra.dim)]
    return [Gen(f.kind, degree)]


@dataclass
class AdjointSolveResult:
    psi: OneCochain | None
    kernel: list[OneCochain]
    equations: int
    unknowns: int
    rank: int
    skipped_pairs: int
    conflict: tuple | None
    verified: bool | None = None
    degree_shift: int = 0
    window: Window | None = None

    def to_dict(self, f: LieFamily) -> dict:
        return {
            "window": self.window.as_list() if self.window else None,
            "degree_shift": self.degree_shift,
            "matrix": {"rows": self.equations, "columns": self.unknowns},
            "rank": self.rank,
            "skipped_pairs": self.skipped_pairs,
            "solvable": self.psi is not None,
            "conflict_pair": None if self.conflict is None else [f.label(g) for g in self.conflict[:2]],
            "psi": None if self.psi is None else cochain_records(f, self.psi),
            "kernel_dimension": len(self.kernel),
            "verified": self.verified,
        }


def _fully_inside(br: Element, inside) -> bool:
    return all(g in inside for g in br.gens())


def coboundary_solve_adjoint(
    f: LieFamily, phi: TwoCochain, spec: GradedCochainSpec, bindings=None
) -> AdjointSolveResult:
    """Solve d1 psi = phi for a degree-homogeneous psi on the window.

    Unknowns are the coefficients of psi(g) on the generators of degree
    deg(g) + d.  One equation per pair of window generators and output
    generator; pairs whose bracket leaves the window are skipped.  A
    returned psi is re-verified against phi on every equation pair.
    """
    fb = _bind(f, bindings)
    phib = phi.substitute({k: Poly.coerce(v) for k, v in (bindings or {}).items()}) if bindings else phi
    d = spec.degree_shift
    gens = fb.generators(spec.window)
    inside = set(gens)
    columns = [(g, t) for g in gens for t in _targets(fb, g.degree + d)]
    system = LinearSystem(columns=columns)
    skipped = 0
    used_pairs = []
    for x, y in combinations(gens, 2):
        X, Y = Element.basis(x), Element.basis(y)
        br = fb.bracket(X, Y)
        if not _fully_inside(br, inside):
            skipped += 1
            continue
        used_pairs.append((x, y))
        rows: dict[Gen, dict] = {}

        def add(out: Element, col, scale):
            for g, c in out.items():
                row = rows.setdefault(g, {})
                row[col] = row.get(col, 0) + scale * _constant(c)

        # psi([x,y])
        for g, c in br.items():
            cc = _constant(c)
            for t in _targets(fb, g.degree + d):
                rows.setdefault(t, {})
                row = rows[t]
                row[(g, t)] = row.get((g, t), 0) + cc
        # - [x, psi(y)] + [y, psi(x)]
        for t in _targets(fb, y.degree + d):
            add(fb.bracket(X, Element.basis(t)), (y, t), -1)
        for t in _targets(fb, x.degree + d):
            add(fb.bracket(Y, Element.basis(t)), (x, t), 1)
        value = phib(x, y)
        for g in set(rows) | set(value.gens()):
            system.add_equation(rows.get(g, {}), _constant(value.coeff(g)), label=(x, y, g))

    sol = system.solve()

    def to_cochain(vec: Mapping) -> OneCochain:
        vals: dict[Gen, list] = {}
        for (g, t), v in vec.items():
            if v:
                vals.setdefault(g, []).append((Poly.const(v), Element.basis(t)))
        return OneCochain({g: combine(terms) for g, terms in vals.items()}, inside)

    psi = None if sol is None else to_cochain(sol)
    result = AdjointSolveResult(
        psi=psi,
        kernel=[to_cochain(k) for k in system.kernel()] if sol is not None else [],
        equations=system.equations,
        unknowns=len(columns),
        rank=system.rank,
        skipped_pairs=skipped,
        conflict=system.conflict,
        degree_shift=d,
        window=spec.window,
    )
    if psi is not None:
        result.verified = all(d1(fb, psi, x, y) == phib(x, y) for x, y in used_pairs)
    return result


def in_solution_set(
    f: LieFamily, psi: OneCochain, phi: TwoCochain, w: Window, bindings=None
) -> bool:
    """True if d1 psi = phi on every pair of the window whose bracket stays inside."""
    fb = _bind(f, bindings)
    gens = fb.generators(w)
    inside = set(gens)
    for x, y in combinations(gens, 2):
        if not _fully_inside(fb.basis_product(x, y), inside):
            continue
        if d1(fb, psi, x, y) != phi(x, y):
            return False
    return True


# windowed H^2


def _evaluable_pairs(fb: LieFamily, gens, inside) -> list[tuple[Gen, Gen]]:
    return [
        (x, y) for x, y in combinations(gens, 2) if _fully_inside(fb.basis_product(x, y), inside)
    ]


def graded_h2_report(
    f: LieFamily, spec: GradedCochainSpec, bindings=None, coefficients: str = "adjoint"
) -> Report:
    """Windowed dimensions of degree-d 2-cocycles, coboundaries and their quotient.

    The 2-cochain space is spanned by the values on window pairs whose
    bracket stays in the window (exactly the pairs on which d1 of a
    window 1-cochain is defined).  The cocycle condition is imposed on
    every triple whose terms only touch such pairs; other triples are
    skipped and counted.  The numbers are evidence about H^2, not H^2.

    ``coefficients`` is ``"adjoint"`` or ``"trivial"``.  For trivial
    coefficients a degree-d cochain is supported on deg x + deg y + d = 0.
    """
    if coefficients not in ("adjoint", "trivial"):
        raise ValueError("coefficients must be 'adjoint' or 'trivial'")
    trivial = coefficients == "trivial"
    fb = _bind(f, bindings)
    d = spec.degree_shift
    w = spec.window
    gens = fb.generators(w)
    inside = set(gens)
    pairs = _evaluable_pairs(fb, gens, inside)
    pair_set = set(pairs)

    def targets(x: Gen, y: Gen) -> list:
        if trivial:
            return [None] if x.degree + y.degree + d == 0 else []
        return _targets(fb, x.degree + y.degree + d)

    columns = [((x, y), t) for x, y in pairs for t in targets(x, y)]

    def phi_terms(a: Gen, b: Gen):
        """Unknown columns of phi(a, b) as (column, sign, target)."""
        if a == b:
            return []
        sign = 1
        if a.sort_key() > b.sort_key():
            a, b, sign = b, a, -1
        if (a, b) not in pair_set:
            raise OutOfWindow((a, b))
        return [(((a, b), t), sign, t) for t in targets(a, b)]

    cocycles = LinearSystem(columns=columns)
    checked = skipped = 0
    for x, y, z in combinations(gens, 3):
        rows: dict = {}

        def add(key, col, v):
            row = rows.setdefault(key, {})
            row[col] = row.get(col, 0) + v

        try:
            for (a, b), c in (((x, y), z), ((y, z), x), ((z, x), y)):
                for g, coeff in fb.basis_product(a, b).items():
                    cc = _constant(coeff)
                    for col, sign, t in phi_terms(g, c):
                        add(t, col, sign * cc)
            if not trivial:
                for a, (b, c) in ((x, (y, z)), (y, (z, x)), (z, (x, y))):
                    for col, sign, t in phi_terms(b, c):
                        for g, coeff in fb.basis_product(a, t).items():
                            add(g, col, -sign * _constant(coeff))
        except OutOfWindow:
            skipped += 1
            continue
        checked += 1
        for row in rows.values():
            cocycles.add_equation(row, 0)

    # coboundaries: image of d1 on degree-d one-cochains of the window
    if trivial:
        one_cols = [(g, None) for g in gens if g.degree + d == 0]
    else:
        one_cols = [(g, t) for g in gens for t in _targets(fb, g.degree + d)]
    image_rows = []
    for g0, t0 in one_cols:
        psi_val = Element.basis(t0) if t0 is not None else None
        vec: dict = {}
        for x, y in pairs:
            if trivial:
                v = fb.basis_product(x, y).coeff(g0)
                if v:
                    vec[((x, y), None)] = _constant(v)
                continue
            psi = OneCochain({g0: psi_val}, inside)
            val = d1(fb, psi, x, y)
            for t, c in val.items():
                vec[((x, y), t)] = _constant(c)
        image_rows.append(vec)
    image = LinearSystem(columns=columns)
    for r in image_rows:
        image.add_equation(r, 0)

    cocycle_dim = len(columns) - cocycles.rank
    coboundary_dim = image.rank
    return Report("graded_h2", True, {
        "label": "EVIDENCE",
        "caveat": "windowed dimensions; not the cohomology of the infinite-dimensional algebra",
        "family": f.name,
        "coefficients": coefficients,
        "window": w.as_list(),
        "degree_shift": d,
        "bindings": {k: str(v) for k, v in sorted((bindings or {}).items())},
        "cochain_dimension": len(columns),
        "cocycle_matrix": {"rows": cocycles.equations, "columns": len(columns), "rank": cocycles.rank},
        "coboundary_matrix": {"rows": len(one_cols), "columns": len(columns), "rank": image.rank},
        "cocycle_dimension": cocycle_dim,
        "coboundary_dimension": coboundary_dim,
        "quotient_dimension": cocycle_dim - coboundary_dim,
        "triples_checked": checked,
        "skipped_triples": skipped,
    })


def cochain_records(f: LieFamily, psi: OneCochain) -> dict:
    return {
        f.label(g): psi(g).to_records(f.fd_names(), f.symbol)
        for g in sorted(psi.domain, key=Gen.sort_key)
        if psi(g)
    }

