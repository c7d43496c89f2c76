"""Scalar 2-cocycles, central extensions and windowed scalar coboundary solves."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Callable, Mapping

from .errors import KindMismatch, UnboundParameter
from .exactnum import E1, E2, ONE, ZERO, Poly, rational_str
from .families import LieFamily, specialize
from .liecore import (
    CENTRAL,
    CURRENT,
    VECTOR_FIELD,
    Element,
    FiniteLieAlgebra,
    Gen,
    Report,
    T,
    Window,
    combine,
    killing_form,
)
from .linalg import LinearSystem

CocycleRule = Callable[[Gen, Gen], Poly]


def virasoro_cocycle(n: int, m: int) -> Fraction:
    """(m^3 - m)/12 when n = -m, else 0."""
    if n != -m:
        return Fraction(0)
    return Fraction(m ** 3 - m, 12)


def current_cocycle_integral(n: int, m: int) -> Poly:
    """Residue table of A_n dA_m for the genus-one function algebra."""
    n_odd, m_odd = n % 2 != 0, m % 2 != 0
    if n_odd != m_odd:
        return ZERO
    out = Poly.const(-n) if m == -n else ZERO
    if n_odd:
        if m == -n + 2:
            out = out + 3 * E1 * (1 - n)
        if m == -n + 4:
            out = out + (E1 - E2) * (2 * E1 + E2) * (2 - n)
    return out


@dataclass(frozen=True)
class ScalarCocycle:
    """An antisymmetric bilinear form with values in the trivial module."""

    name: str
    kind: str
    rule: CocycleRule
    prefactor: Poly = ONE
    fd_algebra: FiniteLieAlgebra | None = None

    def __call__(self, x: Gen, y: Gen) -> Poly:
        if x.kind == CENTRAL or y.kind == CENTRAL:
            return ZERO
        if x.kind != self.kind or y.kind != self.kind:
            raise KindMismatch(f"{self.name} cocycle evaluated on {x.kind}/{y.kind}")
        v = self.rule(x, y)
        return v * self.prefactor if v else ZERO

    def scaled(self, q) -> "ScalarCocycle":
        return ScalarCocycle(self.name, self.kind, self.rule, self.prefactor * Poly.coerce(q), self.fd_algebra)

    def substitute(self, bindings) -> "ScalarCocycle":
        rule = self.rule
        b = dict(bindings)
        return ScalarCocycle(
            self.name, self.kind, lambda x, y: rule(x, y).substitute(b),
            self.prefactor.substitute(b), self.fd_algebra,
        )


def virasoro(prefactor=1) -> ScalarCocycle:
    return ScalarCocycle(
        "virasoro", VECTOR_FIELD,
        lambda x, y: Poly.const(virasoro_cocycle(x.degree, y.degree)),
        Poly.coerce(prefactor),
    )


def current_geometric(g: FiniteLieAlgebra, prefactor=1) -> ScalarCocycle:
    """p(e1,e2) * beta(x,y) * (residue table), with beta the Killing form of g."""
    beta = lru_cache(maxsize=None)(lambda a, b: killing_form(g, a, b))

    def rule(x: Gen, y: Gen) -> Poly:
        b = beta(x.fd, y.fd)
        if not b:
            return ZERO
        return current_cocycle_integral(x.degree, y.degree) * b

    return ScalarCocycle("current_geometric", CURRENT, rule, Poly.coerce(prefactor), g)


def zero_cocycle(kind: str = VECTOR_FIELD) -> ScalarCocycle:
    return ScalarCocycle("zero", kind, lambda x, y: ZERO)


def perturbed_virasoro(power: int = 3) -> ScalarCocycle:
    """m^power on n = -m, without the -m correction and the 1/12.

    Odd powers keep antisymmetry.  Power 3 is still a cocycle (it differs from
    12 * virasoro by the coboundary m); power 5 is not.
    """
    return ScalarCocycle(
        f"virasoro~m^{power}", VECTOR_FIELD,
        lambda x, y: Poly.const(y.degree ** power) if x.degree == -y.degree else ZERO,
    )


def _elem(x) -> Element:
    return x if isinstance(x, Element) else Element.basis(x)


def apply_cocycle(c: ScalarCocycle, x, y, f: LieFamily | None = None) -> Poly:
    """Bilinear extension of the cocycle to elements."""
    if f is not None:
        _check_kinds(f, c)
    total = ZERO
    for gx, cx in _elem(x).items():
        for gy, cy in _elem(y).items():
            v = c(gx, gy)
            if v:
                total = total + cx * cy * v
    return total


def _check_kinds(f: LieFamily, c: ScalarCocycle):
    if f.kind != c.kind:
        raise KindMismatch(f"{c.name} cocycle does not apply to {f.kind} family {f.name}")
    if c.kind == CURRENT and c.fd_algebra is not None and c.fd_algebra != f.fd_algebra:
        raise KindMismatch("cocycle and family use different finite-dimensional algebras")


@dataclass(frozen=True)
class CentralExtension:
    """The base family extended by a central element t via the cocycle."""

    base: LieFamily
    cocycle: ScalarCocycle

    def bracket(self, x, y) -> Element:
        x, y = _elem(x), _elem(y)
        xs = Element({g: c for g, c in x.items() if g.kind != CENTRAL})
        ys = Element({g: c for g, c in y.items() if g.kind != CENTRAL})
        base = self.base.bracket(xs, ys)
        central = apply_cocycle(self.cocycle, xs, ys)
        if not central:
            return base
        return combine([(ONE, base), (central, Element.basis(T))])

    def generators(self, w: Window) -> list[Gen]:
        return self.base.generators(w) + [T]

    def label(self, g: Gen) -> str:
        return self.base.label(g)


def extend(f: LieFamily, c: ScalarCocycle) -> CentralExtension:
    _check_kinds(f, c)
    return CentralExtension(f, c)


def scalar_cocycle_check(c: ScalarCocycle, f: LieFamily, w: Window) -> Report:
    """Antisymmetry and d2 psi = psi([x,y],z) + psi([y,z],x) + psi([z,x],y) = 0 on window triples."""
    _check_kinds(f, c)
    gens = f.generators(w)
    details = {"cocycle": c.name, "family": f.name, "window": w.as_list()}
    for x in gens:
        for y in gens:
            r = c(x, y) + c(y, x)
            if r:
                return Report("scalar_cocycle", False, {
                    **details, "violation": "antisymmetry",
                    "pair": [f.label(x), f.label(y)], "residual": r.to_records(),
                })
    checked = 0
    for x, y, z in combinations(gens, 3):
        X, Y, Z = Element.basis(x), Element.basis(y), Element.basis(z)
        r = (apply_cocycle(c, f.bracket(X, Y), Z)
             + apply_cocycle(c, f.bracket(Y, Z), X)
             + apply_cocycle(c, f.bracket(Z, X), Y))
        checked += 1
        if r:
            return Report("scalar_cocycle", False, {
                **details, "violation": "d2", "triples_checked": checked,
                "triple": [f.label(x), f.label(y), f.label(z)], "residual": r.to_records(),
            })
    return Report("scalar_cocycle", True, {**details, "triples_checked": checked})


def _require_constant(p: Poly, what: str) -> Fraction:
    if not p.is_constant():
        raise UnboundParameter(
            f"{what} still depends on {', '.join(sorted(p.variables()))}; bind all parameters"
        )
    return p.constant()


@dataclass
class ScalarSolveResult:
    kappa: dict[Gen, Fraction] | None
    equations: int
    unknowns: int
    rank: int
    skipped_pairs: int
    conflict: tuple | None

    def to_dict(self, f: LieFamily) -> dict:
        return {
            "solvable": self.kappa is not None,
            "equations": self.equations,
            "unknowns": self.unknowns,
            "rank": self.rank,
            "skipped_pairs": self.skipped_pairs,
            "conflict_pair": None if self.conflict is None else [f.label(g) for g in self.conflict],
            "kappa": None if self.kappa is None else {
                f.label(g): rational_str(v)
                for g, v in sorted(self.kappa.items(), key=lambda gv: gv[0].sort_key())
            },
        }


def scalar_coboundary_solve(
    c: ScalarCocycle, f: LieFamily, w: Window, bindings: Mapping[str, object] | None = None
) -> ScalarSolveResult:
    """Look for a linear form kappa on the window with kappa([x,y]) = c(x,y).

    Pairs whose bracket leaves the window are skipped, never extrapolated.
    """
    _check_kinds(f, c)
    bindings = dict(bindings or {})
    fb = specialize(f, {k: v for k, v in bindings.items() if k in f.parameters})
    cb = c.substitute({k: Poly.coerce(v) for k, v in bindings.items()}) if bindings else c
    gens = fb.generators(w)
    inside = set(gens)
    system = LinearSystem(columns=list(gens))
    skipped = 0
    for x, y in combinations(gens, 2):
        br = fb.bracket(Element.basis(x), Element.basis(y))
        if any(g not in inside for g in br.gens()):
            skipped += 1
            continue
        row = {g: _require_constant(v, "bracket coefficient") for g, v in br.items()}
        rhs = _require_constant(cb(x, y), "cocycle value")
        system.add_equation(row, rhs, label=(x, y))
    sol = system.solve()
    return ScalarSolveResult(
        kappa=None if sol is None else {g: v for g, v in sol.items() if v},
        equations=system.equations,
        unknowns=len(gens),
        rank=system.rank,
        skipped_pairs=skipped,
        conflict=system.conflict,
    )
