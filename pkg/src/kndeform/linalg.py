"""Exact incremental linear solver over Q.

Equations are reduced one at a time against the pivot rows collected so
far.  Rows are kept integral: each row is scaled to clear denominators and
elimination uses cross-multiplication followed by content removal, so no
fractions appear until back-substitution.  Pivots are the first nonzero
column in insertion order, which keeps results deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, lcm
from typing import Hashable, Mapping


def _integral(coeffs: Mapping[int, Fraction], rhs: Fraction) -> tuple[dict[int, int], int]:
    den = rhs.denominator
    for c in coeffs.values():
        den = lcm(den, c.denominator)
    row = {k: int(c * den) for k, c in coeffs.items() if c}
    return row, int(rhs * den)


def _primitive(row: dict[int, int], rhs: int) -> tuple[dict[int, int], int]:
    g = abs(rhs)
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row, rhs
    if g > 1:
        row = {k: v // g for k, v in row.items()}
        rhs //= g
    return row, rhs


@dataclass
class LinearSystem:
    """Sparse system ``sum_j a_ij x_j = b_i`` over Q with hashable unknown labels."""

    columns: list[Hashable] = field(default_factory=list)
    _col_index: dict = field(default_factory=dict, repr=False)
    _pivots: list[tuple[int, dict[int, int], int]] = field(default_factory=list, repr=False)
    _pivot_cols: dict[int, int] = field(default_factory=dict, repr=False)
    equations: int = 0
    conflict: object = None

    def __post_init__(self):
        cols, self.columns = self.columns, []
        for c in cols:
            self.add_column(c)

    def add_column(self, label: Hashable) -> int:
        if label not in self._col_index:
            self._col_index[label] = len(self.columns)
            self.columns.append(label)
        return self._col_index[label]

    @property
    def rank(self) -> int:
        return len(self._pivots)

    @property
    def consistent(self) -> bool:
        return self.conflict is None

    def reduce(self, coeffs: Mapping[Hashable, object], rhs=0) -> tuple[dict[int, int], int]:
        fc = {self.add_column(k): Fraction(v) for k, v in coeffs.items() if v}
        row, b = _integral(fc, Fraction(rhs))
        for pcol, prow, pb in self._pivots:
            a = row.get(pcol)
            if not a:
                continue
            p = prow[pcol]
            new = {k: v * p for k, v in row.items()}
            for k, v in prow.items():
                nv = new.get(k, 0) - a * v
                if nv:
                    new[k] = nv
                else:
                    new.pop(k, None)
            row, b = _primitive(new, b * p - a * pb)
        return row, b

    def add_equation(self, coeffs: Mapping[Hashable, object], rhs=0, label=None) -> bool:
        """Add one equation; return False if it is inconsistent with the earlier ones."""
        self.equations += 1
        row, b = self.reduce(coeffs, rhs)
        if not row:
            if b and self.conflict is None:
                self.conflict = label if label is not None else self.equations - 1
            return not b
        pcol = min(row)
        if row[pcol] < 0:
            row = {k: -v for k, v in row.items()}
            b = -b
        self._pivot_cols[pcol] = len(self._pivots)
        self._pivots.append((pcol, row, b))
        return True

    def free_columns(self) -> list[int]:
        return [i for i in range(len(self.columns)) if i not in self._pivot_cols]

    def _back_substitute(self, free_values: Mapping[int, Fraction], homogeneous: bool) -> list[Fraction]:
        x = [Fraction(0)] * len(self.columns)
        for k, v in free_values.items():
            x[k] = Fraction(v)
        # later pivot rows never contain earlier pivot columns
        for pcol, row, b in reversed(self._pivots):
            acc = Fraction(0 if homogeneous else b)
            for k, v in row.items():
                if k != pcol:
                    acc -= v * x[k]
            x[pcol] = acc / row[pcol]
        return x

    def solve(self) -> dict | None:
        """A particular solution (free unknowns set to 0), or None if inconsistent."""
        if not self.consistent:
            return None
        x = self._back_substitute({}, homogeneous=False)
        return {self.columns[i]: v for i, v in enumerate(x)}

    def kernel(self) -> list[dict]:
        basis = []
        for f in self.free_columns():
            x = self._back_substitute({f: Fraction(1)}, homogeneous=True)
            basis.append({self.columns[i]: v for i, v in enumerate(x) if v})
        return basis


def rank_of_rows(rows) -> int:
    """Rank of a list of sparse rows (mappings label -> rational)."""
    system = LinearSystem()
    for r in rows:
        system.add_equation(r, 0)
    return system.rank
