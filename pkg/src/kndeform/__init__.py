"""Exact arithmetic for deformation families of Witt, Virasoro, current and
affine algebras of Krichever-Novikov type over degenerating elliptic curves."""

from .exactnum import Poly, parse_poly
from .liecore import Element, FiniteLieAlgebra, Gen, Report, Window, sl2

__version__ = "0.1.0"

__all__ = ["Poly", "parse_poly", "Element", "FiniteLieAlgebra", "Gen", "Report", "Window", "sl2"]
