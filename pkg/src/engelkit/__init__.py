"""Exact symbolic toolkit for marked contact Engel structures.

Computes adapted coframes, the relative invariants J, L, M, P, Q, R, S of a
marking function, the branch classification of homogeneous models, the Kerr
correspondence with the twistor space, the explicit split-form exceptional
Lie algebra in seven dimensions, and the Tanaka prolongation/cohomology
linear algebra -- all in exact arithmetic.
"""

from .symexpr import Expr, VarKind, parse, symbol, integer, rational

__version__ = "0.1.0"

__all__ = [
    "Expr",
    "VarKind",
    "parse",
    "symbol",
    "integer",
    "rational",
    "__version__",
]
