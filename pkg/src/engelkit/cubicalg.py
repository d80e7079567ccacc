"""Pointwise linear algebra of the Legendrian twisted cubic.

The cubic is the image of the degree-three Veronese map in projective
3-space, cut out by three quadrics.  This module builds the associated
4-dimensional irreducible representation of GL(2), the conformal symplectic
form singled out by the Legendrian condition, and the stabilizer subalgebra
of the cubic cone -- all over exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .symexpr import Expr, integer, symbol

__all__ = [
    "veronese",
    "quadric_values",
    "irrep_rho",
    "rho_prime",
    "legendrian_symplectic",
    "stabilizer_subalgebra",
    "SymplecticSolution",
]

Mat = list[list[Fraction]]

#: Symmetric matrices of the three quadrics cutting out the cubic:
#: q1 = p1 p3 - p2^2,  q2 = p2 p4 - p3^2,  q3 = p2 p3 - p1 p4.
_QUADRICS = [
    [[0, 0, Fraction(1, 2), 0], [0, -1, 0, 0], [Fraction(1, 2), 0, 0, 0], [0, 0, 0, 0]],
    [[0, 0, 0, 0], [0, 0, 0, Fraction(1, 2)], [0, 0, -1, 0], [0, Fraction(1, 2), 0, 0]],
    [[0, 0, 0, Fraction(-1, 2)], [0, 0, Fraction(1, 2), 0],
     [0, Fraction(1, 2), 0, 0], [Fraction(-1, 2), 0, 0, 0]],
]


def veronese(s, u) -> list:
    """The degree-three Veronese image (s^3, s^2 u, s u^2, u^3)."""
    return [s ** 3, s ** 2 * u, s * u ** 2, u ** 3]


def quadric_values(p: Sequence) -> tuple:
    """Values of the three quadrics at a 4-vector."""
    return (p[0] * p[2] - p[1] ** 2,
            p[1] * p[3] - p[2] ** 2,
            p[1] * p[2] - p[0] * p[3])


def irrep_rho(m: Sequence[Sequence]) -> list[list]:
    """The 4x4 matrix of a 2x2 matrix in the cubic representation.

    Works for arbitrary (also singular) entries of any exact scalar type.
    """
    al, be = m[0][0], m[0][1]
    ga, de = m[1][0], m[1][1]
    return [
        [al ** 3, 3 * al ** 2 * be, 3 * al * be ** 2, be ** 3],
        [al ** 2 * ga, al ** 2 * de + 2 * al * be * ga,
         2 * al * be * de + be ** 2 * ga, be ** 2 * de],
        [al * ga ** 2, 2 * al * de * ga + be * ga ** 2,
         al * de ** 2 + 2 * be * de * ga, be * de ** 2],
        [ga ** 3, 3 * de * ga ** 2, 3 * de ** 2 * ga, de ** 3],
    ]


def rho_prime(m: Sequence[Sequence[Fraction]]) -> Mat:
    """Derivative of the representation at the identity, applied to a 2x2 matrix.

    Computed exactly by differentiating the image of 1 + eps*m at eps = 0.
    """
    eps = symbol("eps")
    perturbed = [[integer(1) + eps * Fraction(m[0][0]), eps * Fraction(m[0][1])],
                 [eps * Fraction(m[1][0]), integer(1) + eps * Fraction(m[1][1])]]
    image = irrep_rho(perturbed)
    out = []
    for row in image:
        out.append([entry.partial("eps").substitute({"eps": 0}).as_fraction()
                    for entry in row])
    return out


def _gl2_basis() -> list[Mat]:
    return [rho_prime([[1, 0], [0, 0]]), rho_prime([[0, 1], [0, 0]]),
            rho_prime([[0, 0], [1, 0]]), rho_prime([[0, 0], [0, 1]])]


@dataclass
class SymplecticSolution:
    """Solution space of the Legendrian condition on skew forms."""

    basis: list[dict[tuple[int, int], Fraction]]

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def normalized(self) -> dict[tuple[int, int], Fraction]:
        """The representative scaled so the (1,4)-entry is 1 (0-indexed (0,3))."""
        if self.dimension != 1:
            raise ValueError("solution space is not a line")
        rep = self.basis[0]
        scale = rep[(0, 3)]
        if scale == 0:
            raise ValueError("cannot normalize: vanishing (1,4) component")
        return {k: v / scale for k, v in rep.items()}

    def normalized_matrix(self) -> Mat:
        rep = self.normalized()
        out = [[Fraction(0)] * 4 for _ in range(4)]
        for (i, j), v in rep.items():
            out[i][j] = v
            out[j][i] = -v
        return out


_PAIRS = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


def legendrian_symplectic() -> SymplecticSolution:
    """Skew forms vanishing on the tangent planes of the cubic cone.

    Evaluates the form on the two tangent vectors of the cone at the symbolic
    parameter point and solves the linear system given by the coefficients of
    the parameter monomials.
    """
    s, u = symbol("s"), symbol("u")
    X = [3 * s ** 2, 2 * s * u, u ** 2, integer(0)]
    Y = [integer(0), s ** 2, 2 * s * u, 3 * u ** 2]
    unknowns = [symbol(f"w{i}{j}") for i, j in _PAIRS]
    value = integer(0)
    for (i, j), w in zip(_PAIRS, unknowns):
        value = value + w * (X[i] * Y[j] - X[j] * Y[i])
    rows = []
    for deg_s in range(5):
        coeff = value
        for _ in range(deg_s):
            coeff = coeff.partial("s")
        for _ in range(4 - deg_s):
            coeff = coeff.partial("u")
        rows.append([coeff.partial(f"w{i}{j}").as_fraction() for i, j in _PAIRS])
    basis = linalg.nullspace(rows)
    return SymplecticSolution([dict(zip(_PAIRS, vec)) for vec in basis])


def stabilizer_subalgebra() -> list[Mat]:
    """Basis of the 4x4 matrices whose flow preserves the cubic cone.

    Requires that the derivative of each quadric along the linear action
    vanish on the cone, i.e. v(s,u)^T (Q m + m^T Q) v(s,u) = 0 identically in
    the parameters for each quadric Q.
    """
    s, u = symbol("s"), symbol("u")
    v = veronese(s, u)
    unknowns = [[symbol(f"m{i}{j}") for j in range(4)] for i in range(4)]
    rows = []
    for Q in _QUADRICS:
        value = integer(0)
        for i in range(4):
            for j in range(4):
                for k in range(4):
                    value = value + v[i] * Fraction(Q[i][j]) * unknowns[j][k] * v[k] * 2
        # collect coefficients of every parameter monomial s^a u^b, a+b = 6
        for deg_s in range(7):
            coeff = value
            for _ in range(deg_s):
                coeff = coeff.partial("s")
            for _ in range(6 - deg_s):
                coeff = coeff.partial("u")
            rows.append([coeff.partial(f"m{i}{j}").as_fraction()
                         for i in range(4) for j in range(4)])
    basis_vectors = linalg.nullspace(rows)
    return [[vec[4 * i: 4 * i + 4] for i in range(4)] for vec in basis_vectors]


def stabilizer_matches_representation() -> bool:
    """The stabilizer span coincides with the image of the 2x2 matrix algebra."""
    stab = [sum(m, []) for m in stabilizer_subalgebra()]
    rep = [sum(m, []) for m in _gl2_basis()]
    return linalg.span_equal(stab, rep)


def commutator(a: Mat, b: Mat) -> Mat:
    ab = linalg.mat_mul(a, b)
    ba = linalg.mat_mul(b, a)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(ab, ba)]


def stabilizer_is_closed_under_commutator() -> bool:
    basis = stabilizer_subalgebra()
    flat = [sum(m, []) for m in basis]
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            if not linalg.in_span(flat, sum(commutator(basis[i], basis[j]), [])):
                return False
    return True
