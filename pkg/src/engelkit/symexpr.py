"""Exact arithmetic on multivariate rational functions.

Values are quotients of multivariate polynomials with arbitrary-precision
integer coefficients, kept in canonical form (coprime numerator/denominator,
denominator with positive leading coefficient under graded lexicographic
order).  Everything is immutable and all operations are pure, so values can
be shared freely between threads.

Variables carry a *kind* that controls differentiation:

* coordinates ``x0..x5``, ``y0..y5`` -- ordinary chart coordinates,
* jet symbols ``t``, ``t_x0..t_x4``, ``t_x0x0..t_x4x4`` -- unknown-function
  symbols; differentiating ``t`` by ``xi`` yields ``t_xi`` and so on, capped
  at second order,
* group parameters ``s0..s8``, ``delta`` -- fibre coordinates of the
  structure bundle,
* free parameters -- any other identifier; transcendental constants with
  derivative zero.

The sparse polynomial arithmetic itself (including multivariate GCD for
cancellation) is delegated to :mod:`sympy.polys`; this module owns the
canonical-form contract, the variable-kind semantics, the grammar and the
evaluation rules.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Union

from sympy import ZZ
from sympy.polys.fields import field as _sympy_field
from sympy.polys.orderings import grlex

__all__ = [
    "VarKind",
    "Var",
    "Expr",
    "ExprError",
    "SyntaxExprError",
    "DivisionByZeroError",
    "PoleError",
    "UnassignedVariableError",
    "JetOrderError",
    "VariableKindError",
    "symbol",
    "integer",
    "rational",
    "parse",
    "diff",
    "partial",
    "substitute",
    "evaluate",
    "jet_order",
]

Number = Union[int, Fraction, float]


class ExprError(Exception):
    """Base class for errors raised by the symbolic layer."""


class SyntaxExprError(ExprError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} (at position {pos})")
        self.pos = pos


class DivisionByZeroError(ExprError):
    pass


class PoleError(ExprError):
    pass


class UnassignedVariableError(ExprError):
    pass


class JetOrderError(ExprError):
    pass


class VariableKindError(ExprError):
    pass


class VarKind(enum.Enum):
    COORDINATE = "coordinate"
    JET = "jet"
    GROUP = "group-parameter"
    FREE = "free-parameter"


_COORDINATES = {f"x{i}" for i in range(6)} | {f"y{i}" for i in range(6)}
_GROUP = {f"s{i}" for i in range(9)} | {"delta"}
_JET1_RE = re.compile(r"^t_x([0-4])$")
_JET2_RE = re.compile(r"^t_x([0-4])x([0-4])$")
_IDENT_RE = re.compile(r"^[A-Za-z_][A-Za-z_0-9]*$")


def jet_order(name: str) -> int | None:
    """Jet order of a jet symbol name, or None for non-jet names."""
    if name == "t":
        return 0
    if _JET1_RE.match(name):
        return 1
    if _JET2_RE.match(name):
        return 2
    return None


def canonical_jet_name(indices: Iterable[int]) -> str:
    idx = sorted(indices)
    if not all(0 <= i <= 4 for i in idx):
        raise JetOrderError(f"jet indices out of range: {idx}")
    if len(idx) == 0:
        return "t"
    if len(idx) == 1:
        return f"t_x{idx[0]}"
    if len(idx) == 2:
        return f"t_x{idx[0]}x{idx[1]}"
    raise JetOrderError("jet symbols beyond second order are not supported")


def default_kind(name: str) -> VarKind:
    if name in _COORDINATES:
        return VarKind.COORDINATE
    if jet_order(name) is not None:
        return VarKind.JET
    if name in _GROUP:
        return VarKind.GROUP
    return VarKind.FREE


@dataclass(frozen=True)
class Var:
    name: str
    kind: VarKind


def _canonicalize_name(name: str) -> str:
    m = _JET2_RE.match(name)
    if m:
        return canonical_jet_name([int(m.group(1)), int(m.group(2))])
    return name


def make_var(name: str, kind: VarKind | None = None) -> Var:
    """Resolve a variable name to a Var, canonicalizing jet index order."""
    name = _canonicalize_name(name)
    if not _IDENT_RE.match(name):
        raise ExprError(f"invalid variable name {name!r}")
    dk = default_kind(name)
    if kind is None:
        kind = dk
    elif dk is not VarKind.FREE and kind is not dk:
        raise VariableKindError(
            f"variable {name!r} has reserved kind {dk.value}, cannot declare as {kind.value}"
        )
    return Var(name, kind)


@lru_cache(maxsize=None)
def _field_for(names: tuple[str, ...]):
    if not names:
        fld = _sympy_field("", ZZ, grlex)[0]
        return fld, {}
    parts = _sympy_field(",".join(names), ZZ, grlex)
    fld, gens = parts[0], parts[1:]
    return fld, dict(zip(names, gens))


def _merge_vars(a: tuple[Var, ...], b: tuple[Var, ...]) -> tuple[Var, ...]:
    byname: dict[str, Var] = {v.name: v for v in a}
    for v in b:
        prev = byname.get(v.name)
        if prev is None:
            byname[v.name] = v
        elif prev.kind is not v.kind:
            raise VariableKindError(
                f"conflicting kinds for variable {v.name!r}: "
                f"{prev.kind.value} vs {v.kind.value}"
            )
    return tuple(sorted(byname.values(), key=lambda v: v.name))


class Expr:
    """Canonical multivariate rational function with exact integer coefficients."""

    __slots__ = ("_elem", "_vars")

    def __init__(self, elem, variables: tuple[Var, ...]):
        self._elem = elem
        self._vars = variables

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Expr":
        fld, _ = _field_for(())
        return Expr(fld.ground_new(n), ())

    @staticmethod
    def from_fraction(q: Fraction) -> "Expr":
        fld, _ = _field_for(())
        return Expr(fld.ground_new(q.numerator) / fld.ground_new(q.denominator), ())

    @staticmethod
    def symbol(name: str, kind: VarKind | None = None) -> "Expr":
        var = make_var(name, kind)
        fld, gens = _field_for((var.name,))
        return Expr(gens[var.name], (var,))

    # -- plumbing ----------------------------------------------------------

    def _in_field(self, variables: tuple[Var, ...]):
        if variables == self._vars:
            return self._elem
        fld, _ = _field_for(tuple(v.name for v in variables))
        return self._elem.set_field(fld)

    @staticmethod
    def _coerce(value: "Expr | Number") -> "Expr":
        if isinstance(value, Expr):
            return value
        if isinstance(value, bool):
            raise ExprError("booleans are not valid scalars")
        if isinstance(value, int):
            return Expr.from_int(value)
        if isinstance(value, Fraction):
            return Expr.from_fraction(value)
        raise ExprError(f"cannot coerce {value!r} to Expr")

    def _binary(self, other: "Expr | Number", op: str) -> "Expr":
        other = Expr._coerce(other)
        variables = _merge_vars(self._vars, other._vars)
        a = self._in_field(variables)
        b = other._in_field(variables)
        if op == "+":
            return Expr(a + b, variables)
        if op == "-":
            return Expr(a - b, variables)
        if op == "*":
            return Expr(a * b, variables)
        if op == "/":
            if not b:
                raise DivisionByZeroError("division by the zero expression")
            return Expr(a / b, variables)
        raise AssertionError(op)

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        return self._binary(other, "+")

    __radd__ = __add__

    def __sub__(self, other):
        return self._binary(other, "-")

    def __rsub__(self, other):
        return Expr._coerce(other)._binary(self, "-")

    def __mul__(self, other):
        return self._binary(other, "*")

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self._binary(other, "/")

    def __rtruediv__(self, other):
        return Expr._coerce(other)._binary(self, "/")

    def __neg__(self):
        return Expr(-self._elem, self._vars)

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            raise ExprError("exponents must be integers")
        if exponent < 0 and self.is_zero:
            raise DivisionByZeroError("negative power of the zero expression")
        return Expr(self._elem ** exponent, self._vars)

    # -- predicates and queries --------------------------------------------

    @property
    def is_zero(self) -> bool:
        return not self._elem

    @property
    def is_constant(self) -> bool:
        return not self.occurring_vars()

    def occurring_vars(self) -> tuple[Var, ...]:
        """Variables that actually appear in the canonical form."""
        used = []
        for i, var in enumerate(self._vars):
            if self._elem.numer.degree(i) > 0 or self._elem.denom.degree(i) > 0:
                used.append(var)
        return tuple(used)

    def numerator(self) -> "Expr":
        return Expr(self._elem.field.new(self._elem.numer, self._elem.field.ring.one), self._vars)

    def denominator(self) -> "Expr":
        return Expr(self._elem.field.new(self._elem.denom, self._elem.field.ring.one), self._vars)

    def as_fraction(self) -> Fraction:
        if not self.is_constant:
            raise ExprError("expression is not a rational constant")
        num = self._elem.numer.coeff(1)
        den = self._elem.denom.coeff(1)
        return Fraction(int(num), int(den))

    def _trim(self) -> "Expr":
        """Restrict to the occurring variables (canonical representative)."""
        occ = self.occurring_vars()
        if occ == self._vars:
            return self
        fld, _ = _field_for(tuple(v.name for v in occ))
        return Expr(self._elem.set_field(fld), occ)

    def _key(self):
        e = self._trim()
        num = tuple(sorted((mon, int(c)) for mon, c in e._elem.numer.terms()))
        den = tuple(sorted((mon, int(c)) for mon, c in e._elem.denom.terms()))
        return (tuple(v.name for v in e._vars), num, den)

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Expr._coerce(other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self._binary(other, "-").is_zero

    def __hash__(self):
        return hash(self._key())

    def __bool__(self):
        return not self.is_zero

    # -- calculus ----------------------------------------------------------

    def partial(self, name: str) -> "Expr":
        """Plain partial derivative with respect to a single variable."""
        name = _canonicalize_name(name)
        for i, var in enumerate(self._vars):
            if var.name == name:
                return Expr(self._elem.diff(self._elem.field.gens[i]), self._vars)
        return Expr.from_int(0)

    def diff(self, name: str) -> "Expr":
        """Total derivative by a coordinate, with the jet chain rule.

        Differentiating ``t`` by ``xi`` yields ``t_xi`` and differentiating
        ``t_xj`` yields ``t_xixj``; expressions already containing
        second-order jets are rejected, since the result would need third
        order.
        """
        var = make_var(name)
        if var.kind is not VarKind.COORDINATE:
            raise VariableKindError(f"can only take total derivatives by coordinates, not {name!r}")
        result = self.partial(var.name)
        m = re.match(r"^x([0-4])$", var.name)
        if m is None:
            return result  # jets depend on x0..x4 only
        xi = int(m.group(1))
        for jet in self.occurring_vars():
            order = jet_order(jet.name)
            if order is None:
                continue
            if order >= 2:
                raise JetOrderError(
                    f"differentiating {jet.name} would create a jet of order 3"
                )
            if order == 0:
                chain = canonical_jet_name([xi])
            else:
                j = int(_JET1_RE.match(jet.name).group(1))
                chain = canonical_jet_name([j, xi])
            result = result + self.partial(jet.name) * Expr.symbol(chain)
        return result

    def substitute(self, mapping: Mapping[str, "Expr | Number"]) -> "Expr":
        """Replace variables by expressions; unmentioned variables survive."""
        repl = {_canonicalize_name(k): Expr._coerce(v) for k, v in mapping.items()}
        if not any(v.name in repl for v in self.occurring_vars()):
            return self

        def image(var: Var) -> Expr:
            return repl.get(var.name, Expr(
                _field_for((var.name,))[1][var.name], (var,)))

        def eval_poly(poly) -> Expr:
            total = Expr.from_int(0)
            for mon, coeff in poly.terms():
                term = Expr.from_int(int(coeff))
                for var, exp in zip(self._vars, mon):
                    if exp:
                        term = term * image(var) ** exp
                total = total + term
            return total

        num = eval_poly(self._elem.numer)
        den = eval_poly(self._elem.denom)
        if den.is_zero:
            raise DivisionByZeroError("substitution sends the denominator to zero")
        return num / den

    def evaluate(self, point: Mapping[str, Number]) -> Fraction | float:
        """Evaluate at a point; exact when all values are rational."""
        values: dict[str, Number] = dict(point)
        occurring = self.occurring_vars()
        missing = [v.name for v in occurring if v.name not in values]
        if missing:
            raise UnassignedVariableError(f"unassigned variables: {', '.join(missing)}")
        exact = all(not isinstance(values[v.name], float) for v in occurring)

        def eval_poly(poly):
            total = Fraction(0) if exact else 0.0
            for mon, coeff in poly.terms():
                term = Fraction(int(coeff)) if exact else float(coeff)
                for var, exp in zip(self._vars, mon):
                    if exp:
                        val = values[var.name]
                        term *= (Fraction(val) if exact else float(val)) ** exp
                total += term
            return total

        den = eval_poly(self._elem.denom)
        if den == 0:
            raise PoleError("denominator vanishes at the evaluation point")
        return eval_poly(self._elem.numer) / den

    # -- printing ----------------------------------------------------------

    def __str__(self) -> str:
        return _print_expr(self)

    def __repr__(self) -> str:
        return f"Expr({_print_expr(self)})"


# ---------------------------------------------------------------------------
# printing (grammar-conformant, deterministic)
# ---------------------------------------------------------------------------


def _print_monomial(names, mon, coeff: int) -> str:
    parts = []
    if coeff == -1:
        sign = "-"
    elif coeff < 0:
        sign = "-"
        parts.append(str(-coeff))
    elif coeff == 1:
        sign = ""
    else:
        sign = ""
        parts.append(str(coeff))
    for name, exp in zip(names, mon):
        if exp == 1:
            parts.append(name)
        elif exp > 1:
            parts.append(f"{name}^{exp}")
    if not parts:
        parts.append("1")
    return sign + "*".join(parts)


def _print_poly(names, poly) -> str:
    terms = poly.terms()
    if not terms:
        return "0"
    pieces = []
    for i, (mon, coeff) in enumerate(terms):
        text = _print_monomial(names, mon, int(coeff))
        if i == 0:
            pieces.append(text)
        elif text.startswith("-"):
            pieces.append(" - " + text[1:])
        else:
            pieces.append(" + " + text)
    return "".join(pieces)


def _needs_parens(names, poly) -> bool:
    terms = poly.terms()
    if len(terms) != 1:
        return True
    mon, coeff = terms[0]
    factors = sum(1 for e in mon if e) + (0 if int(coeff) in (1, -1) else 1)
    return int(coeff) < 0 or factors > 1


def _print_expr(e: Expr) -> str:
    names = [v.name for v in e._vars]
    num, den = e._elem.numer, e._elem.denom
    if den == e._elem.field.ring.one:
        return _print_poly(names, num)
    num_text = _print_poly(names, num)
    den_text = _print_poly(names, den)
    if _needs_parens(names, num):
        num_text = f"({num_text})"
    if _needs_parens(names, den):
        den_text = f"({den_text})"
    return f"{num_text}/{den_text}"


# ---------------------------------------------------------------------------
# parsing
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_pos = len(text) - len(stripped)
            raise SyntaxExprError(f"unexpected character {text[bad_pos]!r}", bad_pos)
        if m.group("int") is not None:
            tokens.append(("int", m.group("int"), m.start("int")))
        elif m.group("ident") is not None:
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser for the expression grammar.

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := atom ("^" integer)? | "-" factor
    atom   := integer | identifier | "(" expr ")"
    """

    def __init__(self, text: str, kinds: Mapping[str, VarKind]):
        self.tokens = _tokenize(text)
        self.kinds = kinds
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def advance(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect_op(self, op: str):
        kind, value, pos = self.peek()
        if kind != "op" or value != op:
            raise SyntaxExprError(f"expected {op!r}", pos)
        return self.advance()

    def parse(self) -> Expr:
        value = self.expr()
        kind, _, pos = self.peek()
        if kind != "end":
            raise SyntaxExprError("trailing input", pos)
        return value

    def expr(self) -> Expr:
        value = self.term()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if op == "+" else value - rhs
            else:
                return value

    def term(self) -> Expr:
        value = self.factor()
        while True:
            kind, op, _ = self.peek()
            if kind == "op" and op in "*/":
                self.advance()
                pos = self.peek()[2]
                rhs = self.factor()
                if op == "*":
                    value = value * rhs
                else:
                    if rhs.is_zero:
                        raise SyntaxExprError("division by zero", pos)
                    value = value / rhs
            else:
                return value

    def factor(self) -> Expr:
        kind, op, _ = self.peek()
        if kind == "op" and op == "-":
            self.advance()
            return -self.factor()
        value = self.atom()
        kind, op, pos = self.peek()
        if kind == "op" and op == "^":
            self.advance()
            sign = 1
            kind, text, pos = self.peek()
            if kind == "op" and text == "-":
                sign = -1
                self.advance()
                kind, text, pos = self.peek()
            if kind != "int":
                raise SyntaxExprError("expected integer exponent", pos)
            self.advance()
            exponent = sign * int(text)
            if exponent < 0 and value.is_zero:
                raise SyntaxExprError("division by zero", pos)
            value = value ** exponent
        return value

    def atom(self) -> Expr:
        kind, text, pos = self.advance()
        if kind == "int":
            return Expr.from_int(int(text))
        if kind == "ident":
            try:
                return Expr.symbol(text, self.kinds.get(_canonicalize_name(text)))
            except ExprError as exc:
                raise SyntaxExprError(str(exc), pos) from exc
        if kind == "op" and text == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        raise SyntaxExprError("expected a number, identifier or parenthesis", pos)


def parse(text: str, context: Mapping[str, VarKind | str] | None = None) -> Expr:
    """Parse expression text; undeclared identifiers default to free parameters."""
    kinds: dict[str, VarKind] = {}
    for name, kind in (context or {}).items():
        kinds[_canonicalize_name(name)] = VarKind(kind) if isinstance(kind, str) else kind
    return _Parser(text, kinds).parse()


# ---------------------------------------------------------------------------
# module-level convenience API
# ---------------------------------------------------------------------------


def symbol(name: str, kind: VarKind | str | None = None) -> Expr:
    if isinstance(kind, str):
        kind = VarKind(kind)
    return Expr.symbol(name, kind)


def integer(n: int) -> Expr:
    return Expr.from_int(n)


def rational(p: int, q: int = 1) -> Expr:
    if q == 0:
        raise DivisionByZeroError("zero denominator")
    return Expr.from_fraction(Fraction(p, q))


def diff(e: Expr, name: str) -> Expr:
    return e.diff(name)


def partial(e: Expr, name: str) -> Expr:
    return e.partial(name)


def substitute(e: Expr, mapping: Mapping[str, Expr | Number]) -> Expr:
    return e.substitute(mapping)


def evaluate(e: Expr, point: Mapping[str, Number]) -> Fraction | float:
    return e.evaluate(point)
