"""
Text syntax for Scalars and algebra elements.

Grammar (whitespace insensitive, juxtaposition means multiplication):

    expr   := [+|-] term {(+|-) term}
    term   := power {[*|/] power}
    power  := atom [(^|**) signed_int]
    atom   := number | symbol | "(" expr ")"
    number := digits ["/" digits]
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple, Union
import logging

import pyparsing as pp

from modules.errors import DivisionByZeroError, NotationError
from modules.scalars import FIELD, ONE, P, Q, Scalar, is_ground, monic_parts, scalar, ground_value

logger = logging.getLogger(__name__)


@dataclass
class Num:
    value: Fraction
    loc: int


@dataclass
class Sym:
    name: str
    loc: int


@dataclass
class Pow:
    base: object
    exponent: int
    loc: int


@dataclass
class Prod:
    first: object
    rest: List[Tuple[str, object]]
    loc: int


@dataclass
class Sum:
    items: List[Tuple[str, object]]
    loc: int


def _build_grammar() -> pp.ParserElement:
    expr = pp.Forward()
    number = pp.Regex(r"\d+(?:/\d+)?").set_parse_action(lambda s, loc, t: Num(Fraction(t[0]), loc))
    symbol = pp.Word(pp.alphas, pp.alphanums + "_").set_parse_action(lambda s, loc, t: Sym(t[0], loc))
    signed_int = pp.Regex(r"[+-]?\d+").set_parse_action(lambda t: int(t[0]))
    atom = number | symbol | (pp.Suppress("(") + expr + pp.Suppress(")"))
    power_op = pp.Suppress(pp.Literal("**") | pp.Literal("^"))
    power = (atom + pp.Opt(power_op + signed_int)).set_parse_action(
        lambda s, loc, t: Pow(t[0], t[1], loc) if len(t) == 2 else t[0])
    product = (power + pp.ZeroOrMore(pp.Opt(pp.one_of("* /"), default="*") + power)).set_parse_action(
        lambda s, loc, t: t[0] if len(t) == 1 else Prod(t[0], list(zip(t[1::2], t[2::2])), loc))
    expr <<= (pp.Opt(pp.one_of("+ -"), default="+") + product
              + pp.ZeroOrMore(pp.one_of("+ -") + product)).set_parse_action(
        lambda s, loc, t: Sum(list(zip(t[0::2], t[1::2])), loc))
    return expr + pp.StringEnd()


GRAMMAR = _build_grammar()


def _parse_tree(text: str):
    try:
        return GRAMMAR.parse_string(text, parse_all=True)[0]
    except pp.ParseBaseException as e:
        logger.debug(f"parse failure in {text!r} at {e.loc}")
        raise NotationError(f"cannot parse: {e.msg}", text, e.loc, e.lineno, e.col) from None


def _located_error(message: str, text: str, loc: int) -> NotationError:
    return NotationError(message, text, loc, pp.lineno(loc, text), pp.col(loc, text))


class _Evaluator:
    """Evaluates a parse tree with a symbol table; values are Scalars or AElements"""

    def __init__(self, text: str, symbols: Dict[str, object], algebra=None):
        self.text = text
        self.symbols = symbols
        self.algebra = algebra

    def lift(self, value):
        if self.algebra is not None and isinstance(value, Scalar):
            return self.algebra.const(value)
        return value

    def evaluate(self, node):
        if isinstance(node, Num):
            return scalar(node.value)
        if isinstance(node, Sym):
            if node.name not in self.symbols:
                raise _located_error(f"unknown symbol {node.name!r}", self.text, node.loc)
            return self.symbols[node.name]
        if isinstance(node, Pow):
            base = self.evaluate(node.base)
            try:
                return base ** node.exponent
            except (ZeroDivisionError, ValueError) as e:
                raise _located_error(f"invalid power: {e}", self.text, node.loc) from None
        if isinstance(node, Prod):
            value = self.evaluate(node.first)
            for op, child in node.rest:
                operand = self.evaluate(child)
                if op == "*":
                    value = self._multiply(value, operand)
                else:
                    value = self._divide(value, operand, child.loc)
            return value
        if isinstance(node, Sum):
            total = None
            for sign, child in node.items:
                value = self.evaluate(child)
                if sign == "-":
                    value = -value
                total = value if total is None else self._add(total, value)
            return total
        raise TypeError(f"unexpected parse node {node!r}")

    def _add(self, a, b):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a + b
        return self.lift(a) + self.lift(b)

    def _multiply(self, a, b):
        if isinstance(a, Scalar) and isinstance(b, Scalar):
            return a * b
        return self.lift(a) * self.lift(b)

    def _divide(self, a, b, loc: int):
        if not isinstance(b, Scalar):
            if not b.is_constant():
                raise _located_error("division by a non-constant element", self.text, loc)
            b = b.constant_term()
        if not b:
            raise _located_error("division by zero", self.text, loc)
        return self._multiply(a, ONE / b)


def parse_scalar(text: str, q: Optional["Scalar"] = None, p: Optional["Scalar"] = None) -> "Scalar":
    """Parse a Scalar; q and p default to the formal parameters"""
    tree = _parse_tree(text)
    symbols = {"q": Q if q is None else q, "p": P if p is None else p}
    value = _Evaluator(text, symbols).evaluate(tree)
    return scalar(value)


def parse_a_element(text: str, algebra, q: Optional["Scalar"] = None, p: Optional["Scalar"] = None):
    """Parse an element of the base algebra"""
    tree = _parse_tree(text)
    symbols = {"q": Q if q is None else q, "p": P if p is None else p}
    for index, name in enumerate(algebra.variable_names()):
        symbols[name] = algebra.generator(index)
    try:
        value = _Evaluator(text, symbols, algebra).evaluate(tree)
    except DivisionByZeroError as e:
        raise NotationError(str(e), text, 0) from None
    if isinstance(value, Scalar):
        value = algebra.const(value)
    return value


# -- rendering -------------------------------------------------------------

def _render_rational(value) -> str:
    numerator, denominator = int(value.numerator), int(value.denominator)
    if denominator == 1:
        return str(numerator)
    return f"{numerator}/{denominator}"


def render_parameter_poly(poly) -> str:
    """Polynomial in q, p in descending grlex order, e.g. q^2+q+1"""
    if not poly:
        return "0"
    names = [str(s) for s in poly.ring.symbols]
    pieces = []
    for monom, coeff in poly.terms():
        factors = [name if e == 1 else f"{name}^{e}" for name, e in zip(names, monom) if e]
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        text = _render_rational(magnitude)
        if factors:
            body = "*".join(factors) if text == "1" else text + "*" + "*".join(factors)
        else:
            body = text
        pieces.append(("-" if negative else "+", body))
    head_sign, head = pieces[0]
    out = ("-" if head_sign == "-" else "") + head
    for sign, body in pieces[1:]:
        out += sign + body
    return out


def render_scalar(value: "Scalar") -> str:
    """Canonical report form "(num)/den" with a monic denominator"""
    numerator, denominator = monic_parts(value)
    den = render_parameter_poly(denominator)
    if len(denominator.terms()) > 1:
        den = f"({den})"
    return f"({render_parameter_poly(numerator)})/{den}"


def render_coefficient(value: "Scalar") -> str:
    """Compact form used inside elements: 3/2, -1, (q+1), (q)/(q-1)"""
    if is_ground(value):
        return _render_rational(ground_value(value))
    numerator, denominator = monic_parts(value)
    if denominator == denominator.ring.one:
        return f"({render_parameter_poly(numerator)})"
    return f"({render_parameter_poly(numerator)})/({render_parameter_poly(denominator)})"


def render_monomial(monomial, names: List[str]) -> str:
    factors = []
    for name, exponent in zip(names, monomial):
        if exponent == 0:
            continue
        factors.append(name if exponent == 1 else f"{name}^{exponent}")
    return " ".join(factors)


def render_a_element(element) -> str:
    if not element.terms:
        return "0"
    names = element.algebra.variable_names()
    out = ""
    for monomial, coefficient in element.sorted_terms():
        mono = render_monomial(monomial, names)
        sign = "+"
        if is_ground(coefficient):
            value = ground_value(coefficient)
            if value < 0:
                sign = "-"
                coefficient = -coefficient
            coeff = _render_rational(ground_value(coefficient))
        else:
            coeff = render_coefficient(coefficient)
        if mono and coeff == "1":
            body = mono
        elif mono:
            body = f"{coeff}*{mono}"
        else:
            body = coeff
        if not out:
            out = ("-" if sign == "-" else "") + body
        else:
            out += f" {sign} {body}"
    return out


def render_e_element(element) -> str:
    """Sum of (a)*x^i*y^j terms"""
    if not element.terms:
        return "0"
    pieces = []
    for (i, j), coefficient in sorted(element.terms.items()):
        pieces.append(f"({render_a_element(coefficient)})*x^{i}*y^{j}")
    return " + ".join(pieces)
