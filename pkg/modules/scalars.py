"""
Ground field arithmetic.

Scalars are elements of the rational function field Q(q, p) built with
sympy's sparse ``field``.  A generic parameter is the formal symbol itself;
a numeric specialisation is a rational constant living in the same field, so
every Scalar has one type no matter how the parameters were chosen.
"""
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple, Union
import logging

from sympy import QQ, field
from sympy.polys.orderings import grlex

from modules.errors import DegenerateParameterError, DivisionByZeroError

logger = logging.getLogger(__name__)

FIELD, Q, P = field("q,p", QQ, grlex)
# Q(q) alone, for matrices whose entries do not involve p
Q_FIELD, _ = field("q", QQ, grlex)
Scalar = type(Q)
ZERO = FIELD.zero
ONE = FIELD.one

Number = Union[int, Fraction, "Scalar"]


def scalar(value: Number) -> "Scalar":
    """Coerce an int, Fraction or Scalar into the field"""
    if isinstance(value, Scalar):
        return value
    if isinstance(value, Fraction):
        return FIELD(QQ(value.numerator, value.denominator))
    if isinstance(value, int):
        return FIELD(value)
    raise TypeError(f"cannot coerce {type(value).__name__} into a Scalar")


def rational(numerator: int, denominator: int = 1) -> "Scalar":
    if denominator == 0:
        raise DivisionByZeroError("rational with zero denominator")
    return FIELD(QQ(numerator, denominator))


def invert(a: "Scalar") -> "Scalar":
    if not a:
        raise DivisionByZeroError("division by zero: cannot invert the zero Scalar")
    return ONE / a


def scalar_arith(op: str, a: "Scalar", b: Optional["Scalar"] = None):
    """
    Apply one field operation.

    Args:
        op: one of add, sub, mul, div, neg, invert, equals
        a, b: operands (b unused for neg/invert)

    Returns:
        A reduced Scalar, or a bool for ``equals``
    """
    if op == "neg":
        return -a
    if op == "invert":
        return invert(a)
    if b is None:
        raise ValueError(f"operation {op!r} needs two operands")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a * invert(b)
    if op == "equals":
        return a == b
    raise ValueError(f"unknown scalar operation {op!r}")


def is_ground(a: "Scalar") -> bool:
    """True when the Scalar is a plain rational number"""
    return a.numer.is_ground and a.denom.is_ground


def involves_p(a: "Scalar") -> bool:
    return a.numer.degree(1) > 0 or a.denom.degree(1) > 0


def ground_value(a: "Scalar"):
    """Return a plain QQ element for a ground Scalar"""
    domain = FIELD.ring.domain
    if not a:
        return domain.zero
    return domain.quo(a.numer.LC, a.denom.LC)


def to_fraction(a: "Scalar") -> Fraction:
    value = ground_value(a)
    return Fraction(int(value.numerator), int(value.denominator))


def monic_parts(a: "Scalar") -> Tuple:
    """Numerator and denominator scaled so that the denominator is monic in grlex order"""
    domain = FIELD.ring.domain
    lead = a.denom.LC
    factor = domain.quo(domain.one, lead)
    return a.numer.mul_ground(factor), a.denom.mul_ground(factor)


def q_power(q: "Scalar", exponent: int) -> "Scalar":
    if exponent < 0 and not q:
        raise DivisionByZeroError("negative power of a zero parameter")
    return q ** exponent


def q_integer(n: int, r: int, q: "Scalar" = Q) -> "Scalar":
    """
    Calculate (n)_{q^-r} = (q^{-rn} - 1) / (q^{-r} - 1).

    For n >= 0 this is the geometric sum of q^{-rs}, s < n.
    """
    if r == 0:
        raise DegenerateParameterError("q-integer with r = 0 has a vanishing denominator")
    base = q_power(q, -r)
    denominator = base - ONE
    if not denominator:
        raise DegenerateParameterError(f"q-integer denominator q^{-r} - 1 vanishes for this q")
    return (base ** n - ONE) / denominator


@dataclass(frozen=True)
class ParameterSet:
    """Values of the parameters q and p used by a scenario"""
    q: "Scalar" = Q
    p: "Scalar" = ONE

    def __post_init__(self):
        if not self.p:
            raise DegenerateParameterError("p must be invertible")
        if not self.q:
            raise DegenerateParameterError("q must be invertible")

    @property
    def generic_q(self) -> bool:
        return not is_ground(self.q)

    @property
    def generic_p(self) -> bool:
        return not is_ground(self.p)
