from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from modules.errors import DegenerateParameterError, DivisionByZeroError
from modules.scalars import (
    ONE,
    ZERO,
    P,
    Q,
    ParameterSet,
    invert,
    is_ground,
    q_integer,
    rational,
    scalar,
    scalar_arith,
    to_fraction,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=12)
parameters = st.sampled_from([Q, P, Q + P, Q * Q - 1, ONE / (Q + 1)])


def test_scalar_coerces_ints_and_fractions():
    assert scalar(Fraction(1, 2)) == rational(1, 2)
    assert scalar(3) == rational(6, 2)
    assert scalar(Q) is Q
    with pytest.raises(TypeError):
        scalar(0.5)


def test_zero_is_not_invertible():
    with pytest.raises(DivisionByZeroError):
        invert(ZERO)
    with pytest.raises(DivisionByZeroError):
        scalar_arith("div", ONE, ZERO)
    with pytest.raises(DivisionByZeroError):
        rational(1, 0)


def test_generic_parameters_are_not_ground():
    assert not is_ground(Q)
    assert not is_ground(Q / P)
    assert is_ground(rational(3, 4))
    assert to_fraction(rational(3, 4)) == Fraction(3, 4)


def test_q_integer_is_a_geometric_sum():
    assert q_integer(3, 1) == ONE + ONE / Q + ONE / (Q * Q)
    assert q_integer(2, -1) == ONE + Q
    assert q_integer(0, 2) == ZERO


def test_q_integer_rejects_degenerate_denominators():
    with pytest.raises(DegenerateParameterError):
        q_integer(3, 0)
    with pytest.raises(DegenerateParameterError):
        q_integer(3, 2, ONE)


def test_parameter_set_needs_invertible_values():
    with pytest.raises(DegenerateParameterError):
        ParameterSet(p=ZERO)
    params = ParameterSet()
    assert params.generic_q
    assert not params.generic_p


def test_unknown_operation():
    with pytest.raises(ValueError):
        scalar_arith("pow", ONE, ONE)
    with pytest.raises(ValueError):
        scalar_arith("add", ONE)


@given(fractions, fractions, fractions)
def test_field_axioms_on_rationals(a, b, c):
    x, y, z = scalar(a), scalar(b), scalar(c)
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert scalar_arith("sub", x + y, y) == x
    assert scalar_arith("equals", x * y, y * x)
    if b:
        assert scalar_arith("div", x, y) * y == x
        assert to_fraction(scalar_arith("div", x, y)) == a / b


@given(parameters, fractions)
def test_inverse_of_rational_functions(value, shift):
    x = value + scalar(shift)
    if x:
        assert x * scalar_arith("invert", x) == ONE
        assert scalar_arith("neg", scalar_arith("neg", x)) == x
