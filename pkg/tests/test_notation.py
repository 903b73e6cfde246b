import pytest

from modules.errors import NotationError
from modules.notation import (
    parse_a_element,
    parse_scalar,
    render_a_element,
    render_coefficient,
    render_scalar,
)
from modules.scalars import ONE, P, Q, rational


def test_parse_rational_and_parameters():
    assert parse_scalar("1/2") == rational(1, 2)
    assert parse_scalar("q^-1") == ONE / Q
    assert parse_scalar("2 q") == 2 * Q
    assert parse_scalar("(q + p)/2") == (Q + P) / 2
    assert parse_scalar("-3 + 5") == rational(2)


def test_parameters_can_be_specialised():
    assert parse_scalar("q^2 + 1", q=rational(2)) == rational(5)
    assert parse_scalar("p q", q=rational(3), p=rational(1, 3)) == ONE


def test_parse_polynomial(polynomial):
    value = parse_a_element("-(t-1)^2/4", polynomial)
    t = polynomial.t
    assert value == (t * t).scale(rational(-1, 4)) + t.scale(rational(1, 2)) - polynomial.const(rational(1, 4))


def test_parse_quantum_plane_respects_order(quantum_plane):
    t1, t2 = quantum_plane.generators()
    assert parse_a_element("t2 t1", quantum_plane) == (t1 * t2).scale(2)
    assert parse_a_element("t1 t2", quantum_plane) == t1 * t2


def test_laurent_negative_powers(laurent):
    value = parse_a_element("t - t^-1", laurent)
    assert value.min_degree() == -1
    assert value.degree() == 1


def test_negative_power_of_a_polynomial_variable(polynomial):
    with pytest.raises(NotationError):
        parse_a_element("t^-1", polynomial)


def test_division_by_a_non_constant(polynomial):
    with pytest.raises(NotationError) as info:
        parse_a_element("1/t", polynomial)
    assert info.value.position == 2


def test_errors_carry_the_position():
    with pytest.raises(NotationError) as info:
        parse_scalar("r + 1")
    assert info.value.position == 0
    assert info.value.column == 1
    with pytest.raises(NotationError) as info:
        parse_scalar("2 +")
    assert info.value.text == "2 +"


def test_rendering(polynomial):
    assert render_a_element(parse_a_element("t^2 - 3", polynomial)) == "t^2 - 3"
    assert render_a_element(polynomial.zero()) == "0"
    assert render_coefficient(rational(3, 2)) == "3/2"
    assert render_coefficient(Q + 1) == "(q+1)"
    assert render_scalar(rational(1)) == "(1)/1"
