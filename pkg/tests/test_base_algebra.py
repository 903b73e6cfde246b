import pytest
from hypothesis import given, settings, strategies as st

from modules.base_algebra import (
    Automorphism,
    BaseAlgebra,
    T_lambda,
    T_tilde,
    Tprime_q,
    Tprime_qinv,
    apply_automorphism,
    delta_qr,
    derivative,
    difference_operator,
    divided_difference,
    inverse_difference,
    q_derivative,
    random_polynomial,
)
from modules.errors import DegenerateParameterError, UnsupportedAutomorphismError
from modules.scalars import ONE, Q, rational, scalar
from utily.helpers import make_rng

coefficients = st.lists(st.integers(min_value=-6, max_value=6), min_size=1, max_size=5)


def _poly(algebra, values):
    return algebra.element({(n,): scalar(c) for n, c in enumerate(values)})


def test_presentation_checks():
    with pytest.raises(ValueError):
        BaseAlgebra("polynomial", 2)
    with pytest.raises(ValueError):
        BaseAlgebra("quantum_affine", 2, [[ONE, rational(2)], [rational(2), ONE]])
    with pytest.raises(ValueError):
        BaseAlgebra("polynomial").monomial((-1,))


def test_quantum_plane_commutation(quantum_plane):
    t1, t2 = quantum_plane.generators()
    assert t2 * t1 == (t1 * t2).scale(2)
    assert (t2 * t2) * t1 == (t1 * t2 * t2).scale(4)
    assert len(quantum_plane.monomials_of_degree(2)) == 3


def test_laurent_generators_include_the_inverse(laurent):
    generators = laurent.generators()
    assert len(generators) == 2
    assert generators[0] * generators[1] == laurent.one()


def test_difference_operators(polynomial):
    t = polynomial.t
    assert T_lambda(t * t, 2) == t.scale(4) + polynomial.const(4)
    assert derivative(t ** 3) == (t * t).scale(3)
    assert T_tilde(t * t, 1, 0) == (t * t).scale(Q * Q - 1)
    assert delta_qr(t ** 2, 1) == t.scale(1 + ONE / Q)
    assert q_derivative(t ** 2, 0) == t.scale(2)
    assert difference_operator("T_lambda", t, lam=rational(3)) == polynomial.const(3)
    with pytest.raises(ValueError):
        difference_operator("nabla", t)


@pytest.mark.parametrize("operator", [T_lambda, T_tilde, Tprime_q, Tprime_qinv, derivative, delta_qr])
def test_univariate_operators_reject_the_quantum_plane(quantum_plane, operator):
    t1, _ = quantum_plane.generators()
    args = {T_lambda: (1,), T_tilde: (1, 0), delta_qr: (1,)}.get(operator, ())
    with pytest.raises(ValueError, match="univariate"):
        operator(t1, *args)


def test_primed_operators(polynomial):
    t = polynomial.t
    assert Tprime_q(t * t) == (t * t).scale(Q * Q - ONE / Q)
    assert Tprime_qinv(t) == t.scale(ONE / Q - Q)


def test_inverse_difference_normalisation(polynomial):
    with pytest.raises(DegenerateParameterError):
        inverse_difference(polynomial.t, 0)
    S = inverse_difference(polynomial.const(1), 2)
    assert S == polynomial.t.scale(rational(1, 2))


@settings(max_examples=40, deadline=None)
@given(coefficients, st.integers(min_value=1, max_value=4))
def test_inverse_difference_solves_the_equation(values, lam):
    polynomial = BaseAlgebra("polynomial")
    P = _poly(polynomial, values)
    S = inverse_difference(P, lam)
    assert T_lambda(S, lam) == P
    assert S.evaluate(0) == 0


def test_divided_difference_for_shifts(polynomial):
    f = Automorphism.translation(polynomial, 1)
    g = Automorphism.identity(polynomial)
    t = polynomial.t
    expected = (t * t).scale(3) + t.scale(3) + polynomial.one()
    assert divided_difference((3,), f, g) == expected
    assert divided_difference((0,), f, g) == polynomial.zero()


def test_divided_difference_for_laurent_scalings(laurent):
    f = Automorphism.scaling(laurent, [Q])
    g = Automorphism.identity(laurent)
    assert divided_difference((-1,), f, g) == laurent.monomial((-2,), -ONE / Q)


def test_automorphism_group_structure(polynomial):
    alpha = Automorphism.translation(polynomial, 2)
    assert alpha.compose(alpha.inverse()).is_identity
    assert alpha.power(3) == Automorphism.translation(polynomial, 6)
    assert alpha.power(-1) == alpha.inverse()
    affine = Automorphism(polynomial, (Q,), ONE)
    assert affine.power(2) == affine.compose(affine)
    assert Automorphism.compose_all([alpha, affine]).image_of_variable() == polynomial.t.scale(Q) + polynomial.const(3)


def test_shifts_do_not_act_on_laurent(laurent):
    with pytest.raises(UnsupportedAutomorphismError):
        Automorphism.translation(laurent, 1)


def test_random_polynomial_has_exact_degree(polynomial):
    rng = make_rng(7)
    for degree in range(4):
        assert random_polynomial(polynomial, rng, degree).degree() == degree


@settings(max_examples=40, deadline=None)
@given(coefficients, coefficients, st.sampled_from(["translation", "scaling", "affine"]))
def test_automorphisms_are_multiplicative(left, right, kind):
    polynomial = BaseAlgebra("polynomial")
    if kind == "translation":
        auto = Automorphism.translation(polynomial, rational(3, 2))
    elif kind == "scaling":
        auto = Automorphism.scaling(polynomial, [Q])
    else:
        auto = Automorphism(polynomial, (Q,), rational(-1))
    a, b = _poly(polynomial, left), _poly(polynomial, right)
    assert apply_automorphism(auto, a * b) == auto(a) * auto(b)
    assert auto.inverse()(auto(a)) == a


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_quantum_plane_is_associative(c, a1, a2, b1, b2):
    algebra = BaseAlgebra("quantum_affine", 2, [[ONE, Q], [ONE / Q, ONE]])
    x = algebra.monomial((a1, a2), c) + algebra.generator(1)
    y = algebra.monomial((b1, b2)) + algebra.generator(0)
    z = algebra.monomial((a2, b1), 2)
    assert (x * y) * z == x * (y * z)
