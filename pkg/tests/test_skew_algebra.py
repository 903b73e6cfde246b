from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

from modules.base_algebra import Automorphism, BaseAlgebra, apply_automorphism
from modules.errors import DegenerateParameterError
from modules.notation import parse_a_element
from modules.scalars import ONE, ZERO, Q
from modules.skew_algebra import (
    SkewAlgebra,
    casimir,
    lemma_commutation,
    lemma_left_y,
    lemma_right_x,
    normal_form_by_rewriting,
    relation_check,
    validate_spec,
)

SPECS = ["usl2", "shift_const", "quantum_u0", "generic_p", "laurent_spec"]


@pytest.mark.parametrize("name", SPECS)
def test_defining_relation(name, request):
    spec = request.getfixturevalue(name)
    x, y = spec.x(), spec.y()
    alpha_u = spec.embed(spec.alpha_power_u(1))
    assert y * x == (x * y).scale(spec.p) + spec.embed(spec.u) - alpha_u.scale(spec.p)


@pytest.mark.parametrize("name", SPECS)
def test_letters_move_past_coefficients(name, request):
    spec = request.getfixturevalue(name)
    a = spec.base.t if spec.base.variables == 1 else spec.base.monomial((1, 0))
    assert spec.x() * spec.embed(a) == spec.embed(apply_automorphism(spec.alpha, a)) * spec.x()
    assert spec.y() * spec.embed(a) == spec.embed(apply_automorphism(spec.beta, a)) * spec.y()


def test_readme_states_the_defining_relations():
    text = (Path(__file__).resolve().parent.parent / "README.md").read_text(encoding="utf-8")
    assert "xa = α(a)x, ya = β(a)y, yx = pxy + u − pα(u)" in text
    assert "β = γ ∘ α⁻¹" in text


@pytest.mark.parametrize("name", SPECS)
def test_casimir_relations(name, request):
    spec = request.getfixturevalue(name)
    assert validate_spec(spec) == []
    assert relation_check(spec) == []


def test_x_twists_coefficients(usl2):
    t = usl2.base.t
    assert usl2.x() * usl2.embed(t) == usl2.term(t + usl2.base.const(2), 1, 0)
    assert usl2.y() * usl2.embed(t) == usl2.term(t - usl2.base.const(2), 0, 1)


def test_closed_forms_agree_with_rewriting(generic_p):
    spec = generic_p
    base = spec.base
    a = parse_a_element("t1 + 2 t2^2", base)
    for i in range(3):
        for j in range(3):
            word = ["x"] * i + ["y"] * j
            assert normal_form_by_rewriting(spec, word + [a]) == lemma_commutation(spec, a, i, j)
            assert normal_form_by_rewriting(spec, [a] + word + ["x"]) == lemma_right_x(spec, a, i, j)
            assert normal_form_by_rewriting(spec, ["y", a] + word) == lemma_left_y(spec, a, i, j)


def test_invalid_hypotheses_are_reported(polynomial):
    gamma = Automorphism.scaling(polynomial, [2])
    spec = SkewAlgebra(polynomial, Automorphism.identity(polynomial), gamma, polynomial.t, ONE)
    checks = {d.check for d in validate_spec(spec)}
    assert "gamma(u) = u" in checks


def test_p_must_be_invertible(polynomial):
    identity = Automorphism.identity(polynomial)
    with pytest.raises(DegenerateParameterError):
        SkewAlgebra(polynomial, identity, identity, polynomial.zero(), ZERO)


def test_casimir_is_central_up_to_twists(usl2):
    z = casimir(usl2)
    assert z * usl2.x() == usl2.x() * z
    assert z * usl2.embed(usl2.base.t) == usl2.embed(usl2.base.t) * z


terms = st.tuples(st.integers(-3, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))


@settings(max_examples=25, deadline=None)
@given(terms, terms, terms)
def test_multiplication_is_associative(first, second, third):
    base = BaseAlgebra("polynomial")
    alpha = Automorphism(base, (Q,), ONE)
    spec = SkewAlgebra(base, alpha, Automorphism.identity(base), base.t * base.t - base.one(), Q + 1)

    def element(term):
        c, degree, i, j = term
        return spec.term(base.monomial((degree,), c) + base.one(), i, j)

    a, b, c = element(first), element(second), element(third)
    assert (a * b) * c == a * (b * c)
