import pytest

from modules.chains import BarBasisElement, ChainBasisElement, ChainElement
from modules.scalars import ONE, rational


def test_basis_element_positions():
    x = ChainBasisElement((0,), 1, 2, ((1,),), e1=1)
    assert x.n == 2
    assert x.row == 0
    assert x.position == (2, 0)
    assert x.weight == 0
    assert x.index == 1
    assert x.x_degree == 2
    assert x.degree == 1


def test_basis_element_validation():
    with pytest.raises(ValueError):
        ChainBasisElement((0,), -1, 0)
    with pytest.raises(ValueError):
        ChainBasisElement((0,), 0, 0, ((0,),))
    with pytest.raises(ValueError):
        ChainBasisElement((0,), 0, 0, e1=2)
    with pytest.raises(ValueError):
        BarBasisElement((((0,), 0, 0), ((0,), 0, 0)))


def test_describe():
    x = ChainBasisElement((0,), 0, 0, e1=1, e2=1)
    assert x.describe() == "x^0y^0 e1e2"
    y = ChainBasisElement((2,), 1, 0, ((1,),), e2=1)
    assert y.describe(with_position=True) == "t^2*x^1y^0 ⊗ [t] e2 @ (1,1,0)"


def test_from_coefficient_expands_and_drops_constants(polynomial):
    t = polynomial.t
    chain = ChainElement.from_coefficient(t.scale(3) + polynomial.const(rational(1, 2)), 1, 1)
    assert len(chain) == 2
    assert chain.coefficient(ChainBasisElement((1,), 1, 1)) == 3
    out = ChainElement()
    out.add_product(polynomial.one(), 0, 0, [t + polynomial.one()], 1, 0)
    assert list(out.terms) == [ChainBasisElement((0,), 0, 0, ((1,),), e1=1)]


def test_arithmetic_cancels():
    x = ChainBasisElement((0,), 0, 1, e1=1)
    chain = ChainElement.basis(x, 2)
    assert not (chain - chain.scale(ONE))
    assert chain + chain == chain.scale(2)
    assert -chain == chain.scale(-1)
    assert chain.scale(0) == 0
    assert chain.weights() == {0}
    assert chain.positions() == {(1, 0)}
    assert ChainElement().describe() == "0"
    assert chain.describe() == "2*x^0y^1 e1"


def test_bar_element():
    x = BarBasisElement((((1,), 1, 0), ((0,), 0, 2)))
    assert x.n == 1
    assert x.weight == 1
    assert x.degree == 1
    assert x.x_degree == 1
    assert x.describe() == "t*x^1y^0 ⊗ x^0y^2"
