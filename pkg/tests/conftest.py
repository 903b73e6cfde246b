import os
import sys
from pathlib import Path

import pytest

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from modules.base_algebra import Automorphism, BaseAlgebra
from modules.notation import parse_a_element
from modules.scalars import ONE, P, Q, rational
from modules.skew_algebra import SkewAlgebra
from modules.windows import Window

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"


@pytest.fixture
def scenarios() -> Path:
    return SCENARIOS


@pytest.fixture
def polynomial() -> BaseAlgebra:
    return BaseAlgebra("polynomial")


@pytest.fixture
def laurent() -> BaseAlgebra:
    return BaseAlgebra("laurent")


@pytest.fixture
def quantum_plane() -> BaseAlgebra:
    """k_Q[t1, t2] with t2 t1 = 2 t1 t2"""
    return BaseAlgebra("quantum_affine", 2, [[ONE, rational(2)], [rational(1, 2), ONE]])


@pytest.fixture
def usl2(polynomial) -> SkewAlgebra:
    """U(sl2): alpha(t) = t + 2, u = -(t-1)^2/4"""
    alpha = Automorphism.translation(polynomial, 2)
    u = parse_a_element("-(t-1)^2/4", polynomial)
    return SkewAlgebra(polynomial, alpha, Automorphism.identity(polynomial), u, ONE)


@pytest.fixture
def shift_const(polynomial) -> SkewAlgebra:
    alpha = Automorphism.translation(polynomial, 1)
    return SkewAlgebra(polynomial, alpha, Automorphism.identity(polynomial), polynomial.const(3), ONE)


@pytest.fixture
def quantum_u0(quantum_plane) -> SkewAlgebra:
    alpha = Automorphism.scaling(quantum_plane, [Q, Q])
    return SkewAlgebra(quantum_plane, alpha, Automorphism.identity(quantum_plane), quantum_plane.zero(), ONE)


@pytest.fixture
def scaled_line(polynomial) -> SkewAlgebra:
    """k[t] with alpha(t) = q t, u = 0: the smallest graded example"""
    alpha = Automorphism.scaling(polynomial, [Q])
    return SkewAlgebra(polynomial, alpha, Automorphism.identity(polynomial), polynomial.zero(), ONE)


@pytest.fixture
def generic_p() -> SkewAlgebra:
    """Commutative k[t1, t2], alpha scaling by q, u = t1 t2, generic p"""
    base = BaseAlgebra("quantum_affine", 2)
    alpha = Automorphism.scaling(base, [Q, Q])
    u = parse_a_element("t1 t2", base)
    return SkewAlgebra(base, alpha, Automorphism.identity(base), u, P)


@pytest.fixture
def laurent_spec(laurent) -> SkewAlgebra:
    alpha = Automorphism.scaling(laurent, [Q])
    u = parse_a_element("t - t^-1", laurent)
    return SkewAlgebra(laurent, alpha, Automorphism.identity(laurent), u, ONE)


@pytest.fixture
def tiny_window() -> Window:
    return Window(weights=(0,), max_index=1, max_degree=1, max_tensor=2)
