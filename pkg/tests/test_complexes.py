import pytest

from modules.base_algebra import Automorphism, BaseAlgebra, T_lambda
from modules.chains import ChainBasisElement, ChainElement
from modules.complexes import (
    MARKER,
    BarComplex,
    ReducedComplex,
    TwistedComplex,
    WComplex,
    WTildeComplex,
    YComplex,
    detect_grading,
    exactness_cases,
    grading_key,
    grading_pieces,
    select_family,
    weight_lattice,
)
from modules.errors import BasisMembershipError, FamilyHypothesisError, UnsupportedAutomorphismError
from modules.homology import homology
from modules.notation import parse_a_element
from modules.scalars import P, Q
from modules.skew_algebra import SkewAlgebra
from modules.windows import Window, build_finite_complex


def test_grading_detection(usl2, quantum_u0, generic_p, laurent_spec, shift_const):
    assert detect_grading(quantum_u0) == ("multidegree", 0)
    assert detect_grading(generic_p) == ("monomial", (1, 1))
    assert detect_grading(usl2) is None
    assert detect_grading(shift_const) is None
    assert detect_grading(laurent_spec) is None


def test_weight_lattice():
    assert list(weight_lattice(0, 0, 0, 2)) == [(0, 0), (1, 1), (2, 2)]
    assert list(weight_lattice(0, 0, 1, 1)) == [(1, 0), (2, 1)]
    assert list(weight_lattice(-1, 1, 0, 1)) == [(0, 0), (1, 1)]


def test_select_family(usl2, quantum_u0):
    assert isinstance(select_family("Y", usl2), YComplex)
    assert isinstance(select_family("W", usl2), WComplex)
    assert isinstance(select_family("reduced", quantum_u0), ReducedComplex)
    assert isinstance(select_family("bar", quantum_u0, weights=[0]), BarComplex)
    with pytest.raises(ValueError):
        select_family("Z", usl2)
    with pytest.raises(ValueError):
        YComplex(usl2, variant="fast")


def test_family_hypotheses(usl2, quantum_u0, laurent_spec):
    with pytest.raises(FamilyHypothesisError):
        select_family("W", quantum_u0)
    with pytest.raises(FamilyHypothesisError):
        select_family("Wtilde", usl2)
    with pytest.raises(FamilyHypothesisError):
        select_family("reduced", usl2)
    with pytest.raises(FamilyHypothesisError):
        select_family("reduced", laurent_spec)


def test_membership_is_checked(usl2):
    family = YComplex(usl2, weights=[0])
    outside = ChainBasisElement((0,), 0, 2)
    with pytest.raises(BasisMembershipError):
        family.horizontal(outside)
    with pytest.raises(BasisMembershipError):
        WComplex(usl2).horizontal(ChainBasisElement((0,), 0, 0, ((2,),)))


@pytest.mark.parametrize("variant", ["statement", "generic"])
def test_small_complex_squares_to_zero(usl2, tiny_window, variant):
    fc = build_finite_complex(YComplex(usl2, variant, weights=[0]), tiny_window, check=True)
    assert fc.core
    assert fc.sign in ("commute", "anticommute", None)


def test_variants_agree_on_boundaries(usl2, tiny_window):
    statement = YComplex(usl2, "statement")
    generic = YComplex(usl2, "generic")
    for basis in statement.enumerate_window(tiny_window):
        assert statement.horizontal(basis) == generic.horizontal(basis)
        assert statement.vertical(basis) == generic.vertical(basis)


def test_graded_blocks_square_to_zero(quantum_u0, scaled_line):
    window = Window(weights=(0, 1), max_index=1, max_degree=1, max_tensor=2)
    for spec in (quantum_u0, scaled_line):
        fc = build_finite_complex(YComplex(spec), window, check=True)
        assert fc.blocks
        assert all(key[0] in (0, 1) for key in fc.blocks)


def test_w_boundary_on_e1(usl2):
    family = WComplex(usl2)
    x = ChainBasisElement((0,), 0, 1, e1=1)
    expected = ChainElement.from_coefficient(-T_lambda(usl2.u, 2), 0, 0)
    assert family.horizontal(x) == expected


def test_w_filtration_level(usl2):
    family = WComplex(usl2)
    assert family.slope == 2
    x = ChainBasisElement((3,), 1, 1, MARKER, e1=0, e2=0)
    assert family.level(x) == 5
    window = Window(weights=(0,), max_degree=2, max_tensor=3)
    assert all(family.level(b) <= 2 for b in family.enumerate_window(window))


def test_w_tilde_as_printed_breaks_the_weight(laurent_spec):
    x = ChainBasisElement((0,), 0, 1, MARKER, e1=1, e2=1)
    corrected = WTildeComplex(laurent_spec, r=1)
    assert corrected.horizontal(x).weights() == {1}
    printed = WTildeComplex(laurent_spec, r=1, variant="as_printed")
    with pytest.raises(BasisMembershipError):
        printed.horizontal(x)


def test_twisted_complex(polynomial):
    f = Automorphism.translation(polynomial, 1)
    g = Automorphism.identity(polynomial)
    family = TwistedComplex(f, g)
    marked = ChainBasisElement((2,), 0, 0, MARKER)
    assert family.horizontal(marked) == ChainElement.basis(ChainBasisElement((2,), 0, 0))
    assert family.comparison(polynomial.one(), 2) == polynomial.t.scale(2) + polynomial.one()
    with pytest.raises(UnsupportedAutomorphismError):
        TwistedComplex(Automorphism.scaling(polynomial, [2]), g)


def test_exactness_cases(usl2):
    cases = exactness_cases(usl2, 2)
    assert sorted(cases) == ["a", "b", "c"]
    f, g = cases["a"]
    assert f == usl2.alpha.power(-2)
    assert g.is_identity


def test_bar_complex_squares_to_zero(scaled_line):
    window = Window(weights=(0,), max_index=1, max_degree=1, max_tensor=1)
    family = BarComplex(scaled_line, weights=[0])
    fc = build_finite_complex(family, window, check=True)
    assert fc.size() >= len(fc.core) > 0


def test_homogeneous_u_with_several_terms_uses_the_total_degree():
    base = BaseAlgebra("quantum_affine", 2)
    alpha = Automorphism.scaling(base, [Q, Q])
    spec = SkewAlgebra(base, alpha, Automorphism.identity(base), parse_a_element("t1^2 + t2^2", base), P)
    assert detect_grading(spec) == ("weighted", 2)


def test_grading_keys_and_pieces():
    assert grading_key(("multidegree", 0), 1, (2, 0), 3) == (1, 2, 0, 3)
    assert grading_key(("monomial", (1, 1)), 0, (2, 0), 1) == (0, 3, 1)
    assert grading_key(("weighted", 2), 0, (2, 0), 1) == (0, 4)
    assert grading_pieces(("monomial", (1, 1)), (0, 3, 1)) == [((3, 1), 0), ((2, 0), 1)]
    assert grading_pieces(("weighted", 2), (0, 4)) == [(4, 0), (2, 1), (0, 2)]


def test_monomial_blocks_are_closed(generic_p):
    window = Window(weights=(0,), max_index=1, max_degree=1, max_tensor=2)
    family = YComplex(generic_p)
    fc = build_finite_complex(family, window, check=True)
    for key, block in fc.blocks.items():
        assert len(key) == 3
        assert all(family.block_key(b) == key for b in block)
    for basis, image in fc.horizontal.items():
        assert all(family.block_key(target) == family.block_key(basis) for target in image.terms)
    for basis, image in fc.vertical.items():
        assert all(family.block_key(target) == family.block_key(basis) for target in image.terms)


def test_monomial_blocks_refine_the_weighted_ones(generic_p):
    window = Window(weights=(0,), max_index=0, max_degree=0, max_tensor=1)
    fine = YComplex(generic_p)
    coarse = YComplex(generic_p)
    coarse.grading = ("weighted", 2)
    fine_report = homology(build_finite_complex(fine, window))
    coarse_report = homology(build_finite_complex(coarse, window))
    assert fine_report.profile(0, 1) == coarse_report.profile(0, 1)
    assert len(fine_report.blocks) >= len(coarse_report.blocks)
