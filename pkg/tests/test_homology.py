import json

import pytest

from modules.base_algebra import Automorphism
from modules.complexes import TwistedComplex, WComplex, YComplex, ReducedComplex
from modules.homology import ROUTES, certify, comparison_margin, homology, kernel_rows, rref_rows
from modules.scalars import ONE, Q
from modules.windows import ZERO_MARGIN, Window, build_finite_complex


def test_kernel_and_echelon_rows():
    rows = [{0: ONE, 1: ONE}, {0: 2 * ONE, 1: 2 * ONE}]
    kernel = kernel_rows(rows, 2)
    assert len(kernel) == 1
    (vector,) = kernel
    assert vector[0] * 1 + vector[1] * 2 == 0
    echelon, pivots = rref_rows([{0: Q, 1: ONE}, {1: ONE}], 2)
    assert pivots == [0, 1]
    assert kernel_rows([{}], 0) == [{0: ONE}]


def _twisted(polynomial, shift):
    f = Automorphism.translation(polynomial, shift) if shift else Automorphism.identity(polynomial)
    return TwistedComplex(f, Automorphism.identity(polynomial))


def test_twisted_complex_is_exact_for_a_nonzero_shift(polynomial):
    fc = build_finite_complex(_twisted(polynomial, 1), Window(max_degree=4, max_tensor=1))
    report = certify(fc)
    assert report.certified
    assert report.profile(top=1) == (0, 0)


def test_twisted_complex_with_equal_twists(polynomial):
    fc = build_finite_complex(_twisted(polynomial, 0), Window(max_degree=4, max_tensor=1))
    assert homology(fc).profile(top=1) == (5, 5)


def test_quantum_plane_with_u_zero(quantum_u0):
    window = Window(weights=(0,), max_index=1, max_degree=0, max_tensor=3)
    report = certify(build_finite_complex(YComplex(quantum_u0), window))
    assert report.certified
    assert report.profile(0, 3) == (2, 4, 2, 0)


def test_positive_degree_coefficients_add_classes_at_the_origin(quantum_u0):
    window = Window(weights=(0,), max_index=1, max_degree=1, max_tensor=3)
    report = homology(build_finite_complex(YComplex(quantum_u0), window))
    assert report.profile(0, 3)[0] >= 4
    origin: dict = {}
    for block in report.blocks:
        _, *exponents, X = block.multidegree
        if X == 0 and sum(exponents) == 1 and block.dim:
            origin[block.degree] = origin.get(block.degree, 0) + block.dim
    assert origin == {0: 2, 1: 2}


def test_reduced_complex_matches_the_small_complex(quantum_u0):
    window = Window(weights=(0,), max_index=1, max_degree=0, max_tensor=3)
    reduced = homology(build_finite_complex(ReducedComplex(quantum_u0, [0]), window))
    assert reduced.profile(0, 3) == (2, 4, 2, 0)


def test_w_complex_for_constant_u(shift_const):
    window = Window(weights=(0,), max_index=3, max_degree=2, max_tensor=3)
    fc = build_finite_complex(WComplex(shift_const), window, ZERO_MARGIN)
    report = homology(fc, route="row_then_vertical")
    assert report.profile(0, 3) == (3, 6, 7, 4)
    for block in report.blocks:
        assert block.rows["total"] == block.full


def test_w_complex_for_usl2(usl2):
    window = Window(weights=(0,), max_index=3, max_degree=4, max_tensor=3)
    fc = build_finite_complex(WComplex(usl2), window, ZERO_MARGIN)
    assert homology(fc).profile(0, 3) == (3, 0, 0, 3)


def test_representatives_and_json(quantum_u0):
    window = Window(weights=(0,), max_index=0, max_degree=0, max_tensor=2)
    report = homology(build_finite_complex(YComplex(quantum_u0), window), representatives=True)
    data = json.loads(report.to_json())
    assert data["family"] == report.family
    degree_zero = [b for b in report.blocks if b.degree == 0 and b.dim]
    assert degree_zero and degree_zero[0].representatives == ["x^0y^0"]


def test_unknown_route(quantum_u0, tiny_window):
    fc = build_finite_complex(YComplex(quantum_u0), tiny_window)
    with pytest.raises(ValueError):
        homology(fc, route="diagonal")
    assert "total" in ROUTES


def test_windowed_results_are_certified_against_a_wider_margin(usl2, tiny_window):
    fc = build_finite_complex(YComplex(usl2), tiny_window)
    report = certify(fc)
    assert report.blocks
    assert {b.weight for b in report.blocks} == {0}
    for block in report.uncertified():
        assert not block.certified


def test_certify_with_the_row_route(shift_const):
    window = Window(weights=(0,), max_index=3, max_degree=2, max_tensor=3)
    fc = build_finite_complex(WComplex(shift_const), window, ZERO_MARGIN)
    report = certify(fc, route="row_then_vertical")
    assert report.profile(0, 3) == (3, 6, 7, 4)
    for block in report.blocks:
        assert block.rows["total"] == block.full
        assert block.rows.get("rank_phi", block.rows.get("rank_phi_sum")) == 0


def test_row_route_on_a_windowed_slice(usl2, tiny_window):
    fc = build_finite_complex(YComplex(usl2), tiny_window)
    assert fc.size() > len(fc.core)
    report = certify(fc, route="row_then_vertical")
    assert report.blocks
    for block in report.blocks:
        assert "rank_phi_sum" in block.rows
        assert block.rows["total"] == block.dim
        assert block.rows["h0"] + block.rows["h1"] - block.rows["rank_phi_sum"] == block.dim


def test_comparison_margin_keeps_the_tensor_margin(usl2, tiny_window):
    fc = build_finite_complex(YComplex(usl2), tiny_window)
    wider = comparison_margin(fc)
    assert wider.index == 2 * fc.margin.index
    assert wider.tensor == fc.margin.tensor
    assert wider.covers(fc.margin) and wider != fc.margin


def test_variant_is_reported_apart_from_the_family(quantum_u0, tiny_window):
    report = homology(build_finite_complex(YComplex(quantum_u0, "generic"), tiny_window))
    data = json.loads(report.to_json())
    assert data["family"] == "Y"
    assert data["variant"] == "generic"
