"""
Comparison maps and the explicit cycles of the shift case.

``theta`` sends the small complex Y to the length-one complexes W and W~:
it keeps tensor-free terms, replaces a lone tensor factor m by the divided
difference D_{f,g}(m) for the bimodule twist (f, g) of the term, and kills
longer tensors.  The rest of the module builds the polynomials U^n_j, the
cycles V_n, the chains L_n and W_n of the shift case, the reduction of
degree-zero cycles to A x^0 y^0 and the map Psi.
"""
from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from typing import Dict, List, Optional, Tuple
import logging

from modules.base_algebra import (
    AElement,
    AlgebraKind,
    Automorphism,
    T_lambda,
    derivative,
    divided_difference,
    inverse_difference,
    substitute,
)
from modules.chains import ChainBasisElement, ChainElement
from modules.complexes import MARKER, WComplex, WTildeComplex
from modules.errors import BasisMembershipError, FamilyHypothesisError
from modules.scalars import ONE, ZERO, Scalar, scalar
from modules.skew_algebra import SkewAlgebra

logger = logging.getLogger(__name__)


# -- comparison maps ------------------------------------------------------------------

def comparison_twist(spec: SkewAlgebra, basis: ChainBasisElement) -> Tuple[Automorphism, Automorphism]:
    """Bimodule twist (f, g) of the part of Y a basis element lies in"""
    r, j = basis.weight, basis.j
    if basis.flags == (0, 0):
        return spec.twist(j, -r), Automorphism.identity(spec.base)
    if basis.flags == (1, 0):
        return spec.twist(j, -r - 1), spec.alpha_inv
    if basis.flags == (0, 1):
        return spec.twist(j, 1 - r), spec.gamma_inv.compose(spec.alpha)
    return spec.twist(j, -r), spec.gamma_inv


def theta(spec: SkewAlgebra, chain: ChainElement) -> ChainElement:
    """Divided-difference comparison map on a chain of Y"""
    if not spec.base.is_univariate:
        raise FamilyHypothesisError("A univariate", "divided differences need a single variable")
    out = ChainElement()
    for basis, value in chain.terms.items():
        length = len(basis.tensor)
        if length == 0:
            out.add_term(basis, value)
        elif length == 1:
            f, g = comparison_twist(spec, basis)
            image = divided_difference(basis.tensor[0], f, g) * spec.base.monomial(basis.coefficient)
            out.add_product(image, basis.i, basis.j, [], basis.e1, basis.e2, value, monomial_tensor=MARKER)
    return out


def theta_W(family: WComplex, chain: ChainElement) -> ChainElement:
    return theta(family.spec, chain)


def theta_Wtilde(family: WTildeComplex, chain: ChainElement) -> ChainElement:
    return theta(family.spec, chain)


# -- the polynomials U^n_j ------------------------------------------------------------------

def _require_shift_case(spec: SkewAlgebra) -> Scalar:
    if spec.base.kind != AlgebraKind.POLYNOMIAL or not spec.alpha.is_shift or not spec.alpha.shift:
        raise FamilyHypothesisError("A = k[t] with alpha(t) = t + lambda")
    return spec.alpha.shift


def U(spec: SkewAlgebra, n: int, j: int) -> AElement:
    """
    U^n_j(t) = (-1)^(n-j) sum over 0 <= i_1 <= ... <= i_(n-j) <= j+1 of prod u(t + i_k lambda).

    Defined for n >= 0 and -1 <= j <= n; U^n_n = 1.
    """
    lam = _require_shift_case(spec)
    if n < 0 or j < -1 or j > n:
        raise ValueError(f"U^{n}_{j} is defined for n >= 0 and -1 <= j <= n")
    shifted = [substitute(spec.u, ONE, lam * k) for k in range(j + 2)]
    total = spec.base.zero()
    for indices in combinations_with_replacement(range(j + 2), n - j):
        term = spec.base.one()
        for k in indices:
            term = term * shifted[k]
        total = total + term
    return total if (n - j) % 2 == 0 else -total


def u_recursion_defect(spec: SkewAlgebra, n: int, k: int) -> AElement:
    """T_lambda(U^n_(k-1)) + U^n_k T_((k+1) lambda)(u), which vanishes for 1 <= k <= n"""
    lam = _require_shift_case(spec)
    return T_lambda(U(spec, n, k - 1), lam) + U(spec, n, k) * T_lambda(spec.u, lam * (k + 1))


def L_chain(spec: SkewAlgebra, n: int) -> ChainElement:
    """x^n y^(n+1) e1 + sum_(j<n) U^n_j x^j y^(j+1) e1"""
    out = ChainElement.from_coefficient(spec.base.one(), n, n + 1, e1=1)
    for j in range(n):
        out = out + ChainElement.from_coefficient(U(spec, n, j), j, j + 1, e1=1)
    return out


def V_cycle(spec: SkewAlgebra, n: int) -> ChainElement:
    """x^n y^n e1e2 + sum_(j<n) U^(n-1)_(j-1)(t + lambda) x^j y^j e1e2"""
    lam = _require_shift_case(spec)
    if n < 0:
        raise ValueError("V_n needs n >= 0")
    out = ChainElement.from_coefficient(spec.base.one(), n, n, e1=1, e2=1)
    for j in range(n):
        coefficient = substitute(U(spec, n - 1, j - 1), ONE, lam)
        out = out + ChainElement.from_coefficient(coefficient, j, j, e1=1, e2=1)
    return out


def V_image_closed_form(spec: SkewAlgebra, n: int) -> ChainElement:
    """Vertical image of V_n: -T_lambda(u') x^n y^n - sum_(j<n) U^(n-1)_(j-1)(t + lambda) T_lambda(u') x^j y^j"""
    lam = _require_shift_case(spec)
    shifted = T_lambda(derivative(spec.u), lam)
    out = ChainElement.from_coefficient(-shifted, n, n, MARKER)
    for j in range(n):
        coefficient = substitute(U(spec, n - 1, j - 1), ONE, lam) * shifted
        out = out - ChainElement.from_coefficient(coefficient, j, j, MARKER)
    return out


def _u_prime_tilde(spec: SkewAlgebra, lam: Scalar) -> AElement:
    u_prime = derivative(spec.u)
    return u_prime - spec.base.const(u_prime.evaluate(lam))


def W_chain(spec: SkewAlgebra, n: int) -> ChainElement:
    """-(u' - u'(lambda)) x^(n-1) y^n (x) t e1 - sum_(1<=j<n) U^(n-1)_(j-1) (u' - u'(lambda)) x^(j-1) y^j (x) t e1"""
    lam = _require_shift_case(spec)
    if n < 1:
        raise ValueError("W_n needs n >= 1")
    tilde = _u_prime_tilde(spec, lam)
    out = ChainElement.from_coefficient(-tilde, n - 1, n, MARKER, e1=1)
    for j in range(1, n):
        out = out + ChainElement.from_coefficient(-(U(spec, n - 1, j - 1) * tilde), j - 1, j, MARKER, e1=1)
    return out


def W_boundary_closed_form(spec: SkewAlgebra, n: int) -> ChainElement:
    """The three-term value of the horizontal boundary of W_n"""
    lam = _require_shift_case(spec)
    shifted = T_lambda(derivative(spec.u), lam)
    out = ChainElement.from_coefficient(-shifted, n, n, MARKER)
    for j in range(1, n):
        coefficient = substitute(U(spec, n - 1, j - 1), ONE, lam) * shifted
        out = out - ChainElement.from_coefficient(coefficient, j, j, MARKER)
    last = U(spec, n - 1, 0) * _u_prime_tilde(spec, lam) * T_lambda(spec.u, lam)
    return out - ChainElement.from_coefficient(last, 0, 0, MARKER)


def special_cycles(kind: str, spec: SkewAlgebra, n: int, j: Optional[int] = None):
    """U (needs j), L, V or W element of index n"""
    if kind == "U":
        if j is None:
            raise ValueError("U^n_j needs j")
        return U(spec, n, j)
    builders = {"L": L_chain, "V": V_cycle, "W": W_chain}
    try:
        return builders[kind](spec, n)
    except KeyError:
        raise ValueError(f"unknown special element {kind!r}, expected U, L, V or W") from None


# -- reduction to A x^0 y^0 ---------------------------------------------------------------

def _diagonal_coefficients(chain: ChainElement, marked: bool, base) -> Dict[int, AElement]:
    tensor = MARKER if marked else ()
    found: Dict[int, AElement] = {}
    for basis, value in chain.terms.items():
        if basis.flags != (0, 0) or basis.i != basis.j or basis.tensor != tensor:
            raise BasisMembershipError(
                f"{basis.describe(with_position=True)} is not a diagonal term P x^i y^i of one column")
        found[basis.i] = found.get(basis.i, base.zero()) + base.monomial(basis.coefficient, value)
    return found


def phi_reduction(family: WComplex, chain: ChainElement, anchor=ZERO) -> Tuple[ChainElement, ChainElement]:
    """
    Reduce a diagonal chain sum P_i x^i y^i to A x^0 y^0.

    Column 0 chains are corrected by boundaries of Q x^(i-1) y^i e1, column 1
    chains (tensor t) by boundaries of P x^(i-1) y^i (x) t e1, from the top
    index down.  The correcting coefficients vanish at ``anchor``, which
    makes them unique.  Returns (reduced chain, correcting chain).
    """
    base = family.spec.base
    lam = family.lam
    anchor = scalar(anchor)
    marked = any(b.tensor for b in chain.terms)
    current = chain
    correction = ChainElement()
    tensor = MARKER if marked else ()
    while True:
        coefficients = _diagonal_coefficients(current, marked, base)
        top = max((i for i, c in coefficients.items() if c and i >= 1), default=None)
        if top is None:
            break
        target = coefficients[top] if marked else -coefficients[top]
        solution = inverse_difference(target, lam)
        solution = solution - base.const(solution.evaluate(anchor))
        step = ChainElement.from_coefficient(solution, top - 1, top, tensor, e1=1)
        correction = correction + step
        current = current - family.apply(step, "horizontal")
    logger.debug(f"reduced a chain of {len(chain)} terms with {len(correction)} correction terms")
    return current, correction


# -- Psi --------------------------------------------------------------------------------

class SpanReducer:
    """Normal forms of univariate polynomials modulo the span of given polynomials"""

    def __init__(self, generators: List[AElement]):
        self.pivots: Dict[int, AElement] = {}
        for generator in generators:
            self.add(generator)

    def add(self, polynomial: AElement) -> bool:
        remainder = self.reduce(polynomial)
        if not remainder:
            return False
        top = remainder.degree()
        pivot = remainder.scale(ONE / remainder.coefficient((top,)))
        for degree, existing in list(self.pivots.items()):
            value = existing.coefficient((top,))
            if value:
                self.pivots[degree] = existing - pivot.scale(value)
        self.pivots[top] = pivot
        return True

    def reduce(self, polynomial: AElement) -> AElement:
        remainder = polynomial
        for degree in sorted(self.pivots, reverse=True):
            value = remainder.coefficient((degree,))
            if value:
                remainder = remainder - self.pivots[degree].scale(value)
        return remainder

    def contains(self, polynomial: AElement) -> bool:
        return not self.reduce(polynomial)

    @property
    def dimension(self) -> int:
        return len(self.pivots)

    def dimension_up_to(self, degree: int) -> int:
        return sum(1 for d in self.pivots if d <= degree)


def boundary_span_generators(spec: SkewAlgebra, max_degree: int) -> List[AElement]:
    """T_lambda(u^m) for m >= 1 up to the given degree"""
    lam = _require_shift_case(spec)
    generators = []
    degree_u = spec.u.degree()
    if degree_u < 1:
        return generators
    m = 1
    while m * degree_u - 1 <= max_degree:
        generators.append(T_lambda(spec.u ** m, lam))
        m += 1
    return generators


@dataclass
class PsiImage:
    """
    Image of V_n in A x^0 y^0 and its class modulo span{T_lambda(u^m)}.

    ``value`` comes out of the reduction; ``closed_form`` is
    (-1)^(n+1) (T_lambda(u^n u') - T_lambda(u^n) u'(lambda)).
    """
    n: int
    value: AElement
    closed_form: AElement
    reduced: AElement
    dropped: AElement
    dropped_in_span: bool
    correction: ChainElement
    notes: List[str] = field(default_factory=list)


def _origin_polynomial(family: WComplex, chain: ChainElement) -> AElement:
    coefficients = _diagonal_coefficients(chain, True, family.spec.base)
    stray = [i for i, c in coefficients.items() if c and i]
    if stray:
        raise BasisMembershipError(f"reduction left terms at x^i y^i for i in {sorted(stray)}")
    return coefficients.get(0, family.spec.base.zero())


def psi(family: WComplex, n: int, max_degree: Optional[int] = None) -> PsiImage:
    """Send V_n through the vertical map and reduce it to A x^0 y^0"""
    spec, lam = family.spec, family.lam
    image = family.apply(V_cycle(spec, n), "vertical")
    reduced_chain, correction = phi_reduction(family, image, anchor=lam)
    value = _origin_polynomial(family, reduced_chain)

    sgn = -ONE if n % 2 == 0 else ONE
    u_prime = derivative(spec.u)
    leading = T_lambda(spec.u ** n * u_prime, lam).scale(sgn)
    dropped = T_lambda(spec.u ** n, lam).scale(sgn * u_prime.evaluate(lam))
    if max_degree is None:
        max_degree = max(value.degree(), leading.degree(), 0)
    reducer = SpanReducer(boundary_span_generators(spec, max_degree))

    result = PsiImage(n, value, leading - dropped, reducer.reduce(value), dropped,
                      reducer.contains(dropped), correction)
    if result.value != result.closed_form:
        result.notes.append(f"reduction of V_{n} differs from the closed form")
    if not result.dropped_in_span:
        result.notes.append(f"T_lambda(u^{n}) u'(lambda) is not in the boundary span")
    for note in result.notes:
        logger.warning(note)
    return result


CHAIN_MAPS = ("theta_W", "theta_Wtilde", "Phi_reduction", "Psi")


def chain_map(kind: str, family, value, **params):
    """Dispatch to one of the comparison or reduction maps"""
    if kind == "theta_W":
        return theta_W(family, value)
    if kind == "theta_Wtilde":
        return theta_Wtilde(family, value)
    if kind == "Phi_reduction":
        return phi_reduction(family, value, params.get("anchor", ZERO))
    if kind == "Psi":
        return psi(family, value, params.get("max_degree"))
    raise ValueError(f"unknown chain map {kind!r}, expected one of {CHAIN_MAPS}")
