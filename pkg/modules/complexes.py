"""
Complex families and their boundary operators.

Every family exposes the same surface: membership checks, horizontal and
vertical images of basis elements, enumeration on a window or on a
complete graded block, and the minimum halo margin the homology engine
needs.  Families:

    YComplex        the small double complex of E, weight by weight
    ReducedComplex  its reduction modulo an augmentation ideal
    WComplex        the length-one complex for A = k[t] with a shift
    WTildeComplex   the length-one complex for A = k[t, t^-1] with t -> qt
    BarComplex      the canonical Hochschild complex of E (oracle)
    TwistedComplex  X(A_f^g), the two-term complex of a twisted bimodule
"""
from itertools import product
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging

from modules.base_algebra import (
    AElement,
    AlgebraKind,
    Automorphism,
    BaseAlgebra,
    Monomial,
    T_lambda,
    T_tilde,
    Tprime_q,
    Tprime_qinv,
    apply_automorphism,
    derivative,
    divided_difference,
    q_derivative,
    substitute,
)
from modules.chains import BarBasisElement, ChainBasisElement, ChainElement
from modules.errors import (
    BasisMembershipError,
    FamilyHypothesisError,
    UnsupportedAutomorphismError,
)
from modules.scalars import ONE, Scalar
from modules.skew_algebra import Diagnostic, SkewAlgebra, e_mul, validate_spec
from modules.windows import ZERO_MARGIN, Margin, Window

logger = logging.getLogger(__name__)

HORIZONTAL = "horizontal"
VERTICAL = "vertical"

FLAGS = ((0, 0), (1, 0), (0, 1), (1, 1))
MARKER: Tuple[Monomial, ...] = ((1,),)

VARIANTS = ("statement", "proof", "generic")


def sign(k: int) -> Scalar:
    return ONE if k % 2 == 0 else -ONE


# -- enumeration helpers ---------------------------------------------------------

def compositions_at_least(total: int, parts: int, minimum: int = 0) -> Iterator[Tuple[int, ...]]:
    """Ordered splits of total into parts, each part >= minimum"""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for head in range(minimum, total - minimum * (parts - 1) + 1):
        for tail in compositions_at_least(total - head, parts - 1, minimum):
            yield (head,) + tail


def coefficient_tensors(base: BaseAlgebra, degree: int, length: int
                        ) -> Iterator[Tuple[Monomial, Tuple[Monomial, ...]]]:
    """(coefficient, tensor) pairs of exact total degree with non-constant tensor factors"""
    for head in range(degree + 1):
        for split in compositions_at_least(degree - head, length, 1):
            pools = [base.monomials_of_degree(head)] + [base.monomials_of_degree(k) for k in split]
            for combo in product(*pools):
                yield combo[0], tuple(combo[1:])


def laurent_coefficient_tensors(low: int, high: int, length: int
                                ) -> Iterator[Tuple[Monomial, Tuple[Monomial, ...]]]:
    """(coefficient, tensor) pairs with every exponent in [low, high]"""
    factors = [e for e in range(low, high + 1) if e != 0]
    for head in range(low, high + 1):
        for tensor in product(factors, repeat=length):
            yield (head,), tuple((e,) for e in tensor)


Grading = Tuple[str, object]


def detect_grading(spec: SkewAlgebra) -> Optional[Grading]:
    """
    Conserved grading of the small complex and of the bar complex.

    Returns ("multidegree", 0) when every u-term vanishes: the exponent
    vector and the x-degree X are conserved separately.  When u is a single
    non-constant monomial t^m, ("monomial", m): exponents + m X is conserved.
    ("weighted", d) when u is homogeneous of degree d >= 1, and None when
    only windows apply.
    """
    if spec.base.allows_negative or not (spec.alpha.is_scaling and spec.gamma.is_scaling):
        return None
    u = spec.u
    if not u or (u.is_constant() and spec.p == ONE):
        return ("multidegree", 0)
    if len(u.terms) == 1 and not u.is_constant():
        (exponents,) = u.terms
        return ("monomial", tuple(exponents))
    d = u.homogeneous_degree()
    if d is not None and d >= 1:
        return ("weighted", d)
    return None


def grading_key(grading: Grading, r: int, exponents: Monomial, X: int) -> tuple:
    """Block key of the elements of weight r with the given exponent vector and x-degree"""
    kind, shift = grading
    if kind == "multidegree":
        return (r,) + tuple(exponents) + (X,)
    if kind == "monomial":
        return (r,) + tuple(e + s * X for e, s in zip(exponents, shift))
    return (r, sum(exponents) + shift * X)


def grading_pieces(grading: Grading, key: tuple) -> List[Tuple[object, int]]:
    """
    (exponents, X) pairs making up one block.

    Exponents is an exponent vector, or a total degree for the weighted
    grading.
    """
    kind, shift = grading
    if kind == "multidegree":
        return [(tuple(key[1:-1]), key[-1])]
    if kind == "monomial":
        levels, pieces, X = key[1:], [], 0
        while all(level >= s * X for level, s in zip(levels, shift)):
            pieces.append((tuple(level - s * X for level, s in zip(levels, shift)), X))
            X += 1
        return pieces
    level = key[1]
    return [(level - shift * X, X) for X in range(level // shift + 1)]


def _piece_degree(exponents) -> int:
    return sum(exponents) if isinstance(exponents, tuple) else exponents


def _in_piece(exponents, element) -> bool:
    return not isinstance(exponents, tuple) or element.exponents == exponents


def u_extent(spec: SkewAlgebra) -> int:
    """Largest degree shift a u-term can cause"""
    if not spec.u:
        return 0
    return max(abs(spec.u.degree()), abs(spec.u.min_degree()))


# -- family base -----------------------------------------------------------------

class ComplexFamily:
    """
    Shared plumbing for the families.

    Subclasses provide ``_horizontal``, ``_vertical``, ``check_member``,
    ``in_window`` and the enumeration methods.  Images are cached per basis
    element; families are immutable after construction.
    """

    name = "family"
    variant: Optional[str] = None
    laurent_window = False

    def __init__(self, spec: Optional[SkewAlgebra]):
        self.spec = spec
        self._cache: Dict[Tuple[str, object], ChainElement] = {}

    @property
    def label(self) -> str:
        """Family name with its variant, for logs and check ids"""
        return self.name if self.variant is None else f"{self.name}[{self.variant}]"

    @property
    def names(self) -> List[str]:
        return self.spec.base.variable_names() if self.spec is not None else ["t"]

    @property
    def window_mode(self) -> str:
        return "box"

    def minimum_margin(self) -> Margin:
        return ZERO_MARGIN

    def check_member(self, x) -> None:
        raise NotImplementedError

    def in_window(self, x, window: Window) -> bool:
        raise NotImplementedError

    def enumerate_window(self, window: Window) -> List:
        raise NotImplementedError

    def block_keys(self, window: Window) -> List[tuple]:
        raise NotImplementedError(f"{self.name} is not solved by blocks")

    def enumerate_block(self, key: tuple, max_total: int) -> List:
        raise NotImplementedError(f"{self.name} is not solved by blocks")

    def _horizontal(self, x) -> ChainElement:
        raise NotImplementedError

    def _vertical(self, x) -> ChainElement:
        return ChainElement()

    def _image(self, x, direction: str) -> ChainElement:
        key = (direction, x)
        cached = self._cache.get(key)
        if cached is not None:
            return cached
        self.check_member(x)
        if direction == HORIZONTAL:
            image = self._horizontal(x)
        elif direction == VERTICAL:
            image = self._vertical(x) if x.row == 1 else ChainElement()
        else:
            raise ValueError(f"unknown direction {direction!r}")
        for target in image.terms:
            if target.weight != x.weight:
                raise BasisMembershipError(
                    f"{self.label} {direction} image of {x.describe(self.names, True)} leaves weight "
                    f"{x.weight}: {target.describe(self.names, True)}")
        self._cache[key] = image
        return image

    def horizontal(self, x) -> ChainElement:
        return self._image(x, HORIZONTAL)

    def vertical(self, x) -> ChainElement:
        return self._image(x, VERTICAL)

    def boundary(self, x, direction: str = HORIZONTAL) -> ChainElement:
        return self._image(x, direction)

    def clear_cache(self) -> None:
        self._cache.clear()

    def apply(self, chain: ChainElement, direction: str) -> ChainElement:
        out = ChainElement()
        for basis, value in chain.terms.items():
            for target, coefficient in self._image(basis, direction).terms.items():
                out.add_term(target, value * coefficient)
        return out

    def __repr__(self):
        return f"{type(self).__name__}({self.label})"


def boundary(family: ComplexFamily, x, direction: str = HORIZONTAL) -> ChainElement:
    """Image of a basis element under the horizontal or vertical map of a family"""
    return family.boundary(x, direction)


# -- multiplication strategies for Y --------------------------------------------------

Products = Dict[Tuple[int, int], AElement]


class _ClosedProducts:
    """Products of a x^i y^j with x, y and A by the closed commutation formulas"""

    def __init__(self, spec: SkewAlgebra):
        self.spec = spec

    def right_a(self, a: AElement, i: int, j: int, m: AElement) -> Products:
        return {(i, j): a * self.spec.commute_past(i, j, m)}

    def right_x(self, a: AElement, i: int, j: int) -> Products:
        return self.spec.times_x(a, i, j)

    def left_x(self, a: AElement, i: int, j: int) -> Products:
        return {(i + 1, j): apply_automorphism(self.spec.alpha, a)}

    def right_y(self, a: AElement, i: int, j: int) -> Products:
        return {(i, j + 1): a}

    def left_y(self, a: AElement, i: int, j: int) -> Products:
        return self.spec.y_times(a, i, j)


class _GenericProducts:
    """The same products computed by multiplying normal forms in E"""

    def __init__(self, spec: SkewAlgebra):
        self.spec = spec

    def right_a(self, a, i, j, m):
        return e_mul(self.spec.term(a, i, j), self.spec.embed(m)).terms

    def right_x(self, a, i, j):
        return e_mul(self.spec.term(a, i, j), self.spec.x()).terms

    def left_x(self, a, i, j):
        return e_mul(self.spec.x(), self.spec.term(a, i, j)).terms

    def right_y(self, a, i, j):
        return e_mul(self.spec.term(a, i, j), self.spec.y()).terms

    def left_y(self, a, i, j):
        return e_mul(self.spec.y(), self.spec.term(a, i, j)).terms


def _add_products(out: ChainElement, products: Products, factors: Sequence[AElement],
                  e1: int, e2: int, value: Scalar) -> None:
    for (i, j), coefficient in products.items():
        out.add_product(coefficient, i, j, factors, e1, e2, value)


# -- Y ---------------------------------------------------------------------------------

class YComplex(ComplexFamily):
    """
    The double complex Y(E) computing HH(E), all weights at once.

    Basis elements a x^i y^j (x) m_1 .. m_s e1^u e2^v.  The horizontal map is
    the twisted Hochschild boundary of the tensor part plus the x-terms on e1
    elements; the vertical map carries the y-terms and, on e1e2 elements,
    the insertion of p^-1 u - alpha(u) into every slot.
    """

    name = "Y"

    def __init__(self, spec: SkewAlgebra, variant: str = "statement",
                 weights: Optional[Sequence[int]] = None):
        super().__init__(spec)
        if variant not in VARIANTS:
            raise ValueError(f"unknown variant {variant!r}, expected one of {VARIANTS}")
        self.variant = variant
        self.weights = None if weights is None else tuple(weights)
        self.products = _GenericProducts(spec) if variant == "generic" else _ClosedProducts(spec)
        self.base = spec.base
        self.laurent_window = self.base.allows_negative
        self.grading = detect_grading(spec)
        identity = Automorphism.identity(self.base)
        self.beta_inv = spec.beta.inverse()
        self.wraps = {
            (0, 0): identity,
            (1, 0): spec.alpha_inv,
            (0, 1): self.beta_inv,
            (1, 1): spec.gamma_inv,
        }
        self.insertion = spec.u.scale(ONE / spec.p) - apply_automorphism(spec.alpha, spec.u)
        logger.debug(f"{self.label} grading {self.grading}")

    # -- membership and windows --------------------------------------------

    @property
    def window_mode(self) -> str:
        return "graded" if self.grading is not None else "box"

    def minimum_margin(self) -> Margin:
        if self.grading is not None:
            return ZERO_MARGIN
        return Margin(index=1, degree=max(1, u_extent(self.spec)), tensor=1)

    def check_member(self, x) -> None:
        if not isinstance(x, ChainBasisElement):
            raise BasisMembershipError(f"{x!r} is not a basis element of {self.label}")
        try:
            self.base.check_monomial(x.coefficient)
            for factor in x.tensor:
                self.base.check_monomial(factor)
        except ValueError as exc:
            raise BasisMembershipError(f"{x.describe(self.names, True)}: {exc}") from None
        if self.weights is not None and x.weight not in self.weights:
            raise BasisMembershipError(f"{x.describe(self.names, True)} has weight outside {self.weights}")

    def in_window(self, x, window: Window) -> bool:
        if x.weight not in window.weights or x.total > window.max_tensor or x.index > window.max_index:
            return False
        if self.laurent_window:
            exponents = [x.coefficient[0]] + [m[0] for m in x.tensor]
            return all(window.min_degree <= e <= window.max_degree for e in exponents)
        return window.min_degree <= x.degree <= window.max_degree

    def _coefficient_tensors(self, window: Window, length: int):
        if self.laurent_window:
            yield from laurent_coefficient_tensors(window.min_degree, window.max_degree, length)
            return
        for degree in range(max(0, window.min_degree), window.max_degree + 1):
            yield from coefficient_tensors(self.base, degree, length)

    def enumerate_window(self, window: Window) -> List[ChainBasisElement]:
        found = []
        for r in window.weights:
            for e1, e2 in FLAGS:
                for length in range(0, window.max_tensor - e1 - e2 + 1):
                    pairs = list(self._coefficient_tensors(window, length))
                    for i, j in weight_lattice(r, e1, e2, window.max_index):
                        for coefficient, tensor in pairs:
                            found.append(ChainBasisElement(coefficient, i, j, tensor, e1, e2))
        return found

    # -- graded blocks -----------------------------------------------------------

    def block_key(self, x) -> tuple:
        return grading_key(self.grading, x.weight, x.exponents, x.x_degree)

    def enumerate_block(self, key: tuple, max_total: int) -> List[ChainBasisElement]:
        r = key[0]
        found = []
        for exponents, X in grading_pieces(self.grading, key):
            degree = _piece_degree(exponents)
            if degree < 0:
                continue
            for e1, e2 in FLAGS:
                i = X - e1
                j = i + r + e1 - e2
                if i < 0 or j < 0:
                    continue
                for length in range(0, max_total - e1 - e2 + 1):
                    for coefficient, tensor in coefficient_tensors(self.base, degree, length):
                        element = ChainBasisElement(coefficient, i, j, tensor, e1, e2)
                        if _in_piece(exponents, element):
                            found.append(element)
        return found

    def block_keys(self, window: Window) -> List[tuple]:
        keys = []
        for r in window.weights:
            top = window.max_index + abs(r) + 2
            candidates = {grading_key(self.grading, r, exponents, X)
                          for degree in range(max(0, window.min_degree), window.max_degree + 1)
                          for exponents in self.base.monomials_of_degree(degree)
                          for X in range(top + 1)}
            for key in sorted(candidates):
                if any(self.in_window(b, window) for b in self.enumerate_block(key, window.max_tensor)):
                    keys.append(key)
        return keys

    # -- boundaries ----------------------------------------------------------------

    def _unpack(self, x: ChainBasisElement):
        a = self.base.monomial(x.coefficient)
        ms = [self.base.monomial(m) for m in x.tensor]
        return a, x.i, x.j, ms

    def _hochschild(self, out: ChainElement, x: ChainBasisElement) -> None:
        a, i, j, ms = self._unpack(x)
        s = len(ms)
        if s == 0:
            return
        if self.variant == "proof" and x.flags == (1, 0):
            first = {(i, j): a * apply_automorphism(self.spec.twist(-j, i - j), ms[0])}
        else:
            first = self.products.right_a(a, i, j, ms[0])
        _add_products(out, first, ms[1:], x.e1, x.e2, ONE)
        for l in range(1, s):
            merged = ms[l - 1] * ms[l]
            out.add_product(a, i, j, ms[:l - 1] + [merged] + ms[l + 1:], x.e1, x.e2, sign(l))
        wrapped = apply_automorphism(self.wraps[x.flags], ms[-1]) * a
        out.add_product(wrapped, i, j, ms[:-1], x.e1, x.e2, sign(s))

    def _horizontal(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        self._hochschild(out, x)
        if not x.e1:
            return out
        a, i, j, ms = self._unpack(x)
        s = len(ms)
        shifted = [apply_automorphism(self.spec.alpha_inv, m) for m in ms]
        if not x.e2:
            _add_products(out, self.products.right_x(a, i, j), shifted, 0, 0, sign(s))
            _add_products(out, self.products.left_x(a, i, j), ms, 0, 0, sign(s + 1))
        else:
            _add_products(out, self.products.right_x(a, i, j), shifted, 0, 1, sign(s))
            _add_products(out, self.products.left_x(a, i, j), ms, 0, 1, sign(s + 1) / self.spec.p)
        return out

    def _vertical(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        a, i, j, ms = self._unpack(x)
        s = len(ms)
        shifted = [apply_automorphism(self.beta_inv, m) for m in ms]
        if not x.e1:
            _add_products(out, self.products.right_y(a, i, j), shifted, 0, 0, sign(s))
            _add_products(out, self.products.left_y(a, i, j), ms, 0, 0, sign(s + 1))
            return out
        _add_products(out, self.products.right_y(a, i, j), shifted, 1, 0, sign(s + 1) / self.spec.p)
        _add_products(out, self.products.left_y(a, i, j), ms, 1, 0, sign(s))
        if self.insertion:
            tails = [apply_automorphism(self.spec.gamma_inv, m) for m in ms]
            for l in range(s + 1):
                out.add_product(a, i, j, ms[:l] + [self.insertion] + tails[l:], 0, 0, sign(l))
        return out


def weight_lattice(r: int, e1: int, e2: int, max_index: int) -> Iterator[Tuple[int, int]]:
    """(i, j) with j - i = r + e1 - e2 and min(i, j) <= max_index"""
    offset = r + e1 - e2
    i = max(0, -offset)
    while True:
        j = i + offset
        if min(i, j) > max_index:
            return
        yield i, j
        i += 1


# -- reduced complex ------------------------------------------------------------------

def reduced_hypotheses(spec: SkewAlgebra, window: Window) -> List[Diagnostic]:
    """
    Conditions under which the reduced complex computes HH on a window.

    A must split as k + I with I the augmentation ideal (no Laurent
    variables), alpha and gamma must preserve I (scalings), and
    p^-i (gamma^-1 alpha) - id must be invertible on every monomial tensor
    of the window, i.e. p^-i c(E) != 1 for the eigenvalue c(E) of the
    exponent vector E.
    """
    problems: List[Diagnostic] = []
    base = spec.base
    if base.allows_negative:
        problems.append(Diagnostic("A = k + I", "t^-1", "Laurent algebras have no augmentation ideal"))
        return problems
    if not (spec.alpha.is_scaling and spec.gamma.is_scaling):
        problems.append(Diagnostic("alpha(I) = I and gamma(I) = I", "t", "a shift does not preserve I"))
        return problems
    ratios = [a / g for a, g in zip(spec.alpha.scale, spec.gamma.scale)]
    for n in range(1, window.max_tensor + 1):
        for degree in range(n, window.max_degree + 1):
            for exponents in base.monomials_of_degree(degree):
                eigenvalue = ONE
                for ratio, e in zip(ratios, exponents):
                    eigenvalue = eigenvalue * ratio ** e
                for i in range(window.max_index + 2):
                    if eigenvalue / spec.p ** i == ONE:
                        problems.append(Diagnostic(
                            "p^-i (gamma^-1 alpha) - id bijective", f"i={i}, exponents={exponents}, n={n}"))
    return problems


class ReducedComplex(ComplexFamily):
    """The k-linear double complex of x^i y^j e1^u e2^v obtained modulo I"""

    name = "reduced"

    def __init__(self, spec: SkewAlgebra, weights: Optional[Sequence[int]] = None):
        super().__init__(spec)
        if spec.base.allows_negative:
            raise FamilyHypothesisError("A = k + I", "Laurent algebras have no augmentation ideal")
        if not (spec.alpha.is_scaling and spec.gamma.is_scaling):
            raise FamilyHypothesisError("alpha(I) = I and gamma(I) = I", "automorphisms must be scalings")
        self.weights = None if weights is None else tuple(weights)
        self.u_bar = spec.u.constant_term()
        self.unit = spec.base.unit_monomial()

    def minimum_margin(self) -> Margin:
        return Margin(index=1, degree=0, tensor=0)

    def check_member(self, x) -> None:
        if not isinstance(x, ChainBasisElement) or x.tensor or x.coefficient != self.unit:
            raise BasisMembershipError(f"{x!r} is not a basis element of the reduced complex")
        if self.weights is not None and x.weight not in self.weights:
            raise BasisMembershipError(f"{x.describe(self.names, True)} has weight outside {self.weights}")

    def in_window(self, x, window: Window) -> bool:
        return x.weight in window.weights and x.index <= window.max_index and x.total <= window.max_tensor

    def enumerate_window(self, window: Window) -> List[ChainBasisElement]:
        found = []
        for r in window.weights:
            for e1, e2 in FLAGS:
                if e1 + e2 > window.max_tensor:
                    continue
                for i, j in weight_lattice(r, e1, e2, window.max_index):
                    found.append(ChainBasisElement(self.unit, i, j, (), e1, e2))
        return found

    def _term(self, out: ChainElement, value: Scalar, i: int, j: int, e1: int, e2: int):
        if value and i >= 0 and j >= 0:
            out.add_term(ChainBasisElement(self.unit, i, j, (), e1, e2), value)

    def _horizontal(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        if not x.e1:
            return out
        p, i, j = self.spec.p, x.i, x.j
        pj = p ** j
        lead = pj - ONE if not x.e2 else pj - ONE / p
        self._term(out, lead, i + 1, j, 0, x.e2)
        self._term(out, -(pj - ONE) * self.u_bar, i, j - 1, 0, x.e2)
        return out

    def _vertical(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        p, i, j = self.spec.p, x.i, x.j
        pi = p ** i
        if not x.e1:
            self._term(out, ONE - pi, i, j + 1, 0, 0)
            self._term(out, (pi - ONE) * self.u_bar, i - 1, j, 0, 0)
        else:
            self._term(out, pi - ONE / p, i, j + 1, 1, 0)
            self._term(out, -(pi - ONE) * self.u_bar, i - 1, j, 1, 0)
        return out


# -- W and W-tilde ----------------------------------------------------------------------

def _short_basis(coefficient: Monomial, i: int, j: int, e1: int, e2: int, marked: bool) -> ChainBasisElement:
    return ChainBasisElement(coefficient, i, j, MARKER if marked else (), e1, e2)


class _ShortComplex(ComplexFamily):
    """Families whose tensors are empty or the single marker t"""

    def check_member(self, x) -> None:
        if not isinstance(x, ChainBasisElement) or x.tensor not in ((), MARKER):
            raise BasisMembershipError(f"{x!r} is not a basis element of {self.label}")
        if x.weight != self.r:
            raise BasisMembershipError(f"{x.describe(self.names, True)} is not of weight {self.r}")
        try:
            self.spec.base.check_monomial(x.coefficient)
        except ValueError as exc:
            raise BasisMembershipError(str(exc)) from None

    def _put(self, out: ChainElement, P: AElement, i: int, j: int, e1: int, e2: int,
             marked: bool, value: Scalar = ONE) -> None:
        if i < 0 or j < 0 or not P:
            return
        out.add_product(P, i, j, [], e1, e2, value, monomial_tensor=MARKER if marked else ())


class WComplex(_ShortComplex):
    """
    Weight-zero complex for A = k[t], alpha(t) = t + lambda, gamma = id, p = 1.

    Positions: P x^i y^i (0,0); P x^i y^i (x) t and Q x^j y^(j+1) e1 (1,0);
    P x^i y^(i+1) (x) t e1 (2,0); P x^(i+1) y^i e2 (0,1); P x^(i+1) y^i (x) t e2
    and Q x^i y^i e1e2 (1,1); P x^i y^i (x) t e1e2 (2,1).
    Windows are cut by the filtration deg P + c (i + e1) - e1 - e2, which no
    map raises.
    """

    name = "W"
    r = 0

    def __init__(self, spec: SkewAlgebra):
        super().__init__(spec)
        base = spec.base
        if base.kind != AlgebraKind.POLYNOMIAL:
            raise FamilyHypothesisError("A = k[t]", f"got {base.kind.value}")
        if not spec.alpha.is_shift or not spec.alpha.shift:
            raise FamilyHypothesisError("alpha(t) = t + lambda with lambda != 0")
        if not spec.gamma.is_identity:
            raise FamilyHypothesisError("gamma = id")
        if spec.p != ONE:
            raise FamilyHypothesisError("p = 1")
        self.lam = spec.alpha.shift
        self.u = spec.u
        self.slope = max(spec.u.degree(), 1)
        self.u_prime_shift = T_lambda(derivative(spec.u), self.lam)

    @property
    def window_mode(self) -> str:
        return "filtration"

    def level(self, x: ChainBasisElement) -> int:
        return sum(x.coefficient) + self.slope * x.x_degree - x.e1 - x.e2

    def in_window(self, x, window: Window) -> bool:
        return x.weight in window.weights and x.total <= window.max_tensor and self.level(x) <= window.max_degree

    def enumerate_window(self, window: Window) -> List[ChainBasisElement]:
        if self.r not in window.weights:
            return []
        found = []
        for e1, e2 in FLAGS:
            for marked in (False, True):
                if len(MARKER) * marked + e1 + e2 > window.max_tensor:
                    continue
                X = 0
                while self.slope * X - e1 - e2 <= window.max_degree:
                    i = X - e1
                    j = i + e1 - e2
                    if i >= 0 and j >= 0:
                        for degree in range(window.max_degree - self.slope * X + e1 + e2 + 1):
                            found.append(_short_basis((degree,), i, j, e1, e2, marked))
                    X += 1
        return found

    def _shifted_u(self, k: int) -> AElement:
        return T_lambda(self.u, self.lam * k)

    def _horizontal(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        P = self.spec.base.monomial(x.coefficient)
        marked = bool(x.tensor)
        i, lam = x.i, self.lam
        if x.flags == (1, 0):
            sgn = ONE if marked else -ONE
            self._put(out, T_lambda(P, lam), i + 1, i + 1, 0, 0, marked, sgn)
            self._put(out, P * self._shifted_u(i + 1), i, i, 0, 0, marked, sgn)
        elif x.flags == (1, 1):
            sgn = ONE if marked else -ONE
            self._put(out, T_lambda(P, lam), i + 1, i, 0, 1, marked, sgn)
            evaluated = substitute(self._shifted_u(i), ONE, lam)
            self._put(out, P * evaluated, i, i - 1, 0, 1, marked, sgn)
        return out

    def _vertical(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        P = self.spec.base.monomial(x.coefficient)
        marked = bool(x.tensor)
        i, lam = x.i, self.lam
        back = substitute(P, ONE, -lam)
        if x.flags == (0, 1):
            # source P x^i y^(i-1) e2, i >= 1
            sgn = -ONE if marked else ONE
            self._put(out, T_lambda(P, -lam), i, i, 0, 0, marked, -sgn)
            self._put(out, back * self._shifted_u(i), i - 1, i - 1, 0, 0, marked, sgn)
        else:
            sgn = -ONE if marked else ONE
            self._put(out, T_lambda(P, -lam), i, i + 1, 1, 0, marked, sgn)
            self._put(out, back * self._shifted_u(i), i - 1, i, 1, 0, marked, -sgn)
            if not marked:
                self._put(out, P * self.u_prime_shift, i, i, 0, 0, True, -ONE)
        return out


class WTildeComplex(_ShortComplex):
    """
    Weight-r complex for A = k[t, t^-1], alpha(t) = q t, gamma = id, p = 1.

    Same shapes as ``WComplex`` with j - i = r + e1 - e2.  The variant
    "as_printed" places the last term of the e1e2 (x) t boundary on e1, which
    breaks the weight and is rejected.
    """

    name = "W~"
    laurent_window = True

    def __init__(self, spec: SkewAlgebra, r: int = 0, variant: str = "corrected"):
        super().__init__(spec)
        base = spec.base
        if base.kind != AlgebraKind.LAURENT:
            raise FamilyHypothesisError("A = k[t, t^-1]", f"got {base.kind.value}")
        if not spec.alpha.is_scaling:
            raise FamilyHypothesisError("alpha(t) = q t")
        if not spec.gamma.is_identity:
            raise FamilyHypothesisError("gamma = id")
        if spec.p != ONE:
            raise FamilyHypothesisError("p = 1")
        if variant not in ("corrected", "as_printed"):
            raise ValueError(f"unknown variant {variant!r}")
        self.r = r
        self.variant = variant
        self.q = spec.alpha.scale[0]
        self.u = spec.u
        self.t = base.t
        self.u_difference = q_derivative(T_tilde(spec.u, 1, 0, self.q), r, self.q)

    @property
    def label(self) -> str:
        return f"W~[r={self.r}, {self.variant}]"

    def minimum_margin(self) -> Margin:
        return Margin(index=1, degree=max(1, u_extent(self.spec)), tensor=1)

    def in_window(self, x, window: Window) -> bool:
        return (x.weight in window.weights and x.total <= window.max_tensor
                and x.index <= window.max_index
                and window.min_degree <= x.coefficient[0] <= window.max_degree)

    def enumerate_window(self, window: Window) -> List[ChainBasisElement]:
        if self.r not in window.weights:
            return []
        found = []
        for e1, e2 in FLAGS:
            for marked in (False, True):
                if int(marked) + e1 + e2 > window.max_tensor:
                    continue
                for i, j in weight_lattice(self.r, e1, e2, window.max_index):
                    for degree in range(window.min_degree, window.max_degree + 1):
                        found.append(_short_basis((degree,), i, j, e1, e2, marked))
        return found

    def _tilde_u(self, i: int, j: int) -> AElement:
        return T_tilde(self.u, i, j, self.q)

    def _horizontal(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        P = self.spec.base.monomial(x.coefficient)
        marked = bool(x.tensor)
        i, j, r, q = x.i, x.j, self.r, self.q
        qinv = ONE / q
        if x.flags == (0, 0):
            if marked:
                self._put(out, self.t * P, i, j, 0, 0, False, q ** (-r) - ONE)
        elif x.flags == (0, 1):
            if marked:
                self._put(out, self.t * P, i, j, 0, 1, False, q ** (1 - r) - q)
        elif x.flags == (1, 0):
            if not marked:
                self._put(out, T_tilde(P, 1, 0, q), i + 1, j, 0, 0, False, -ONE)
                self._put(out, P * self._tilde_u(i + 1, -r), i, j - 1, 0, 0, False, -ONE)
            else:
                self._put(out, Tprime_q(P, q), i + 1, j, 0, 0, True)
                self._put(out, P * self._tilde_u(i + 1, -r), i, j - 1, 0, 0, True, qinv)
                self._put(out, self.t * P, i, j, 1, 0, False, q ** (-r - 1) - qinv)
        else:
            if not marked:
                self._put(out, T_tilde(P, 1, 0, q), i + 1, j, 0, 1, False, -ONE)
                self._put(out, P * self._tilde_u(i + 1, 1 - r), i, j - 1, 0, 1, False, -ONE)
            else:
                self._put(out, Tprime_q(P, q), i + 1, j, 0, 1, True)
                self._put(out, P * self._tilde_u(i + 1, 1 - r), i, j - 1, 0, 1, True, qinv)
                e2 = 1 if self.variant == "corrected" else 0
                self._put(out, self.t * P, i, j, 1, e2, False, q ** (-r) - ONE)
        return out

    def _vertical(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        P = self.spec.base.monomial(x.coefficient)
        marked = bool(x.tensor)
        i, j, q = x.i, x.j, self.q
        back = substitute(P, ONE / q)
        tail = back * self._tilde_u(i, 0)
        if x.flags == (0, 1):
            if not marked:
                self._put(out, T_tilde(P, -1, 0, q), i, j + 1, 0, 0, False, -ONE)
                self._put(out, tail, i - 1, j, 0, 0, False)
            else:
                self._put(out, Tprime_qinv(P, q), i, j + 1, 0, 0, True)
                self._put(out, tail, i - 1, j, 0, 0, True, -ONE)
        else:
            if not marked:
                self._put(out, T_tilde(P, -1, 0, q), i, j + 1, 1, 0, False)
                self._put(out, tail, i - 1, j, 1, 0, False, -ONE)
                self._put(out, P * self.u_difference, i, j, 0, 0, True, -ONE)
            else:
                self._put(out, Tprime_qinv(P, q), i, j + 1, 1, 0, True, -ONE)
                self._put(out, tail, i - 1, j, 1, 0, True)
        return out


# -- bar complex ----------------------------------------------------------------------

class BarComplex(ComplexFamily):
    """
    Canonical Hochschild complex E (x) Ebar^n with b = sum (-1)^l d_l.

    Slots are basis monomials a x^i y^j of E; slots after the first are
    non-constant.  Small windows only: it serves as an oracle for Y.
    """

    name = "bar"

    def __init__(self, spec: SkewAlgebra, weights: Optional[Sequence[int]] = None):
        super().__init__(spec)
        self.base = spec.base
        self.weights = None if weights is None else tuple(weights)
        self.grading = detect_grading(spec)
        self.unit = self.base.unit_monomial()

    @property
    def window_mode(self) -> str:
        return "graded" if self.grading is not None else "box"

    def minimum_margin(self) -> Margin:
        if self.grading is not None:
            return ZERO_MARGIN
        return Margin(index=1, degree=max(1, u_extent(self.spec)), tensor=1)

    def check_member(self, x) -> None:
        if not isinstance(x, BarBasisElement):
            raise BasisMembershipError(f"{x!r} is not a bar basis element")
        if self.weights is not None and x.weight not in self.weights:
            raise BasisMembershipError(f"{x.describe(self.names, True)} has weight outside {self.weights}")

    def total_degree(self, x: BarBasisElement) -> int:
        return x.degree + sum(i + j for _, i, j in x.slots)

    def in_window(self, x, window: Window) -> bool:
        return (x.weight in window.weights and x.n <= window.max_tensor
                and self.total_degree(x) <= window.max_degree)

    def _slot_choices(self, degree: int, i: int, j: int, inner: bool):
        for monomial in self.base.monomials_of_degree(degree):
            if inner and degree == 0 and i == 0 and j == 0:
                continue
            yield (monomial, i, j)

    def _distribute(self, degree: int, X: int, Y: int, n: int) -> Iterator[BarBasisElement]:
        for degrees in compositions_at_least(degree, n + 1):
            for xs in compositions_at_least(X, n + 1):
                for ys in compositions_at_least(Y, n + 1):
                    pools = [list(self._slot_choices(degrees[k], xs[k], ys[k], k > 0)) for k in range(n + 1)]
                    for slots in product(*pools):
                        yield BarBasisElement(tuple(slots))

    def enumerate_window(self, window: Window) -> List[BarBasisElement]:
        found = []
        for n in range(window.max_tensor + 1):
            for total in range(window.max_degree + 1):
                for degree in range(total + 1):
                    for X in range(total - degree + 1):
                        Y = total - degree - X
                        if Y - X not in window.weights:
                            continue
                        found.extend(self._distribute(degree, X, Y, n))
        return found

    def block_key(self, x) -> tuple:
        return grading_key(self.grading, x.weight, x.exponents, x.x_degree)

    def enumerate_block(self, key: tuple, max_total: int) -> List[BarBasisElement]:
        r = key[0]
        found = []
        for exponents, X in grading_pieces(self.grading, key):
            degree = _piece_degree(exponents)
            Y = X + r
            if degree < 0 or Y < 0:
                continue
            for n in range(max_total + 1):
                found.extend(b for b in self._distribute(degree, X, Y, n) if _in_piece(exponents, b))
        return found

    def block_keys(self, window: Window) -> List[tuple]:
        keys = []
        for r in window.weights:
            candidates = {grading_key(self.grading, r, exponents, X)
                          for degree in range(window.max_degree + 1)
                          for exponents in self.base.monomials_of_degree(degree)
                          for X in range(window.max_degree + 1)}
            for key in sorted(candidates):
                if any(self.in_window(b, window) for b in self.enumerate_block(key, window.max_tensor)):
                    keys.append(key)
        return keys

    def _merge(self, out: ChainElement, before: tuple, left, right, after: tuple, value: Scalar) -> None:
        (m1, i1, j1), (m2, i2, j2) = left, right
        products = self.spec.multiply_terms(self.base.monomial(m1), i1, j1, self.base.monomial(m2), i2, j2)
        for (i, j), coefficient in products.items():
            for monomial, c in coefficient.terms.items():
                slot = (monomial, i, j)
                if before and monomial == self.unit and i == 0 and j == 0:
                    continue
                out.add_term(BarBasisElement(before + (slot,) + after), value * c)

    def _horizontal(self, x: BarBasisElement) -> ChainElement:
        out = ChainElement()
        slots, n = x.slots, x.n
        if n == 0:
            return out
        for l in range(n):
            self._merge(out, slots[:l], slots[l], slots[l + 1], slots[l + 2:], sign(l))
        self._merge(out, (), slots[n], slots[0], slots[1:n], sign(n))
        return out


# -- X(A_f^g) ---------------------------------------------------------------------------

class TwistedComplex(ComplexFamily):
    """
    X(A_f^g): A_f^g <- A_f^g with d(P) = (f(t) - g(t)) P, for shifts f and g.

    Position 0 holds t^k, position 1 holds t^k (x) t.  Both shifts make
    f(t) - g(t) a constant, so each degree is a block.
    """

    name = "X"

    def __init__(self, f: Automorphism, g: Automorphism):
        super().__init__(None)
        base = f.algebra
        if base.kind != AlgebraKind.POLYNOMIAL or g.algebra != base:
            raise FamilyHypothesisError("A = k[t]", "both automorphisms must act on k[t]")
        if not (f.is_shift and g.is_shift):
            raise UnsupportedAutomorphismError("X(A_f^g) needs shift automorphisms")
        self.base = base
        self.f = f
        self.g = g
        self.factor = f.image_of_variable() - g.image_of_variable()

    @property
    def window_mode(self) -> str:
        return "graded"

    def check_member(self, x) -> None:
        if (not isinstance(x, ChainBasisElement) or x.tensor not in ((), MARKER)
                or x.i or x.j or x.e1 or x.e2 or x.coefficient[0] < 0):
            raise BasisMembershipError(f"{x!r} is not a basis element of X(A_f^g)")

    def in_window(self, x, window: Window) -> bool:
        return x.total <= window.max_tensor and window.min_degree <= x.coefficient[0] <= window.max_degree

    def block_keys(self, window: Window) -> List[tuple]:
        return [(k,) for k in range(max(0, window.min_degree), window.max_degree + 1)]

    def enumerate_block(self, key: tuple, max_total: int) -> List[ChainBasisElement]:
        (k,) = key
        found = [_short_basis((k,), 0, 0, 0, 0, False)]
        if max_total >= 1:
            found.append(_short_basis((k,), 0, 0, 0, 0, True))
        return found

    def enumerate_window(self, window: Window) -> List[ChainBasisElement]:
        found = []
        for key in self.block_keys(window):
            found.extend(self.enumerate_block(key, window.max_tensor))
        return found

    def _horizontal(self, x: ChainBasisElement) -> ChainElement:
        out = ChainElement()
        if x.tensor:
            out.add_product(self.factor * self.base.monomial(x.coefficient), 0, 0, [], 0, 0)
        return out

    def comparison(self, P: AElement, n: int) -> AElement:
        """The comparison map on P (x) t^n: D_{f,g}(t^n) P"""
        return divided_difference((n,), self.f, self.g) * P


def twisted_complex_X(f: Automorphism, g: Automorphism) -> TwistedComplex:
    return TwistedComplex(f, g)


def exactness_cases(spec: SkewAlgebra, r: int) -> Dict[str, Tuple[Automorphism, Automorphism]]:
    """The three (f, g) pairs for which X(A_f^g) is exact when r != 0"""
    alpha = spec.alpha
    identity = Automorphism.identity(spec.base)
    return {
        "a": (alpha.power(-r), identity),
        "b": (alpha.power(-r - 1), spec.alpha_inv),
        "c": (alpha.power(1 - r), alpha),
    }


# -- selection ----------------------------------------------------------------------------

FAMILIES = ("Y", "reduced", "W", "Wtilde", "bar", "X")


def select_family(kind: str, spec: SkewAlgebra, **params) -> ComplexFamily:
    """
    Build a family after checking the hypotheses it needs.

    ``params``: variant (Y, Wtilde), weights (Y, reduced, bar), r (Wtilde),
    f and g (X).
    """
    problems = validate_spec(spec) if spec is not None else []
    if problems:
        first = problems[0]
        raise FamilyHypothesisError(first.check, first.witness)
    if kind == "Y":
        return YComplex(spec, params.get("variant", "statement"), params.get("weights"))
    if kind == "reduced":
        return ReducedComplex(spec, params.get("weights"))
    if kind == "W":
        return WComplex(spec)
    if kind == "Wtilde":
        return WTildeComplex(spec, params.get("r", 0), params.get("variant", "corrected"))
    if kind == "bar":
        return BarComplex(spec, params.get("weights"))
    if kind == "X":
        return TwistedComplex(params["f"], params["g"])
    raise ValueError(f"unknown complex family {kind!r}, expected one of {FAMILIES}")
