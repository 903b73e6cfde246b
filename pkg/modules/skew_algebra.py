"""
The algebra E = E(A, u, alpha, p).

E is generated over A by x and y subject to

    x a = alpha(a) x,    y a = beta(a) y,    y x = p x y + u - p alpha(u),

with beta = gamma o alpha^-1.  Elements are kept in the normal form
sum a_ij x^i y^j and multiplied with the closed commutation formulas
(``x^i y^j a``, ``a x^i y^j . x`` and ``y . a x^i y^j``).  An independent
letter-by-letter rewriting engine is kept for testing those formulas.
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union
import logging

from modules.base_algebra import AElement, Automorphism, BaseAlgebra, Monomial, apply_automorphism
from modules.errors import DegenerateParameterError
from modules.scalars import ONE, ZERO, Scalar, scalar

logger = logging.getLogger(__name__)

Exponents = Tuple[int, int]


@dataclass
class Diagnostic:
    """One violated hypothesis with the element that witnesses it"""
    check: str
    witness: str
    detail: str = ""


class SkewAlgebra:
    """The data (A, u, alpha, gamma, p) defining E"""

    def __init__(self, base: BaseAlgebra, alpha: Automorphism, gamma: Automorphism,
                 u: AElement, p=ONE):
        self.base = base
        self.alpha = alpha
        self.gamma = gamma
        self.u = u
        self.p = scalar(p)
        if not self.p:
            raise DegenerateParameterError("p must be invertible")
        self.alpha_inv = alpha.inverse()
        self.gamma_inv = gamma.inverse()
        self.beta = gamma.compose(self.alpha_inv)
        self._power_cache: Dict[Tuple[int, int], Automorphism] = {}
        self._u_power_cache: Dict[int, AElement] = {}
        self._x_cache: Dict[Tuple[int, int, int], Dict[Exponents, AElement]] = {}
        logger.debug(f"skew algebra over {base} with u = {u}")

    def __repr__(self):
        return f"SkewAlgebra(base={self.base}, u={self.u}, p={self.p})"

    # -- automorphism powers ---------------------------------------------

    def twist(self, gamma_exp: int, alpha_exp: int) -> Automorphism:
        """gamma^gamma_exp o alpha^alpha_exp"""
        key = (gamma_exp, alpha_exp)
        auto = self._power_cache.get(key)
        if auto is None:
            auto = self.gamma.power(gamma_exp).compose(self.alpha.power(alpha_exp))
            self._power_cache[key] = auto
        return auto

    def alpha_power_u(self, exponent: int) -> AElement:
        image = self._u_power_cache.get(exponent)
        if image is None:
            image = apply_automorphism(self.alpha.power(exponent), self.u)
            self._u_power_cache[exponent] = image
        return image

    # -- elements ----------------------------------------------------------

    def element(self, terms: Dict[Exponents, AElement]) -> "EElement":
        return EElement(self, terms)

    def zero(self) -> "EElement":
        return EElement(self, {})

    def one(self) -> "EElement":
        return self.embed(self.base.one())

    def embed(self, a: AElement) -> "EElement":
        return EElement(self, {(0, 0): a})

    def term(self, a: AElement, i: int, j: int) -> "EElement":
        return EElement(self, {(i, j): a})

    def x(self) -> "EElement":
        return self.term(self.base.one(), 1, 0)

    def y(self) -> "EElement":
        return self.term(self.base.one(), 0, 1)

    # -- closed commutation formulas -------------------------------------

    def commute_past(self, i: int, j: int, a: AElement) -> AElement:
        """x^i y^j a = gamma^j alpha^(i-j)(a) x^i y^j"""
        return apply_automorphism(self.twist(j, i - j), a)

    def times_x(self, a: AElement, i: int, j: int) -> Dict[Exponents, AElement]:
        """(a x^i y^j) . x = p^j a x^(i+1) y^j - a (p^j alpha^(i+1)(u) - alpha^(i-j+1)(u)) x^i y^(j-1)"""
        pj = self.p ** j
        out = {(i + 1, j): a.scale(pj)}
        if j > 0:
            correction = self.alpha_power_u(i + 1).scale(pj) - self.alpha_power_u(i - j + 1)
            product = a * correction
            if product:
                out[(i, j - 1)] = -product
        return out

    def y_times(self, a: AElement, i: int, j: int) -> Dict[Exponents, AElement]:
        """y . (a x^i y^j) = p^i beta(a) x^i y^(j+1) - beta(a) (p^i alpha^i(u) - u) x^(i-1) y^j"""
        pi = self.p ** i
        b = apply_automorphism(self.beta, a)
        out = {(i, j + 1): b.scale(pi)}
        if i > 0:
            correction = self.alpha_power_u(i).scale(pi) - self.u
            product = b * correction
            if product:
                out[(i - 1, j)] = -product
        return out

    def _xy_times_x_power(self, i: int, j: int, k: int) -> Dict[Exponents, AElement]:
        """Normal form of x^i y^j x^k, cached"""
        key = (i, j, k)
        cached = self._x_cache.get(key)
        if cached is not None:
            return cached
        if k == 0:
            result = {(i, j): self.base.one()}
        else:
            previous = self._xy_times_x_power(i, j, k - 1)
            result: Dict[Exponents, AElement] = {}
            for (a_i, a_j), coefficient in previous.items():
                for exps, value in self.times_x(coefficient, a_i, a_j).items():
                    result[exps] = result[exps] + value if exps in result else value
            result = {exps: value for exps, value in result.items() if value}
        self._x_cache[key] = result
        return result

    def multiply_terms(self, a1: AElement, i1: int, j1: int,
                       a2: AElement, i2: int, j2: int) -> Dict[Exponents, AElement]:
        """(a1 x^i1 y^j1)(a2 x^i2 y^j2) in normal form"""
        coefficient = a1 * self.commute_past(i1, j1, a2)
        if not coefficient:
            return {}
        out: Dict[Exponents, AElement] = {}
        for (i, j), value in self._xy_times_x_power(i1, j1, i2).items():
            out[(i, j + j2)] = coefficient * value
        return out


class EElement:
    """Normal-form element sum a_ij x^i y^j of E"""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra: SkewAlgebra, terms: Dict[Exponents, AElement]):
        self.algebra = algebra
        clean = {}
        for (i, j), coefficient in terms.items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent x^{i} y^{j} is not an element of E")
            if coefficient:
                clean[(i, j)] = coefficient
        self.terms = clean

    def _coerce(self, other) -> "EElement":
        if isinstance(other, EElement):
            return other
        if isinstance(other, AElement):
            return self.algebra.embed(other)
        return self.algebra.embed(self.algebra.base.const(other))

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for exps, coefficient in other.terms.items():
            terms[exps] = terms[exps] + coefficient if exps in terms else coefficient
        return EElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return EElement(self.algebra, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "EElement":
        return EElement(self.algebra, {e: c.scale(value) for e, c in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (EElement, AElement)):
            return e_mul(self, self._coerce(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, AElement):
            return e_mul(self._coerce(other), self)
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, EElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == self._coerce(other).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"EElement({self})"

    def __str__(self):
        from modules.notation import render_e_element
        return render_e_element(self)

    def weights(self) -> set:
        return {j - i for (i, j) in self.terms}

    def basis_terms(self):
        """Iterate (A-monomial, i, j, Scalar) over the basis expansion"""
        for (i, j), coefficient in sorted(self.terms.items()):
            for monomial, value in coefficient.sorted_terms():
                yield monomial, i, j, value


def e_mul(a: EElement, b: EElement) -> EElement:
    """Normal-form product in E; bilinear over the term expansions"""
    algebra = a.algebra
    terms: Dict[Exponents, AElement] = {}
    for (i1, j1), a1 in a.terms.items():
        for (i2, j2), a2 in b.terms.items():
            for exps, value in algebra.multiply_terms(a1, i1, j1, a2, i2, j2).items():
                terms[exps] = terms[exps] + value if exps in terms else value
    return EElement(algebra, terms)


# -- validation ----------------------------------------------------------------

def validate_spec(spec: SkewAlgebra) -> List[Diagnostic]:
    """Check gamma(u) = u, alpha gamma = gamma alpha and u a = gamma(a) u on generators"""
    problems: List[Diagnostic] = []
    if apply_automorphism(spec.gamma, spec.u) != spec.u:
        problems.append(Diagnostic("gamma(u) = u", str(spec.u)))
    if spec.alpha.compose(spec.gamma) != spec.gamma.compose(spec.alpha):
        problems.append(Diagnostic("alpha o gamma = gamma o alpha", "automorphisms",
                                   "the two composites differ"))
    for generator in spec.base.generators():
        left = spec.u * generator
        right = apply_automorphism(spec.gamma, generator) * spec.u
        if left != right:
            problems.append(Diagnostic("u a = gamma(a) u", str(generator),
                                       f"u a = {left}, gamma(a) u = {right}"))
    if problems:
        logger.warning(f"spec validation found {len(problems)} violated hypotheses")
    return problems


# -- Casimir element -------------------------------------------------------------

def casimir(spec: SkewAlgebra) -> EElement:
    """z = y x - u"""
    return spec.y() * spec.x() - spec.embed(spec.u)


def relation_check(spec: SkewAlgebra) -> List[Diagnostic]:
    """Verify z x = p x z, z y = p^-1 y z, z a = gamma(a) z and the two forms of z"""
    z = casimir(spec)
    x, y = spec.x(), spec.y()
    problems = []
    other_form = (x * y - spec.embed(spec.alpha_power_u(1))).scale(spec.p)
    if z != other_form:
        problems.append(Diagnostic("yx - u = p(xy - alpha(u))", str(z), str(other_form)))
    if z * x - (x * z).scale(spec.p) != 0:
        problems.append(Diagnostic("z x = p x z", str(z * x)))
    if z * y - (y * z).scale(ONE / spec.p) != 0:
        problems.append(Diagnostic("z y = p^-1 y z", str(z * y)))
    for generator in spec.base.generators():
        a = spec.embed(generator)
        image = spec.embed(apply_automorphism(spec.gamma, generator))
        if z * a != image * z:
            problems.append(Diagnostic("z a = gamma(a) z", str(generator)))
    return problems


# -- rewriting oracle ----------------------------------------------------------

Letter = Union[str, Tuple[str, Monomial]]


def _expand_letters(spec: SkewAlgebra, a: AElement) -> List[Tuple["Scalar", Letter]]:
    return [(c, ("a", m)) for m, c in a.terms.items()]


def normal_form_by_rewriting(spec: SkewAlgebra, word: Sequence) -> EElement:
    """
    Normal form of a word by elementary rewrites only.

    Words are sequences of "x", "y" and AElements.  Rules: merge adjacent
    A-letters, x a -> alpha(a) x, y a -> beta(a) y and y x -> p x y + u - p alpha(u).
    """
    base = spec.base
    start: List[Letter] = []
    pending: Dict[Tuple[Letter, ...], "Scalar"] = {(): ONE}
    for letter in word:
        expanded = []
        if isinstance(letter, AElement):
            expanded = _expand_letters(spec, letter)
        elif letter in ("x", "y"):
            expanded = [(ONE, letter)]
        else:
            raise ValueError(f"unknown letter {letter!r}")
        grown: Dict[Tuple[Letter, ...], "Scalar"] = {}
        for prefix, coefficient in pending.items():
            for value, piece in expanded:
                key = prefix + (piece,)
                grown[key] = grown.get(key, ZERO) + coefficient * value
        pending = grown

    result = spec.zero()
    alpha_u = spec.alpha_power_u(1)
    correction = spec.u - alpha_u.scale(spec.p)
    while pending:
        word_, coefficient = pending.popitem()
        if not coefficient:
            continue
        position = _first_redex(word_)
        if position is None:
            result = result + _word_value(spec, word_).scale(coefficient)
            continue
        left, right = word_[position], word_[position + 1]
        head, tail = word_[:position], word_[position + 2:]
        replacements: List[Tuple["Scalar", Tuple[Letter, ...]]] = []
        if isinstance(left, tuple) and isinstance(right, tuple):
            twist, monomial = base.monomial_product(left[1], right[1])
            replacements.append((twist, (("a", monomial),)))
        elif left == "x" and isinstance(right, tuple):
            image = spec.alpha.apply_monomial(right[1])
            replacements.extend((c, (("a", m), "x")) for m, c in image.terms.items())
        elif left == "y" and isinstance(right, tuple):
            image = apply_automorphism(spec.beta, base.monomial(right[1]))
            replacements.extend((c, (("a", m), "y")) for m, c in image.terms.items())
        else:
            replacements.append((spec.p, ("x", "y")))
            replacements.extend((c, (("a", m),)) for m, c in correction.terms.items())
        for value, middle in replacements:
            key = head + middle + tail
            pending[key] = pending.get(key, ZERO) + coefficient * value
    return result


def _first_redex(word: Tuple[Letter, ...]) -> Optional[int]:
    for index in range(len(word) - 1):
        left, right = word[index], word[index + 1]
        if isinstance(right, tuple):
            return index
        if left == "y" and right == "x":
            return index
    return None


def _word_value(spec: SkewAlgebra, word: Tuple[Letter, ...]) -> EElement:
    """Value of a word of the shape [a] x^i y^j"""
    a = spec.base.one()
    i = j = 0
    for letter in word:
        if isinstance(letter, tuple):
            a = spec.base.monomial(letter[1])
        elif letter == "x":
            i += 1
        else:
            j += 1
    return spec.term(a, i, j)


def lemma_commutation(spec: SkewAlgebra, a: AElement, i: int, j: int) -> EElement:
    """x^i y^j a as the closed form gamma^j alpha^(i-j)(a) x^i y^j"""
    return spec.term(spec.commute_past(i, j, a), i, j)


def lemma_right_x(spec: SkewAlgebra, a: AElement, i: int, j: int) -> EElement:
    """a x^i y^j x by the closed formula"""
    return spec.element(spec.times_x(a, i, j))


def lemma_left_y(spec: SkewAlgebra, a: AElement, i: int, j: int) -> EElement:
    """y a x^i y^j by the closed formula"""
    return spec.element(spec.y_times(a, i, j))
