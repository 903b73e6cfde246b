"""
Base algebras A, their automorphisms and the difference operators.

Three presentations are supported: the quantum affine space
k_Q[t1..tv], the polynomial ring k[t] and the Laurent ring k[t, t^-1].
Automorphisms are kept in the closed affine form t_i -> c_i t_i + lambda, so
composition and integer powers never expand into matrices.
"""
from dataclasses import dataclass, field as dataclass_field
from enum import Enum
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple
import logging

from modules.errors import (
    DegenerateParameterError,
    UnsupportedAutomorphismError,
)
from modules.scalars import ONE, Q, ZERO, Scalar, q_integer, scalar

logger = logging.getLogger(__name__)

Monomial = Tuple[int, ...]


class AlgebraKind(str, Enum):
    QUANTUM_AFFINE = "quantum_affine"
    POLYNOMIAL = "polynomial"
    LAURENT = "laurent"


def _grlex_key(monomial: Monomial):
    return (sum(monomial), monomial)


class BaseAlgebra:
    """Presentation of the base algebra A"""

    def __init__(self, kind: str, variables: int = 1,
                 qmatrix: Optional[Sequence[Sequence["Scalar"]]] = None):
        self.kind = AlgebraKind(kind)
        self.variables = variables
        if self.kind != AlgebraKind.QUANTUM_AFFINE and variables != 1:
            raise ValueError(f"{self.kind.value} algebras have exactly one variable, got {variables}")
        if variables < 1:
            raise ValueError("an algebra needs at least one variable")

        if qmatrix is None:
            qmatrix = [[ONE] * variables for _ in range(variables)]
        self.qmatrix = tuple(tuple(scalar(entry) for entry in row) for row in qmatrix)
        self._check_qmatrix()

    def _check_qmatrix(self):
        v = self.variables
        if len(self.qmatrix) != v or any(len(row) != v for row in self.qmatrix):
            raise ValueError(f"qmatrix must be {v}x{v}")
        for i in range(v):
            if self.qmatrix[i][i] != ONE:
                raise ValueError(f"q_{i + 1}{i + 1} must be 1")
            for j in range(v):
                if self.qmatrix[i][j] * self.qmatrix[j][i] != ONE:
                    raise ValueError(f"q_{i + 1}{j + 1} * q_{j + 1}{i + 1} must be 1")

    def __eq__(self, other):
        return (isinstance(other, BaseAlgebra) and self.kind == other.kind
                and self.variables == other.variables and self.qmatrix == other.qmatrix)

    def __hash__(self):
        return hash((self.kind, self.variables, self.qmatrix))

    def __repr__(self):
        return f"BaseAlgebra({self.kind.value}, v={self.variables})"

    @property
    def is_univariate(self) -> bool:
        return self.variables == 1

    @property
    def is_commutative(self) -> bool:
        return all(entry == ONE for row in self.qmatrix for entry in row)

    @property
    def allows_negative(self) -> bool:
        return self.kind == AlgebraKind.LAURENT

    def variable_names(self) -> List[str]:
        if self.variables == 1:
            return ["t"]
        return [f"t{i + 1}" for i in range(self.variables)]

    # -- monomials -------------------------------------------------------

    def unit_monomial(self) -> Monomial:
        return (0,) * self.variables

    def check_monomial(self, monomial: Monomial) -> Monomial:
        if len(monomial) != self.variables:
            raise ValueError(f"monomial {monomial} has the wrong number of exponents")
        if not self.allows_negative and any(e < 0 for e in monomial):
            raise ValueError(f"negative exponent in {monomial} for a {self.kind.value} algebra")
        return tuple(monomial)

    def monomial_product(self, left: Monomial, right: Monomial) -> Tuple["Scalar", Monomial]:
        """Normal-ordered product t^left * t^right with its q-twist"""
        coefficient = ONE
        if not self.is_commutative:
            v = self.variables
            for i in range(v):
                for j in range(i + 1, v):
                    swaps = left[j] * right[i]
                    if swaps:
                        coefficient = coefficient * self.qmatrix[i][j] ** swaps
        return coefficient, tuple(a + b for a, b in zip(left, right))

    def monomials_of_degree(self, degree: int) -> List[Monomial]:
        """All monomials of a given total degree (one per degree for univariate kinds)"""
        if self.variables == 1:
            if degree < 0 and not self.allows_negative:
                return []
            return [(degree,)]
        if degree < 0:
            return []
        return sorted(_compositions(degree, self.variables), reverse=True)

    def monomials_up_to(self, max_degree: int, min_degree: int = 0) -> List[Monomial]:
        found = []
        for degree in range(min_degree, max_degree + 1):
            found.extend(self.monomials_of_degree(degree))
        return found

    # -- elements --------------------------------------------------------

    def element(self, terms: Dict[Monomial, "Scalar"]) -> "AElement":
        return AElement(self, terms)

    def zero(self) -> "AElement":
        return AElement(self, {})

    def one(self) -> "AElement":
        return self.const(ONE)

    def const(self, value) -> "AElement":
        return AElement(self, {self.unit_monomial(): scalar(value)})

    def monomial(self, monomial: Monomial, coefficient=ONE) -> "AElement":
        return AElement(self, {tuple(monomial): scalar(coefficient)})

    def generator(self, index: int = 0) -> "AElement":
        exps = [0] * self.variables
        exps[index] = 1
        return self.monomial(tuple(exps))

    def generators(self) -> List["AElement"]:
        gens = [self.generator(i) for i in range(self.variables)]
        if self.allows_negative:
            gens.append(self.monomial((-1,)))
        return gens

    @property
    def t(self) -> "AElement":
        if not self.is_univariate:
            raise ValueError("t is only defined for univariate algebras")
        return self.generator(0)


def _compositions(total: int, parts: int) -> Iterator[Monomial]:
    if parts == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _compositions(total - head, parts - 1):
            yield (head,) + tail


class AElement:
    """Normal-form element of A: a sparse map monomial -> Scalar"""

    __slots__ = ("algebra", "terms", "_hash")

    def __init__(self, algebra: BaseAlgebra, terms: Dict[Monomial, "Scalar"]):
        self.algebra = algebra
        clean = {}
        for monomial, coefficient in terms.items():
            if coefficient:
                clean[algebra.check_monomial(tuple(monomial))] = scalar(coefficient)
        self.terms = clean
        self._hash = None

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other) -> "AElement":
        if isinstance(other, AElement):
            return other
        return self.algebra.const(other)

    def __add__(self, other):
        other = self._coerce(other)
        terms = dict(self.terms)
        for monomial, coefficient in other.terms.items():
            terms[monomial] = terms.get(monomial, ZERO) + coefficient
        return AElement(self.algebra, terms)

    __radd__ = __add__

    def __neg__(self):
        return AElement(self.algebra, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, value) -> "AElement":
        value = scalar(value)
        if not value:
            return self.algebra.zero()
        return AElement(self.algebra, {m: c * value for m, c in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, AElement):
            return self.scale(other)
        return a_mul(self, other)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, exponent: int) -> "AElement":
        if exponent < 0:
            if len(self.terms) == 1 and self.algebra.allows_negative:
                (monomial, coefficient), = self.terms.items()
                return AElement(self.algebra, {(-monomial[0],): ONE / coefficient}) ** (-exponent)
            raise ValueError("only Laurent monomials have negative powers")
        result = self.algebra.one()
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, AElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return self.terms == self._coerce(other).terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"AElement({self})"

    def __str__(self):
        from modules.notation import render_a_element
        return render_a_element(self)

    # -- inspection ------------------------------------------------------

    def sorted_terms(self) -> List[Tuple[Monomial, "Scalar"]]:
        """Terms in descending graded-lex order"""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    def coefficient(self, monomial: Monomial) -> "Scalar":
        return self.terms.get(tuple(monomial), ZERO)

    def constant_term(self) -> "Scalar":
        return self.coefficient(self.algebra.unit_monomial())

    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def degree(self) -> int:
        """Total degree; -1 for zero (for Laurent: the top exponent)"""
        if not self.terms:
            return -1
        return max(sum(m) for m in self.terms)

    def min_degree(self) -> int:
        if not self.terms:
            return 0
        return min(sum(m) for m in self.terms)

    def homogeneous_degree(self) -> Optional[int]:
        degrees = {sum(m) for m in self.terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def leading_coefficient(self) -> "Scalar":
        if not self.terms:
            return ZERO
        return self.sorted_terms()[0][1]

    def without_constant(self) -> "AElement":
        """Image in A/k: drop the constant monomial"""
        unit = self.algebra.unit_monomial()
        return AElement(self.algebra, {m: c for m, c in self.terms.items() if m != unit})

    def evaluate(self, value) -> "Scalar":
        """Evaluate a univariate element at a Scalar"""
        value = scalar(value)
        total = ZERO
        for (n,), coefficient in self.terms.items():
            total = total + coefficient * value ** n
        return total


def a_mul(a: AElement, b: AElement) -> AElement:
    """Normal-form product in A"""
    algebra = a.algebra
    terms: Dict[Monomial, "Scalar"] = {}
    for ma, ca in a.terms.items():
        for mb, cb in b.terms.items():
            twist, monomial = algebra.monomial_product(ma, mb)
            terms[monomial] = terms.get(monomial, ZERO) + ca * cb * twist
    return AElement(algebra, terms)


@dataclass(frozen=True)
class Automorphism:
    """
    Automorphism in closed affine form.

    Univariate: t -> scale[0] * t + shift.
    Multivariate: t_i -> scale[i] * t_i (shift must be zero).
    """
    algebra: BaseAlgebra
    scale: Tuple["Scalar", ...]
    shift: "Scalar" = ZERO
    _cache: Dict = dataclass_field(default_factory=dict, compare=False, hash=False, repr=False)

    def __post_init__(self):
        if len(self.scale) != self.algebra.variables:
            raise ValueError("one scaling factor per variable is required")
        if any(not c for c in self.scale):
            raise DegenerateParameterError("scaling factors must be nonzero")
        if self.shift:
            if not self.algebra.is_univariate:
                raise UnsupportedAutomorphismError("shift automorphisms need a single variable")
            if self.algebra.allows_negative:
                raise UnsupportedAutomorphismError("a shift does not preserve k[t, t^-1]")

    # -- constructors ----------------------------------------------------

    @classmethod
    def identity(cls, algebra: BaseAlgebra) -> "Automorphism":
        return cls(algebra, (ONE,) * algebra.variables)

    @classmethod
    def scaling(cls, algebra: BaseAlgebra, factors: Sequence) -> "Automorphism":
        return cls(algebra, tuple(scalar(c) for c in factors))

    @classmethod
    def translation(cls, algebra: BaseAlgebra, amount) -> "Automorphism":
        return cls(algebra, (ONE,), scalar(amount))

    @classmethod
    def compose_all(cls, autos: Sequence["Automorphism"]) -> "Automorphism":
        """Composite autos[0] o autos[1] o ... o autos[-1]"""
        result = None
        for auto in autos:
            result = auto if result is None else result.compose(auto)
        if result is None:
            raise ValueError("compose needs at least one automorphism")
        return result

    # -- structure -------------------------------------------------------

    @property
    def is_identity(self) -> bool:
        return not self.shift and all(c == ONE for c in self.scale)

    @property
    def is_scaling(self) -> bool:
        return not self.shift

    @property
    def is_shift(self) -> bool:
        return all(c == ONE for c in self.scale)

    def compose(self, other: "Automorphism") -> "Automorphism":
        """self o other: first other, then self"""
        if self.algebra != other.algebra:
            raise ValueError("cannot compose automorphisms of different algebras")
        scale = tuple(a * b for a, b in zip(self.scale, other.scale))
        shift = self.scale[0] * other.shift + self.shift if self.algebra.is_univariate else ZERO
        return Automorphism(self.algebra, scale, shift)

    def inverse(self) -> "Automorphism":
        scale = tuple(ONE / c for c in self.scale)
        shift = -self.shift / self.scale[0] if self.shift else ZERO
        return Automorphism(self.algebra, scale, shift)

    def power(self, exponent: int) -> "Automorphism":
        if exponent == 0:
            return Automorphism.identity(self.algebra)
        scale = tuple(c ** exponent for c in self.scale)
        shift = ZERO
        if self.shift:
            c = self.scale[0]
            if c == ONE:
                shift = self.shift * exponent
            else:
                shift = self.shift * (c ** exponent - ONE) / (c - ONE)
        return Automorphism(self.algebra, scale, shift)

    def image_of_variable(self) -> AElement:
        """f(t) for univariate algebras"""
        algebra = self.algebra
        return algebra.monomial((1,), self.scale[0]) + algebra.const(self.shift)

    # -- application -----------------------------------------------------

    def apply_monomial(self, monomial: Monomial) -> AElement:
        cached = self._cache.get(monomial)
        if cached is not None:
            return cached
        algebra = self.algebra
        if not self.shift:
            coefficient = ONE
            for c, e in zip(self.scale, monomial):
                if e:
                    coefficient = coefficient * c ** e
            image = algebra.monomial(monomial, coefficient)
        else:
            (n,) = monomial
            c, lam = self.scale[0], self.shift
            image = algebra.element({
                (k,): scalar(comb(n, k)) * c ** k * lam ** (n - k) for k in range(n + 1)
            })
        self._cache[monomial] = image
        return image

    def __call__(self, a: AElement) -> AElement:
        return apply_automorphism(self, a)


def apply_automorphism(auto: Automorphism, a: AElement) -> AElement:
    """Apply an algebra automorphism monomial-wise"""
    if auto.is_identity:
        return a
    terms: Dict[Monomial, "Scalar"] = {}
    for monomial, coefficient in a.terms.items():
        for m, c in auto.apply_monomial(monomial).terms.items():
            terms[m] = terms.get(m, ZERO) + c * coefficient
    return AElement(a.algebra, terms)


def substitute(P: AElement, scale, shift=ZERO) -> AElement:
    """P(scale * t + shift) for a univariate P, without automorphism checks"""
    algebra = P.algebra
    scale, shift = scalar(scale), scalar(shift)
    terms: Dict[Monomial, "Scalar"] = {}
    for (n,), coefficient in P.terms.items():
        if not shift:
            terms[(n,)] = terms.get((n,), ZERO) + coefficient * scale ** n
            continue
        for k in range(n + 1):
            term = coefficient * scalar(comb(n, k)) * scale ** k * shift ** (n - k)
            terms[(k,)] = terms.get((k,), ZERO) + term
    return AElement(algebra, terms)


def _require_univariate(P: AElement, operator: str):
    if not P.algebra.is_univariate:
        raise ValueError(f"{operator} is defined for univariate algebras only")


def T_lambda(P: AElement, lam) -> AElement:
    """T_lambda(P) = P(t + lambda) - P(t)"""
    _require_univariate(P, "T_lambda")
    return substitute(P, ONE, lam) - P


def T_tilde(P: AElement, i: int, j: int, q=Q) -> AElement:
    """P(q^i t) - P(q^j t)"""
    _require_univariate(P, "T_tilde")
    q = scalar(q)
    return substitute(P, q ** i) - substitute(P, q ** j)


def Tprime_q(P: AElement, q=Q) -> AElement:
    """P(q t) - q^-1 P(t)"""
    _require_univariate(P, "Tprime_q")
    q = scalar(q)
    return substitute(P, q) - P.scale(ONE / q)


def Tprime_qinv(P: AElement, q=Q) -> AElement:
    """P(q^-1 t) - q P(t)"""
    _require_univariate(P, "Tprime_qinv")
    q = scalar(q)
    return substitute(P, ONE / q) - P.scale(q)


def derivative(P: AElement) -> AElement:
    _require_univariate(P, "derivative")
    return P.algebra.element({(n - 1,): c * n for (n,), c in P.terms.items() if n != 0})


def delta_qr(P: AElement, r: int, q=Q) -> AElement:
    """t^n -> (n)_{q^-r} t^(n-1); r = 0 is degenerate"""
    _require_univariate(P, "delta_qr")
    q = scalar(q)
    return P.algebra.element({
        (n - 1,): c * q_integer(n, r, q) for (n,), c in P.terms.items() if n != 0
    })


def q_derivative(P: AElement, r: int, q=Q) -> AElement:
    """delta_qr for r != 0 and its limit, the derivative, for r = 0"""
    if r == 0:
        return derivative(P)
    return delta_qr(P, r, q)


OPERATORS = {
    "T_lambda": lambda P, params: T_lambda(P, params["lam"]),
    "T_tilde": lambda P, params: T_tilde(P, params["i"], params["j"], params.get("q", Q)),
    "Tprime_q": lambda P, params: Tprime_q(P, params.get("q", Q)),
    "Tprime_qinv": lambda P, params: Tprime_qinv(P, params.get("q", Q)),
    "delta_qr": lambda P, params: delta_qr(P, params["r"], params.get("q", Q)),
    "derivative": lambda P, params: derivative(P),
}


def difference_operator(kind: str, P: AElement, **params) -> AElement:
    """Apply one of the named difference/derivative operators"""
    try:
        operator = OPERATORS[kind]
    except KeyError:
        raise ValueError(f"unknown difference operator {kind!r}") from None
    return operator(P, params)


def inverse_difference(P: AElement, lam) -> AElement:
    """
    Solve T_lambda(S) = P with S(0) = 0.

    The solution is unique because T_lambda is injective on tA and lowers the
    degree by exactly one.
    """
    _require_univariate(P, "inverse_difference")
    lam = scalar(lam)
    if not lam:
        raise DegenerateParameterError("inverse difference needs lambda != 0")
    algebra = P.algebra
    remainder = P
    solution = algebra.zero()
    while remainder:
        top = remainder.degree()
        lead = remainder.coefficient((top,))
        step = algebra.monomial((top + 1,), lead / (lam * (top + 1)))
        solution = solution + step
        remainder = remainder - T_lambda(step, lam)
    return solution


def divided_difference(monomial: Monomial, f: Automorphism, g: Automorphism) -> AElement:
    """
    D_{f,g}(t^n) = (f(t)^n - g(t)^n) / (f(t) - g(t)).

    For n >= 1 this is the sum of g(t)^(n-1-k) f(t)^k; for negative n (Laurent
    scalings) the quotient is taken in closed form.
    """
    algebra = f.algebra
    (n,) = monomial
    if n == 0:
        return algebra.zero()
    if n > 0:
        ft, gt = f.image_of_variable(), g.image_of_variable()
        total = algebra.zero()
        for k in range(n):
            total = total + (gt ** (n - 1 - k)) * (ft ** k)
        return total
    if f.shift or g.shift:
        raise UnsupportedAutomorphismError("negative powers need scaling automorphisms")
    cf, cg = f.scale[0], g.scale[0]
    if cf == cg:
        coefficient = cf ** (n - 1) * n
    else:
        coefficient = (cf ** n - cg ** n) / (cf - cg)
    return algebra.monomial((n - 1,), coefficient)


def random_element(algebra: BaseAlgebra, rng, max_degree: int, min_degree: int = 0,
                   coefficient_bound: int = 5) -> AElement:
    """Random element with small integer coefficients"""
    terms = {}
    for monomial in algebra.monomials_up_to(max_degree, min_degree):
        value = int(rng.integers(-coefficient_bound, coefficient_bound + 1))
        if value:
            terms[monomial] = scalar(value)
    return algebra.element(terms)


def random_polynomial(algebra: BaseAlgebra, rng, degree: int, coefficient_bound: int = 5) -> AElement:
    """Random univariate polynomial of exact degree"""
    element = random_element(algebra, rng, degree - 1, 0, coefficient_bound) if degree > 0 else algebra.zero()
    lead = int(rng.integers(1, coefficient_bound + 1))
    return element + algebra.monomial((degree,), lead)
