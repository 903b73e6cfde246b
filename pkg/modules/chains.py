"""
Chain basis elements and sparse chain elements.

A basis element of the small complexes is

    a x^i y^j (x) m_1 (x) ... (x) m_s  e1^u e2^v

with a and the m_k monomials of A (the m_k non-constant, i.e. classes in
A/k).  Its column is n = s + u, its row is v, and its weight is
r = j - i - u + v.  The canonical complex of E uses ``BarBasisElement``
instead, whose slots are monomials of E.
"""
from dataclasses import dataclass
from typing import Dict, Iterable, Iterator, List, Optional, Sequence, Tuple
import logging

from modules.base_algebra import AElement, Monomial
from modules.scalars import ONE, ZERO, Scalar, scalar

logger = logging.getLogger(__name__)

Position = Tuple[int, int]


def _mono_text(monomial: Monomial, names: Sequence[str]) -> str:
    from modules.notation import render_monomial
    return render_monomial(monomial, names) or "1"


@dataclass(frozen=True)
class ChainBasisElement:
    coefficient: Monomial
    i: int
    j: int
    tensor: Tuple[Monomial, ...] = ()
    e1: int = 0
    e2: int = 0

    def __post_init__(self):
        if self.i < 0 or self.j < 0:
            raise ValueError(f"negative exponent in x^{self.i} y^{self.j}")
        if self.e1 not in (0, 1) or self.e2 not in (0, 1):
            raise ValueError("e1 and e2 flags are 0 or 1")
        for factor in self.tensor:
            if not any(factor):
                raise ValueError("tensor factors must be non-constant monomials")

    @property
    def n(self) -> int:
        return len(self.tensor) + self.e1

    @property
    def row(self) -> int:
        return self.e2

    @property
    def position(self) -> Position:
        return (self.n, self.e2)

    @property
    def total(self) -> int:
        return self.n + self.e2

    @property
    def weight(self) -> int:
        return self.j - self.i - self.e1 + self.e2

    @property
    def degree(self) -> int:
        return sum(self.coefficient) + sum(sum(m) for m in self.tensor)

    @property
    def exponents(self) -> Tuple[int, ...]:
        """Exponent vector of the coefficient and the tensor factors multiplied out"""
        return tuple(map(sum, zip(self.coefficient, *self.tensor)))

    @property
    def index(self) -> int:
        """min(i, j), the line of the x/y lattice the element sits on"""
        return min(self.i, self.j)

    @property
    def x_degree(self) -> int:
        """x-degree once e1 is read as a letter x"""
        return self.i + self.e1

    @property
    def flags(self) -> Tuple[int, int]:
        return (self.e1, self.e2)

    def sort_key(self):
        return (self.weight, self.total, self.e2, self.i, self.j, self.degree,
                self.e1, self.coefficient, self.tensor)

    def describe(self, names: Sequence[str] = ("t",), with_position: bool = False) -> str:
        """Text form, e.g. t^2*x^1y^0 [t, t^2] e1 @ (2,0,0)"""
        coefficient = "" if not any(self.coefficient) else _mono_text(self.coefficient, names) + "*"
        text = f"{coefficient}x^{self.i}y^{self.j}"
        if self.tensor:
            text += " ⊗ [" + ", ".join(_mono_text(m, names) for m in self.tensor) + "]"
        flags = ("e1" if self.e1 else "") + ("e2" if self.e2 else "")
        if flags:
            text += f" {flags}"
        if with_position:
            text += f" @ ({self.n},{self.row},{self.weight})"
        return text


EMonomial = Tuple[Monomial, int, int]


@dataclass(frozen=True)
class BarBasisElement:
    """E (x) Ebar^n basis element; slots are (A-monomial, i, j) triples"""
    slots: Tuple[EMonomial, ...]

    def __post_init__(self):
        for monomial, i, j in self.slots[1:]:
            if not any(monomial) and i == 0 and j == 0:
                raise ValueError("bar slots beyond the first must be non-constant")

    @property
    def n(self) -> int:
        return len(self.slots) - 1

    @property
    def row(self) -> int:
        return 0

    @property
    def position(self) -> Position:
        return (self.n, 0)

    @property
    def total(self) -> int:
        return self.n

    @property
    def weight(self) -> int:
        return sum(j - i for _, i, j in self.slots)

    @property
    def degree(self) -> int:
        return sum(sum(m) for m, _, _ in self.slots)

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(map(sum, zip(*(m for m, _, _ in self.slots))))

    @property
    def x_degree(self) -> int:
        return sum(i for _, i, _ in self.slots)

    @property
    def index(self) -> int:
        return min(sum(i for _, i, _ in self.slots), sum(j for _, _, j in self.slots))

    def sort_key(self):
        return (self.weight, self.total, 0, self.x_degree, self.degree, self.slots)

    def describe(self, names: Sequence[str] = ("t",), with_position: bool = False) -> str:
        pieces = []
        for monomial, i, j in self.slots:
            coefficient = "" if not any(monomial) else _mono_text(monomial, names) + "*"
            pieces.append(f"{coefficient}x^{i}y^{j}")
        text = " ⊗ ".join(pieces)
        if with_position:
            text += f" @ ({self.n},0,{self.weight})"
        return text


class ChainElement:
    """Sparse Scalar combination of basis elements"""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Dict[object, "Scalar"]] = None):
        self.terms: Dict[object, "Scalar"] = {}
        if terms:
            for basis, value in terms.items():
                self.add_term(basis, value)

    @classmethod
    def basis(cls, element, value=ONE) -> "ChainElement":
        return cls({element: scalar(value)})

    @classmethod
    def from_coefficient(cls, a: AElement, i: int, j: int, tensor: Sequence[Monomial] = (),
                         e1: int = 0, e2: int = 0) -> "ChainElement":
        """Expand a x^i y^j (x) tensor e into basis elements"""
        out = cls()
        out.add_product(a, i, j, [], e1, e2, ONE, monomial_tensor=tuple(tensor))
        return out

    def add_term(self, basis, value) -> None:
        if not value:
            return
        current = self.terms.get(basis)
        total = value if current is None else current + value
        if total:
            self.terms[basis] = total
        elif current is not None:
            del self.terms[basis]

    def add_product(self, a: AElement, i: int, j: int, factors: Sequence[AElement],
                    e1: int, e2: int, value=ONE, monomial_tensor: Tuple[Monomial, ...] = ()) -> None:
        """
        Add value * a x^i y^j (x) monomial_tensor (x) factors[0] (x) ... e1^u e2^v.

        Constant monomials inside tensor slots are dropped (they vanish in A/k).
        """
        if not value or not a:
            return
        expansions: List[Tuple[Tuple[Monomial, ...], "Scalar"]] = [(monomial_tensor, ONE)]
        for factor in factors:
            grown = []
            for monomial, coefficient in factor.terms.items():
                if not any(monomial):
                    continue
                for prefix, acc in expansions:
                    grown.append((prefix + (monomial,), acc * coefficient))
            expansions = grown
            if not expansions:
                return
        for monomial, coefficient in a.terms.items():
            for tensor, acc in expansions:
                self.add_term(ChainBasisElement(monomial, i, j, tensor, e1, e2), value * coefficient * acc)

    def __add__(self, other: "ChainElement") -> "ChainElement":
        out = ChainElement(self.terms)
        for basis, value in other.terms.items():
            out.add_term(basis, value)
        return out

    def __neg__(self) -> "ChainElement":
        return ChainElement({b: -v for b, v in self.terms.items()})

    def __sub__(self, other: "ChainElement") -> "ChainElement":
        return self + (-other)

    def scale(self, value) -> "ChainElement":
        value = scalar(value)
        if not value:
            return ChainElement()
        return ChainElement({b: v * value for b, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, ChainElement):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def items(self) -> List[Tuple[object, "Scalar"]]:
        return sorted(self.terms.items(), key=lambda item: item[0].sort_key())

    def coefficient(self, basis) -> "Scalar":
        return self.terms.get(basis, ZERO)

    def positions(self) -> set:
        return {b.position for b in self.terms}

    def weights(self) -> set:
        return {b.weight for b in self.terms}

    def describe(self, names: Sequence[str] = ("t",)) -> str:
        from modules.notation import render_coefficient
        if not self.terms:
            return "0"
        pieces = []
        for basis, value in self.items():
            text = basis.describe(names)
            if value == ONE:
                pieces.append(text)
            elif value == -ONE:
                pieces.append(f"-{text}")
            else:
                pieces.append(f"{render_coefficient(value)}*{text}")
        return " + ".join(pieces)

    def __repr__(self):
        return f"ChainElement({self.describe()})"
