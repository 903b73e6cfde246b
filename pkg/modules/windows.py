"""
Truncation windows and finite slices of the complexes.

A ``Window`` is the core whose homology is reported.  Families whose
differentials are graded are cut into complete blocks; the others are
evaluated on a halo (the window enlarged by a ``Margin``) so that
boundaries coming from outside the core are not missed.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import logging

from modules.chains import ChainElement
from modules.errors import (
    DoubleComplexSignError,
    MarginTooSmallError,
    ResourceLimitError,
    WindowError,
)
from modules.scalars import ONE

logger = logging.getLogger(__name__)

Position = Tuple[int, int]

COMMUTE = "commute"
ANTICOMMUTE = "anticommute"


@dataclass(frozen=True)
class Margin:
    index: int = 1
    degree: int = 1
    tensor: int = 1

    def __post_init__(self):
        if min(self.index, self.degree, self.tensor) < 0:
            raise WindowError(f"negative margin {self}")

    def covers(self, other: "Margin") -> bool:
        return self.index >= other.index and self.degree >= other.degree and self.tensor >= other.tensor

    def doubled(self) -> "Margin":
        return Margin(2 * self.index, 2 * self.degree, 2 * self.tensor)

    def as_dict(self) -> Dict[str, int]:
        return {"index": self.index, "degree": self.degree, "tensor": self.tensor}


ZERO_MARGIN = Margin(0, 0, 0)


@dataclass(frozen=True)
class Window:
    """
    Truncation bounds.

    Args:
        weights: weights r kept
        max_index: bound on min(i, j)
        max_degree: bound on the A-degree (the filtration level for filtered families)
        min_degree: lower bound on exponents (Laurent windows)
        max_tensor: highest total degree reported
    """
    weights: Tuple[int, ...] = (0,)
    max_index: int = 3
    max_degree: int = 3
    min_degree: int = 0
    max_tensor: int = 3

    def __post_init__(self):
        if not self.weights:
            raise WindowError("a window needs at least one weight")
        if self.max_index < 0 or self.max_tensor < 0:
            raise WindowError("window bounds must be non-negative")
        if self.min_degree > self.max_degree:
            raise WindowError(f"empty degree range [{self.min_degree}, {self.max_degree}]")

    def enlarged(self, margin: Margin, laurent: bool = False) -> "Window":
        return replace(
            self,
            max_index=self.max_index + margin.index,
            max_degree=self.max_degree + margin.degree,
            min_degree=self.min_degree - margin.degree if laurent else self.min_degree,
            max_tensor=self.max_tensor + margin.tensor,
        )

    def as_dict(self) -> Dict:
        return {
            "weights": list(self.weights),
            "max_index": self.max_index,
            "max_degree": self.max_degree,
            "min_degree": self.min_degree,
            "max_tensor": self.max_tensor,
        }


@dataclass
class FiniteDoubleComplex:
    """
    A finite slice of a family: ordered bases per position and sparse images.

    ``horizontal`` and ``vertical`` hold the image of every basis element;
    ``core`` marks the elements whose homology is reported.  For a graded
    family ``blocks`` lists the complete blocks the slice is made of.
    """
    family: object
    window: Window
    margin: Margin
    mode: str
    bases: Dict[Position, List] = field(default_factory=dict)
    core: set = field(default_factory=set)
    horizontal: Dict[object, ChainElement] = field(default_factory=dict)
    vertical: Dict[object, ChainElement] = field(default_factory=dict)
    sign: Optional[str] = None
    blocks: Dict[tuple, List] = field(default_factory=dict)

    @property
    def rows(self) -> int:
        return 1 + max((v for (_, v) in self.bases), default=0)

    def elements(self) -> List:
        out = []
        for position in sorted(self.bases):
            out.extend(self.bases[position])
        return out

    def vertical_factor(self, n: int):
        """Factor on phi in the total differential of a source in column n"""
        if self.sign == COMMUTE and n % 2:
            return -ONE
        return ONE

    def total_image(self, basis) -> ChainElement:
        image = self.horizontal.get(basis, ChainElement())
        if basis.row == 1:
            image = image + self.vertical.get(basis, ChainElement()).scale(self.vertical_factor(basis.n))
        return image

    def size(self) -> int:
        return sum(len(b) for b in self.bases.values())


def _check_resources(count: int, entries: int, max_basis: Optional[int], max_entries: Optional[int]):
    if max_basis is not None and count > max_basis:
        raise ResourceLimitError(f"window holds {count} basis elements, above the cap of {max_basis}")
    if max_entries is not None and entries > max_entries:
        raise ResourceLimitError(f"boundary matrices hold {entries} entries, above the cap of {max_entries}")


def detect_sign(family, elements: Sequence) -> Optional[str]:
    """
    Decide whether phi commutes or anticommutes with the horizontal maps.

    Returns None when every composite vanishes on the given elements.
    """
    verdict = None
    witness_for = {}
    for basis in elements:
        if basis.row != 1 or basis.n == 0:
            continue
        left = family.apply(family.vertical(basis), "horizontal")
        right = family.apply(family.horizontal(basis), "vertical")
        if not left and not right:
            continue
        if left == right:
            found = COMMUTE
        elif left == -right:
            found = ANTICOMMUTE
        else:
            raise DoubleComplexSignError("horizontal and vertical maps neither commute nor anticommute",
                                         basis.describe(with_position=True))
        witness_for.setdefault(found, basis)
        if verdict is None:
            verdict = found
        elif verdict != found:
            raise DoubleComplexSignError(
                "commutation sign is not uniform",
                f"{witness_for[COMMUTE].describe(with_position=True)} vs "
                f"{witness_for[ANTICOMMUTE].describe(with_position=True)}")
    return verdict


def square_zero_witness(family, elements: Sequence) -> Optional[str]:
    """First basis element whose horizontal composite is nonzero"""
    for basis in elements:
        image = family.horizontal(basis)
        if image and family.apply(image, "horizontal"):
            return basis.describe(with_position=True)
    return None


def check_double_complex(family, window: Window) -> Tuple[Optional[str], int]:
    """
    Verify a family on every basis element of a window, one weight at a time.

    Composites are evaluated exactly wherever the images land, so no halo
    is enumerated and no basis cap applies.  Raises DoubleComplexSignError
    on a nonzero horizontal composite or a non-uniform sign.

    Returns:
        The commutation sign (None when every composite vanishes) and the
        number of basis elements checked
    """
    verdict, witness, checked = None, None, 0
    for r in window.weights:
        elements = [b for b in family.enumerate_window(replace(window, weights=(r,)))
                    if family.in_window(b, window)]
        elements.sort(key=lambda b: b.sort_key())
        failure = square_zero_witness(family, elements)
        if failure is not None:
            raise DoubleComplexSignError("horizontal composite is not zero", failure)
        found = detect_sign(family, elements)
        if found is not None and verdict is not None and found != verdict:
            raise DoubleComplexSignError("commutation sign is not uniform", f"weight {witness} vs weight {r}")
        if verdict is None and found is not None:
            verdict, witness = found, r
        checked += len(elements)
        family.clear_cache()
        logger.debug(f"{family.label} weight {r}: {len(elements)} basis elements checked")
    if not checked:
        raise WindowError(f"window {window.as_dict()} holds no basis element of {family.label}")
    logger.info(f"{family.label} is a double complex on {window.as_dict()}: {checked} basis elements, "
                f"sign {verdict}")
    return verdict, checked


def build_finite_complex(family, window: Window, margin: Optional[Margin] = None,
                         max_basis: Optional[int] = None, max_entries: Optional[int] = None,
                         check: bool = True) -> FiniteDoubleComplex:
    """
    Enumerate a family on a window and evaluate every differential once.

    Graded families are built from the complete blocks meeting the window;
    the others from the halo window + margin.  With ``check`` the
    horizontal composites are verified to vanish; the commutation sign of
    the vertical map is always determined.
    """
    minimum = family.minimum_margin()
    if margin is None:
        margin = minimum
    if not margin.covers(minimum):
        raise MarginTooSmallError(minimum.as_dict(), margin.as_dict())

    fc = FiniteDoubleComplex(family=family, window=window, margin=margin, mode=family.window_mode)
    if family.window_mode == "graded":
        keys = family.block_keys(window)
        if not keys:
            raise WindowError(f"window {window.as_dict()} holds no block of {family.label}")
        elements = []
        for key in keys:
            block = family.enumerate_block(key, window.max_tensor + 1)
            fc.blocks[key] = block
            elements.extend(block)
    else:
        elements = family.enumerate_window(window.enlarged(margin, family.laurent_window))
    _check_resources(len(elements), 0, max_basis, max_entries)

    seen = set()
    for basis in elements:
        if basis in seen:
            continue
        seen.add(basis)
        fc.bases.setdefault(basis.position, []).append(basis)
        if family.in_window(basis, window):
            fc.core.add(basis)
    for position in fc.bases:
        fc.bases[position].sort(key=lambda b: b.sort_key())
    if not fc.core:
        raise WindowError(f"window {window.as_dict()} holds no basis element of {family.label}")

    entries = 0
    for basis in seen:
        image = family.horizontal(basis)
        fc.horizontal[basis] = image
        entries += len(image)
        if basis.row == 1:
            image = family.vertical(basis)
            fc.vertical[basis] = image
            entries += len(image)
    _check_resources(len(seen), entries, max_basis, max_entries)

    if check:
        witness = square_zero_witness(family, list(seen))
        if witness is not None:
            raise DoubleComplexSignError("horizontal composite is not zero", witness)
    fc.sign = detect_sign(family, sorted(seen, key=lambda b: b.sort_key()))
    logger.info(f"built {family.label} on {window.as_dict()}: {len(seen)} basis elements, "
                f"{len(fc.core)} in the core, sign {fc.sign}")
    return fc
