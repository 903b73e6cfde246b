"""
Homology of finite slices.

Boundary images are turned into sparse ``DomainMatrix`` rows (one row per
source element, one column per target element).  Graded slices are solved
block by block; windowed slices report the homology of the core, taking
boundaries from the whole halo into account:

    dim H_core = dim(Z intersected with the core) - dim(B intersected with the core)

A windowed result is certified when it does not move as the margin grows.
"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Optional, Sequence, Tuple
import json
import logging

from joblib import Parallel, delayed
from jsonschema import validate
from sympy import QQ
from sympy.polys.matrices import DomainMatrix
from tqdm import tqdm

from modules.chains import ChainElement
from modules.errors import ResourceLimitError, WindowError
from modules.scalars import FIELD, Q_FIELD, ground_value, involves_p, is_ground
from modules.windows import FiniteDoubleComplex, Margin, build_finite_complex

logger = logging.getLogger(__name__)

ROUTES = ("total", "row_then_vertical")

HOMOLOGY_SCHEMA = {
    "type": "object",
    "required": ["family", "window", "route", "blocks"],
    "properties": {
        "family": {"type": "string"},
        "variant": {"type": ["string", "null"]},
        "window": {"type": "object"},
        "margin": {"type": "object"},
        "route": {"enum": list(ROUTES)},
        "sign": {"type": ["string", "null"]},
        "blocks": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["degree", "weight", "multidegree", "dim", "certified", "representatives"],
                "properties": {
                    "degree": {"type": "integer", "minimum": 0},
                    "weight": {"type": "integer"},
                    "multidegree": {"type": ["array", "null"], "items": {"type": "integer"}},
                    "dim": {"type": "integer", "minimum": 0},
                    "full": {"type": "integer", "minimum": 0},
                    "certified": {"type": "boolean"},
                    "representatives": {"type": "array", "items": {"type": "string"}},
                    "rows": {"type": "object"},
                },
            },
        },
    },
}


# -- sparse exact matrices ------------------------------------------------------------

GENERIC = FIELD.to_domain()
Q_ONLY = Q_FIELD.to_domain()


def _domain(values):
    """QQ for rational entries, Q(q) when p does not occur, Q(q, p) otherwise"""
    if all(is_ground(v) for v in values):
        return QQ
    if not any(involves_p(v) for v in values):
        return Q_ONLY
    return GENERIC


def _convert(value, domain):
    if domain == QQ:
        return ground_value(value)
    if domain == Q_ONLY:
        return value.set_field(Q_FIELD)
    return value


def _back(value, domain):
    if domain == QQ:
        return FIELD(value)
    if domain == Q_ONLY:
        return value.set_field(FIELD)
    return value


def sparse_matrix(rows: Sequence[Dict[int, object]], ncols: int) -> DomainMatrix:
    """Sparse DomainMatrix over the smallest of QQ, Q(q) and Q(q, p) holding every entry"""
    domain = _domain([v for row in rows for v in row.values()])
    data = {}
    for k, row in enumerate(rows):
        converted = {c: _convert(v, domain) for c, v in row.items() if v}
        if converted:
            data[k] = converted
    return DomainMatrix(data, (len(rows), ncols), domain)


def rank(matrix: DomainMatrix) -> int:
    if 0 in matrix.shape:
        return 0
    return matrix.rank()


def row_vectors(matrix: DomainMatrix) -> List[Dict[int, object]]:
    rows = matrix.to_dod()
    return [{c: _back(v, matrix.domain) for c, v in rows.get(k, {}).items() if v}
            for k in range(matrix.shape[0])]


def rref_rows(rows: List[Dict[int, object]], ncols: int) -> Tuple[List[Dict[int, object]], List[int]]:
    """Nonzero rows of the reduced row echelon form and their pivot columns"""
    if not rows or not ncols:
        return [], []
    reduced, pivots = sparse_matrix(rows, ncols).rref()
    return row_vectors(reduced)[:len(pivots)], list(pivots)


def kernel_rows(rows: List[Dict[int, object]], ncols: int) -> List[Dict[int, object]]:
    """Basis of {c : sum_k c_k rows[k] = 0}, as vectors indexed by row number"""
    if not rows:
        return []
    if not ncols:
        return [{k: FIELD.one} for k in range(len(rows))]
    transposed: List[Dict[int, object]] = [dict() for _ in range(ncols)]
    for k, row in enumerate(rows):
        for c, value in row.items():
            transposed[c][k] = value
    basis = sparse_matrix(transposed, len(rows)).nullspace()
    if 0 in basis.shape:
        return []
    return row_vectors(basis)


# -- matrix blocks ----------------------------------------------------------------------

@dataclass
class MatrixBlock:
    """Images of ``sources`` written in the coordinates of ``targets``"""
    sources: List
    targets: List
    images: Dict[object, ChainElement]

    def __post_init__(self):
        self.index = {b: k for k, b in enumerate(self.targets)}

    def rows(self) -> List[Dict[int, object]]:
        out = []
        for source in self.sources:
            row = {}
            for basis, value in self.images.get(source, ChainElement()).terms.items():
                column = self.index.get(basis)
                if column is None:
                    column = len(self.targets)
                    self.targets.append(basis)
                    self.index[basis] = column
                row[column] = value
            out.append(row)
        return out

    def rank(self) -> int:
        rows = self.rows()
        return rank(sparse_matrix(rows, len(self.targets)))


def _chain(vector: Dict[int, object], basis: Sequence) -> ChainElement:
    return ChainElement({basis[c]: v for c, v in vector.items()})


def kernel_basis(block: MatrixBlock) -> List[ChainElement]:
    rows = block.rows()
    return [_chain(v, block.sources) for v in kernel_rows(rows, len(block.targets))]


def image_basis(block: MatrixBlock) -> List[ChainElement]:
    rows = block.rows()
    echelon, _ = rref_rows(rows, len(block.targets))
    return [_chain(v, block.targets) for v in echelon]


def quotient_representatives(block: MatrixBlock) -> List[ChainElement]:
    """Target basis elements outside the pivot columns of the image"""
    rows = block.rows()
    _, pivots = rref_rows(rows, len(block.targets))
    taken = set(pivots)
    return [ChainElement.basis(b) for k, b in enumerate(block.targets) if k not in taken]


# -- reports ----------------------------------------------------------------------------

@dataclass
class BlockHomology:
    degree: int
    weight: int
    multidegree: Optional[tuple]
    dim: int
    full: int
    certified: bool
    representatives: List[str] = field(default_factory=list)
    z_core: int = 0
    b_core: int = 0
    rows: Optional[Dict[str, int]] = None

    def sort_key(self):
        return (self.weight, self.degree, self.multidegree or ())

    def as_dict(self) -> Dict:
        out = {
            "degree": self.degree,
            "weight": self.weight,
            "multidegree": None if self.multidegree is None else list(self.multidegree),
            "dim": self.dim,
            "full": self.full,
            "certified": self.certified,
            "representatives": list(self.representatives),
        }
        if self.rows is not None:
            out["rows"] = dict(self.rows)
        return out


@dataclass
class HomologyReport:
    family: str
    window: Dict
    margin: Dict
    route: str
    sign: Optional[str]
    blocks: List[BlockHomology] = field(default_factory=list)
    notes: List[str] = field(default_factory=list)
    variant: Optional[str] = None

    def dimensions(self, weight: Optional[int] = None) -> Dict[int, int]:
        """Core dimension per total degree, summed over blocks"""
        out: Dict[int, int] = {}
        for block in self.blocks:
            if weight is None or block.weight == weight:
                out[block.degree] = out.get(block.degree, 0) + block.dim
        return dict(sorted(out.items()))

    def profile(self, weight: Optional[int] = None, top: Optional[int] = None) -> Tuple[int, ...]:
        dims = self.dimensions(weight)
        top = max(dims, default=-1) if top is None else top
        return tuple(dims.get(n, 0) for n in range(top + 1))

    @property
    def certified(self) -> bool:
        return all(b.certified for b in self.blocks)

    def uncertified(self) -> List[BlockHomology]:
        return [b for b in self.blocks if not b.certified]

    def as_dict(self) -> Dict:
        return {
            "family": self.family,
            "variant": self.variant,
            "window": self.window,
            "margin": self.margin,
            "route": self.route,
            "sign": self.sign,
            "blocks": [b.as_dict() for b in sorted(self.blocks, key=BlockHomology.sort_key)],
        }

    def to_json(self) -> str:
        data = self.as_dict()
        validate(data, HOMOLOGY_SCHEMA)
        return json.dumps(data, sort_keys=True, indent=2)


# -- solving --------------------------------------------------------------------------

def _total_images(fc: FiniteDoubleComplex, sources: Sequence) -> Dict[object, ChainElement]:
    return {b: fc.total_image(b) for b in sources}


def _horizontal_images(fc: FiniteDoubleComplex, sources: Sequence) -> Dict[object, ChainElement]:
    return {b: fc.horizontal.get(b, ChainElement()) for b in sources}


def _grouped(elements: Sequence, key) -> Dict[object, List]:
    out: Dict[object, List] = {}
    for b in elements:
        out.setdefault(key(b), []).append(b)
    for group in out.values():
        group.sort(key=lambda b: b.sort_key())
    return out


def _by_total(elements: Sequence) -> Dict[int, List]:
    return _grouped(elements, lambda b: b.total)


def _check_entries(rows: List[Dict[int, object]], max_entries: Optional[int]):
    if max_entries is None:
        return
    entries = sum(len(r) for r in rows)
    if entries > max_entries:
        raise ResourceLimitError(f"a boundary matrix holds {entries} entries, above the cap of {max_entries}")


def _boundary_rank(fc, chains: Dict[int, List], degree: int, max_entries) -> int:
    """Rank of the total boundary leaving total degree ``degree`` inside one closed group"""
    here = chains.get(degree, [])
    if not here or degree == 0:
        return 0
    below = list(chains.get(degree - 1, []))
    block = MatrixBlock(list(here), below, _total_images(fc, here))
    rows = block.rows()
    _check_entries(rows, max_entries)
    if len(block.targets) != len(below):
        raise WindowError(f"block is not closed: boundaries leave total degree {degree - 1}")
    return rank(sparse_matrix(rows, len(block.targets)))


def _quotient(fc, chains: Dict[int, List], degree: int, core: set, max_entries, keep_representatives):
    """
    Classes of Z_degree / B_degree inside one closed group.

    Returns (full dimension, core dimension, representatives, dim Z, dim B)
    where a class counts for the core when its leading basis element lies
    in the core.
    """
    here = chains.get(degree, [])
    if not here:
        return 0, 0, [], 0, 0
    outgoing = MatrixBlock(list(here), list(chains.get(degree - 1, [])), _total_images(fc, here))
    out_rows = outgoing.rows()
    _check_entries(out_rows, max_entries)
    cycles = kernel_rows(out_rows, len(outgoing.targets))

    above = chains.get(degree + 1, [])
    incoming = MatrixBlock(list(above), list(here), _total_images(fc, above))
    in_rows = incoming.rows()
    _check_entries(in_rows, max_entries)
    if len(incoming.targets) != len(here):
        raise WindowError(f"block is not closed: boundaries leave total degree {degree}")

    ncols = len(here)
    _, boundary_pivots = rref_rows(in_rows, ncols)
    combined, pivots = rref_rows(in_rows + cycles, ncols)
    taken = set(boundary_pivots)
    full, in_core, representatives = 0, 0, []
    for row, pivot in zip(combined, pivots):
        if pivot in taken:
            continue
        full += 1
        if here[pivot] in core:
            in_core += 1
            if keep_representatives:
                representatives.append(_chain(row, here))
    return full, in_core, representatives, len(cycles), len(boundary_pivots)


def _core_counts(fc: FiniteDoubleComplex, here: Sequence, below: Sequence, above: Sequence,
                 images, max_entries) -> Tuple[int, int]:
    """
    dim(Z intersected with the core) and dim(B intersected with the core)
    for the map given by ``images`` (a function of a list of sources)
    """
    core_here = [b for b in here if b in fc.core]
    if not core_here:
        return 0, 0
    outgoing = MatrixBlock(core_here, list(below), images(core_here))
    out_rows = outgoing.rows()
    _check_entries(out_rows, max_entries)
    z_core = len(core_here) - rank(sparse_matrix(out_rows, len(outgoing.targets)))

    incoming = MatrixBlock(list(above), list(here), images(above))
    in_rows = incoming.rows()
    _check_entries(in_rows, max_entries)
    ncols = len(incoming.targets)
    outside = [c for c, b in enumerate(incoming.targets) if b not in fc.core]
    full_rank = rank(sparse_matrix(in_rows, ncols))
    position = {c: k for k, c in enumerate(outside)}
    projected = [{position[c]: v for c, v in row.items() if c in position} for row in in_rows]
    outside_rank = rank(sparse_matrix(projected, len(outside)))
    return z_core, full_rank - outside_rank


def _row_homology(fc, chains_by_position: Dict[Tuple[int, int], List], n: int, row: int):
    """(basis, cycle vectors, incoming boundary rows) of one row of the double complex at column n"""
    here = chains_by_position.get((n, row), [])
    outgoing = MatrixBlock(list(here), list(chains_by_position.get((n - 1, row), [])),
                           _horizontal_images(fc, here))
    out_rows = outgoing.rows()
    cycles = kernel_rows(out_rows, len(outgoing.targets))
    above = chains_by_position.get((n + 1, row), [])
    incoming = MatrixBlock(list(above), list(here), _horizontal_images(fc, above))
    return here, cycles, incoming.rows()


def _row_route(fc: FiniteDoubleComplex, elements: Sequence, degree: int) -> Dict[str, int]:
    """HH_N = coker(phi_N) + ker(phi_(N-1)) on the row homologies"""
    by_position = _grouped(elements, lambda b: b.position)

    def row_dim(n: int, row: int) -> int:
        here, cycles, boundary_rows = _row_homology(fc, by_position, n, row)
        return len(cycles) - rank(sparse_matrix(boundary_rows, len(here)))

    def induced_rank(n: int) -> int:
        top, cycles, _ = _row_homology(fc, by_position, n, 1)
        bottom, _, boundary_rows = _row_homology(fc, by_position, n, 0)
        if not cycles or not bottom:
            return 0
        index = {b: k for k, b in enumerate(bottom)}
        images = []
        for vector in cycles:
            image = ChainElement()
            for c, value in vector.items():
                image = image + fc.vertical.get(top[c], ChainElement()).scale(value)
            images.append({index[b]: v for b, v in image.terms.items()})
        return (rank(sparse_matrix(boundary_rows + images, len(bottom)))
                - rank(sparse_matrix(boundary_rows, len(bottom))))

    h0, h1 = row_dim(degree, 0), row_dim(degree - 1, 1) if degree >= 1 else 0
    phi_here = induced_rank(degree)
    phi_below = induced_rank(degree - 1) if degree >= 1 else 0
    return {"h0": h0, "h1": h1, "rank_phi": phi_here, "rank_phi_below": phi_below,
            "total": (h0 - phi_here) + (h1 - phi_below)}


def _core_row_route(fc: FiniteDoubleComplex, elements: Sequence, degree: int, total: int,
                    max_entries) -> Dict[str, int]:
    """
    Row homologies of a windowed slice counted on the core.

    The induced vertical maps are not split on a window; their combined
    rank is what separates the core row homologies from the core total.
    """
    by_position = _grouped(elements, lambda b: b.position)

    def core_row(n: int, row: int) -> int:
        if n < 0:
            return 0
        z_core, b_core = _core_counts(fc, by_position.get((n, row), []), by_position.get((n - 1, row), []),
                                      by_position.get((n + 1, row), []),
                                      lambda sources: _horizontal_images(fc, sources), max_entries)
        return z_core - b_core

    h0, h1 = core_row(degree, 0), core_row(degree - 1, 1)
    return {"h0": h0, "h1": h1, "rank_phi_sum": h0 + h1 - total, "total": total}


def _groups(fc: FiniteDoubleComplex) -> List[Tuple[int, Optional[tuple], List]]:
    if fc.blocks:
        return [(block[0].weight if block else key[0], key, block) for key, block in sorted(fc.blocks.items())]
    by_weight = _grouped(fc.elements(), lambda b: b.weight)
    return [(r, None, group) for r, group in sorted(by_weight.items())]


def _closed(fc: FiniteDoubleComplex) -> bool:
    return bool(fc.blocks) or fc.size() == len(fc.core)


def _solve_group(fc, weight, key, elements, route, keep_representatives, max_entries) -> List[BlockHomology]:
    chains = _by_total(elements)
    closed = _closed(fc)
    ranks: Dict[int, int] = {}

    def boundary_rank(degree: int) -> int:
        if degree not in ranks:
            ranks[degree] = _boundary_rank(fc, chains, degree, max_entries)
        return ranks[degree]

    out = []
    for degree in range(fc.window.max_tensor + 1):
        here = chains.get(degree, [])
        if closed and not keep_representatives and all(b in fc.core for b in here):
            z_core, b_core = len(here) - boundary_rank(degree), boundary_rank(degree + 1)
            full = dim = z_core - b_core
            reps = []
        elif closed:
            full, dim, reps, z_core, b_core = _quotient(fc, chains, degree, fc.core, max_entries,
                                                        keep_representatives)
        else:
            z_core, b_core = _core_counts(fc, here, chains.get(degree - 1, []), chains.get(degree + 1, []),
                                          lambda sources: _total_images(fc, sources), max_entries)
            full, dim, reps = z_core - b_core, z_core - b_core, []
        if not full and not dim and not here:
            continue
        result = BlockHomology(degree, weight, key, dim, full, certified=bool(fc.blocks),
                               representatives=[r.describe(fc.family.names) for r in reps],
                               z_core=z_core, b_core=b_core)
        if route == "row_then_vertical":
            if closed:
                result.rows = _row_route(fc, elements, degree)
            else:
                result.rows = _core_row_route(fc, elements, degree, dim, max_entries)
        out.append(result)
    return out


def homology(fc: FiniteDoubleComplex, route: str = "total", jobs: int = 1, progress: bool = False,
             representatives: bool = False, max_entries: Optional[int] = None) -> HomologyReport:
    """
    Homology of a finite slice.

    Graded blocks are complete, so their results come out certified; windowed
    results need ``certify``.  With the row route each block also carries the
    row homologies and the ranks of the induced vertical maps (their combined
    rank on windowed slices).
    """
    if route not in ROUTES:
        raise ValueError(f"unknown route {route!r}, expected one of {ROUTES}")
    family = fc.family
    groups = _groups(fc)
    tasks = tqdm(groups, desc=f"{family.label} blocks", disable=not progress)
    solved = Parallel(n_jobs=jobs, prefer="threads")(
        delayed(_solve_group)(fc, weight, key, elements, route, representatives, max_entries)
        for weight, key, elements in tasks
    )
    report = HomologyReport(family.name, fc.window.as_dict(), fc.margin.as_dict(), route, fc.sign,
                            variant=family.variant)
    for blocks in solved:
        report.blocks.extend(blocks)
    report.blocks.sort(key=BlockHomology.sort_key)
    for block in report.blocks:
        if block.rows is not None and fc.blocks and block.rows["total"] != block.full:
            report.notes.append(f"row route gives {block.rows['total']} against {block.full} "
                                f"in degree {block.degree}, block {block.multidegree}")
    for note in report.notes:
        logger.warning(note)
    logger.info(f"solved {len(groups)} groups of {family.label}: profile {report.profile()}")
    return report


def comparison_margin(fc: FiniteDoubleComplex) -> Margin:
    """
    The margin a windowed result is compared against.

    Index and degree margins are doubled.  The tensor margin is kept: a
    boundary landing in total degree d only comes from total degree d + 1.
    """
    wider = replace(fc.margin.doubled(), tensor=fc.margin.tensor)
    if wider == fc.margin:
        return replace(wider, degree=max(wider.degree, 2))
    return wider


def certify(fc: FiniteDoubleComplex, margin: Optional[Margin] = None, **options) -> HomologyReport:
    """
    Flag every windowed block whose core cycles and core boundaries do not move
    when the slice is rebuilt with a larger margin.

    Row homologies and representatives come from ``fc`` itself; the wider
    slice is only solved through the total complex.
    """
    report = homology(fc, **options)
    if fc.blocks:
        return report
    margin = margin or comparison_margin(fc)
    wider = build_finite_complex(fc.family, fc.window, margin, check=False)
    options = dict(options, route="total", representatives=False)
    again = {(b.weight, b.degree): b for b in homology(wider, **options).blocks}
    for block in report.blocks:
        other = again.get((block.weight, block.degree))
        block.certified = (other is not None and other.z_core == block.z_core
                           and other.b_core == block.b_core)
        if not block.certified:
            logger.warning(f"{fc.family.label}: degree {block.degree} weight {block.weight} "
                           f"is not stable under margin {margin.as_dict()}")
    return report
