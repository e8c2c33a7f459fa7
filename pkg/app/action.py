"""Evaluation of diagram sums on tensors of normalized cochains.

Inputs are taken in dual form: an elementary input on circle ``i`` is a
tuple ``(c_1, ..., c_n, c)`` of dual-basis indices. For each placement the
functional on every cluster slot is split over the cluster's points, chord
leaves are contracted cyclically, and each output collects the leftover
slots along its boundary walk followed by the factor at its marker.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from sympy.polys.domains import QQ

from .diagram import ChordDiagram, ChordLeaf, OutputMark, dimension, generator
from .errors import CohomologyError, DegreeError, ShapeError
from .frobenius import FrobeniusAlgebra
from .hochschild import (
    Cochain,
    DualCochain,
    Variant,
    beta_sharp,
    beta_sharp_inverse,
    cohomology,
    dual_delta,
)
from .linalg import RationalMatrix, format_scalar
from .placement import Placement, ledger_sign, placements, readings
from .prop import DiagramSum, as_sum, boundary, compose

LOGGER = logging.getLogger(__name__)

IndexTuple = Tuple[int, ...]
Key = Tuple[IndexTuple, ...]


class CochainTensor:
    """Sparse rational combination of tensor products of basis cochains."""

    def __init__(self, algebra: FrobeniusAlgebra, shape: int, terms: Optional[Dict[Key, Any]] = None,
                 dual: bool = True):
        self.algebra = algebra
        self.shape = shape
        self.dual = dual
        self.terms: Dict[Key, Any] = {}
        for key, value in (terms or {}).items():
            self.add(key, value)

    def add(self, key: Key, value: Any) -> None:
        if len(key) != self.shape:
            raise ShapeError(f"tensor of shape {self.shape} got a term with {len(key)} factors")
        if not value:
            return
        total = self.terms.get(key, self.algebra.field.zero) + value
        if total:
            self.terms[key] = total
        else:
            self.terms.pop(key, None)

    def items(self) -> Iterable[Tuple[Key, Any]]:
        return sorted(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def _empty(self) -> "CochainTensor":
        return CochainTensor(self.algebra, self.shape, dual=self.dual)

    def __add__(self, other: "CochainTensor") -> "CochainTensor":
        if other.shape != self.shape or other.dual != self.dual:
            raise ShapeError("cannot add tensors of different shape or form")
        result = CochainTensor(self.algebra, self.shape, dict(self.terms), self.dual)
        for key, value in other.terms.items():
            result.add(key, value)
        return result

    def scaled(self, factor: Any) -> "CochainTensor":
        factor = self.algebra.field.convert(factor)
        return CochainTensor(self.algebra, self.shape, {k: v * factor for k, v in self.terms.items()}, self.dual)

    def __neg__(self) -> "CochainTensor":
        return self.scaled(-1)

    def __sub__(self, other: "CochainTensor") -> "CochainTensor":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CochainTensor):
            return NotImplemented
        return (self - other).is_zero()

    def __len__(self) -> int:
        return len(self.terms)

    def __repr__(self) -> str:
        return f"CochainTensor(shape={self.shape}, terms={len(self)}, dual={self.dual})"

    @staticmethod
    def degrees_of(key: Key) -> Tuple[int, ...]:
        return tuple(len(factor) - 1 for factor in key)

    def degree_profiles(self) -> List[Tuple[int, ...]]:
        return sorted({self.degrees_of(key) for key in self.terms})

    def total_degrees(self) -> List[int]:
        return sorted({sum(self.degrees_of(key)) for key in self.terms})

    def is_normalized(self) -> bool:
        return all(0 not in factor[:-1] for key in self.terms for factor in key)

    @classmethod
    def of(cls, cochains: Sequence[Cochain]) -> "CochainTensor":
        """Tensor product of cochains, converted to dual form."""
        if not cochains:
            raise ShapeError("need at least one cochain")
        alg = cochains[0].algebra
        duals = [c if c.dual else beta_sharp(c) for c in cochains]
        result = CochainTensor(alg, len(duals))
        entries = [[(key, value) for n in c.degrees for key, value in c.component(n).items()] for c in duals]
        for combo in itertools.product(*entries):
            value = alg.field.one
            for _, v in combo:
                value *= v
            result.add(tuple(key for key, _ in combo), value)
        return result

    def _convert(self, matrix: Sequence[Sequence[Any]], dual: bool) -> "CochainTensor":
        result = CochainTensor(self.algebra, self.shape, dual=dual)
        d = self.algebra.dimension
        for key, value in self.terms.items():
            options = []
            for factor in key:
                row = matrix[factor[-1]]
                options.append([(factor[:-1] + (b,), row[b]) for b in range(d) if row[b]])
            for combo in itertools.product(*options):
                coef = value
                for _, w in combo:
                    coef *= w
                result.add(tuple(k for k, _ in combo), coef)
        return result

    def to_primal(self) -> "CochainTensor":
        return self if not self.dual else self._convert(self.algebra.form_inverse, False)

    def to_dual(self) -> "CochainTensor":
        return self if self.dual else self._convert(self.algebra.form, True)

    def single(self) -> Cochain:
        """The one factor of a shape-1 tensor, as a cochain of matching form."""
        if self.shape != 1:
            raise ShapeError(f"tensor has {self.shape} factors")
        comps: Dict[int, Dict[IndexTuple, Any]] = {}
        for (factor,), value in self.terms.items():
            comps.setdefault(len(factor) - 1, {})[factor] = value
        top = max(comps, default=0)
        kind = DualCochain if self.dual else Cochain
        return kind(self.algebra, comps, top + 1)

    def delta_at(self, j: int) -> "CochainTensor":
        """Differential on factor j with the Koszul sign of the factors before it."""
        if not self.dual:
            return self.to_dual().delta_at(j).to_primal()
        result = self._empty()
        alg = self.algebra
        for key, value in self.terms.items():
            before = sum(len(f) - 1 for f in key[:j])
            sign = -1 if before % 2 else 1
            n = len(key[j]) - 1
            image = dual_delta(DualCochain(alg, {n: {key[j]: alg.field.one}}, n + 1))
            for new, w in image.component(n + 1).items():
                result.add(key[:j] + (new,) + key[j + 1:], sign * value * w)
        return result

    def permuted(self, sigma: Sequence[int]) -> "CochainTensor":
        """Factor i moves to position sigma(i) (1-based), with the Koszul sign."""
        result = self._empty()
        for key, value in self.terms.items():
            degrees = self.degrees_of(key)
            target = [None] * self.shape
            for i, s in enumerate(sigma):
                target[s - 1] = key[i]
            parity = sum(degrees[a] * degrees[b] for a in range(self.shape) for b in range(a + 1, self.shape)
                         if sigma[a] > sigma[b])
            result.add(tuple(target), -value if parity % 2 else value)
        return result

    def to_dict(self) -> Dict[str, Any]:
        return {"shape": self.shape, "form": "dual" if self.dual else "primal",
                "terms": [[format_scalar(v, self.algebra.field), [list(f) for f in key]]
                          for key, v in self.items()]}


def tensor_product(x: CochainTensor, y: CochainTensor) -> CochainTensor:
    result = CochainTensor(x.algebra, x.shape + y.shape, dual=x.dual)
    for kx, vx in x.terms.items():
        for ky, vy in y.terms.items():
            result.add(kx + ky, vx * vy)
    return result


# ---------------------------------------------------------------------------
# evaluation plans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class _ClusterSlot:
    circle: int
    slot: int
    points: Tuple[Tuple[str, int, int], ...]


@dataclass(frozen=True)
class _Term:
    placement: Placement
    clusters: Tuple[_ClusterSlot, ...]
    readings: Tuple[Tuple[Tuple[int, int], ...], ...]


@lru_cache(maxsize=2048)
def _plan(d: ChordDiagram, degrees: Tuple[int, ...]) -> Tuple[_Term, ...]:
    r = d.rooted()
    terms = []
    for placement in placements(r, degrees):
        clusters = []
        for i, circle in enumerate(r.circles):
            for u, cluster in enumerate(circle):
                slot = degrees[i] + 1 if u == 0 else placement.slots[i][u - 1]
                pts = []
                for p in cluster:
                    if isinstance(p, ChordLeaf):
                        pts.append(("leaf", p.chord, p.index))
                    elif isinstance(p, OutputMark):
                        pts.append(("out", p.id, 0))
                clusters.append(_ClusterSlot(i, slot, tuple(pts)))
        read = readings(r, degrees, placement.slots)
        terms.append(_Term(placement, tuple(clusters),
                           tuple(tuple((i, s) for i, s, _ in read[k]) for k in range(1, r.outputs + 1))))
    return tuple(terms)


def placement_sign(d: ChordDiagram, degrees: Sequence[int], slots: Sequence[Sequence[int]]) -> int:
    return ledger_sign(d.rooted(), tuple(degrees), tuple(tuple(s) for s in slots))


def _evaluate(d: ChordDiagram, alg: FrobeniusAlgebra, inputs: Key, weight: Any, out: CochainTensor) -> None:
    field = alg.field
    degrees = tuple(len(x) - 1 for x in inputs)
    for term in _plan(d, degrees):
        choices = []
        for spec in term.clusters:
            a = inputs[spec.circle][spec.slot - 1]
            if not spec.points:
                if a != 0:
                    choices = None
                    break
                choices.append([((), field.one)])
                continue
            expansion = alg.expansion(a, len(spec.points))
            if not expansion:
                choices = None
                break
            choices.append(expansion)
        if choices is None:
            continue
        leftovers = [tuple(inputs[i][s - 1] for i, s in reading) for reading in term.readings]
        base = weight * field.convert(term.placement.sign)
        for combo in itertools.product(*choices):
            value = base
            leaves: Dict[int, Dict[int, int]] = {}
            finals: Dict[int, int] = {}
            for spec, (indices, coeff) in zip(term.clusters, combo):
                value *= coeff
                for (kind, a, b), idx in zip(spec.points, indices):
                    if kind == "leaf":
                        leaves.setdefault(a, {})[b] = idx
                    else:
                        finals[a] = idx
            for chord, arity in enumerate(d.arities):
                seq = tuple(leaves[chord][k] for k in range(arity))
                value *= alg.chord_table(arity).get(seq, field.zero)
                if not value:
                    break
            if not value:
                continue
            out.add(tuple(leftovers[k] + (finals[k + 1],) for k in range(d.outputs)), value)


def _as_tensor(inputs: Union[CochainTensor, Sequence[Cochain]]) -> Tuple[CochainTensor, bool]:
    if isinstance(inputs, CochainTensor):
        return inputs.to_dual(), inputs.dual
    inputs = list(inputs)
    primal = bool(inputs) and not any(c.dual for c in inputs)
    return CochainTensor.of(inputs), not primal


def act(s: Any, inputs: Union[CochainTensor, Sequence[Cochain]]) -> CochainTensor:
    """Apply a diagram sum to a tensor of cochains; the result keeps the input form."""
    s = as_sum(s)
    x, dual = _as_tensor(inputs)
    if x.shape != s.shape[0]:
        raise ShapeError(f"diagram sum has {s.shape[0]} inputs but {x.shape} cochains were given")
    alg = x.algebra
    out = CochainTensor(alg, s.shape[1])
    for d, coef in s.items():
        c = alg.field.convert_from(coef, QQ)
        for key, value in x.terms.items():
            _evaluate(d, alg, key, c * value, out)
    return out if dual else out.to_primal()


def act_pipeline(stages: Sequence[Any], inputs: Union[CochainTensor, Sequence[Cochain]]) -> CochainTensor:
    """Apply ``stages[0]`` first, then ``stages[1]``, and so on."""
    x, dual = _as_tensor(inputs)
    for stage in stages:
        x = act(stage, x)
    return x if dual else x.to_primal()


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def chain_map_defect(s: Any, inputs: Union[CochainTensor, Sequence[Cochain]]) -> CochainTensor:
    """act(boundary S) minus the commutator of act(S) with the differential."""
    s = as_sum(s)
    x, _ = _as_tensor(inputs)
    lhs = act(boundary(s), x)
    inner = CochainTensor(x.algebra, s.shape[1])
    for j in range(x.shape):
        inner = inner + act(s, x.delta_at(j))
    y = act(s, x)
    outer = CochainTensor(x.algebra, s.shape[1])
    for j in range(y.shape):
        outer = outer + y.delta_at(j)
    if (s.dimension or 0) % 2:
        outer = -outer
    return lhs - (inner - outer)


def check_chain_map(s: Any, inputs: Union[CochainTensor, Sequence[Cochain]]) -> Tuple[bool, CochainTensor]:
    defect = chain_map_defect(s, inputs)
    return defect.is_zero(), defect


def check_composition(s: Any, t: Any, inputs: Union[CochainTensor, Sequence[Cochain]]) -> Tuple[bool, CochainTensor]:
    x, _ = _as_tensor(inputs)
    defect = act(compose(s, t), x) - act(s, act(t, x))
    return defect.is_zero(), defect


def degree_law_holds(s: Any, inputs: Union[CochainTensor, Sequence[Cochain]]) -> bool:
    """Every output term has total degree sum(n_i) - dimension(term)."""
    s = as_sum(s)
    x, _ = _as_tensor(inputs)
    for d, coef in s.items():
        single = DiagramSum.of(d)
        for key, value in x.terms.items():
            y = act(single, CochainTensor(x.algebra, x.shape, {key: value}))
            expected = sum(len(f) - 1 for f in key) - dimension(d)
            if any(total != expected for total in y.total_degrees()):
                return False
    return True


def bracket(f: Cochain, g: Cochain) -> Cochain:
    """Antisymmetrized brace: star(f, g) - (-1)^{(p-1)(q-1)} star(g, f)."""
    star = DiagramSum.of(generator("star"))
    p, q = f.degree, g.degree
    first = act(star, [f, g]).single()
    second = act(star, [g, f]).single()
    if ((p - 1) * (q - 1)) % 2:
        return first + second
    return first - second


# ---------------------------------------------------------------------------
# induced maps on cohomology
# ---------------------------------------------------------------------------

@dataclass
class InducedMap:
    """Block matrices of an induced map, one block per output degree profile."""

    source_degrees: Tuple[int, ...]
    source_dimension: int
    blocks: Dict[Tuple[int, ...], RationalMatrix]

    def is_zero(self) -> bool:
        return all(block.is_zero() for block in self.blocks.values())

    def block(self, profile: Sequence[int]) -> Optional[RationalMatrix]:
        return self.blocks.get(tuple(profile))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source_degrees": list(self.source_degrees),
            "source_dimension": self.source_dimension,
            "blocks": {",".join(map(str, k)): [[format_scalar(x, m.field) for x in row] for row in m.entries]
                       for k, m in sorted(self.blocks.items())},
        }


class CohomologyReader:
    """Projects tensors of dual basis cochains onto tensors of cohomology classes."""

    def __init__(self, alg: FrobeniusAlgebra, max_degree: int, variant: Variant = Variant.NORMALIZED):
        self.algebra = alg
        self.max_degree = max_degree
        self.variant = variant
        self._projectors: Dict[int, Any] = {}

    def group(self, n: int):
        return cohomology(self.algebra, n, self.max_degree, self.variant)

    def _projector(self, n: int):
        if n not in self._projectors:
            self._projectors[n] = self.group(n).projector()
        return self._projectors[n]

    def factor_coordinates(self, factor: IndexTuple) -> List[Any]:
        """Class coordinates of the dual basis element ``factor`` read as a primal cochain."""
        alg = self.algebra
        n = len(factor) - 1
        if n + 1 > self.max_degree:
            raise DegreeError(f"output degree {n} exceeds the truncation at {self.max_degree}")
        primal = beta_sharp_inverse(DualCochain(alg, {n: {factor: alg.field.one}}, n + 1))
        return self._projector(n).coordinates(primal.vector(n, self.variant))

    def read(self, y: CochainTensor) -> Dict[Tuple[int, ...], List[Any]]:
        y = y.to_dual()
        field = self.algebra.field
        result: Dict[Tuple[int, ...], List[Any]] = {}
        cache: Dict[IndexTuple, List[Any]] = {}
        for key, value in y.terms.items():
            profile = CochainTensor.degrees_of(key)
            dims = [self.group(n).dimension for n in profile]
            size = 1
            for dim in dims:
                size *= dim
            vec = result.setdefault(profile, [field.zero] * size)
            if not size:
                continue
            for f in key:
                if f not in cache:
                    cache[f] = self.factor_coordinates(f)
            coords = [cache[f] for f in key]
            for position, combo in enumerate(itertools.product(*[range(dim) for dim in dims])):
                w = value
                for c, idx in zip(coords, combo):
                    w *= c[idx]
                    if not w:
                        break
                if w:
                    vec[position] += w
        return result

    def representatives(self, degrees: Sequence[int]) -> List[CochainTensor]:
        groups = [self.group(n) for n in degrees]
        result = []
        for combo in itertools.product(*[g.cochains() for g in groups]):
            result.append(CochainTensor.of(list(combo)))
        return result


def act_on_cohomology(s: Any, alg: FrobeniusAlgebra, degrees: Sequence[int], max_degree: int = 4,
                      variant: Variant = Variant.NORMALIZED, stages: Optional[Sequence[Any]] = None,
                      check: bool = True, reader: Optional[CohomologyReader] = None) -> InducedMap:
    """Matrix of the map induced on cohomology by ``s`` (or by the pipeline ``stages``)."""
    pipeline = list(stages) if stages is not None else [as_sum(s)]
    reader = reader or CohomologyReader(alg, max_degree, variant)
    degrees = tuple(degrees)
    inputs = reader.representatives(degrees)
    blocks: Dict[Tuple[int, ...], List[List[Any]]] = {}
    for column, x in enumerate(inputs):
        for profile, vec in reader.read(act_pipeline(pipeline, x)).items():
            blocks.setdefault(profile, [[alg.field.zero] * len(inputs) for _ in vec])
            for row, value in enumerate(vec):
                blocks[profile][row][column] = value
    if check and inputs:
        _check_well_defined(pipeline, reader, degrees)
    matrices = {p: RationalMatrix.from_rows(rows, alg.field, cols=len(inputs)) for p, rows in blocks.items()}
    return InducedMap(degrees, len(inputs), matrices)


def _check_well_defined(pipeline: Sequence[Any], reader: CohomologyReader, degrees: Tuple[int, ...]) -> None:
    """Coboundary inputs must land on classes that vanish."""
    alg = reader.algebra
    groups = [reader.group(n) for n in degrees]
    for i, group in enumerate(groups):
        others = [g.cochains()[:1] for g in groups]
        if any(not o for k, o in enumerate(others) if k != i):
            continue
        for vec in group.coboundaries:
            boundary_cochain = Cochain.from_vector(alg, degrees[i], vec, reader.variant, reader.max_degree)
            parts = [others[k][0] if k != i else boundary_cochain for k in range(len(groups))]
            y = act_pipeline(pipeline, CochainTensor.of(parts))
            for profile, coords in reader.read(y).items():
                if any(coords):
                    raise CohomologyError(path=f"input {i + 1}, degrees {list(degrees)}")
