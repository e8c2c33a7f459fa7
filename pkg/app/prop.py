"""Diagram sums and the PROP operations on them: boundary, composition, tensor."""
from __future__ import annotations

import itertools
import logging
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ

from .config import get_settings
from .diagram import (
    MARK,
    ChordDiagram,
    ChordLeaf,
    Direction,
    InputMark,
    Mode,
    OutputMark,
    Point,
    arc_count,
    canonical,
    canonical_form,
    dimension,
    from_dict,
    generator,
    output_arcs,
    permutation_diagram,
    slide_normalize,
    to_dict,
)
from .errors import InputError, ShapeError
from .linalg import format_scalar, parse_scalar
from .placement import orientation_parity
from .schemas import DiagramSumFile, load_model

LOGGER = logging.getLogger(__name__)


def _promote(mode_a: Mode, mode_b: Mode) -> Mode:
    return Mode.SULLIVAN if Mode.SULLIVAN in (mode_a, mode_b) else Mode.CYCLIC


def _with_mode(d: ChordDiagram, mode: Mode) -> ChordDiagram:
    return d if d.mode == mode else ChordDiagram(mode, d.circles, d.arities, d.outputs)


class DiagramSum:
    """A finite rational combination of diagrams of one shape, mode and dimension."""

    def __init__(self, shape: Tuple[int, int], mode: Mode = Mode.CYCLIC,
                 normalize: Optional[bool] = None):
        self.shape = tuple(shape)
        self.mode = mode
        self.normalize = get_settings().normalize_slides if normalize is None else normalize
        self._terms: Dict[bytes, Tuple[ChordDiagram, Any]] = {}
        self._dimension: Optional[int] = None

    @classmethod
    def of(cls, d: ChordDiagram, coefficient: Any = 1, normalize: Optional[bool] = None) -> "DiagramSum":
        result = cls(d.shape, d.mode, normalize)
        result.add(d, coefficient)
        return result

    @property
    def dimension(self) -> Optional[int]:
        return self._dimension if self._terms else None

    def _key(self, d: ChordDiagram) -> Tuple[bytes, ChordDiagram]:
        rep = slide_normalize(d) if self.normalize else canonical_form(d)
        return canonical(rep), rep

    def add(self, d: ChordDiagram, coefficient: Any = 1) -> None:
        value = QQ.convert(coefficient)
        if not value:
            return
        if d.shape != self.shape:
            raise ShapeError(f"term of shape {d.shape} added to a sum of shape {self.shape}")
        if d.mode == Mode.SULLIVAN and self.mode == Mode.CYCLIC:
            raise ShapeError("sullivan diagram added to a cyclic sum")
        d = _with_mode(d, self.mode)
        dim = dimension(d)
        if self._terms and dim != self._dimension:
            raise ShapeError(f"term of dimension {dim} added to a sum of dimension {self._dimension}")
        key, rep = self._key(d)
        old = self._terms.get(key)
        total = value + (old[1] if old else QQ.zero)
        if total:
            self._terms[key] = (rep, total)
        elif old:
            del self._terms[key]
        if self._terms:
            self._dimension = dim

    def items(self) -> Iterator[Tuple[ChordDiagram, Any]]:
        for key in sorted(self._terms):
            yield self._terms[key]

    def coefficient(self, d: ChordDiagram) -> Any:
        key, _ = self._key(_with_mode(d, self.mode))
        entry = self._terms.get(key)
        return entry[1] if entry else QQ.zero

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def copy(self) -> "DiagramSum":
        result = DiagramSum(self.shape, self.mode, self.normalize)
        result._terms = dict(self._terms)
        result._dimension = self._dimension
        return result

    def scaled(self, factor: Any) -> "DiagramSum":
        result = DiagramSum(self.shape, self.mode, self.normalize)
        for d, c in self.items():
            result.add(d, c * QQ.convert(factor))
        return result

    def __add__(self, other: "DiagramSum") -> "DiagramSum":
        if other.shape != self.shape:
            raise ShapeError(f"cannot add sums of shapes {self.shape} and {other.shape}")
        result = DiagramSum(self.shape, _promote(self.mode, other.mode), self.normalize)
        for d, c in itertools.chain(self.items(), other.items()):
            result.add(d, c)
        return result

    def __neg__(self) -> "DiagramSum":
        return self.scaled(-1)

    def __sub__(self, other: "DiagramSum") -> "DiagramSum":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DiagramSum):
            return NotImplemented
        return (self - other).is_zero()

    def __repr__(self) -> str:
        return f"DiagramSum(shape={self.shape}, mode={self.mode.value}, terms={len(self)})"

    def to_dict(self) -> Dict[str, Any]:
        return {"terms": [[format_scalar(c), to_dict(d)] for d, c in self.items()]}


def as_sum(value: Any) -> DiagramSum:
    if isinstance(value, DiagramSum):
        return value
    if isinstance(value, ChordDiagram):
        return DiagramSum.of(value)
    if isinstance(value, str):
        return DiagramSum.of(generator(value))
    raise InputError(f"cannot interpret {type(value).__name__} as a diagram sum")


def sum_from_dict(data: Any, prefix: str = "") -> DiagramSum:
    """Accept a single diagram or a ``{"terms": [[coef, diagram], ...]}`` object."""
    if isinstance(data, dict) and "terms" in data:
        model = load_model(DiagramSumFile, data, prefix)
        result: Optional[DiagramSum] = None
        for k, pair in enumerate(model.terms):
            where = f"{prefix + '.' if prefix else ''}terms[{k}]"
            if len(pair) != 2:
                raise InputError("expected [coefficient, diagram]", where)
            coef = parse_scalar(pair[0], QQ, f"{where}[0]")
            d = from_dict(pair[1], where + "[1]")
            if result is None:
                result = DiagramSum(d.shape, d.mode)
            result.add(d, coef)
        if result is None:
            raise InputError("empty sum has no shape", prefix or "terms")
        return result
    return DiagramSum.of(from_dict(data, prefix))


# ---------------------------------------------------------------------------
# boundary
# ---------------------------------------------------------------------------

def _merge(first: Sequence[Point], second: Sequence[Point]) -> Tuple[Point, ...]:
    points = [p for p in list(first) + list(second) if not isinstance(p, InputMark)]
    if len(points) != len(first) + len(second):
        points.append(MARK)
    return tuple(points)


def collapse_arc(d: ChordDiagram, circle: int, arc: int) -> Optional[ChordDiagram]:
    """Merge the two clusters flanking ``arc``; None for a full-circle arc."""
    r = d.rooted()
    clusters = list(r.circles[circle])
    count = len(clusters)
    if count == 1:
        return None
    if arc < count - 1:
        merged = _merge(clusters[arc], clusters[arc + 1])
        clusters[arc:arc + 2] = [merged]
    else:
        merged = _merge(clusters[arc], clusters[0])
        clusters = [merged] + clusters[1:arc]
    circles = list(r.circles)
    circles[circle] = tuple(clusters)
    return ChordDiagram(r.mode, tuple(circles), r.arities, r.outputs).rooted()


def boundary_terms(d: ChordDiagram) -> List[Tuple[ChordDiagram, int]]:
    """Signed arc collapses; arc ``t`` (from 1) carries (-1)^(t+1).

    Circles are numbered in order. Within a circle the count starts at the
    arc ending at the mark cluster and runs against the cluster order.
    """
    r = d.rooted()
    terms = []
    before = 0
    for i, circle in enumerate(r.circles):
        count = len(circle)
        for u in range(count):
            t = before + count - u
            collapsed = collapse_arc(r, i, u)
            if collapsed is not None:
                terms.append((collapsed, 1 if t % 2 else -1))
        before += count
    return terms


def boundary(s: DiagramSum) -> DiagramSum:
    result = DiagramSum(s.shape, s.mode, s.normalize)
    for d, c in s.items():
        for collapsed, sign in boundary_terms(d):
            result.add(collapsed, c * sign)
    return result


# ---------------------------------------------------------------------------
# composition
# ---------------------------------------------------------------------------

def _carried(point: Point, chord_offset: int, backward: bool) -> Point:
    if isinstance(point, ChordLeaf):
        return ChordLeaf(point.chord + chord_offset, point.index, point.twist ^ backward)
    if isinstance(point, OutputMark) and backward:
        flipped = Direction.REVERSED if point.direction == Direction.OPPOSING else Direction.OPPOSING
        return OutputMark(point.id, flipped)
    return point


def _carry_block(points: Sequence[Point], chord_offset: int, backward: bool) -> List[Point]:
    moved = [_carried(p, chord_offset, backward) for p in points if not isinstance(p, InputMark)]
    return moved[::-1] if backward else moved


Tag = Tuple[Any, ...]


def _compose_pair(s: ChordDiagram, t: ChordDiagram) -> List[Tuple[ChordDiagram, int]]:
    """Every insertion of the circles of ``s`` into the output walks of ``t``."""
    s, t = s.rooted(), t.rooted()
    mode = _promote(s.mode, t.mode)
    walks = output_arcs(t)
    offset = len(t.arities)
    options = []
    for k, circle in enumerate(s.circles, start=1):
        options.append(list(itertools.combinations_with_replacement(range(len(walks[k])), len(circle) - 1)))
    out_home = {}
    for i, circle in enumerate(t.circles):
        for u, cluster in enumerate(circle):
            for p in cluster:
                if isinstance(p, OutputMark):
                    out_home[p.id] = (i, u, p.direction == Direction.REVERSED)

    results = []
    for choice in itertools.product(*options):
        inserted: Dict[Tuple[int, int], List[Tuple[Tag, List[Point]]]] = {}
        against = 0
        for k, arcs in enumerate(choice, start=1):
            for j, a in enumerate(arcs, start=1):
                visit = walks[k][a]
                block = _carry_block(s.circles[k - 1][j], offset, visit.against)
                bucket = inserted.setdefault((visit.circle, visit.position), [])
                entry = (("S", k, j), block)
                if visit.against:
                    against += 1
                    bucket.insert(0, entry)
                else:
                    bucket.append(entry)
        circles = []
        tags: List[List[Tag]] = []
        empty = False
        for i, circle in enumerate(t.circles):
            clusters: List[Tuple[Point, ...]] = []
            circle_tags: List[Tag] = []
            for u, cluster in enumerate(circle):
                points: List[Point] = []
                for p in cluster:
                    if isinstance(p, OutputMark):
                        backward = out_home[p.id][2]
                        points.extend(_carry_block(s.circles[p.id - 1][0], offset, backward))
                    else:
                        points.append(p)
                if not points:
                    empty = True
                clusters.append(tuple(points))
                circle_tags.append(("T", u))
                for tag, block in inserted.get((i, u), []):
                    clusters.append(tuple(block))
                    circle_tags.append(tag)
            circles.append(tuple(clusters))
            tags.append(circle_tags)
        if empty:
            continue
        composite = ChordDiagram(mode, tuple(circles), t.arities + s.arities, s.outputs)
        results.append((composite, _composition_sign(composite, tags, s, t, against)))
    return results


def _composition_sign(composite: ChordDiagram, tags: List[List[Tag]], s: ChordDiagram, t: ChordDiagram,
                      against: int) -> int:
    """Shuffle parity of the clusters, twisted by the three orientations.

    Clusters of ``t`` (circle by circle) followed by those of ``s`` are
    shuffled into the cluster order of the composite. In sullivan mode every
    cluster of ``s`` inserted against a circle adds one.
    """
    order = [(0,) + (i,) + tag[1:] if tag[0] == "T" else (1,) + tag[1:]
             for i, circle_tags in enumerate(tags) for tag in circle_tags if tag != ("T", 0)]
    parity = sum(1 for a, b in itertools.combinations(order, 2) if a > b)
    parity += orientation_parity(composite) + orientation_parity(t) + orientation_parity(s)
    if composite.mode == Mode.SULLIVAN:
        parity += against
    return -1 if parity % 2 else 1


def compose(s: Any, t: Any) -> DiagramSum:
    """``s`` after ``t``: outputs of ``t`` feed the inputs of ``s``."""
    s, t = as_sum(s), as_sum(t)
    if s.shape[0] != t.shape[1]:
        raise ShapeError(f"cannot compose shape {s.shape} after shape {t.shape}")
    result = DiagramSum((t.shape[0], s.shape[1]), _promote(s.mode, t.mode), s.normalize and t.normalize)
    expected = None
    if not s.is_zero() and not t.is_zero():
        expected = s.dimension + t.dimension
    for ds, cs in s.items():
        for dt, ct in t.items():
            for composite, sign in _compose_pair(ds, dt):
                if dimension(composite) != expected:
                    continue
                result.add(composite, cs * ct * sign)
    LOGGER.debug("composed %r after %r into %d terms", s, t, len(result))
    return result


# ---------------------------------------------------------------------------
# tensor and permutations
# ---------------------------------------------------------------------------

def _shift(d: ChordDiagram, chord_offset: int, output_offset: int) -> Tuple[Tuple[Tuple[Point, ...], ...], ...]:
    def move(p: Point) -> Point:
        if isinstance(p, ChordLeaf):
            return ChordLeaf(p.chord + chord_offset, p.index, p.twist)
        if isinstance(p, OutputMark):
            return OutputMark(p.id + output_offset, p.direction)
        return p

    return tuple(tuple(tuple(move(p) for p in cl) for cl in circle) for circle in d.circles)


def tensor_diagrams(a: ChordDiagram, b: ChordDiagram) -> ChordDiagram:
    circles = a.circles + _shift(b, len(a.arities), a.outputs)
    return ChordDiagram(_promote(a.mode, b.mode), circles, a.arities + b.arities, a.outputs + b.outputs)


def tensor(s: Any, t: Any, koszul: bool = False) -> DiagramSum:
    """Disjoint union; inputs and outputs of ``t`` are numbered after those of ``s``.

    With ``koszul`` each pair of terms is scaled by (-1)^(arcs of s * dimension of t),
    which makes the union act as the Koszul tensor product of the two actions.
    """
    s, t = as_sum(s), as_sum(t)
    shape = (s.shape[0] + t.shape[0], s.shape[1] + t.shape[1])
    result = DiagramSum(shape, _promote(s.mode, t.mode), s.normalize and t.normalize)
    for ds, cs in s.items():
        for dt, ct in t.items():
            sign = -1 if koszul and (arc_count(ds) * dimension(dt)) % 2 else 1
            result.add(tensor_diagrams(ds, dt), cs * ct * sign)
    return result


def tensor_all(parts: Sequence[Any], koszul: bool = False) -> DiagramSum:
    result = as_sum(parts[0])
    for part in parts[1:]:
        result = tensor(result, part, koszul)
    return result


def permutation(sigma: Sequence[int], mode: Mode = Mode.CYCLIC) -> DiagramSum:
    return DiagramSum.of(permutation_diagram(list(sigma), mode))


def identity(n: int) -> DiagramSum:
    return permutation(list(range(1, n + 1)))


def chain(*stages: Any) -> DiagramSum:
    """``chain(a, b, c)`` is ``a`` after ``b`` after ``c``."""
    result = as_sum(stages[-1])
    for stage in reversed(stages[:-1]):
        result = compose(stage, result)
    return result
