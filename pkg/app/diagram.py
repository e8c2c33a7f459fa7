"""Cyclic and general Sullivan chord diagrams.

A diagram is a list of input circles. Each circle is a cyclic list of clusters
read clockwise; a cluster is a linearly ordered list of special points read
from its incoming side to its outgoing side. Chords are reduced to the cyclic
order of their leaves.

Boundary walks run over *sectors*: a cluster holding L chord leaves has L + 1
sectors on its outer side, sector ``s`` lying just before leaf ``s``. A walker
moving forward leaves sector ``s < L`` along leaf ``s`` and returns through the
next leaf of that chord; from sector ``L`` it follows the outgoing arc.
"""
from __future__ import annotations

import itertools
import json
import logging
import random
import re
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Set, Tuple, Union

from .config import GENERATORS_DIR
from .errors import InputError, TracingError
from .schemas import DiagramFile, load_model, read_json

LOGGER = logging.getLogger(__name__)


class Mode(str, Enum):
    CYCLIC = "cyclic"
    SULLIVAN = "sullivan"


class Direction(str, Enum):
    OPPOSING = "opp"
    REVERSED = "rev"


@dataclass(frozen=True)
class InputMark:
    pass


@dataclass(frozen=True)
class OutputMark:
    id: int
    direction: Direction = Direction.OPPOSING


@dataclass(frozen=True)
class ChordLeaf:
    chord: int
    index: int
    twist: bool = False


Point = Union[InputMark, OutputMark, ChordLeaf]
Cluster = Tuple[Point, ...]
Circle = Tuple[Cluster, ...]

MARK = InputMark()


@dataclass(frozen=True)
class ChordDiagram:
    mode: Mode
    circles: Tuple[Circle, ...]
    arities: Tuple[int, ...]
    outputs: int

    @property
    def n(self) -> int:
        return len(self.circles)

    @property
    def m(self) -> int:
        return self.outputs

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.n, self.outputs)

    def rooted(self) -> "ChordDiagram":
        """Rotate every circle to start at its mark cluster, with the mark stored last."""
        circles = []
        for circle in self.circles:
            pos = next((u for u, cl in enumerate(circle) if any(isinstance(p, InputMark) for p in cl)), 0)
            rotated = circle[pos:] + circle[:pos]
            head = tuple(p for p in rotated[0] if not isinstance(p, InputMark))
            if len(head) != len(rotated[0]):
                head = head + (MARK,)
            circles.append((head,) + tuple(rotated[1:]))
        return ChordDiagram(self.mode, tuple(circles), self.arities, self.outputs)


@dataclass(frozen=True)
class Visit:
    """One step of a boundary walk: an arc traversal or a passage through a sector."""

    kind: str
    circle: int
    position: int
    sector: int = 0
    against: bool = False

    def to_dict(self) -> Dict[str, Any]:
        if self.kind == "arc":
            return {"arc": [self.circle + 1, self.position + 1],
                    "direction": "against" if self.against else "with"}
        return {"point": [self.circle + 1, self.position + 1, self.sector]}


@dataclass(frozen=True)
class BoundaryWalk:
    label: str
    visits: Tuple[Visit, ...]

    def arcs(self) -> List[Visit]:
        return [v for v in self.visits if v.kind == "arc"]

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "visits": [v.to_dict() for v in self.visits]}


@dataclass(frozen=True)
class Classification:
    euler_characteristic: int
    genus: Optional[int]
    orientable: bool
    n: int
    m: int

    def to_dict(self) -> Dict[str, Any]:
        return {"euler_characteristic": self.euler_characteristic, "genus": self.genus,
                "orientable": self.orientable, "n": self.n, "m": self.m}


# ---------------------------------------------------------------------------
# layout and face tracing
# ---------------------------------------------------------------------------

Sector = Tuple[int, int, int]


class Layout:
    """Per-cluster leaf lists and positions of a rooted diagram."""

    def __init__(self, d: ChordDiagram):
        self.diagram = d
        self.leaves: List[List[List[ChordLeaf]]] = []
        self.leaf_at: Dict[Tuple[int, int], Tuple[int, int, int]] = {}
        self.out_at: Dict[int, Tuple[int, int, int]] = {}
        self.out_direction: Dict[int, Direction] = {}
        for i, circle in enumerate(d.circles):
            per_circle = []
            for u, cluster in enumerate(circle):
                leaves = []
                for point in cluster:
                    if isinstance(point, ChordLeaf):
                        self.leaf_at[(point.chord, point.index)] = (i, u, len(leaves))
                        leaves.append(point)
                    elif isinstance(point, OutputMark):
                        self.out_at[point.id] = (i, u, len(leaves))
                        self.out_direction[point.id] = point.direction
                per_circle.append(leaves)
            self.leaves.append(per_circle)

    def sectors(self) -> List[Sector]:
        return [(i, u, s) for i, circle in enumerate(self.leaves)
                for u, leaves in enumerate(circle) for s in range(len(leaves) + 1)]

    def _through_chord(self, leaf: ChordLeaf, orientation: int) -> Tuple[int, int, int, int]:
        if leaf.twist:
            orientation = -orientation
        arity = self.diagram.arities[leaf.chord]
        other = (leaf.chord, (leaf.index + orientation) % arity)
        if other not in self.leaf_at:
            raise TracingError(f"chord {leaf.chord} has no leaf {other[1]}")
        i, u, pos = self.leaf_at[other]
        landing = self.leaves[i][u][pos]
        if landing.twist:
            orientation = -orientation
        if orientation > 0:
            return i, u, pos + 1, 1
        return i, u, pos, -1

    def step(self, i: int, u: int, s: int, direction: int) -> Tuple[Optional[Visit], Tuple[int, int, int, int]]:
        leaves = self.leaves[i][u]
        count = len(self.leaves[i])
        if direction > 0:
            if s < len(leaves):
                return None, self._through_chord(leaves[s], 1)
            nxt = (u + 1) % count
            return Visit("arc", i, u), (i, nxt, 0, 1)
        if s > 0:
            return None, self._through_chord(leaves[s - 1], -1)
        prev = (u - 1) % count
        return Visit("arc", i, prev, against=True), (i, prev, len(self.leaves[i][prev]), -1)

    def walk(self, start: Sector, direction: int) -> Tuple[List[Visit], List[Sector]]:
        """Trace one boundary component from ``start`` until it closes."""
        limit = 2 * len(self.sectors()) + 2
        visits: List[Visit] = []
        seen: List[Sector] = [start]
        state = (start[0], start[1], start[2], direction)
        for _ in range(limit):
            arc, state = self.step(*state)
            if arc is not None:
                visits.append(arc)
            sector = state[:3]
            if sector == start:
                return visits, seen
            seen.append(sector)
            visits.append(Visit("point", sector[0], sector[1], sector[2]))
        raise TracingError(f"boundary walk from {start} did not close")


@lru_cache(maxsize=4096)
def layout(d: ChordDiagram) -> Layout:
    return Layout(d.rooted())


def output_walk(d: ChordDiagram, output_id: int) -> Tuple[List[Visit], List[Sector]]:
    lay = layout(d)
    if output_id not in lay.out_at:
        raise TracingError(f"no output marker {output_id}'")
    step = 1 if lay.out_direction[output_id] == Direction.OPPOSING else -1
    return lay.walk(lay.out_at[output_id], step)


def output_arcs(d: ChordDiagram) -> Dict[int, List[Visit]]:
    """Arc traversals of every output walk, starting just after its marker."""
    return {k: [v for v in output_walk(d, k)[0] if v.kind == "arc"] for k in range(1, d.outputs + 1)}


def trace_boundaries(d: ChordDiagram) -> List[BoundaryWalk]:
    """Input circles 1..n first, then outputs 1'..m' by marker id."""
    r = d.rooted()
    walks = []
    for i, circle in enumerate(r.circles):
        walks.append(BoundaryWalk(f"{i + 1}", tuple(Visit("arc", i, u) for u in range(len(circle)))))
    for k in range(1, d.outputs + 1):
        visits, _ = output_walk(d, k)
        walks.append(BoundaryWalk(f"{k}'", tuple(visits)))
    return walks


# ---------------------------------------------------------------------------
# validation and invariants
# ---------------------------------------------------------------------------

def validate(d: ChordDiagram) -> Dict[str, Any]:
    errors: List[str] = []
    warnings: List[str] = []
    checks: List[Dict[str, Any]] = []

    def record(name: str, problems: List[str]) -> None:
        checks.append({"name": name, "passed": not problems})
        errors.extend(problems)

    problems = []
    if not d.circles:
        problems.append("diagram has no input circles")
    for i, circle in enumerate(d.circles):
        marks = [u for u, cl in enumerate(circle) for p in cl if isinstance(p, InputMark)]
        if len(marks) != 1:
            problems.append(f"input circle {i + 1} has {len(marks)} input marks")
        for u, cluster in enumerate(circle):
            if not cluster:
                problems.append(f"input circle {i + 1} cluster {u + 1} is empty")
    record("input-marks", problems)

    problems = []
    seen: Dict[int, int] = {}
    for circle in d.circles:
        for cluster in circle:
            for p in cluster:
                if isinstance(p, OutputMark):
                    seen[p.id] = seen.get(p.id, 0) + 1
    for k, count in sorted(seen.items()):
        if count > 1:
            problems.append(f"duplicate output id {k}'")
        if not 1 <= k <= d.outputs:
            problems.append(f"output id {k}' out of range 1..{d.outputs}")
    for k in range(1, d.outputs + 1):
        if k not in seen:
            problems.append(f"missing output id {k}'")
    record("output-marks", problems)

    problems = []
    leaves: Dict[Tuple[int, int], int] = {}
    for circle in d.circles:
        for cluster in circle:
            for p in cluster:
                if isinstance(p, ChordLeaf):
                    leaves[(p.chord, p.index)] = leaves.get((p.chord, p.index), 0) + 1
    for c, arity in enumerate(d.arities):
        if arity < 2:
            problems.append(f"chord {c} has arity {arity} < 2")
        for idx in range(arity):
            count = leaves.get((c, idx), 0)
            if count != 1:
                problems.append(f"chord {c} leaf {idx} referenced {count} times")
    for (c, idx) in leaves:
        if c >= len(d.arities) or idx >= d.arities[c] or idx < 0 or c < 0:
            problems.append(f"leaf ({c}, {idx}) refers to no chord")
    record("chord-leaves", problems)

    problems = []
    if d.mode == Mode.CYCLIC:
        for circle in d.circles:
            for cluster in circle:
                for p in cluster:
                    if isinstance(p, OutputMark) and p.direction != Direction.OPPOSING:
                        problems.append(f"output {p.id}' is reversed in a cyclic diagram")
                    if isinstance(p, ChordLeaf) and p.twist:
                        problems.append(f"chord {p.chord} leaf {p.index} is twisted in a cyclic diagram")
    record("mode", problems)

    if errors:
        checks.append({"name": "boundaries", "passed": False, "skipped": True})
        return {"valid": False, "errors": errors, "warnings": warnings, "checks": checks}

    problems = []
    try:
        lay = layout(d)
        owner: Dict[Sector, int] = {}
        for k in range(1, d.outputs + 1):
            _, sectors = output_walk(d, k)
            for sector in sectors:
                if sector in owner:
                    problems.append(f"outputs {owner[sector]}' and {k}' share a boundary component")
                    break
                owner[sector] = k
        uncovered = [s for s in lay.sectors() if s not in owner]
        if uncovered and not problems:
            problems.append(f"boundary component without output marker at sector {uncovered[0]}")
    except TracingError as exc:
        problems.append(str(exc))
    record("boundaries", problems)
    return {"valid": not errors, "errors": errors, "warnings": warnings, "checks": checks}


def require_valid(d: ChordDiagram, path: str = "diagram") -> ChordDiagram:
    report = validate(d)
    if not report["valid"]:
        raise InputError("; ".join(report["errors"]), path)
    return d


def orientable(d: ChordDiagram) -> bool:
    twists: Dict[int, Set[bool]] = {}
    for circle in d.circles:
        for cluster in circle:
            for p in cluster:
                if isinstance(p, ChordLeaf):
                    twists.setdefault(p.chord, set()).add(p.twist)
    return all(len(bits) == 1 for bits in twists.values())


def classify(d: ChordDiagram) -> Classification:
    clusters = sum(len(c) for c in d.circles)
    vertices = clusters + len(d.arities)
    edges = clusters + sum(d.arities)
    chi = vertices - edges
    orient = orientable(d)
    genus = None
    if orient:
        doubled = 2 - chi - (d.n + d.outputs)
        genus = doubled // 2 if doubled >= 0 and doubled % 2 == 0 else None
    return Classification(chi, genus, orient, d.n, d.outputs)


def dimension(d: ChordDiagram) -> int:
    return sum(len(circle) - 1 for circle in d.circles)


def arc_count(d: ChordDiagram) -> int:
    """Arcs between consecutive special points: one per cluster on each circle."""
    return sum(1 for circle in d.circles for _ in circle)


# ---------------------------------------------------------------------------
# canonical form
# ---------------------------------------------------------------------------

def _flip_chords(d: ChordDiagram, flips: Set[int]) -> ChordDiagram:
    if not flips:
        return d

    def fix(p: Point) -> Point:
        if isinstance(p, ChordLeaf) and p.chord in flips:
            r = d.arities[p.chord]
            return ChordLeaf(p.chord, (-p.index) % r, not p.twist)
        return p

    circles = tuple(tuple(tuple(fix(p) for p in cl) for cl in circle) for circle in d.circles)
    return ChordDiagram(d.mode, circles, d.arities, d.outputs)


def _reading_order(d: ChordDiagram) -> Iterable[Point]:
    for circle in d.circles:
        for cluster in circle[1:] + circle[:1]:
            yield from cluster


def _renumber(d: ChordDiagram) -> ChordDiagram:
    """Chords numbered by first appearance, leaf indices rotated to start there."""
    order: Dict[int, int] = {}
    offset: Dict[int, int] = {}
    for p in _reading_order(d):
        if isinstance(p, ChordLeaf) and p.chord not in order:
            order[p.chord] = len(order)
            offset[p.chord] = p.index

    def fix(p: Point) -> Point:
        if isinstance(p, ChordLeaf):
            r = d.arities[p.chord]
            return ChordLeaf(order[p.chord], (p.index - offset[p.chord]) % r, p.twist)
        return p

    arities = [0] * len(order)
    for old, new in order.items():
        arities[new] = d.arities[old]
    circles = tuple(tuple(tuple(fix(p) for p in cl) for cl in circle) for circle in d.circles)
    return ChordDiagram(d.mode, circles, tuple(arities), d.outputs)


def canonical_form(d: ChordDiagram) -> ChordDiagram:
    r = d.rooted()
    forced: Set[int] = set()
    optional: List[int] = []
    if r.mode == Mode.SULLIVAN:
        counts: Dict[int, int] = {}
        for p in _reading_order(r):
            if isinstance(p, ChordLeaf) and p.twist:
                counts[p.chord] = counts.get(p.chord, 0) + 1
        for c, arity in enumerate(r.arities):
            t = counts.get(c, 0)
            if 2 * t > arity:
                forced.add(c)
            elif t and 2 * t == arity:
                optional.append(c)
    best: Optional[ChordDiagram] = None
    best_key: Optional[str] = None
    for choice in itertools.product((False, True), repeat=len(optional)):
        flips = forced | {c for c, flag in zip(optional, choice) if flag}
        candidate = _renumber(_flip_chords(r, flips))
        key = _encode(candidate)
        if best_key is None or key < best_key:
            best, best_key = candidate, key
    return best


def _encode(d: ChordDiagram) -> str:
    return json.dumps(to_dict(d), sort_keys=True, separators=(",", ":"))


@lru_cache(maxsize=16384)
def canonical(d: ChordDiagram) -> bytes:
    return _encode(canonical_form(d)).encode("utf-8")


def equals(d1: ChordDiagram, d2: ChordDiagram) -> bool:
    return canonical(d1) == canonical(d2)


# ---------------------------------------------------------------------------
# JSON
# ---------------------------------------------------------------------------

def point_to_dict(p: Point) -> Dict[str, Any]:
    if isinstance(p, InputMark):
        return {"kind": "mark"}
    if isinstance(p, OutputMark):
        return {"kind": "out", "id": p.id, "dir": p.direction.value}
    return {"kind": "leaf", "chord": p.chord, "index": p.index, "twist": p.twist}


def to_dict(d: ChordDiagram) -> Dict[str, Any]:
    return {
        "mode": d.mode.value,
        "outputs": d.outputs,
        "chords": [{"arity": r} for r in d.arities],
        "inputs": [{"clusters": [{"points": [point_to_dict(p) for p in cl]} for cl in circle]}
                   for circle in d.circles],
    }


def from_dict(data: Any, prefix: str = "") -> ChordDiagram:
    model = data if isinstance(data, DiagramFile) else load_model(DiagramFile, data, prefix)
    where = (prefix + ".") if prefix else ""
    arities = tuple(ch.arity for ch in model.chords)
    circles = []
    for i, circle in enumerate(model.inputs):
        clusters = []
        for u, cluster in enumerate(circle.clusters):
            points: List[Point] = []
            for k, pm in enumerate(cluster.points):
                path = f"{where}inputs[{i}].clusters[{u}].points[{k}]"
                if pm.kind == "mark":
                    points.append(MARK)
                elif pm.kind == "out":
                    if pm.id is None:
                        raise InputError("output marker needs an id", f"{path}.id")
                    points.append(OutputMark(pm.id, Direction(pm.dir)))
                else:
                    if pm.chord is None or not 0 <= pm.chord < len(arities):
                        raise InputError("leaf refers to an unknown chord", f"{path}.chord")
                    if pm.index is None or not 0 <= pm.index < arities[pm.chord]:
                        raise InputError("leaf index out of range", f"{path}.index")
                    points.append(ChordLeaf(pm.chord, pm.index, pm.twist))
            clusters.append(tuple(points))
        circles.append(tuple(clusters))
    return ChordDiagram(Mode(model.mode), tuple(circles), arities, model.outputs)


def load(path: Union[str, Path]) -> ChordDiagram:
    return from_dict(read_json(str(path)))


# ---------------------------------------------------------------------------
# generator catalog
# ---------------------------------------------------------------------------

CATALOG = ("cup", "star", "vee0", "vee", "delta", "reverse", "worked_example")

_PARAM = re.compile(r"^(id|perm)(?:\(([\d,\s]*)\)|:([\d,\s]*))?$")


def identity(n: int, mode: Mode = Mode.CYCLIC) -> ChordDiagram:
    return permutation_diagram(list(range(1, n + 1)), mode)


def permutation_diagram(sigma: Sequence[int], mode: Mode = Mode.CYCLIC) -> ChordDiagram:
    """Circle i carries output marker sigma(i)'."""
    n = len(sigma)
    if sorted(sigma) != list(range(1, n + 1)):
        raise InputError(f"{list(sigma)} is not a permutation of 1..{n}", "perm")
    circles = tuple(((OutputMark(k), MARK),) for k in sigma)
    return ChordDiagram(mode, circles, (), n)


def generator(name: str) -> ChordDiagram:
    key = name.strip().lower()
    if key in ("tau", "tau2"):
        return permutation_diagram([2, 1])
    match = _PARAM.match(key)
    if match:
        raw = match.group(2) if match.group(2) is not None else match.group(3)
        values = [int(x) for x in re.split(r"[,\s]+", raw.strip())] if raw and raw.strip() else []
        if match.group(1) == "id":
            return identity(values[0] if values else 1)
        return permutation_diagram(values or [1])
    if key not in CATALOG:
        raise InputError(f"unknown generator {name!r}", "generator")
    return _load_generator(key)


@lru_cache(maxsize=None)
def _load_generator(key: str) -> ChordDiagram:
    return from_dict(read_json(str(GENERATORS_DIR / f"{key}.json")), prefix=key)


# ---------------------------------------------------------------------------
# slide moves
# ---------------------------------------------------------------------------

def _bodies(d: ChordDiagram) -> List[List[List[Point]]]:
    return [[[p for p in cl if not isinstance(p, InputMark)] for cl in circle] for circle in d.circles]


def _rebuild(d: ChordDiagram, bodies: List[List[List[Point]]]) -> ChordDiagram:
    circles = []
    for circle, body in zip(d.circles, bodies):
        clusters = []
        for cl, points in zip(circle, body):
            if any(isinstance(p, InputMark) for p in cl):
                points = points + [MARK]
            clusters.append(tuple(points))
        circles.append(tuple(clusters))
    return ChordDiagram(d.mode, tuple(circles), d.arities, d.outputs)


def _locate(bodies: List[List[List[Point]]], leaf: Tuple[int, int]) -> Optional[Tuple[int, int, int]]:
    for i, circle in enumerate(bodies):
        for u, points in enumerate(circle):
            for pos, p in enumerate(points):
                if isinstance(p, ChordLeaf) and (p.chord, p.index) == leaf:
                    return i, u, pos
    return None


def _moved(d: ChordDiagram, src: Tuple[int, int, int], anchor: Tuple[int, int], after: bool) -> ChordDiagram:
    bodies = _bodies(d)
    i, u, pos = src
    item = bodies[i][u].pop(pos)
    where = _locate(bodies, anchor)
    ti, tu, tpos = where
    bodies[ti][tu].insert(tpos + 1 if after else tpos, item)
    return _rebuild(d, bodies)


def slide_variants(d: ChordDiagram) -> List[ChordDiagram]:
    """``d`` and every diagram one slide move away from it.

    A point immediately before leaf k of an untwisted chord moves to
    immediately after leaf k+1, and a point immediately after leaf k+1 moves
    to immediately before leaf k.
    """
    r = d.rooted()
    bodies = _bodies(r)
    variants = {canonical(r): r}
    for i, circle in enumerate(bodies):
        for u, points in enumerate(circle):
            for pos, item in enumerate(points):
                if isinstance(item, InputMark):
                    continue
                for neighbour, after in ((pos + 1, False), (pos - 1, True)):
                    if not 0 <= neighbour < len(points):
                        continue
                    leaf = points[neighbour]
                    if not isinstance(leaf, ChordLeaf) or leaf.twist:
                        continue
                    if isinstance(item, ChordLeaf) and (item.chord == leaf.chord or item.twist):
                        continue
                    arity = r.arities[leaf.chord]
                    step = 1 if not after else -1
                    target = (leaf.chord, (leaf.index + step) % arity)
                    if _target_twisted(bodies, target):
                        continue
                    moved = _moved(r, (i, u, pos), target, after=not after)
                    variants.setdefault(canonical(moved), moved)
    return list(variants.values())


def _target_twisted(bodies: List[List[List[Point]]], target: Tuple[int, int]) -> bool:
    where = _locate(bodies, target)
    if where is None:
        return True
    i, u, pos = where
    return bodies[i][u][pos].twist


def slide_normalize(d: ChordDiagram, limit: int = 5000) -> ChordDiagram:
    """Representative of the slide class with the smallest canonical encoding."""
    start = d.rooted()
    seen = {canonical(start): start}
    frontier = [start]
    while frontier:
        nxt = []
        for current in frontier:
            for variant in slide_variants(current):
                key = canonical(variant)
                if key not in seen:
                    seen[key] = variant
                    nxt.append(variant)
        frontier = nxt
        if len(seen) > limit:
            LOGGER.warning("slide class exceeds %d diagrams; normalization is partial", limit)
            break
    best = min(seen)
    return canonical_form(seen[best])


# ---------------------------------------------------------------------------
# random diagrams
# ---------------------------------------------------------------------------

def random_diagram(rng: random.Random, n: Optional[int] = None, chords: Optional[int] = None,
                   max_dimension: int = 3) -> ChordDiagram:
    """A random valid cyclic diagram; one output marker per boundary face."""
    n = n if n is not None else rng.randint(1, 3)
    chord_count = chords if chords is not None else rng.randint(0, 3)
    arities = tuple(rng.choice((2, 2, 2, 3)) for _ in range(chord_count))
    extra = [rng.randint(0, max_dimension) for _ in range(n)]
    while sum(extra) > max_dimension:
        extra[rng.choice([i for i, e in enumerate(extra) if e > 0])] -= 1
    bodies: List[List[List[Point]]] = [[[] for _ in range(1 + extra[i])] for i in range(n)]
    for c, arity in enumerate(arities):
        for idx in range(arity):
            i = rng.randrange(n)
            u = rng.randrange(len(bodies[i]))
            points = bodies[i][u]
            points.insert(rng.randint(0, len(points)), ChordLeaf(c, idx))
    for i in range(n):
        kept = [bodies[i][0]] + [pts for pts in bodies[i][1:] if pts]
        bodies[i] = kept
    circles = tuple(tuple(tuple(pts) + ((MARK,) if u == 0 else ()) for u, pts in enumerate(circle))
                    for circle in bodies)
    bare = ChordDiagram(Mode.CYCLIC, circles, arities, 0)
    lay = Layout(bare)
    faces: List[List[Sector]] = []
    owned: Set[Sector] = set()
    for sector in lay.sectors():
        if sector in owned:
            continue
        _, seen = lay.walk(sector, 1)
        owned.update(seen)
        faces.append(seen)
    labels = list(range(1, len(faces) + 1))
    rng.shuffle(labels)
    for label, face in zip(labels, faces):
        i, u, s = rng.choice(face)
        points = bodies[i][u]
        leaf_positions = [k for k, p in enumerate(points) if isinstance(p, ChordLeaf)]
        insert_at = leaf_positions[s] if s < len(leaf_positions) else len(points)
        points.insert(insert_at, OutputMark(label))
    circles = tuple(tuple(tuple(pts) + ((MARK,) if u == 0 else ()) for u, pts in enumerate(circle))
                    for circle in bodies)
    return ChordDiagram(Mode.CYCLIC, circles, arities, len(faces))
