"""Slot layouts of a diagram against a tuple of cochain degrees.

Input circle ``i`` of degree ``n_i`` has slots ``1..n_i`` (degree one) and a
final slot ``n_i + 1`` that always carries the mark cluster. A placement puts
the remaining clusters on strictly increasing slots; every other slot is a
*leftover* and is read off by exactly one output walk.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

from .diagram import ChordDiagram, Mode, output_arcs
from .errors import ShapeError, TracingError

LOGGER = logging.getLogger(__name__)

Slot = Tuple[int, int]
Reading = List[Tuple[int, int, bool]]


@dataclass(frozen=True)
class Placement:
    degrees: Tuple[int, ...]
    slots: Tuple[Tuple[int, ...], ...]
    sign: int

    def to_dict(self):
        return {"degrees": list(self.degrees), "slots": [list(s) for s in self.slots], "sign": self.sign}


def cluster_counts(d: ChordDiagram) -> List[int]:
    return [len(circle) for circle in d.rooted().circles]


def arc_slots(count: int, slots: Sequence[int], degree: int) -> List[List[int]]:
    """Leftover slots on each arc of a circle with ``count`` clusters."""
    bounds = [0] + list(slots) + [degree + 1]
    return [list(range(bounds[u] + 1, bounds[u + 1])) for u in range(count)]


def readings(d: ChordDiagram, degrees: Sequence[int], slots: Sequence[Sequence[int]]) -> Dict[int, Reading]:
    """Leftover slots read by each output, in walk order, flagged when read backwards."""
    counts = cluster_counts(d)
    per_arc = [arc_slots(counts[i], slots[i], degrees[i]) for i in range(len(counts))]
    result: Dict[int, Reading] = {}
    for k, arcs in output_arcs(d).items():
        reading: Reading = []
        for visit in arcs:
            cells = per_arc[visit.circle][visit.position]
            if visit.against:
                cells = cells[::-1]
            reading.extend((visit.circle, s, visit.against) for s in cells)
        result[k] = reading
    return result


def _inversions(order: Sequence[int]) -> int:
    return sum(1 for a, b in itertools.combinations(order, 2) if a > b)


def orientation_parity(d: ChordDiagram) -> int:
    """Circle ``i`` (from 0) with ``k`` clusters besides its mark cluster adds ``i*k + k(k+1)/2``."""
    return sum(i * k + k * (k + 1) // 2 for i, k in enumerate(c - 1 for c in cluster_counts(d)))


def ledger_sign(d: ChordDiagram, degrees: Sequence[int], slots: Sequence[Sequence[int]]) -> int:
    """Sign of one placement.

    The ``index``-th cluster slot (circles in order, counted from 1) at
    global degree-one position ``P`` contributes ``P - index``; the diagram's
    orientation parity is added once. The leftovers then contribute the
    parity of the shuffle from input order to output reading order, plus one
    per leftover read against the circle in sullivan mode.
    """
    parity = orientation_parity(d)
    offset = 0
    index = 0
    for i, degree in enumerate(degrees):
        for j in slots[i]:
            index += 1
            parity += offset + j - index
        offset += degree
    rank: Dict[Slot, int] = {}
    for i, degree in enumerate(degrees):
        taken = set(slots[i])
        for s in range(1, degree + 1):
            if s not in taken:
                rank[(i, s)] = len(rank)
    order: List[int] = []
    backward = 0
    for k, reading in sorted(readings(d, degrees, slots).items()):
        for i, s, against in reading:
            order.append(rank[(i, s)])
            backward += against
    if sorted(order) != list(range(len(rank))):
        raise TracingError("output walks do not read every leftover slot exactly once")
    parity += _inversions(order)
    if d.mode == Mode.SULLIVAN:
        parity += backward
    return -1 if parity % 2 else 1


def placements(d: ChordDiagram, degrees: Sequence[int]) -> List[Placement]:
    """Every order-preserving injection of the non-mark clusters into slots."""
    r = d.rooted()
    if len(degrees) != r.n:
        raise ShapeError(f"diagram has {r.n} inputs but {len(degrees)} degrees were given")
    choices = []
    for circle, degree in zip(r.circles, degrees):
        if degree < 0:
            raise ShapeError(f"negative degree {degree}")
        choices.append(list(itertools.combinations(range(1, degree + 1), len(circle) - 1)))
    result = []
    degrees = tuple(degrees)
    for combo in itertools.product(*choices):
        result.append(Placement(degrees, combo, ledger_sign(r, degrees, combo)))
    return result
