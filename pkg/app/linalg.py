"""Exact linear algebra over Q (or a prime field) on top of sympy's DomainMatrix.

Everything here is a thin, deterministic layer: matrices are immutable,
vectors are plain lists of domain elements, and elimination is delegated to
``DomainMatrix.rref`` so no floating point ever enters.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Any, Iterable, List, Optional, Sequence, Tuple

from sympy import Rational, SympifyError
from sympy.polys.domains import GF, QQ
from sympy.polys.domains.domain import Domain
from sympy.polys.matrices import DomainMatrix

from .config import DEFAULT_PRIME
from .errors import InputError, NotContainedError

LOGGER = logging.getLogger(__name__)

Vector = List[Any]


def field_from_spec(spec: str = "q") -> Domain:
    """Map ``q`` or ``p:<prime>`` to a sympy domain."""
    spec = (spec or "q").strip().lower()
    if spec in ("q", "qq"):
        return QQ
    if spec == "p":
        return GF(DEFAULT_PRIME)
    if spec.startswith("p:"):
        try:
            prime = int(spec[2:])
        except ValueError:
            raise InputError(f"bad prime in field spec {spec!r}", "--field")
        if prime < 2 or any(prime % k == 0 for k in range(2, int(prime ** 0.5) + 1)):
            raise InputError(f"{prime} is not prime", "--field")
        return GF(prime)
    raise InputError(f"unknown field {spec!r}; expected 'q' or 'p:<prime>'", "--field")


def field_spec(field: Domain) -> str:
    if field.is_FiniteField:
        return f"p:{field.mod}"
    return "q"


def scalar(field: Domain, numerator: int, denominator: int = 1) -> Any:
    return field(numerator) / field(denominator) if denominator != 1 else field(numerator)


def parse_scalar(text: Any, field: Domain = QQ, path: Optional[str] = None) -> Any:
    """Parse ``"p/q"``, ``"p"`` or an int into a field element."""
    if isinstance(text, bool):
        raise InputError("boolean is not a rational", path)
    if isinstance(text, int):
        return field(text)
    try:
        value = Rational(str(text).strip())
    except (SympifyError, TypeError, ValueError, ZeroDivisionError):
        raise InputError(f"not a rational: {text!r}", path)
    try:
        return scalar(field, int(value.p), int(value.q))
    except ZeroDivisionError:
        raise InputError(f"{text!r} has no image in {field}", path)


def format_scalar(value: Any, field: Domain = QQ) -> str:
    """Reduced ``p/q`` text, or plain ``p`` for integers."""
    if field.is_FiniteField:
        return str(int(field.to_int(value)) % field.mod)
    num, den = int(field.numer(value)), int(field.denom(value))
    return str(num) if den == 1 else f"{num}/{den}"


@dataclass(frozen=True)
class RationalMatrix:
    """Immutable dense matrix of field elements."""

    rows: int
    cols: int
    entries: Tuple[Tuple[Any, ...], ...]
    field: Domain = QQ

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[Any]], field: Domain = QQ,
                  cols: Optional[int] = None) -> "RationalMatrix":
        data = tuple(tuple(field.convert(x) for x in row) for row in rows)
        ncols = cols if cols is not None else (len(data[0]) if data else 0)
        for row in data:
            if len(row) != ncols:
                raise ValueError("ragged matrix rows")
        return cls(len(data), ncols, data, field)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[Any]], nrows: int,
                     field: Domain = QQ) -> "RationalMatrix":
        rows = [[columns[j][i] for j in range(len(columns))] for i in range(nrows)]
        return cls.from_rows(rows, field, cols=len(columns))

    @classmethod
    def zeros(cls, rows: int, cols: int, field: Domain = QQ) -> "RationalMatrix":
        return cls(rows, cols, tuple(tuple(field.zero for _ in range(cols)) for _ in range(rows)), field)

    @classmethod
    def identity(cls, size: int, field: Domain = QQ) -> "RationalMatrix":
        return cls.from_rows([[field.one if i == j else field.zero for j in range(size)]
                              for i in range(size)], field, cols=size)

    def to_domain(self) -> DomainMatrix:
        if self.rows == 0 or self.cols == 0:
            return DomainMatrix.zeros((self.rows, self.cols), self.field)
        return DomainMatrix([list(row) for row in self.entries], (self.rows, self.cols), self.field)

    def column(self, j: int) -> Vector:
        return [self.entries[i][j] for i in range(self.rows)]

    def columns(self) -> List[Vector]:
        return [self.column(j) for j in range(self.cols)]

    def apply(self, vector: Sequence[Any]) -> Vector:
        return [sum((a * b for a, b in zip(row, vector)), self.field.zero) for row in self.entries]

    def matmul(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matmul")
        other_cols = other.columns()
        return RationalMatrix.from_rows([[sum((a * b for a, b in zip(row, col)), self.field.zero)
                                          for col in other_cols] for row in self.entries],
                                        self.field, cols=other.cols)

    def is_zero(self) -> bool:
        return all(not x for row in self.entries for x in row)


def _rref(matrix: RationalMatrix) -> Tuple[List[List[Any]], Tuple[int, ...]]:
    if matrix.rows == 0 or matrix.cols == 0:
        return [list(row) for row in matrix.entries], ()
    reduced, pivots = matrix.to_domain().rref()
    return reduced.to_list(), tuple(pivots)


def rank(matrix: RationalMatrix) -> int:
    return len(_rref(matrix)[1])


def kernel_basis(matrix: RationalMatrix) -> List[Vector]:
    """Basis of {v : Mv = 0}, one vector per free column, in column order."""
    field = matrix.field
    reduced, pivots = _rref(matrix)
    pivot_set = set(pivots)
    basis = []
    for free in range(matrix.cols):
        if free in pivot_set:
            continue
        vec = [field.zero] * matrix.cols
        vec[free] = field.one
        for row_index, pivot in enumerate(pivots):
            vec[pivot] = -reduced[row_index][free]
        basis.append(vec)
    return basis


def independent_subset(vectors: Iterable[Sequence[Any]], length: int,
                       field: Domain = QQ) -> List[Vector]:
    """Greedy maximal independent subfamily, preserving order."""
    candidates = [list(vec) for vec in vectors]
    if not candidates or length == 0:
        return []
    _, pivots = _rref(RationalMatrix.from_columns(candidates, length, field))
    return [candidates[j] for j in pivots]


def in_span(vectors: Sequence[Sequence[Any]], target: Sequence[Any], field: Domain = QQ) -> bool:
    length = len(target)
    if not any(target):
        return True
    if not vectors:
        return False
    base = rank(RationalMatrix.from_columns(list(vectors), length, field))
    return rank(RationalMatrix.from_columns(list(vectors) + [list(target)], length, field)) == base


def quotient_dimension(b_in: RationalMatrix, b_out: RationalMatrix) -> Tuple[int, List[Vector]]:
    """dim ker(B_out) - rank(B_in), plus kernel vectors completing im(B_in).

    Raises NotContainedError when B_out * B_in != 0.
    """
    if b_in.rows != b_out.cols:
        raise ValueError("B_in rows must match B_out columns")
    if b_in.cols and b_out.rows and not b_out.matmul(b_in).is_zero():
        raise NotContainedError()
    field = b_out.field
    kernel = kernel_basis(b_out)
    image = independent_subset(b_in.columns(), b_in.rows, field)
    chosen = independent_subset(image + kernel, b_out.cols, field)
    representatives = chosen[len(image):]
    dimension = len(kernel) - len(image)
    LOGGER.debug("quotient: ker=%d im=%d -> %d", len(kernel), len(image), dimension)
    return dimension, representatives


class ClassProjector:
    """Coordinates of a vector along chosen class representatives.

    The ambient space is split as image + span(representatives) + complement;
    ``coordinates`` returns the representative part, so image vectors map to
    zero and a cocycle maps to the coordinates of its class.
    """

    def __init__(self, image: Sequence[Sequence[Any]], representatives: Sequence[Sequence[Any]],
                 length: int, field: Domain = QQ):
        self.field = field
        self.length = length
        image_basis = independent_subset(image, length, field)
        units = [[field.one if i == j else field.zero for i in range(length)] for j in range(length)]
        basis = independent_subset(image_basis + [list(v) for v in representatives] + units,
                                   length, field)
        self.offset = len(image_basis)
        self.count = len(representatives)
        if length:
            inverse = RationalMatrix.from_columns(basis, length, field).to_domain().inv()
            self._inverse = inverse.to_list()
        else:
            self._inverse = []

    def coordinates(self, vector: Sequence[Any]) -> Vector:
        rows = self._inverse[self.offset:self.offset + self.count]
        return [sum((a * b for a, b in zip(row, vector)), self.field.zero) for row in rows]
