"""Normalized Hochschild cochains of a Frobenius algebra with values in itself.

A degree-n cochain is stored sparsely as ``{(a_1, ..., a_n, b): coefficient}``
meaning ``f(e_{a_1}, ..., e_{a_n})`` has ``e_b``-coefficient ``coefficient``.
The dual form keeps the same input indices and replaces the value by the
functional ``<f(...), ->`` written in the dual basis.
"""
from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field as dc_field
from enum import Enum
from functools import lru_cache
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DegreeError, InputError, ShapeError
from .frobenius import FrobeniusAlgebra, builtin, resolve
from .linalg import (
    ClassProjector,
    RationalMatrix,
    format_scalar,
    kernel_basis,
    parse_scalar,
    quotient_dimension,
)
from .schemas import CochainFile, load_model

LOGGER = logging.getLogger(__name__)

IndexTuple = Tuple[int, ...]
Component = Dict[IndexTuple, Any]


class Variant(str, Enum):
    NORMALIZED = "normalized"
    FULL = "full"


def _inputs(alg: FrobeniusAlgebra, variant: Variant) -> range:
    return range(1, alg.dimension) if variant == Variant.NORMALIZED else range(alg.dimension)


def normalized_basis(alg: FrobeniusAlgebra, n: int) -> List[IndexTuple]:
    """Index tuples ``(a_1..a_n, b)`` with no unit among the inputs."""
    return basis(alg, n, Variant.NORMALIZED)


def full_basis(alg: FrobeniusAlgebra, n: int) -> List[IndexTuple]:
    return basis(alg, n, Variant.FULL)


def basis(alg: FrobeniusAlgebra, n: int, variant: Variant = Variant.NORMALIZED) -> List[IndexTuple]:
    return [a + (b,) for a in itertools.product(_inputs(alg, variant), repeat=n)
            for b in range(alg.dimension)]


@dataclass
class Cochain:
    """Graded cochain truncated at ``max_degree``."""

    algebra: FrobeniusAlgebra
    components: Dict[int, Component] = dc_field(default_factory=dict)
    max_degree: int = 4

    dual = False

    def component(self, n: int) -> Component:
        return self.components.get(n, {})

    @property
    def degrees(self) -> List[int]:
        return sorted(n for n, comp in self.components.items() if any(comp.values()))

    @property
    def degree(self) -> int:
        """The single degree of a homogeneous cochain."""
        degrees = self.degrees
        if len(degrees) > 1:
            raise ShapeError(f"cochain is not homogeneous: degrees {degrees}")
        return degrees[0] if degrees else 0

    def is_zero(self) -> bool:
        return not self.degrees

    def is_normalized(self) -> bool:
        return all(0 not in key[:-1] for comp in self.components.values()
                   for key, value in comp.items() if value)

    def homogeneous_parts(self) -> List["Cochain"]:
        return [self._like({n: dict(self.component(n))}) for n in self.degrees]

    def _like(self, components: Dict[int, Component]) -> "Cochain":
        return type(self)(self.algebra, components, self.max_degree)

    def cleaned(self) -> "Cochain":
        return self._like({n: {k: v for k, v in comp.items() if v}
                           for n, comp in self.components.items() if any(comp.values())})

    def __add__(self, other: "Cochain") -> "Cochain":
        comps = {n: dict(c) for n, c in self.components.items()}
        for n, comp in other.components.items():
            target = comps.setdefault(n, {})
            for key, value in comp.items():
                target[key] = target.get(key, self.algebra.field.zero) + value
        return self._like(comps).cleaned()

    def scaled(self, factor: Any) -> "Cochain":
        factor = self.algebra.field.convert(factor)
        return self._like({n: {k: v * factor for k, v in c.items()}
                           for n, c in self.components.items()}).cleaned()

    def __neg__(self) -> "Cochain":
        return self.scaled(-1)

    def __sub__(self, other: "Cochain") -> "Cochain":
        return self + (-other)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Cochain) or other.dual != self.dual:
            return NotImplemented
        return (self - other).is_zero()

    def vector(self, n: int, variant: Variant = Variant.NORMALIZED) -> List[Any]:
        comp = self.component(n)
        zero = self.algebra.field.zero
        return [comp.get(key, zero) for key in basis(self.algebra, n, variant)]

    @classmethod
    def from_vector(cls, alg: FrobeniusAlgebra, n: int, vector: Sequence[Any],
                    variant: Variant = Variant.NORMALIZED, max_degree: int = 4) -> "Cochain":
        comp = {key: value for key, value in zip(basis(alg, n, variant), vector) if value}
        return cls(alg, {n: comp}, max_degree)

    def to_dict(self) -> Dict[str, Any]:
        field = self.algebra.field
        components = {}
        for n in self.degrees:
            rows = [list(key) + [format_scalar(value, field)]
                    for key, value in sorted(self.component(n).items()) if value]
            components[str(n)] = rows
        return {"algebra": _algebra_ref(self.algebra), "max_degree": self.max_degree,
                "components": components}


class DualCochain(Cochain):
    """Cochain whose final slot holds a functional in the dual basis."""

    dual = True


def _algebra_ref(alg: FrobeniusAlgebra) -> Any:
    try:
        if builtin(alg.name, alg.field).mul == alg.mul:
            return alg.name
    except InputError:
        pass
    return alg.to_dict()


def from_dict(data: Any, alg: Optional[FrobeniusAlgebra] = None, prefix: str = "",
              default_max_degree: int = 4) -> Cochain:
    model = load_model(CochainFile, data, prefix)
    where = (prefix + ".") if prefix else ""
    if alg is None:
        alg = resolve(model.algebra, prefix=f"{where}algebra")
    d = alg.dimension
    max_degree = model.max_degree or default_max_degree
    components: Dict[int, Component] = {}
    for label, rows in model.components.items():
        path = f"{where}components.{label}"
        try:
            n = int(label)
        except ValueError:
            raise InputError("degree keys must be integers", path)
        if n < 0 or n > max_degree:
            raise DegreeError(f"degree {n} outside 0..{max_degree}", path)
        comp: Component = {}
        for pos, row in enumerate(rows):
            if len(row) != n + 2:
                raise InputError(f"expected {n + 1} indices and a value", f"{path}[{pos}]")
            key = []
            for k, value in enumerate(row[:-1]):
                if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < d:
                    raise InputError(f"index must be an integer in [0, {d})", f"{path}[{pos}][{k}]")
                key.append(value)
            coef = parse_scalar(row[-1], alg.field, f"{path}[{pos}][{n + 1}]")
            if coef:
                comp[tuple(key)] = comp.get(tuple(key), alg.field.zero) + coef
        components[n] = comp
    return Cochain(alg, components, max_degree).cleaned()


# ---------------------------------------------------------------------------
# differentials
# ---------------------------------------------------------------------------

def _check_room(f: Cochain) -> None:
    top = max(f.degrees, default=-1)
    if top + 1 > f.max_degree:
        raise DegreeError(f"differential of degree {top} leaves the truncation at {f.max_degree}")


def _factorizations(alg: FrobeniusAlgebra) -> Dict[int, List[Tuple[int, int, Any]]]:
    """For every basis index x, the pairs (p, q) with e_x appearing in e_p e_q."""
    d = alg.dimension
    table: Dict[int, List[Tuple[int, int, Any]]] = {x: [] for x in range(d)}
    for p in range(d):
        for q in range(d):
            for x in range(d):
                if alg.mul[p][q][x]:
                    table[x].append((p, q, alg.mul[p][q][x]))
    return table


def _accumulate(out: Component, key: IndexTuple, value: Any) -> None:
    if value:
        out[key] = out.get(key, 0) + value


def _middle_terms(alg: FrobeniusAlgebra, comp: Component, out: Component, allowed: range) -> None:
    factor = _factorizations(alg)
    for key, coef in comp.items():
        c, y = key[:-1], key[-1]
        for i in range(1, len(c) + 1):
            sign = coef if i % 2 == 0 else -coef
            for p, q, mu in factor[c[i - 1]]:
                if p in allowed and q in allowed:
                    _accumulate(out, c[:i - 1] + (p, q) + c[i:] + (y,), sign * mu)


def delta(f: Cochain, variant: Variant = Variant.NORMALIZED) -> Cochain:
    """Hochschild differential with values in A.

    (df)(a_1..a_{n+1}) = a_1 f(a_2..) + sum_i (-1)^i f(.., a_i a_{i+1}, ..)
                         + (-1)^{n+1} f(a_1..a_n) a_{n+1}
    """
    if f.dual:
        raise ShapeError("delta expects a cochain; use dual_delta on dual cochains")
    _check_room(f)
    alg = f.algebra
    mu = alg.mul
    allowed = _inputs(alg, variant)
    result: Dict[int, Component] = {}
    for n in f.degrees:
        comp = f.component(n)
        out: Component = {}
        for key, coef in comp.items():
            c, y = key[:-1], key[-1]
            for a in allowed:
                for x in range(alg.dimension):
                    _accumulate(out, (a,) + c + (x,), coef * mu[a][y][x])
                    last = coef * mu[y][a][x]
                    _accumulate(out, c + (a, x), last if n % 2 else -last)
        _middle_terms(alg, comp, out, allowed)
        result[n + 1] = out
    return Cochain(alg, result, f.max_degree).cleaned()


def dual_delta(c: DualCochain, variant: Variant = Variant.NORMALIZED) -> DualCochain:
    """The differential transported to dual cochains.

    With (c_1..c_n; c) and the coproduct c -> c' (x) c'': splitting c_i carries
    (-1)^i, (c'', c_1..c_n; c') carries +1 and (c_1..c_n, c'; c'') carries
    (-1)^{n+1}.
    """
    if not c.dual:
        raise ShapeError("dual_delta expects a dual cochain")
    _check_room(c)
    alg = c.algebra
    mu = alg.mul
    allowed = _inputs(alg, variant)
    result: Dict[int, Component] = {}
    for n in c.degrees:
        comp = c.component(n)
        out: Component = {}
        for key, coef in comp.items():
            inputs, y = key[:-1], key[-1]
            for a in allowed:
                for z in range(alg.dimension):
                    _accumulate(out, (a,) + inputs + (z,), coef * mu[z][a][y])
                    last = coef * mu[a][z][y]
                    _accumulate(out, inputs + (a, z), last if n % 2 else -last)
        _middle_terms(alg, comp, out, allowed)
        result[n + 1] = out
    return DualCochain(alg, result, c.max_degree).cleaned()


def beta_sharp(f: Cochain) -> DualCochain:
    """Compose the value slot with beta."""
    alg = f.algebra
    g = alg.form
    comps: Dict[int, Component] = {}
    for n in f.degrees:
        out: Component = {}
        for key, coef in f.component(n).items():
            for z in range(alg.dimension):
                _accumulate(out, key[:-1] + (z,), coef * g[key[-1]][z])
        comps[n] = out
    return DualCochain(alg, comps, f.max_degree).cleaned()


def beta_sharp_inverse(c: DualCochain) -> Cochain:
    alg = c.algebra
    ginv = alg.form_inverse
    comps: Dict[int, Component] = {}
    for n in c.degrees:
        out: Component = {}
        for key, coef in c.component(n).items():
            for b in range(alg.dimension):
                _accumulate(out, key[:-1] + (b,), coef * ginv[key[-1]][b])
        comps[n] = out
    return Cochain(alg, comps, c.max_degree).cleaned()


def delta_matrix(alg: FrobeniusAlgebra, n: int, variant: Variant = Variant.NORMALIZED,
                 dual: bool = False) -> RationalMatrix:
    """Matrix of the degree-n differential in the chosen basis."""
    source = basis(alg, n, variant)
    target = basis(alg, n + 1, variant)
    columns = []
    kind = DualCochain if dual else Cochain
    for key in source:
        unit = kind(alg, {n: {key: alg.field.one}}, n + 1)
        image = dual_delta(unit, variant) if dual else delta(unit, variant)
        columns.append(image.vector(n + 1, variant))
    return RationalMatrix.from_columns(columns, len(target), alg.field)


# ---------------------------------------------------------------------------
# cohomology
# ---------------------------------------------------------------------------

@dataclass
class CohomologyGroup:
    algebra: FrobeniusAlgebra
    degree: int
    variant: Variant
    dimension: int
    representatives: List[List[Any]]
    coboundaries: List[List[Any]]
    max_degree: int = 4

    @property
    def length(self) -> int:
        return len(basis(self.algebra, self.degree, self.variant))

    def cochains(self) -> List[Cochain]:
        return [Cochain.from_vector(self.algebra, self.degree, vec, self.variant, self.max_degree)
                for vec in self.representatives]

    def projector(self) -> ClassProjector:
        return ClassProjector(self.coboundaries, self.representatives, self.length, self.algebra.field)

    def to_dict(self) -> Dict[str, Any]:
        field = self.algebra.field
        return {
            "algebra": self.algebra.name,
            "degree": self.degree,
            "variant": self.variant.value,
            "dimension": self.dimension,
            "representatives": [c.to_dict()["components"] for c in self.cochains()],
            "field": "q" if not field.is_FiniteField else f"p:{field.mod}",
        }


def cohomology(alg: FrobeniusAlgebra, n: int, max_degree: int = 4,
               variant: Variant = Variant.NORMALIZED) -> CohomologyGroup:
    """HH^n as ker(d_n) / im(d_{n-1}) over the chosen basis."""
    if n < 0:
        raise DegreeError(f"negative degree {n}")
    if n + 1 > max_degree:
        raise DegreeError(f"HH^{n} needs the complex up to degree {n + 1}; truncation is {max_degree}")
    return _cohomology_group(alg, n, max_degree, Variant(variant))


@lru_cache(maxsize=128)
def _cohomology_group(alg: FrobeniusAlgebra, n: int, max_degree: int, variant: Variant) -> CohomologyGroup:
    b_out = delta_matrix(alg, n, variant)
    if n == 0:
        b_in = RationalMatrix.zeros(b_out.cols, 0, alg.field)
    else:
        b_in = delta_matrix(alg, n - 1, variant)
    dim, reps = quotient_dimension(b_in, b_out)
    group = CohomologyGroup(alg, n, variant, dim, reps, [list(v) for v in b_in.columns() if any(v)],
                            max_degree)
    LOGGER.info("HH^%d(%s) [%s] has dimension %d", n, alg.name, variant.value, dim)
    return group


def center_dimension(alg: FrobeniusAlgebra) -> int:
    """Dimension of the kernel of a -> (x -> xa - ax), computed from the structure constants."""
    d = alg.dimension
    rows = []
    for x in range(d):
        for c in range(d):
            rows.append([alg.mul[x][a][c] - alg.mul[a][x][c] for a in range(d)])
    return len(kernel_basis(RationalMatrix.from_rows(rows, alg.field, cols=d)))


# ---------------------------------------------------------------------------
# orientation reversal
# ---------------------------------------------------------------------------

def reversal_sign(n: int) -> int:
    return -1 if (n * (n + 1) // 2) % 2 else 1


def reversal(f: Cochain) -> Cochain:
    """(~f)(a_1..a_n) = (-1)^{n(n+1)/2} f(a_n..a_1); works on both forms."""
    comps: Dict[int, Component] = {}
    for n in f.degrees:
        sign = reversal_sign(n)
        comps[n] = {key[:-1][::-1] + key[-1:]: sign * value for key, value in f.component(n).items()}
    return f._like(comps).cleaned()


def reversal_defect(f: Cochain, variant: Variant = Variant.NORMALIZED) -> Cochain:
    """The commutator expression measuring how far ~ is from a chain map.

    For f of degree n and s = (-1)^{n(n+1)/2} this is
    s [ a_1 f(a_{n+1}..a_2) - f(a_{n+1}..a_2) a_1
        + sum_i (-1)^i f(a_{n+1}.., a_i a_{i+1} - a_{i+1} a_i, ..a_1)
        + (-1)^{n+1} (f(a_n..a_1) a_{n+1} - a_{n+1} f(a_n..a_1)) ],
    which equals delta(~f) - ~(delta f).
    """
    _check_room(f)
    alg = f.algebra
    mu = alg.mul
    d = alg.dimension
    allowed = _inputs(alg, variant)
    result: Dict[int, Component] = {}
    for n in f.degrees:
        s = reversal_sign(n)
        out: Component = {}
        for key, coef in f.component(n).items():
            c, y = key[:-1], key[-1]
            rev = c[::-1]
            edge = s * coef
            for a in allowed:
                for x in range(d):
                    _accumulate(out, (a,) + rev + (x,), edge * (mu[a][y][x] - mu[y][a][x]))
                    tail = edge * (mu[y][a][x] - mu[a][y][x])
                    _accumulate(out, rev + (a, x), tail if n % 2 else -tail)
            for i in range(1, n + 1):
                merged = c[n - i]
                head = tuple(c[n - j] for j in range(1, i))
                tail_part = tuple(c[n + 1 - j] for j in range(i + 2, n + 2))
                sign = edge if i % 2 == 0 else -edge
                for p in allowed:
                    for q in allowed:
                        weight = mu[p][q][merged] - mu[q][p][merged]
                        if weight:
                            _accumulate(out, head + (p, q) + tail_part + (y,), sign * weight)
        result[n + 1] = out
    return f._like(result).cleaned()


def reversal_matrix(alg: FrobeniusAlgebra, n: int, variant: Variant = Variant.NORMALIZED) -> RationalMatrix:
    keys = basis(alg, n, variant)
    index = {key: pos for pos, key in enumerate(keys)}
    sign = alg.field.convert(reversal_sign(n))
    rows = [[alg.field.zero] * len(keys) for _ in keys]
    for pos, key in enumerate(keys):
        rows[index[key[:-1][::-1] + key[-1:]]][pos] = sign
    return RationalMatrix.from_rows(rows, alg.field, cols=len(keys))


def reversal_eigenspaces(alg: FrobeniusAlgebra, n: int,
                         variant: Variant = Variant.NORMALIZED) -> Dict[int, List[List[Any]]]:
    """Bases of the +1 and -1 eigenspaces of ~ on degree-n cochains."""
    r = reversal_matrix(alg, n, variant)
    ident = RationalMatrix.identity(r.rows, alg.field)
    spaces = {}
    for eigenvalue in (1, -1):
        shifted = RationalMatrix.from_rows(
            [[r.entries[i][j] - eigenvalue * ident.entries[i][j] for j in range(r.cols)] for i in range(r.rows)],
            alg.field, cols=r.cols)
        spaces[eigenvalue] = kernel_basis(shifted)
    return spaces


def random_cochain(alg: FrobeniusAlgebra, n: int, rng, max_degree: int = 4, density: float = 0.4,
                   dual: bool = False, variant: Variant = Variant.NORMALIZED) -> Cochain:
    """Sparse cochain with integer entries in [-3, 3] on the chosen basis."""
    comp: Component = {}
    keys = basis(alg, n, variant)
    for key in keys:
        if rng.random() < density:
            value = rng.randint(-3, 3)
            if value:
                comp[key] = alg.field.convert(value)
    if not comp and keys:
        comp[rng.choice(keys)] = alg.field.one
    kind = DualCochain if dual else Cochain
    return kind(alg, {n: comp}, max_degree)


def cup_product(f: Cochain, g: Cochain) -> Cochain:
    """(f u g)(a_1..a_{p+q}) = f(a_1..a_p) g(a_{p+1}..a_{p+q}), on primal cochains."""
    alg = f.algebra
    p, q = f.degree, g.degree
    out: Component = {}
    for kf, vf in f.component(p).items():
        for kg, vg in g.component(q).items():
            for x in range(alg.dimension):
                _accumulate(out, kf[:-1] + kg[:-1] + (x,), vf * vg * alg.mul[kf[-1]][kg[-1]][x])
    return Cochain(alg, {p + q: out}, max(f.max_degree, g.max_degree)).cleaned()


def insertion(f: Cochain, g: Cochain, j: int) -> Cochain:
    """f o_j g: g's value fed into the j-th argument of f (1-based)."""
    alg = f.algebra
    p, q = f.degree, g.degree
    out: Component = {}
    for kf, vf in f.component(p).items():
        for kg, vg in g.component(q).items():
            if kf[j - 1] == kg[-1]:
                _accumulate(out, kf[:j - 1] + kg[:-1] + kf[j:], vf * vg)
    return Cochain(alg, {p + q - 1: out}, max(f.max_degree, g.max_degree)).cleaned()


def connes_operator(f: Cochain) -> Cochain:
    """The rotation operator on a primal cochain of degree n >= 1.

    <(Bf)(x_1..x_{n-1}), z> = sum_j (-1)^{(j-1)(n-j+1)} <f(x_{n-j+1}..x_{n-1}, z, x_1..x_{n-j}), 1>,
    where z sits in argument j of f.
    """
    alg = f.algebra
    n = f.degree
    if n == 0:
        return Cochain(alg, {}, f.max_degree)
    dual = beta_sharp(f).component(n)
    out: Component = {}
    for key, coef in dual.items():
        inputs, y = key[:-1], key[-1]
        at_unit = alg.unit[y]
        if not at_unit:
            continue
        for j in range(1, n + 1):
            sign = -1 if ((j - 1) * (n - j + 1)) % 2 else 1
            read = inputs[j:] + inputs[:j - 1]
            _accumulate(out, read + (inputs[j - 1],), sign * coef * at_unit)
    return beta_sharp_inverse(DualCochain(alg, {n - 1: out}, f.max_degree))


def iter_entries(f: Cochain) -> Iterable[Tuple[IndexTuple, Any]]:
    for n in f.degrees:
        yield from f.component(n).items()
