"""Finite-dimensional Frobenius algebras given by structure constants.

Basis vector 0 is always the unit. Elements are coordinate lists in the basis
``e_0 .. e_{d-1}``; elements of the dual space are coordinate lists in the
dual basis ``e^0 .. e^{d-1}``.
"""
from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Any, Dict, List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ
from sympy.polys.domains.domain import Domain

from .errors import InputError
from .linalg import RationalMatrix, format_scalar, parse_scalar, rank
from .schemas import AlgebraFile, load_model

LOGGER = logging.getLogger(__name__)

Vector = List[Any]
IndexTuple = Tuple[int, ...]


@dataclass(frozen=True, eq=False)
class FrobeniusAlgebra:
    """Unital associative algebra with an invariant non-degenerate form.

    ``mul[a][b][c]`` is the coefficient of ``e_c`` in ``e_a * e_b`` and
    ``form[a][b] = <e_a, e_b>``.
    """

    name: str
    basis: Tuple[str, ...]
    mul: Tuple[Tuple[Tuple[Any, ...], ...], ...]
    form: Tuple[Tuple[Any, ...], ...]
    commutative: bool
    field: Domain = QQ
    _expansions: Dict[Tuple[int, int], List[Tuple[IndexTuple, Any]]] = dc_field(
        default_factory=dict, init=False, repr=False)
    _chords: Dict[int, Dict[IndexTuple, Any]] = dc_field(default_factory=dict, init=False, repr=False)
    _tables: Dict[int, Dict[IndexTuple, Vector]] = dc_field(default_factory=dict, init=False, repr=False)

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def basis_vector(self, index: int) -> Vector:
        vec = [self.field.zero] * self.dimension
        vec[index] = self.field.one
        return vec

    @property
    def unit(self) -> Vector:
        return self.basis_vector(0)

    def product(self, u: Sequence[Any], v: Sequence[Any]) -> Vector:
        d = self.dimension
        out = [self.field.zero] * d
        for a in range(d):
            if not u[a]:
                continue
            for b in range(d):
                if not v[b]:
                    continue
                coeff = u[a] * v[b]
                row = self.mul[a][b]
                for c in range(d):
                    if row[c]:
                        out[c] += coeff * row[c]
        return out

    def pair(self, u: Sequence[Any], v: Sequence[Any]) -> Any:
        total = self.field.zero
        for a in range(self.dimension):
            if not u[a]:
                continue
            for b in range(self.dimension):
                if v[b] and self.form[a][b]:
                    total += u[a] * v[b] * self.form[a][b]
        return total

    @cached_property
    def form_inverse(self) -> Tuple[Tuple[Any, ...], ...]:
        """g^-1, cached; raises ValueError on a degenerate form."""
        matrix = RationalMatrix.from_rows(self.form, self.field, cols=self.dimension)
        if rank(matrix) < self.dimension:
            raise ValueError(f"form of {self.name} is degenerate")
        inverse = matrix.to_domain().inv().to_list()
        return tuple(tuple(row) for row in inverse)

    def expansion(self, target: int, arity: int) -> List[Tuple[IndexTuple, Any]]:
        """Nonzero coefficients of ``e^target`` under the (arity-1)-fold dual coproduct.

        Entry ``(b_1..b_r, x)`` means ``x = e^target(e_{b_1} ... e_{b_r})``.
        """
        key = (target, arity)
        cached = self._expansions.get(key)
        if cached is not None:
            return cached
        if arity < 1:
            raise ValueError("arity must be positive")
        result = []
        for indices, vec in self._products(arity).items():
            if vec[target]:
                result.append((indices, vec[target]))
        self._expansions[key] = result
        return result

    def _products(self, arity: int) -> Dict[IndexTuple, Vector]:
        if arity in self._tables:
            return self._tables[arity]
        table = {(a,): self.basis_vector(a) for a in range(self.dimension)}
        for _ in range(arity - 1):
            grown = {}
            for indices, vec in table.items():
                for b in range(self.dimension):
                    grown[indices + (b,)] = self.product(vec, self.basis_vector(b))
            table = grown
        self._tables[arity] = table
        return table

    def chord_table(self, arity: int) -> Dict[IndexTuple, Any]:
        """Nonzero values of ``<gamma(e^{b_0}) ... gamma(e^{b_{r-1}}), 1>``."""
        cached = self._chords.get(arity)
        if cached is not None:
            return cached
        ginv = self.form_inverse
        table = {}
        for indices in itertools.product(range(self.dimension), repeat=arity):
            vec = list(ginv[indices[0]])
            for b in indices[1:]:
                vec = self.product(vec, list(ginv[b]))
            value = self.pair(vec, self.unit)
            if value:
                table[indices] = value
        self._chords[arity] = table
        return table

    def to_dict(self) -> Dict[str, Any]:
        d = self.dimension
        mult = [[a, b, c, format_scalar(self.mul[a][b][c], self.field)]
                for a in range(d) for b in range(d) for c in range(d) if self.mul[a][b][c]]
        form = [[a, b, format_scalar(self.form[a][b], self.field)]
                for a in range(d) for b in range(d) if self.form[a][b]]
        return {"name": self.name, "dimension": d, "basis": list(self.basis),
                "multiplication": mult, "form": form, "commutative": self.commutative}


def build_algebra(name: str, basis: Sequence[str], mul: Sequence[Sequence[Sequence[Any]]],
                  form: Sequence[Sequence[Any]], commutative: bool,
                  field: Domain = QQ) -> FrobeniusAlgebra:
    mul_t = tuple(tuple(tuple(field.convert(x) for x in row) for row in plane) for plane in mul)
    form_t = tuple(tuple(field.convert(x) for x in row) for row in form)
    return FrobeniusAlgebra(name, tuple(basis), mul_t, form_t, commutative, field)


def _check(checks: List[Dict[str, Any]], errors: List[str], name: str,
           witness: Optional[Any], message: str) -> None:
    passed = witness is None
    checks.append({"name": name, "passed": passed, "witness": None if passed else list(witness)})
    if not passed:
        errors.append(f"{message} at {tuple(witness)}")


def validate(alg: FrobeniusAlgebra) -> Dict[str, Any]:
    """Check every axiom and report the first violating index tuple of each."""
    d = alg.dimension
    zero, one = alg.field.zero, alg.field.one
    mu, g = alg.mul, alg.form
    rng = range(d)
    checks: List[Dict[str, Any]] = []
    errors: List[str] = []
    warnings: List[str] = []

    unit_fail = next(((b, c) for b in rng for c in rng
                      if mu[0][b][c] != (one if b == c else zero)
                      or mu[b][0][c] != (one if b == c else zero)), None)
    _check(checks, errors, "unitality", unit_fail, "basis vector 0 is not a two-sided unit")

    def assoc(a: int, b: int, c: int, y: int) -> bool:
        left = sum((mu[a][b][x] * mu[x][c][y] for x in rng), zero)
        right = sum((mu[b][c][x] * mu[a][x][y] for x in rng), zero)
        return left != right

    assoc_fail = next(((a, b, c, y) for a in rng for b in rng for c in rng for y in rng
                       if assoc(a, b, c, y)), None)
    _check(checks, errors, "associativity", assoc_fail, "multiplication is not associative")

    def inv(a: int, b: int, c: int) -> bool:
        ab_c = sum((mu[a][b][x] * g[x][c] for x in rng), zero)
        a_bc = sum((mu[b][c][x] * g[a][x] for x in rng), zero)
        b_ca = sum((mu[c][a][x] * g[b][x] for x in rng), zero)
        return not (ab_c == a_bc == b_ca)

    inv_fail = next(((a, b, c) for a in rng for b in rng for c in rng if inv(a, b, c)), None)
    _check(checks, errors, "invariance", inv_fail, "form is not invariant")

    degenerate = rank(RationalMatrix.from_rows(g, alg.field, cols=d)) < d
    _check(checks, errors, "non-degeneracy", (d,) if degenerate else None, "form is degenerate")

    sym_fail = next(((a, b) for a in rng for b in rng if g[a][b] != g[b][a]), None)
    _check(checks, errors, "symmetry", sym_fail, "form is not symmetric")

    comm_fail = next(((a, b, c) for a in rng for b in rng for c in rng
                      if mu[a][b][c] != mu[b][a][c]), None)
    if alg.commutative and comm_fail is not None:
        _check(checks, errors, "commutative-flag", comm_fail, "declared commutative but products differ")
    else:
        _check(checks, errors, "commutative-flag", None, "")
        if not alg.commutative and comm_fail is None:
            warnings.append("algebra is commutative but not declared so")

    valid = not errors
    LOGGER.debug("validated %s: %s", alg.name, "ok" if valid else errors)
    return {"valid": valid, "errors": errors, "warnings": warnings, "checks": checks,
            "commutative": comm_fail is None}


def beta(alg: FrobeniusAlgebra, element: Sequence[Any]) -> Vector:
    """beta(a) = <a, ->, in the dual basis."""
    g = alg.form
    return [sum((element[a] * g[a][b] for a in range(alg.dimension)), alg.field.zero)
            for b in range(alg.dimension)]


def gamma(alg: FrobeniusAlgebra, functional: Sequence[Any]) -> Vector:
    """Inverse of beta."""
    ginv = alg.form_inverse
    return [sum((functional[b] * ginv[b][a] for b in range(alg.dimension)), alg.field.zero)
            for a in range(alg.dimension)]


def comultiply(alg: FrobeniusAlgebra, functional: Sequence[Any], r: int) -> Dict[IndexTuple, Any]:
    """Iterated dual coproduct of ``functional`` into r factors, as a sparse tensor."""
    if r < 2:
        raise ValueError("comultiply needs r >= 2")
    out: Dict[IndexTuple, Any] = {}
    for target in range(alg.dimension):
        if not functional[target]:
            continue
        for indices, coeff in alg.expansion(target, r):
            out[indices] = out.get(indices, alg.field.zero) + functional[target] * coeff
    return {k: v for k, v in out.items() if v}


def cyclic_bracket(alg: FrobeniusAlgebra, functionals: Sequence[Sequence[Any]]) -> Any:
    """<gamma(c_1) ... gamma(c_r), 1>."""
    if not functionals:
        raise ValueError("cyclic_bracket needs at least one functional")
    vec = gamma(alg, functionals[0])
    for functional in functionals[1:]:
        vec = alg.product(vec, gamma(alg, functional))
    return alg.pair(vec, alg.unit)


def _dual_numbers(field: Domain) -> FrobeniusAlgebra:
    return _truncated_polynomial(2, field, name="dual_numbers")


def _truncated_polynomial(k: int, field: Domain, name: Optional[str] = None) -> FrobeniusAlgebra:
    if k < 1:
        raise InputError("trunc_poly needs k >= 1", "algebra")
    mul = [[[1 if (i + j == c) else 0 for c in range(k)] for j in range(k)] for i in range(k)]
    form = [[1 if i + j == k - 1 else 0 for j in range(k)] for i in range(k)]
    basis = ["1"] + [("x" if i == 1 else f"x^{i}") for i in range(1, k)]
    return build_algebra(name or f"trunc_poly:{k}", basis, mul, form, True, field)


# 2x2 matrices in the basis 1, E12, E21, H = E11 - E22
_MAT2_BASIS = (((1, 0), (0, 1)), ((0, 1), (0, 0)), ((0, 0), (1, 0)), ((1, 0), (0, -1)))


def _mat2(field: Domain) -> FrobeniusAlgebra:
    def matmul(x, y):
        return tuple(tuple(sum(x[i][k] * y[k][j] for k in range(2)) for j in range(2)) for i in range(2))

    def coords(m):
        half = field(1) / field(2)
        return [field(m[0][0] + m[1][1]) * half, field(m[0][1]), field(m[1][0]),
                field(m[0][0] - m[1][1]) * half]

    mul = [[coords(matmul(x, y)) for y in _MAT2_BASIS] for x in _MAT2_BASIS]
    form = [[field(sum(matmul(x, y)[i][i] for i in range(2))) for y in _MAT2_BASIS] for x in _MAT2_BASIS]
    return build_algebra("mat2", ["1", "E12", "E21", "H"], mul, form, False, field)


def _group_c2(field: Domain) -> FrobeniusAlgebra:
    mul = [[[1, 0], [0, 1]], [[0, 1], [1, 0]]]
    form = [[1, 0], [0, 1]]
    return build_algebra("group_c2", ["1", "t"], mul, form, True, field)


BUILTIN_NAMES = ("dual_numbers", "trunc_poly(k)", "mat2", "group_c2")

_TRUNC = re.compile(r"^trunc_poly(?:\((\d+)\)|:(\d+))$")


def builtin(name: str, field: Domain = QQ) -> FrobeniusAlgebra:
    key = name.strip().lower()
    if key == "dual_numbers":
        return _dual_numbers(field)
    if key == "mat2":
        return _mat2(field)
    if key == "group_c2":
        return _group_c2(field)
    match = _TRUNC.match(key)
    if match:
        return _truncated_polynomial(int(match.group(1) or match.group(2)), field)
    raise InputError(f"unknown algebra {name!r}; expected one of {', '.join(BUILTIN_NAMES)}", "algebra")


def from_dict(data: Any, field: Domain = QQ, prefix: str = "") -> FrobeniusAlgebra:
    """Parse the sparse JSON algebra format; errors name the JSON path."""
    model = data if isinstance(data, AlgebraFile) else load_model(AlgebraFile, data, prefix)
    where = (prefix + ".") if prefix else ""
    d = model.dimension
    if len(model.basis) != d:
        raise InputError(f"basis has {len(model.basis)} names, dimension is {d}", f"{where}basis")
    mul = [[[field.zero] * d for _ in range(d)] for _ in range(d)]
    for pos, entry in enumerate(model.multiplication):
        path = f"{where}multiplication[{pos}]"
        if len(entry) != 4:
            raise InputError("expected [a, b, c, value]", path)
        a, b, c = (_index(entry[k], d, f"{path}[{k}]") for k in range(3))
        mul[a][b][c] = parse_scalar(entry[3], field, f"{path}[3]")
    form = [[field.zero] * d for _ in range(d)]
    for pos, entry in enumerate(model.form):
        path = f"{where}form[{pos}]"
        if len(entry) != 3:
            raise InputError("expected [a, b, value]", path)
        a, b = (_index(entry[k], d, f"{path}[{k}]") for k in range(2))
        form[a][b] = parse_scalar(entry[2], field, f"{path}[2]")
    return build_algebra(model.name, model.basis, mul, form, model.commutative, field)


def _index(value: Any, d: int, path: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or not 0 <= value < d:
        raise InputError(f"index must be an integer in [0, {d})", path)
    return value


def resolve(spec: Any, field: Domain = QQ, prefix: str = "algebra") -> FrobeniusAlgebra:
    """A builtin name or an inline algebra dict."""
    if isinstance(spec, FrobeniusAlgebra):
        return spec
    if isinstance(spec, str):
        return builtin(spec, field)
    return from_dict(spec, field, prefix)
