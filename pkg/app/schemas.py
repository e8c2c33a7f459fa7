"""Pydantic models for the algebra, diagram, cochain and suite-config files."""
from __future__ import annotations

import json
from typing import Any, Dict, List, Literal, Optional, Type, TypeVar, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from .errors import InputError

Scalar = Union[int, str]

ModelT = TypeVar("ModelT", bound=BaseModel)


class AlgebraFile(BaseModel):
    """Sparse structure constants of a Frobenius algebra."""

    model_config = ConfigDict(extra="forbid")

    name: str = "algebra"
    dimension: int = Field(ge=1)
    basis: List[str]
    multiplication: List[List[Scalar]] = Field(default_factory=list)
    form: List[List[Scalar]] = Field(default_factory=list)
    commutative: bool = False


class PointModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    kind: Literal["mark", "out", "leaf"]
    id: Optional[int] = None
    dir: Literal["opp", "rev"] = "opp"
    chord: Optional[int] = None
    index: Optional[int] = None
    twist: bool = False


class ClusterModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    points: List[PointModel] = Field(min_length=1)


class CircleModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    clusters: List[ClusterModel] = Field(min_length=1)


class ChordModel(BaseModel):
    model_config = ConfigDict(extra="forbid")

    arity: int = Field(ge=2)


class DiagramFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    mode: Literal["cyclic", "sullivan"] = "cyclic"
    outputs: int = Field(ge=0)
    chords: List[ChordModel] = Field(default_factory=list)
    inputs: List[CircleModel] = Field(default_factory=list)


class DiagramSumFile(BaseModel):
    """A linear combination, written as ``[coefficient, diagram]`` pairs."""

    model_config = ConfigDict(extra="forbid")

    terms: List[List[Union[Scalar, DiagramFile]]] = Field(default_factory=list)


class CochainFile(BaseModel):
    model_config = ConfigDict(extra="forbid")

    algebra: Union[str, AlgebraFile]
    max_degree: Optional[int] = Field(default=None, ge=1)
    components: Dict[str, List[List[Scalar]]] = Field(default_factory=dict)


class SuiteConfig(BaseModel):
    """Selection and sampling parameters of the identity suite."""

    model_config = ConfigDict(extra="forbid")

    algebras: List[str] = Field(default_factory=lambda: ["dual_numbers", "mat2"])
    commutative_algebras: List[str] = Field(default_factory=lambda: ["dual_numbers", "trunc_poly:3"])
    max_degree: int = Field(default=4, ge=2)
    action_degree: int = Field(default=2, ge=0)
    samples: int = Field(default=3, ge=1)
    random_diagrams: int = Field(default=10, ge=0)
    composites: Optional[int] = Field(default=None, ge=0)
    derivation_pairs: Optional[int] = Field(default=None, ge=1)
    triples: Optional[int] = Field(default=None, ge=1)
    slide_diagrams: Optional[int] = Field(default=None, ge=1)
    round_trip_diagrams: Optional[int] = Field(default=None, ge=0)
    seed: Optional[int] = None
    mode: Literal["cyclic", "sullivan", "both"] = "both"
    checks: Optional[List[str]] = None
    field: str = "q"


# sample counts of the full acceptance run; unset counts fall back to random_diagrams
ACCEPTANCE: Dict[str, Any] = {
    "samples": 50,
    "action_degree": 3,
    "composites": 200,
    "derivation_pairs": 100,
    "triples": 50,
    "slide_diagrams": 20,
    "round_trip_diagrams": 50,
}


def acceptance_config(**overrides: Any) -> SuiteConfig:
    return SuiteConfig(**{**ACCEPTANCE, **overrides})


def format_location(loc: Any) -> str:
    """Join a pydantic error location into ``inputs[0].clusters[2].points[1].id``."""
    path = ""
    for part in loc:
        if isinstance(part, int):
            path += f"[{part}]"
        else:
            path += f".{part}" if path else str(part)
    return path or "$"


def load_model(model: Type[ModelT], data: Any, prefix: str = "") -> ModelT:
    """Validate ``data`` against ``model``; pydantic failures become InputError."""
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        path = format_location(first.get("loc", ()))
        if prefix:
            path = f"{prefix}.{path}" if path != "$" else prefix
        raise InputError(first.get("msg", "invalid value"), path)


def read_json(path: str) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError:
        raise InputError("file not found", path)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (line {exc.lineno})", path)


def dump_json(data: Any) -> str:
    """Byte-stable canonical JSON."""
    return json.dumps(data, sort_keys=True, separators=(",", ":"))


def dump_model(model: BaseModel) -> str:
    return dump_json(model.model_dump(mode="json", exclude_none=True))


def as_dict(model: BaseModel) -> Dict[str, Any]:
    return model.model_dump(mode="json", exclude_none=True)
