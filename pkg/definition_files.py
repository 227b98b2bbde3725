"""
JSON definition files for maps, partitions and explicit functions.

Each file is validated into a pydantic model first; the models then build
the library objects, so every malformed file surfaces as a ``ParseError``.
"""

import json
import logging
from pathlib import Path
from typing import Dict, List, Literal, Optional, Union

from pydantic import BaseModel, Field, ValidationError

from consistent_maps import (
    BaseAssignment,
    ConsistentMap,
    OverrideChain,
    OverrideLevel,
    Tail,
    TailFamily,
    from_spec,
    make_builtin,
)
from cyclotomic_tower import Level
from errors import ParseError
from global_measure import Partition, make_partition
from integration import (
    AlgebraicElement,
    CyclotomicUnit,
    ExplicitElement,
    RationalElement,
    SimpleFunction,
)
from literals import (
    parse_rational,
    parse_integer,
    parse_level,
    parse_place,
    parse_rational_place,
    parse_ring_set,
    parse_set,
    parse_value,
)

logger = logging.getLogger(__name__)


class PlaceValue(BaseModel):
    place: str = Field(..., description="Place literal such as 7:2:1 or 1:inf:0")
    value: str = Field(..., description="Value literal: q, q/log(p), q*log(p) + ... or a decimal")


class TailTerm(BaseModel):
    tag: Literal["zero", "const_lambda", "reciprocal_log", "alternating_unit", "prime_over_log"] = Field(
        ..., description="Tail family applied to rational places outside the table"
    )
    coefficient: str = Field("1", description="Rational coefficient of the family")


class BaseDefinition(BaseModel):
    table: List[PlaceValue] = Field(default_factory=list, description="Values at places of Q")
    tail: Union[TailTerm, List[TailTerm], None] = Field(None, description="One tail term or a list of them")

    def to_base(self) -> BaseAssignment:
        table = {}
        for entry in self.table:
            place = parse_place(entry.place)
            if place.level != Level(1):
                raise ParseError(f"base table entry {entry.place} is not a place of Q")
            table[place.base] = parse_value(entry.value)
        terms = self.tail if isinstance(self.tail, list) else [self.tail] if self.tail else []
        coefficients: Dict[TailFamily, object] = {}
        for term in terms:
            if term.tag == "zero":
                continue
            family = TailFamily(term.tag)
            coefficients[family] = coefficients.get(family, 0) + parse_rational(term.coefficient)
        return BaseAssignment(table, Tail.of(coefficients))


class OverrideDefinition(BaseModel):
    level: int = Field(..., description="Canonical conductor of the override level")
    entries: List[PlaceValue] = Field(..., description="Values at places of that level")

    def to_layer(self) -> OverrideLevel:
        level = parse_level(str(self.level))
        entries = {}
        for entry in self.entries:
            place = parse_place(entry.place)
            if place.level != level:
                raise ParseError(f"override entry {entry.place} is not at level {level}")
            entries[place] = parse_value(entry.value)
        return OverrideLevel(level, entries)


class MapDefinition(BaseModel):
    name: str = Field(..., description="Name of the map")
    kind: Literal["builtin", "spec"] = Field("spec", description="builtin maps are looked up by name")
    base: Optional[BaseDefinition] = Field(None, description="Base assignment on the places of Q")
    overrides: List[OverrideDefinition] = Field(default_factory=list, description="Override chain, coarsest first")

    def to_map(self) -> ConsistentMap:
        if self.kind == "builtin":
            return make_builtin(self.name)
        if self.base is None:
            raise ParseError(f"map {self.name} of kind spec needs a base")
        chain = OverrideChain(tuple(layer.to_layer() for layer in self.overrides))
        return from_spec(self.base.to_base(), chain, name=self.name)


class PartitionDefinition(BaseModel):
    scope: str = Field("Y", description="Y or a set literal")
    exceptional: Dict[str, List[str]] = Field(
        default_factory=dict, description="Rational place literal -> set literals of its parts"
    )
    order: List[str] = Field(default_factory=list, description="Rational places enumerated first")

    def to_partition(self) -> Partition:
        exceptional = {
            parse_rational_place(base): [parse_ring_set(part) for part in parts]
            for base, parts in self.exceptional.items()
        }
        order = [parse_rational_place(base) for base in self.order]
        return make_partition(exceptional, parse_set(self.scope), order)


class FunctionDefinition(BaseModel):
    level: int = Field(..., description="Level at which the function is constant on basis sets")
    values: List[PlaceValue] = Field(default_factory=list, description="Nonzero values; all other places are 0")

    def to_function(self) -> SimpleFunction:
        level = parse_level(str(self.level))
        return SimpleFunction(level, {parse_place(e.place): parse_value(e.value) for e in self.values})


def _load(path: Union[str, Path], model):
    path = Path(path)
    logger.debug("loading %s as %s", path, model.__name__)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")
    try:
        return model.model_validate(json.loads(text))
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg} at line {e.lineno}")
    except ValidationError as e:
        first = e.errors()[0]
        location = ".".join(str(part) for part in first["loc"])
        raise ParseError(f"{path}: {location}: {first['msg']}")


def load_map(path: Union[str, Path]) -> ConsistentMap:
    return _load(path, MapDefinition).to_map()


def load_partition(path: Union[str, Path]) -> Partition:
    return _load(path, PartitionDefinition).to_partition()


def load_function(path: Union[str, Path]) -> SimpleFunction:
    return _load(path, FunctionDefinition).to_function()


def parse_element(text: str) -> AlgebraicElement:
    """``rat:q``, ``cycunit:p`` or ``file:<path>``."""
    kind, _, body = text.strip().partition(":")
    if kind == "rat":
        return RationalElement(parse_rational(body))
    if kind == "cycunit":
        return CyclotomicUnit(parse_integer(body, "prime"))
    if kind == "file":
        return ExplicitElement(load_function(body))
    raise ParseError(f"element literal {text!r} must start with rat:, cycunit: or file:")
