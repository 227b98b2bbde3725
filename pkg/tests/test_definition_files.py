import json
from fractions import Fraction
from pathlib import Path

import pytest

from consistent_maps import LAMBDA, OMEGA, TailFamily, evaluate
from cyclotomic_tower import INFINITY, Level, Place, RationalPlace
from definition_files import load_function, load_map, load_partition, parse_element
from errors import InvalidOverride, ParseError
from global_measure import CANONICAL
from integration import CyclotomicUnit, ExplicitElement, RationalElement
from map_values import ExactRational, LogLinear

MAPS = Path(__file__).resolve().parent.parent / "maps"
TWO = RationalPlace(2)


def write(tmp_path, name, document):
    path = tmp_path / name
    path.write_text(document if isinstance(document, str) else json.dumps(document), encoding="utf-8")
    return path


def test_shipped_builtins():
    assert load_map(MAPS / "lambda.map") is LAMBDA
    assert load_map(MAPS / "omega.map") is OMEGA


def test_shipped_spec_map():
    c = load_map(MAPS / "finite.map")
    assert c.name == "finite"
    assert evaluate(c, Place(Level(7), TWO, 3)) == ExactRational(-2)
    assert evaluate(c, Place(Level(1), TWO, 0)) == ExactRational(-3)
    assert c.base.tail.is_zero


def test_shipped_partitions():
    split = load_partition(MAPS / "split7.partition")
    assert split.order == (INFINITY, TWO)
    assert len(split.parts_at(TWO)) == 2
    assert load_partition(MAPS / "canonical.partition") == CANONICAL


def test_shipped_function():
    f = load_function(MAPS / "unit5.function")
    assert f.values[Place(Level(1), RationalPlace(5), 0)] == LogLinear.of(0, {5: -1})


def test_tail_lists_add_up(tmp_path):
    path = write(tmp_path, "mixed.map", {
        "name": "mixed",
        "base": {
            "table": [{"place": "1:inf:0", "value": "0"}],
            "tail": [
                {"tag": "const_lambda", "coefficient": "1/2"},
                {"tag": "const_lambda", "coefficient": "1/2"},
                {"tag": "alternating_unit", "coefficient": "-1"},
            ],
        },
    })
    tail = load_map(path).base.tail
    assert tail.coefficient(TailFamily.CONST_LAMBDA) == 1
    assert tail.coefficient(TailFamily.ALTERNATING_UNIT) == -1


@pytest.mark.parametrize(
    "document",
    [
        "{not json",
        {"kind": "spec"},
        {"name": "nobase", "kind": "spec"},
        {"name": "mu", "kind": "builtin"},
        {"name": "t", "base": {"tail": {"tag": "harmonic"}}},
        {"name": "t", "base": {"table": [{"place": "7:2:1", "value": "1"}]}},
        {"name": "t", "base": {"table": [{"place": "1:2:0", "value": "one"}]}},
        {"name": "t", "base": {"table": []},
         "overrides": [{"level": 7, "entries": [{"place": "1:2:0", "value": "1"}]}]},
    ],
)
def test_malformed_map_files(tmp_path, document):
    with pytest.raises(ParseError):
        load_map(write(tmp_path, "bad.map", document))


def test_missing_file(tmp_path):
    with pytest.raises(ParseError):
        load_map(tmp_path / "absent.map")


def test_inconsistent_overrides_are_domain_errors(tmp_path):
    path = write(tmp_path, "bad.map", {
        "name": "bad",
        "base": {"table": [{"place": "1:2:0", "value": "1"}]},
        "overrides": [{"level": 7, "entries": [
            {"place": "7:2:1", "value": "1"},
            {"place": "7:2:3", "value": "1"},
        ]}],
    })
    with pytest.raises(InvalidOverride):
        load_map(path)


def test_malformed_partition(tmp_path):
    with pytest.raises(ParseError):
        load_partition(write(tmp_path, "bad.partition", {"exceptional": {"2": ["~[7:2:1]"]}}))


def test_element_literals():
    assert parse_element("rat:-3/4") == RationalElement(Fraction(-3, 4))
    assert parse_element("cycunit:7") == CyclotomicUnit(7)
    element = parse_element(f"file:{MAPS / 'unit5.function'}")
    assert isinstance(element, ExplicitElement)
    with pytest.raises(ParseError):
        parse_element("root:2")
