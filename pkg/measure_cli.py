"""
Command line entry point: python measure_cli.py <command> ...

Every command prints either readable lines (``--format plain``) or one
``key=value`` record per line (``--format records``).  Exit status is 0 on
success, 1 on a domain error and 2 on a malformed literal or file.
"""

import argparse
import logging
import sys
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from decouple import config

from consistent_maps import charge, check_consistency
from cyclotomic_tower import INFINITY, Level, canonical_conductor, compositum, lambda_mass, local_degree, places_above
from definition_files import load_map, load_partition, parse_element
from errors import ParseError, PlaceMeasureError
from global_measure import (
    CANONICAL,
    classify_series,
    countably_additive,
    index,
    is_globally_consistent,
    is_refinement,
    nu,
    r_extension,
    refine_prefix_check,
)
from integration import PRODUCT_FORMULA_TOLERANCE, phi
from literals import (
    parse_extended,
    parse_level,
    parse_rational_place,
    parse_ring_set,
    parse_set,
    render_classification,
    render_extended,
    render_value,
)
from map_values import FloatValue, is_negligible
from utils.timer_decorator import timer_decorator

LOG_LEVEL = config("PLACEMEASURE_LOG_LEVEL", default="WARNING")

logger = logging.getLogger(__name__)


@dataclass
class Report:
    """What a command prints: readable lines and the matching records."""

    lines: List[str] = field(default_factory=list)
    records: List[Tuple[str, str]] = field(default_factory=list)

    def render(self, fmt: str) -> str:
        if fmt == "records":
            return "\n".join(f"{key}={value}" for key, value in self.records)
        return "\n".join(self.lines)


def _yes_no(flag: bool) -> str:
    return "yes" if flag else "no"


def _short_float(x: float) -> str:
    mantissa, exponent = f"{x:e}".split("e")
    return f"{float(mantissa):g}e{int(exponent)}"


@timer_decorator
def cmd_places(args) -> Report:
    level, base = parse_level(args.level), parse_rational_place(args.base)
    report = Report()
    for i, place in enumerate(places_above(level, base), start=1):
        degree, mass = local_degree(place), lambda_mass(place)
        report.lines.append(f"{place} deg={degree} lambda={mass}")
        report.records += [(f"place.{i}", str(place)), (f"deg.{i}", str(degree)), (f"lambda.{i}", str(mass))]
    return report


@timer_decorator
def cmd_measure(args) -> Report:
    c = load_map(args.map)
    text = render_value(charge(c, parse_ring_set(args.set)))
    return Report([text], [("value", text)])


@timer_decorator
def cmd_integrate(args) -> Report:
    c = load_map(args.map)
    value = phi(c, parse_element(args.element))
    if isinstance(value, FloatValue) and is_negligible(value, PRODUCT_FORMULA_TOLERANCE):
        text = f"≈ 0 (|·| < {_short_float(PRODUCT_FORMULA_TOLERANCE)})"
    else:
        text = render_value(value)
    return Report([text], [("value", text)])


@timer_decorator
def cmd_global(args) -> Report:
    c = load_map(args.map)
    consistent = is_globally_consistent(c)
    parts = [f"globally-consistent: {_yes_no(consistent)}"]
    records = [("globally_consistent", _yes_no(consistent))]
    if consistent:
        parts.append(f"index: {render_extended(index(c))}")
        records.append(("index", render_extended(index(c))))
    else:
        canonical = render_classification(classify_series(c, CANONICAL))
        parts.append(f"canonical: {canonical}")
        records.append(("canonical", canonical))
    if args.partition:
        classification = render_classification(classify_series(c, load_partition(args.partition)))
        parts.append(f"partition: {classification}")
        records.append(("partition", classification))
    return Report(["; ".join(parts)], records)


@timer_decorator
def cmd_extend(args) -> Report:
    c = load_map(args.map)
    a = parse_set(args.set)
    if args.r is None:
        text = render_extended(nu(c, a))
        return Report([text], [("value", text)])
    r = parse_extended(args.r)
    text = render_extended(r_extension(c, r, a))
    additive = countably_additive(c, r)
    note = f"countably-additive: {_yes_no(additive)}"
    line = f"{text} ({note})" if additive else f"{text} (finitely additive only; {note})"
    return Report([line], [("value", text), ("countably_additive", _yes_no(additive))])


@timer_decorator
def cmd_partition_validate(args) -> Report:
    partition = load_partition(args.partition)
    report = Report(
        [f"valid: yes; basis: {_yes_no(partition.is_basis)}; exceptional: {len(partition.exceptional)}"],
        [("valid", "yes"), ("basis", _yes_no(partition.is_basis)),
         ("exceptional", str(len(partition.exceptional)))],
    )
    for i, (base, parts) in enumerate(partition.exceptional.items(), start=1):
        report.lines.append(f"{base}: " + " | ".join(str(part) for part in parts))
        report.records.append((f"parts.{i}", f"{base}:{len(parts)}"))
    return report


@timer_decorator
def cmd_partition_refine(args) -> Report:
    gamma, delta = load_partition(args.gamma), load_partition(args.delta)
    refinement = is_refinement(gamma, delta)
    report = Report([f"refinement: {_yes_no(refinement.holds)}"], [("refinement", _yes_no(refinement.holds))])
    for i, ((base, k), group) in enumerate(sorted(refinement.groups.items()), start=1):
        report.lines.append(f"{base} part {k + 1}: {len(group)} parts")
        report.records.append((f"group.{i}", f"{base}:{k + 1}:{len(group)}"))
    return report


@timer_decorator
def cmd_partition_prefix_check(args) -> Report:
    c = load_map(args.map)
    gamma, delta = load_partition(args.gamma), load_partition(args.delta)
    order = [parse_rational_place(base) for base in args.order.split(",")] if args.order else None
    holds = refine_prefix_check(c, gamma, delta, args.n, order)
    verdict = "pass" if holds else "fail"
    return Report([f"prefix-check: {verdict} (N={args.n})"], [("prefix_check", verdict), ("n", str(args.n))])


@timer_decorator
def cmd_map_validate(args) -> Report:
    c = load_map(args.map)
    bases = sorted(set(c.base.table) | c.overrides.exceptional | {INFINITY})
    failures, checked = [], 0
    for level in dict.fromkeys([Level(1), c.overrides.top]):
        for base in bases:
            for place in places_above(level, base):
                for k in args.multiples:
                    checked += 1
                    if not check_consistency(c, place, compositum(level, canonical_conductor(k))):
                        failures.append(place)
    if failures:
        logger.debug("fiber sums failed at %s", failures)
    ok = not failures
    line = f"valid: {_yes_no(ok)}; name: {c.name}; fibers checked: {checked}"
    report = Report([line], [("valid", _yes_no(ok)), ("name", c.name), ("checked", str(checked))])
    for i, place in enumerate(failures, start=1):
        report.lines.append(f"inconsistent at {place}")
        report.records.append((f"failure.{i}", str(place)))
    return report


def _parse_args(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="placemeasure",
        description="Consistent maps, charges and measures on the places of the cyclotomic tower.",
    )
    parser.add_argument("--format", choices=["plain", "records"], default="plain")
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    places = commands.add_parser("places", help="places of Q(zeta_n) above a rational place")
    places.add_argument("level")
    places.add_argument("base")
    places.set_defaults(handler=cmd_places)

    measure = commands.add_parser("measure", help="charge of a compact set")
    measure.add_argument("map")
    measure.add_argument("set")
    measure.set_defaults(handler=cmd_measure)

    integrate = commands.add_parser("integrate", help="Phi_c of an element")
    integrate.add_argument("map")
    integrate.add_argument("element")
    integrate.set_defaults(handler=cmd_integrate)

    global_ = commands.add_parser("global", help="global consistency and index")
    global_.add_argument("map")
    global_.add_argument("partition", nargs="?")
    global_.set_defaults(handler=cmd_global)

    extend = commands.add_parser("extend", help="value of the extension on a set of the algebra")
    extend.add_argument("map")
    extend.add_argument("set")
    extend.add_argument("--r", help="value assigned to Y (default: the index)")
    extend.set_defaults(handler=cmd_extend)

    partition = commands.add_parser("partition", help="partition files")
    partition_commands = partition.add_subparsers(dest="action", required=True)
    validate = partition_commands.add_parser("validate")
    validate.add_argument("partition")
    validate.set_defaults(handler=cmd_partition_validate)
    refine = partition_commands.add_parser("refine")
    refine.add_argument("gamma")
    refine.add_argument("delta")
    refine.set_defaults(handler=cmd_partition_refine)
    prefix = partition_commands.add_parser("prefix-check")
    prefix.add_argument("map")
    prefix.add_argument("gamma")
    prefix.add_argument("delta")
    prefix.add_argument("n", type=int)
    prefix.add_argument("--order", help="comma-separated rational places enumerated first")
    prefix.set_defaults(handler=cmd_partition_prefix_check)

    map_ = commands.add_parser("map", help="map files")
    map_commands = map_.add_subparsers(dest="action", required=True)
    map_validate = map_commands.add_parser("validate")
    map_validate.add_argument("map")
    map_validate.add_argument("--multiples", type=int, nargs="+", default=[3, 4, 5, 7])
    map_validate.set_defaults(handler=cmd_map_validate)
    return parser.parse_args(argv)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _parse_args(argv)
    logging.basicConfig(
        stream=sys.stderr,
        level=logging.DEBUG if args.verbose else LOG_LEVEL,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    try:
        report = args.handler(args)
    except ParseError as e:
        print(f"error: {e.describe()}", file=sys.stderr)
        return 2
    except PlaceMeasureError as e:
        print(f"error: {e.describe()}", file=sys.stderr)
        return 1
    print(report.render(args.format))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
