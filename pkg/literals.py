"""
Text forms used on the command line and inside definition files.

place        ``n:p:rep`` with p a prime or ``inf``       e.g. ``7:2:3``
set          ``[place, ...]``, ``~[...]`` or ``Y``       e.g. ``~[1:2:0, 1:inf:0]``
value        ``q``, ``q/log(p)``, ``q*log(p) + ...``, or a decimal
extended     a value, ``+inf`` or ``-inf``
"""

import re
from fractions import Fraction

from decouple import config

from cyclotomic_tower import INFINITY, Level, Place, RationalPlace, make_place
from errors import ParseError
from global_measure import Classification, ExtendedValue, SeriesTag
from map_values import ExactRational, FloatValue, LogLinear, MapValue, RationalOverLog
from place_sets import EMPTY, WHOLE, ASet, Polarity, RSet, disjoint_decomposition

FLOAT_DIGITS = config("PLACEMEASURE_FLOAT_DIGITS", default=12, cast=int)

_INFINITY_WORDS = {"inf", "∞", "infinity"}
_OVER_LOG = re.compile(r"^([+-]?\d+(?:/\d+)?)\s*/\s*log\((\d+)\)$")
_LOG_TERM = re.compile(r"^(?:([+-]?\d+(?:/\d+)?)\s*\*\s*)?log\((\d+)\)$")
_RATIONAL = re.compile(r"^[+-]?\d+(?:/\d+)?$")
_DECIMAL = re.compile(r"^[+-]?(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?$")


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ParseError(f"bad rational {text!r}: {e}")


def parse_integer(text: str, what: str) -> int:
    try:
        return int(text.strip())
    except ValueError:
        raise ParseError(f"bad {what} {text!r}")


def parse_rational_place(text: str) -> RationalPlace:
    text = text.strip()
    if text.lower() in _INFINITY_WORDS:
        return INFINITY
    return RationalPlace(parse_integer(text, "rational place"))


def parse_level(text: str) -> Level:
    return Level(parse_integer(text, "level"))


def parse_place(text: str) -> Place:
    fields = text.strip().split(":")
    if len(fields) != 3:
        raise ParseError(f"place literal {text!r} is not of the form n:p:rep")
    level, base, rep = fields
    return make_place(parse_level(level), parse_rational_place(base), parse_integer(rep, "representative"))


def parse_set(text: str) -> ASet:
    text = text.strip()
    if text == "Y":
        return WHOLE
    polarity = Polarity.POSITIVE
    if text.startswith("~"):
        polarity, text = Polarity.COMPLEMENTED, text[1:].strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"set literal {text!r} must be Y or a bracketed list of places")
    body = text[1:-1].strip()
    core = disjoint_decomposition([parse_place(item) for item in body.split(",")]) if body else EMPTY
    return ASet(core, polarity)


def parse_ring_set(text: str) -> RSet:
    a = parse_set(text)
    if a.is_complemented:
        raise ParseError(f"{text!r} is not a compact set")
    return a.core


def _split_terms(text: str):
    # "a - b + c" -> ["a", "-b", "+c"]; signs inside a/b or exponents stay put
    terms, start = [], 0
    for i, ch in enumerate(text):
        if ch in "+-" and i > start and text[i - 1] not in "eE(" and text[:i].strip():
            terms.append(text[start:i])
            start = i
    terms.append(text[start:])
    return [t.replace(" ", "") for t in terms if t.strip()]


def parse_value(text: str) -> MapValue:
    text = text.strip()
    if not text:
        raise ParseError("empty value")
    if _RATIONAL.match(text):
        return ExactRational(parse_rational(text))
    match = _OVER_LOG.match(text.replace(" ", ""))
    if match:
        return RationalOverLog(parse_rational(match.group(1)), _prime(match.group(2)))
    if "log" in text:
        constant, coefficients = Fraction(0), {}
        for term in _split_terms(text):
            sign, body = (-1, term[1:]) if term.startswith("-") else (1, term.lstrip("+"))
            if _RATIONAL.match(body):
                constant += sign * parse_rational(body)
                continue
            match = _LOG_TERM.match(body)
            if not match:
                raise ParseError(f"bad log-linear term {term!r} in {text!r}")
            p = _prime(match.group(2))
            coefficients[p] = coefficients.get(p, Fraction(0)) + sign * parse_rational(match.group(1) or "1")
        return LogLinear.of(constant, coefficients)
    if _DECIMAL.match(text):
        return FloatValue(float(text))
    raise ParseError(f"bad value {text!r}")


def _prime(text: str) -> int:
    base = RationalPlace(parse_integer(text, "prime"))
    return base.prime


def parse_extended(text: str) -> ExtendedValue:
    text = text.strip()
    if text in ("+inf", "inf", "∞"):
        return ExtendedValue.plus_infinity()
    if text == "-inf":
        return ExtendedValue.minus_infinity()
    return ExtendedValue.finite(parse_value(text))


def render_float(x: float) -> str:
    return f"≈ {x:.{FLOAT_DIGITS}g}"


def render_value(value: MapValue) -> str:
    if isinstance(value, ExactRational):
        return str(value.q)
    if isinstance(value, RationalOverLog):
        return f"{value.q}/log({value.prime})"
    if isinstance(value, LogLinear):
        if value.is_zero():
            return "0"
        terms = [f"{q}*log({p})" for p, q in value.coefficients]
        if value.constant:
            terms.append(str(value.constant))
        return " + ".join(terms).replace("+ -", "- ")
    return render_float(value.to_float())


def render_extended(value: ExtendedValue) -> str:
    if value.tag is SeriesTag.PLUS_INFINITY:
        return "+inf"
    if value.tag is SeriesTag.MINUS_INFINITY:
        return "-inf"
    return render_value(value.value)


def render_classification(classification: Classification) -> str:
    if classification.tag is SeriesTag.FINITE:
        return f"finite {render_value(classification.value)}"
    if classification.tag is SeriesTag.CONDITIONAL:
        return "conditional"
    return render_extended(classification.to_extended())
