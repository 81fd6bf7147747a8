"""JSON wire formats.

Rationals travel as strings ``"p/q"`` (integers as ``"p"``), always in lowest
terms, so a read-write cycle reproduces the input byte for byte.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from math import gcd
from pathlib import Path

from pseudomarket import errors
from pseudomarket.model import FractionalAssignment, Instance, validate_instance

_RATIONAL = re.compile(r"^(-?\d+)(?:/(\d+))?$")


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def parse_rational(value) -> Fraction:
    """Parse a wire rational: a JSON integer or a lowest-terms ``"p/q"`` string."""
    if isinstance(value, bool) or isinstance(value, float):
        raise errors.ValidationError(f"{value!r} is not an exact rational")
    if isinstance(value, int):
        return Fraction(value)
    if not isinstance(value, str):
        raise errors.ValidationError(f"{value!r} is not a rational")
    match = _RATIONAL.match(value.strip())
    if not match:
        raise errors.ValidationError(f"cannot parse rational {value!r}")
    num = int(match.group(1))
    if match.group(2) is None:
        return Fraction(num)
    den = int(match.group(2))
    if den == 0:
        raise errors.ValidationError(f"zero denominator in {value!r}")
    if den == 1 or gcd(num, den) != 1:
        raise errors.ValidationError(f"{value!r} is not in lowest terms")
    return Fraction(num, den)


def matrix_to_json(rows) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in rows]


def vector_to_json(values) -> list[str]:
    return [format_rational(v) for v in values]


def matrix_from_json(rows) -> list[list[Fraction]]:
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise errors.NonRectangular("matrix must be a list of lists")
    return [[parse_rational(v) for v in row] for row in rows]


def instance_to_json(inst: Instance) -> dict:
    return {"agents": inst.n, "items": inst.m, "utilities": matrix_to_json(inst.u)}


def instance_from_json(data) -> Instance:
    if not isinstance(data, dict) or "utilities" not in data:
        raise errors.ValidationError("instance JSON needs a 'utilities' field")
    rows = matrix_from_json(data["utilities"])
    inst = validate_instance(rows)
    if data.get("agents", inst.n) != inst.n or data.get("items", inst.m) != inst.m:
        raise errors.DimensionMismatch(
            f"declared {data.get('agents')}x{data.get('items')}, matrix is {inst.n}x{inst.m}"
        )
    return inst


def assignment_to_json(x: FractionalAssignment) -> dict:
    return {"agents": x.n, "items": x.m, "assignment": matrix_to_json(x.x)}


def assignment_from_json(data) -> FractionalAssignment:
    if isinstance(data, list):
        rows = data
    elif isinstance(data, dict) and "assignment" in data:
        rows = data["assignment"]
    else:
        raise errors.ValidationError("assignment JSON needs an 'assignment' field")
    return FractionalAssignment(matrix_from_json(rows))


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def read_json(path) -> object:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise errors.ValidationError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise errors.ValidationError(f"{path}: invalid JSON ({exc.msg})") from exc


def load_instance(path) -> Instance:
    return instance_from_json(read_json(path))


def load_assignment(path) -> FractionalAssignment:
    return assignment_from_json(read_json(path))
