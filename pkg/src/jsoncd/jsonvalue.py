"""JSON values as plain Python objects.

Numbers with a fraction or exponent are kept as :class:`decimal.Decimal` so
comparisons are exact; integers stay ``int``. Objects are ``dict`` (insertion
ordered), arrays are ``list``.
"""

from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from typing import Any, Union

from .errors import MalformedJson

JsonValue = Union[None, bool, int, Decimal, str, list, dict]

_ENCODE_STR = json.JSONEncoder(ensure_ascii=False).encode


def _reject_constant(name: str) -> Any:
    raise ValueError(f"non-standard constant {name}")


def loads(text: str | bytes) -> JsonValue:
    """Parse JSON text, raising :class:`MalformedJson` with a byte offset."""
    if isinstance(text, (bytes, bytearray)):
        raw = bytes(text)
        try:
            text = raw.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedJson("invalid utf-8", exc.start) from None
    try:
        return json.loads(text, parse_float=Decimal, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        offset = len(text[: exc.pos].encode("utf-8", "surrogatepass"))
        raise MalformedJson(exc.msg, offset) from None
    except ValueError as exc:
        raise MalformedJson(str(exc), 0) from None


def dumps(value: JsonValue) -> str:
    """Canonical compact serialization: no whitespace, keys in stored order."""
    parts: list[str] = []
    _dump(value, parts)
    return "".join(parts)


def dumps_bytes(value: JsonValue) -> bytes:
    return dumps(value).encode("utf-8")


def _dump(v: JsonValue, out: list[str]) -> None:
    if v is None:
        out.append("null")
    elif v is True:
        out.append("true")
    elif v is False:
        out.append("false")
    elif isinstance(v, int):
        out.append(str(v))
    elif isinstance(v, Decimal):
        out.append(format_decimal(v))
    elif isinstance(v, float):
        out.append(format_decimal(Decimal(repr(v))))
    elif isinstance(v, str):
        out.append(_ENCODE_STR(v))
    elif isinstance(v, list):
        out.append("[")
        for i, item in enumerate(v):
            if i:
                out.append(",")
            _dump(item, out)
        out.append("]")
    elif isinstance(v, dict):
        out.append("{")
        for i, (k, item) in enumerate(v.items()):
            if i:
                out.append(",")
            out.append(_ENCODE_STR(k))
            out.append(":")
            _dump(item, out)
        out.append("}")
    else:
        raise TypeError(f"not a JSON value: {type(v).__name__}")


def format_decimal(d: Decimal) -> str:
    if not d.is_finite():
        raise ValueError("JSON cannot represent non-finite numbers")
    s = str(d)
    # Decimal prints '1E+2'; both forms are legal JSON, lower-case reads better
    return s.replace("E", "e")


def json_type(v: JsonValue) -> str:
    """The JSON Schema type name of ``v`` ('integer' for integral numbers)."""
    if v is None:
        return "null"
    if isinstance(v, bool):
        return "boolean"
    if isinstance(v, int):
        return "integer"
    if isinstance(v, (Decimal, float)):
        return "integer" if is_integral(v) else "number"
    if isinstance(v, str):
        return "string"
    if isinstance(v, list):
        return "array"
    if isinstance(v, dict):
        return "object"
    raise TypeError(f"not a JSON value: {type(v).__name__}")


def is_number(v: Any) -> bool:
    return isinstance(v, (int, Decimal, float)) and not isinstance(v, bool)


def is_integral(v: Any) -> bool:
    if isinstance(v, bool):
        return False
    if isinstance(v, int):
        return True
    if isinstance(v, Decimal):
        return v.is_finite() and v == v.to_integral_value()
    if isinstance(v, float):
        return v.is_integer()
    return False


def to_fraction(v: int | Decimal | float) -> Fraction:
    return Fraction(v)


def _coeff_exp(v: int | Decimal | float) -> tuple[int, int]:
    """Exact (coefficient, exponent) with v = coefficient * 10**exponent."""
    if isinstance(v, int):
        return v, 0
    d = v if isinstance(v, Decimal) else Decimal(v)
    sign, digits, exp = d.as_tuple()
    c = int("".join(map(str, digits)) or "0")
    return (-c if sign else c), int(exp)


def is_multiple(v: int | Decimal | float, m: int | Decimal | float) -> bool:
    """Exact test that v / m is an integer (m > 0); cheap even when v has a
    huge exponent such as ``1e999999999``."""
    c, e = _coeff_exp(v)
    if c == 0:
        return True
    mf = Fraction(m)
    num, den = mf.numerator, mf.denominator
    if e >= 0:
        return c * den * pow(10, e, num) % num == 0
    x = c * den
    # num * 10**-e cannot divide a non-zero x smaller than 10**-e
    if -e > len(str(abs(x))):
        return False
    return x % (num * 10 ** -e) == 0


def json_equal(a: JsonValue, b: JsonValue) -> bool:
    """Equality under JSON Schema rules: 1 == 1.0, but true != 1."""
    if is_number(a) and is_number(b):
        return a == b
    if isinstance(a, bool) or isinstance(b, bool):
        return isinstance(a, bool) and isinstance(b, bool) and a is b
    if a is None or b is None:
        return a is None and b is None
    if isinstance(a, str) or isinstance(b, str):
        return isinstance(a, str) and isinstance(b, str) and a == b
    if isinstance(a, list) and isinstance(b, list):
        return len(a) == len(b) and all(json_equal(x, y) for x, y in zip(a, b))
    if isinstance(a, dict) and isinstance(b, dict):
        if a.keys() != b.keys():
            return False
        return all(json_equal(a[k], b[k]) for k in a)
    return False


def canonical_key(v: JsonValue) -> str:
    """A string that is equal for two values iff they are structurally equal
    ignoring object key order. Numbers are normalized by exact value."""
    parts: list[str] = []
    _canon(v, parts)
    return "".join(parts)


def _canon(v: JsonValue, out: list[str]) -> None:
    if is_number(v):
        c, e = _coeff_exp(v)
        while c and c % 10 == 0:
            c //= 10
            e += 1
        out.append(f"n{c}e{e if c else 0}")
    elif isinstance(v, list):
        out.append("[")
        for item in v:
            _canon(item, out)
            out.append(",")
        out.append("]")
    elif isinstance(v, dict):
        out.append("{")
        for k in sorted(v):
            out.append(_ENCODE_STR(k))
            out.append(":")
            _canon(v[k], out)
            out.append(",")
        out.append("}")
    else:
        _dump(v, out)
