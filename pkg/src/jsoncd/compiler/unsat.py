"""Best-effort syntactic detection of schemas with no valid instance.

A ``True`` answer is always backed by a contradiction; ``False`` means
"unknown".
"""

from __future__ import annotations

import math

from ..jsonvalue import canonical_key, is_number, json_type, to_fraction
from ..schema.ir import SchemaIR

_ALL = frozenset({"null", "boolean", "integer", "number", "string", "array", "object"})


def _kinds(types) -> set[str]:
    out = set(types)
    if "number" in out:
        out.add("integer")
    return out


def _conjunction(ir: SchemaIR, nid: int, seen: set[int], out: list) -> bool:
    """Collect nodes that must all hold; returns True on a ``false`` member."""
    node = ir.nodes[nid]
    if node.boolean is False:
        return True
    if node.boolean is True or nid in seen:
        return False
    seen.add(nid)
    out.append(node)
    kw = node.keywords
    subs = list(kw.get("allOf", ()))
    if "$ref" in kw:
        subs.append(kw["$ref"])
    return any(_conjunction(ir, s, seen, out) for s in subs)


def detect_unsatisfiable(ir: SchemaIR) -> bool:
    return _unsat(ir, ir.root, frozenset())


def _unsat(ir: SchemaIR, nid: int, stack: frozenset[int]) -> bool:
    if nid in stack:
        return False
    nodes: list = []
    if _conjunction(ir, nid, set(), nodes):
        return True
    stack = stack | {nid}
    kinds = set(_ALL)
    values = None
    for node in nodes:
        kw = node.keywords
        if "type" in kw:
            kinds &= _kinds(kw["type"])
        for app in ("anyOf", "oneOf"):
            if app in kw and all(_unsat(ir, b, stack) for b in kw[app]):
                return True
        for key in ("const", "enum"):
            if key in kw:
                vals = [kw["const"]] if key == "const" else list(kw["enum"])
                keyed = {canonical_key(v): v for v in vals}
                values = keyed if values is None else {k: v for k, v in values.items() if k in keyed}
    if not kinds:
        return True
    if values is not None:
        return not any(json_type(v) in kinds for v in values.values())
    if kinds <= {"integer", "number"} and _number_empty(nodes, "number" not in kinds):
        return True
    if kinds == {"string"} and _range_empty(nodes, "minLength", "maxLength"):
        return True
    if kinds == {"array"} and _range_empty(nodes, "minItems", "maxItems"):
        return True
    if kinds == {"object"}:
        if _range_empty(nodes, "minProperties", "maxProperties"):
            return True
        required = set()
        for node in nodes:
            required.update(node.keywords.get("required", ()))
        for node in nodes:
            kw = node.keywords
            if "maxProperties" in kw and len(required) > kw["maxProperties"]:
                return True
            for name in required:
                sub = kw.get("properties", {}).get(name)
                if sub is not None and ir.nodes[sub].boolean is False:
                    return True
    return False


def _range_empty(nodes, lo_key: str, hi_key: str) -> bool:
    lo = max((n.keywords[lo_key] for n in nodes if lo_key in n.keywords), default=0)
    his = [n.keywords[hi_key] for n in nodes if hi_key in n.keywords]
    return bool(his) and lo > min(his)


def _number_empty(nodes, integer: bool) -> bool:
    lo = hi = None
    lo_open = hi_open = False
    for node in nodes:
        kw = node.keywords
        for key, is_open in (("minimum", False), ("exclusiveMinimum", True)):
            if key in kw and is_number(kw[key]):
                v = to_fraction(kw[key])
                if lo is None or v > lo or (v == lo and is_open):
                    lo, lo_open = v, is_open
        for key, is_open in (("maximum", False), ("exclusiveMaximum", True)):
            if key in kw and is_number(kw[key]):
                v = to_fraction(kw[key])
                if hi is None or v < hi or (v == hi and is_open):
                    hi, hi_open = v, is_open
    if lo is None or hi is None:
        return False
    if integer:
        a = math.floor(lo) + 1 if lo_open else math.ceil(lo)
        b = math.ceil(hi) - 1 if hi_open else math.floor(hi)
        return a > b
    return lo > hi or (lo == hi and (lo_open or hi_open))

