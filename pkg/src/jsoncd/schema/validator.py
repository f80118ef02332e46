"""Native JSON Schema (2020-12 vocabulary) validator over :class:`SchemaIR`.

Used as the compliance oracle. Formats listed in :mod:`.formats` are
asserted; other format values are annotations.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from .. import jsonvalue
from ..errors import UnsupportedKeyword
from ..jsonvalue import is_number, json_equal, json_type
from . import formats, patterns
from .ir import SchemaIR

UNSUPPORTED = ("$dynamicRef", "$recursiveRef", "unevaluatedItems", "unevaluatedProperties")


@dataclass
class ValidationOutcome:
    valid: bool
    violations: list[tuple[str, str, str]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def _path_str(path: tuple) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in path)


def check_supported(ir: SchemaIR) -> None:
    for node in ir.nodes:
        for key in UNSUPPORTED:
            if key in node.keywords:
                raise UnsupportedKeyword(key)


def validate_instance(ir: SchemaIR, instance: Any) -> ValidationOutcome:
    check_supported(ir)
    out: list[tuple[str, str, str]] = []
    _Validator(ir).check(ir.root, instance, (), out)
    return ValidationOutcome(not out, out)


def is_valid(ir: SchemaIR, instance: Any) -> bool:
    return validate_instance(ir, instance).valid


class _Validator:
    def __init__(self, ir: SchemaIR) -> None:
        self.ir = ir
        self.active: set[tuple[int, tuple]] = set()

    def ok(self, node_id: int, inst: Any, path: tuple) -> bool:
        scratch: list = []
        self.check(node_id, inst, path, scratch)
        return not scratch

    def check(self, node_id: int, inst: Any, path: tuple, out: list) -> None:
        node = self.ir.nodes[node_id]
        if node.boolean is not None:
            if not node.boolean:
                out.append((_path_str(path), "false", "false schema rejects everything"))
            return
        key = (node_id, path)
        if key in self.active:
            # re-entered the same schema at the same location without consuming input
            out.append((_path_str(path), "$ref", "reference cycle without progress"))
            return
        self.active.add(key)
        try:
            self._check_keywords(node.keywords, inst, path, out)
        finally:
            self.active.discard(key)

    def _fail(self, out: list, path: tuple, kw: str, msg: str) -> None:
        out.append((_path_str(path), kw, msg))

    def _check_keywords(self, kw: dict, inst: Any, path: tuple, out: list) -> None:
        itype = json_type(inst)
        if "$ref" in kw:
            self.check(kw["$ref"], inst, path, out)
        if "type" in kw:
            types = kw["type"]
            if not (itype in types or (itype == "integer" and "number" in types)):
                self._fail(out, path, "type", f"{itype} is not one of {list(types)}")
        if "enum" in kw:
            if not any(json_equal(inst, v) for v in kw["enum"]):
                self._fail(out, path, "enum", "value is not in enum")
        if "const" in kw:
            if not json_equal(inst, kw["const"]):
                self._fail(out, path, "const", "value differs from const")
        if is_number(inst):
            self._check_number(kw, inst, path, out)
        elif isinstance(inst, str):
            self._check_string(kw, inst, path, out)
        elif isinstance(inst, list):
            self._check_array(kw, inst, path, out)
        elif isinstance(inst, dict):
            self._check_object(kw, inst, path, out)
        for sub in kw.get("allOf", ()):
            self.check(sub, inst, path, out)
        if "anyOf" in kw:
            if not any(self.ok(sub, inst, path) for sub in kw["anyOf"]):
                self._fail(out, path, "anyOf", "no alternative matches")
        if "oneOf" in kw:
            n = sum(1 for sub in kw["oneOf"] if self.ok(sub, inst, path))
            if n != 1:
                self._fail(out, path, "oneOf", f"{n} alternatives match, expected exactly one")
        if "not" in kw:
            if self.ok(kw["not"], inst, path):
                self._fail(out, path, "not", "value matches the negated schema")
        if "if" in kw:
            if self.ok(kw["if"], inst, path):
                if "then" in kw:
                    self.check(kw["then"], inst, path, out)
            elif "else" in kw:
                self.check(kw["else"], inst, path, out)

    def _check_number(self, kw: dict, inst: Any, path: tuple, out: list) -> None:
        # int, Decimal and float compare exactly with each other
        v = inst
        if "multipleOf" in kw:
            m = kw["multipleOf"]
            if is_number(m) and m > 0 and not jsonvalue.is_multiple(v, m):
                self._fail(out, path, "multipleOf", f"not a multiple of {kw['multipleOf']}")
        if "maximum" in kw and is_number(kw["maximum"]) and v > kw["maximum"]:
            self._fail(out, path, "maximum", "value above maximum")
        if "exclusiveMaximum" in kw and is_number(kw["exclusiveMaximum"]) and v >= kw["exclusiveMaximum"]:
            self._fail(out, path, "exclusiveMaximum", "value not below exclusiveMaximum")
        if "minimum" in kw and is_number(kw["minimum"]) and v < kw["minimum"]:
            self._fail(out, path, "minimum", "value below minimum")
        if "exclusiveMinimum" in kw and is_number(kw["exclusiveMinimum"]) and v <= kw["exclusiveMinimum"]:
            self._fail(out, path, "exclusiveMinimum", "value not above exclusiveMinimum")

    def _check_string(self, kw: dict, inst: str, path: tuple, out: list) -> None:
        n = len(inst)
        if "maxLength" in kw and n > kw["maxLength"]:
            self._fail(out, path, "maxLength", "string too long")
        if "minLength" in kw and n < kw["minLength"]:
            self._fail(out, path, "minLength", "string too short")
        if "pattern" in kw and not patterns.search(kw["pattern"], inst):
            self._fail(out, path, "pattern", f"does not match {kw['pattern']!r}")
        fmt = kw.get("format")
        if formats.is_asserted(fmt) and not formats.check(fmt, inst):
            self._fail(out, path, "format", f"not a valid {fmt}")

    def _check_array(self, kw: dict, inst: list, path: tuple, out: list) -> None:
        n = len(inst)
        if "maxItems" in kw and n > kw["maxItems"]:
            self._fail(out, path, "maxItems", "too many items")
        if "minItems" in kw and n < kw["minItems"]:
            self._fail(out, path, "minItems", "too few items")
        prefix = kw.get("prefixItems", ())
        for i, sub in enumerate(prefix[:n]):
            self.check(sub, inst[i], path + (i,), out)
        if "items" in kw:
            for i in range(len(prefix), n):
                self.check(kw["items"], inst[i], path + (i,), out)
        if "contains" in kw:
            hits = sum(1 for i, item in enumerate(inst) if self.ok(kw["contains"], item, path + (i,)))
            lo = kw.get("minContains", 1)
            if hits < lo:
                self._fail(out, path, "contains", f"{hits} items match contains, need {lo}")
            if "maxContains" in kw and hits > kw["maxContains"]:
                self._fail(out, path, "maxContains", f"{hits} items match contains")
        if kw.get("uniqueItems") is True:
            keys = [jsonvalue.canonical_key(item) for item in inst]
            if len(set(keys)) != len(keys):
                self._fail(out, path, "uniqueItems", "items are not unique")

    def _check_object(self, kw: dict, inst: dict, path: tuple, out: list) -> None:
        n = len(inst)
        if "maxProperties" in kw and n > kw["maxProperties"]:
            self._fail(out, path, "maxProperties", "too many properties")
        if "minProperties" in kw and n < kw["minProperties"]:
            self._fail(out, path, "minProperties", "too few properties")
        for name in kw.get("required", ()):
            if name not in inst:
                self._fail(out, path, "required", f"missing property {name!r}")
        for name, deps in kw.get("dependentRequired", {}).items():
            if name in inst:
                for dep in deps:
                    if dep not in inst:
                        self._fail(out, path, "dependentRequired", f"{name!r} requires {dep!r}")
        for name, sub in kw.get("dependentSchemas", {}).items():
            if name in inst:
                self.check(sub, inst, path, out)
        props = kw.get("properties", {})
        pats = kw.get("patternProperties", {})
        extra = kw.get("additionalProperties")
        names = kw.get("propertyNames")
        for name, value in inst.items():
            matched = False
            if name in props:
                matched = True
                self.check(props[name], value, path + (name,), out)
            for pat, sub in pats.items():
                if patterns.search(pat, name):
                    matched = True
                    self.check(sub, value, path + (name,), out)
            if not matched and extra is not None:
                self.check(extra, value, path + (name,), out)
            if names is not None and not self.ok(names, name, path + (name,)):
                self._fail(out, path + (name,), "propertyNames", f"invalid property name {name!r}")
