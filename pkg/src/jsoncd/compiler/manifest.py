"""Keyword manifest: which keywords the compiler supports, and when.

The manifest is a JSON file mapping keyword names to ``"full"``, ``"none"``
or ``"partial:<condition>"``. Keywords it does not mention are treated as
annotations and always supported.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Callable, Optional

from ..jsonvalue import canonical_key
from ..schema.ir import IRNode, SchemaIR

FULL = "full"
NONE = "none"


def _integer_only(node: IRNode, ir: SchemaIR) -> bool:
    types = node.keywords.get("type")
    return types is not None and "number" not in types


def _kinds(types) -> set[str]:
    out = set(types)
    if "number" in out:
        out.add("integer")
    return out


def _values(node: IRNode) -> Optional[list[str]]:
    if "const" in node.keywords:
        return [canonical_key(node.keywords["const"])]
    if "enum" in node.keywords:
        return [canonical_key(v) for v in node.keywords["enum"]]
    return None


def _disjoint_branches(node: IRNode, ir: SchemaIR) -> bool:
    """True when at most one ``oneOf`` branch can match any instance, so the
    branches may be compiled as a plain union."""
    branches = [ir.nodes[b] for b in node.keywords["oneOf"]]
    kinds = []
    for b in branches:
        if b.boolean is not None or "type" not in b.keywords:
            break
        kinds.append(_kinds(b.keywords["type"]))
    else:
        if all(not (kinds[i] & kinds[j]) for i in range(len(kinds)) for j in range(i)):
            return True
    seen: set[str] = set()
    for b in branches:
        vals = None if b.boolean is not None else _values(b)
        if vals is None or seen.intersection(vals):
            return False
        seen.update(vals)
    return True


def _false_only(node: IRNode, ir: SchemaIR) -> bool:
    return node.keywords.get("uniqueItems") is False


def _without_contains(node: IRNode, ir: SchemaIR) -> bool:
    return "contains" not in node.keywords


def _without_if(node: IRNode, ir: SchemaIR) -> bool:
    return "if" not in node.keywords


CONDITIONS: dict[str, Callable[[IRNode, SchemaIR], bool]] = {
    "integer-only": _integer_only,
    "disjoint-branches": _disjoint_branches,
    "false-only": _false_only,
    "without-contains": _without_contains,
    "without-if": _without_if,
}


@dataclass(frozen=True)
class KeywordManifest:
    version: str
    levels: dict[str, str]

    def level(self, keyword: str) -> str:
        return self.levels.get(keyword, FULL)

    def allows(self, keyword: str, node: IRNode, ir: SchemaIR) -> bool:
        level = self.level(keyword)
        if level == FULL:
            return True
        if level == NONE:
            return False
        cond = level.split(":", 1)[1]
        return CONDITIONS[cond](node, ir)

    def with_levels(self, **overrides: str) -> "KeywordManifest":
        return KeywordManifest(self.version + "+", {**self.levels, **overrides})

    def to_json(self) -> str:
        return json.dumps({"version": self.version, "keywords": self.levels}, indent=2)


def parse_manifest(data: Any) -> KeywordManifest:
    if not isinstance(data, dict) or not isinstance(data.get("keywords"), dict):
        raise ValueError("manifest must be an object with a 'keywords' map")
    levels = {}
    for key, level in data["keywords"].items():
        if level not in (FULL, NONE) and not (
            isinstance(level, str) and level.startswith("partial:") and level[8:] in CONDITIONS
        ):
            raise ValueError(f"bad support level {level!r} for {key!r}")
        levels[key] = level
    return KeywordManifest(str(data.get("version", "")), levels)


def load_manifest(path: Optional[str | Path] = None) -> KeywordManifest:
    if path is None:
        text = resources.files("jsoncd.data").joinpath("manifest_v1.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_manifest(json.loads(text))


_DEFAULT: Optional[KeywordManifest] = None


def default_manifest() -> KeywordManifest:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_manifest()
    return _DEFAULT


def reachable_nodes(ir: SchemaIR) -> list[int]:
    seen = {ir.root}
    stack = [ir.root]
    while stack:
        for child in ir.children(stack.pop()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return sorted(seen)


def declared_covered(ir: SchemaIR, manifest: Optional[KeywordManifest] = None) -> tuple[bool, list[str]]:
    """Check every keyword occurrence reachable from the root.

    Returns (covered, offending paths) where paths look like
    ``/properties/a/uniqueItems``.
    """
    manifest = manifest or default_manifest()
    bad: list[str] = []
    for nid in reachable_nodes(ir):
        node = ir.nodes[nid]
        if node.boolean is not None:
            continue
        for key in node.keywords:
            if not manifest.allows(key, node, ir):
                bad.append(node.pointer.lstrip("#") + "/" + key.replace("~", "~0").replace("/", "~1"))
    return not bad, bad
