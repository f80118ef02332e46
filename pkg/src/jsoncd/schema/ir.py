"""Normalized schema representation.

Every subschema gets an integer node id. Keywords that hold subschemas store
ids instead of raw values, legacy draft spellings are rewritten to the
2020-12 vocabulary, and every internal ``$ref`` is resolved to a node id.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from typing import Any, Iterator, Optional
from urllib.parse import unquote, urljoin

from .. import jsonvalue

from ..errors import InvalidSchema, RefCycleTooDeep, UnresolvedExternalRef
from .document import DEFAULT_DRAFT, SchemaDocument, draft_from_uri

SINGLE_SCHEMA_KEYWORDS = (
    "additionalProperties",
    "additionalItems",
    "contains",
    "propertyNames",
    "not",
    "if",
    "then",
    "else",
    "unevaluatedItems",
    "unevaluatedProperties",
    "contentSchema",
)
LIST_SCHEMA_KEYWORDS = ("allOf", "anyOf", "oneOf", "prefixItems")
MAP_SCHEMA_KEYWORDS = ("properties", "patternProperties", "$defs", "definitions", "dependentSchemas")

ANNOTATION_KEYWORDS = frozenset(
    {
        "$schema",
        "$id",
        "id",
        "$anchor",
        "$dynamicAnchor",
        "$recursiveAnchor",
        "$comment",
        "$vocabulary",
        "title",
        "description",
        "default",
        "examples",
        "deprecated",
        "readOnly",
        "writeOnly",
        "contentMediaType",
        "contentEncoding",
        "contentSchema",
    }
)

ASSERTION_KEYWORDS = frozenset(
    {
        "type",
        "enum",
        "const",
        "multipleOf",
        "maximum",
        "exclusiveMaximum",
        "minimum",
        "exclusiveMinimum",
        "maxLength",
        "minLength",
        "pattern",
        "format",
        "maxItems",
        "minItems",
        "uniqueItems",
        "maxContains",
        "minContains",
        "maxProperties",
        "minProperties",
        "required",
        "dependentRequired",
        "$ref",
        "$dynamicRef",
        "$recursiveRef",
        "allOf",
        "anyOf",
        "oneOf",
        "not",
        "if",
        "then",
        "else",
        "dependentSchemas",
        "prefixItems",
        "items",
        "contains",
        "properties",
        "patternProperties",
        "additionalProperties",
        "propertyNames",
        "unevaluatedItems",
        "unevaluatedProperties",
        "$defs",
    }
)

KNOWN_KEYWORDS = ASSERTION_KEYWORDS | ANNOTATION_KEYWORDS | {"definitions", "dependencies", "additionalItems"}

ROOT_BASE = "jsoncd:///root.json"

Location = tuple  # path segments from the document root


@dataclass
class IRNode:
    id: int
    pointer: str
    boolean: Optional[bool] = None
    keywords: dict[str, Any] = field(default_factory=dict)
    unknown: tuple[str, ...] = ()

    def get(self, key: str, default: Any = None) -> Any:
        return self.keywords.get(key, default)


@dataclass
class SchemaIR:
    nodes: list[IRNode]
    root: int
    draft: str
    definitions: dict[str, int]
    cycles: frozenset[int]
    source_id: str = ""

    def node(self, node_id: int) -> IRNode:
        return self.nodes[node_id]

    def cycle_definitions(self) -> set[str]:
        """Names of ``$defs``/``definitions`` entries that sit on a reference cycle."""
        return {name for name, nid in self.definitions.items() if nid in self.cycles}

    def unknown_keywords(self) -> list[tuple[str, str]]:
        return [(n.pointer, k) for n in self.nodes for k in n.unknown]

    def children(self, node_id: int) -> Iterator[int]:
        """Subschema ids reachable in one step (applicators and $ref)."""
        return iter(_child_ids(self.nodes[node_id].keywords))


def _child_ids(kw: dict[str, Any]) -> list[int]:
    out: list[int] = []
    for key, value in kw.items():
        if key in ("$defs",):
            continue
        if key in SINGLE_SCHEMA_KEYWORDS or key in ("items", "$ref"):
            if isinstance(value, int) and not isinstance(value, bool):
                out.append(value)
        elif key in LIST_SCHEMA_KEYWORDS:
            out.extend(value)
        elif key in ("properties", "patternProperties", "dependentSchemas"):
            out.extend(value.values())
    return out


def _escape(token: str) -> str:
    return token.replace("~", "~0").replace("/", "~1")


def _pointer(loc: Location) -> str:
    return "#" + "".join("/" + _escape(str(t)) for t in loc)


METASCHEMA_PREFIX = "https://json-schema.org/draft/2020-12/"


@lru_cache(maxsize=None)
def _bundled_raw(name: str) -> Optional[str]:
    path = resources.files("jsoncd.data").joinpath(f"metaschemas/{name}.json")
    return path.read_text("utf-8") if path.is_file() else None


def bundled_metaschema(uri: str) -> Any:
    """The vendored 2020-12 metaschema documents, resolved without network."""
    if not uri.startswith(METASCHEMA_PREFIX):
        return None
    name = uri[len(METASCHEMA_PREFIX) :].replace("/", "-")
    text = _bundled_raw(name)
    return None if text is None else jsonvalue.loads(text)


def _defrag(uri: str) -> tuple[str, str]:
    # urllib's urldefrag rewrites "scheme:///path" as "scheme:/path"
    head, _, frag = uri.partition("#")
    return head, frag


def _join(base: str, ref: str) -> str:
    # urljoin ignores fragment-only references against non-hierarchical bases (urn:)
    if ref.startswith("#"):
        return _defrag(base)[0] + ref
    return urljoin(base, ref)


def _is_schema(value: Any) -> bool:
    return isinstance(value, (dict, bool))


class _Normalizer:
    def __init__(self, doc: SchemaDocument) -> None:
        self.doc = doc
        self.draft = doc.declared_draft or DEFAULT_DRAFT
        self.legacy = self.draft in ("draft-03", "draft-04", "draft-06", "draft-07")
        self.nodes: list[IRNode] = []
        self.by_loc: dict[Location, int] = {}
        self.raw_by_loc: dict[Location, Any] = {}
        self.base_by_loc: dict[Location, str] = {}
        self.resources: dict[str, Location] = {}
        self.anchors: dict[str, Location] = {}
        self.pending_refs: list[tuple[int, str, str]] = []

    # -- discovery ---------------------------------------------------------
    def discover(self, value: Any, loc: Location, base: str) -> None:
        if loc in self.raw_by_loc:
            return
        self.raw_by_loc[loc] = value
        if isinstance(value, dict):
            id_key = "id" if self.draft in ("draft-03", "draft-04") else "$id"
            own_id = value.get(id_key)
            if isinstance(own_id, str) and not ("$ref" in value and self.legacy):
                target = _join(base, own_id)
                uri, frag = _defrag(target)
                if frag and not frag.startswith("/"):
                    # draft-06/07 plain-name fragment identifiers
                    self.anchors[target] = loc
                    if uri and uri != _defrag(base)[0]:
                        base = uri
                        self.resources.setdefault(uri, loc)
                else:
                    base = uri
                    self.resources.setdefault(uri, loc)
            anchor = value.get("$anchor")
            if isinstance(anchor, str):
                self.anchors[_join(base, "#" + anchor)] = loc
            dyn = value.get("$dynamicAnchor")
            if isinstance(dyn, str):
                self.anchors.setdefault(_join(base, "#" + dyn), loc)
        self.base_by_loc[loc] = base
        if not isinstance(value, dict):
            return
        for key, sub in value.items():
            if key in SINGLE_SCHEMA_KEYWORDS and _is_schema(sub):
                self.discover(sub, loc + (key,), base)
            elif key == "items":
                if _is_schema(sub):
                    self.discover(sub, loc + (key,), base)
                elif isinstance(sub, list):
                    for i, s in enumerate(sub):
                        if _is_schema(s):
                            self.discover(s, loc + (key, i), base)
            elif key in LIST_SCHEMA_KEYWORDS and isinstance(sub, list):
                for i, s in enumerate(sub):
                    if _is_schema(s):
                        self.discover(s, loc + (key, i), base)
            elif (key in MAP_SCHEMA_KEYWORDS or key == "dependencies") and isinstance(sub, dict):
                for name, s in sub.items():
                    if _is_schema(s):
                        self.discover(s, loc + (key, name), base)

    # -- node construction -------------------------------------------------
    def node_id(self, loc: Location) -> int:
        nid = self.by_loc.get(loc)
        if nid is not None:
            return nid
        nid = len(self.nodes)
        self.by_loc[loc] = nid
        node = IRNode(nid, _pointer(loc))
        self.nodes.append(node)
        self._fill(node, self.raw_by_loc[loc], loc)
        return nid

    def _child(self, loc: Location) -> int:
        return self.node_id(loc)

    def _fill(self, node: IRNode, raw: Any, loc: Location) -> None:
        if isinstance(raw, bool):
            node.boolean = raw
            return
        if not isinstance(raw, dict):
            raise InvalidSchema(f"{node.pointer}: schema must be an object or boolean")
        kw: dict[str, Any] = {}
        unknown: list[str] = []
        base = self.base_by_loc[loc]
        if "$ref" in raw and self.legacy:
            ref = raw["$ref"]
            if not isinstance(ref, str):
                raise InvalidSchema(f"{node.pointer}: $ref must be a string")
            self.pending_refs.append((node.id, base, ref))
            kw["$ref"] = None
            node.keywords = kw
            return
        for key, value in raw.items():
            if key == "$ref":
                if not isinstance(value, str):
                    raise InvalidSchema(f"{node.pointer}: $ref must be a string")
                self.pending_refs.append((node.id, base, value))
                kw["$ref"] = None
            elif key in SINGLE_SCHEMA_KEYWORDS:
                if key == "additionalItems":
                    continue
                if not _is_schema(value):
                    raise InvalidSchema(f"{node.pointer}/{key}: expected a schema")
                kw[key] = self._child(loc + (key,))
            elif key == "items":
                if isinstance(value, list):
                    if self.draft == "2020-12" and self.doc.declared_draft is not None:
                        raise InvalidSchema(f"{node.pointer}/items: array form is not 2020-12")
                    kw["prefixItems"] = [self._child(loc + (key, i)) for i in range(len(value))]
                    extra = raw.get("additionalItems")
                    if _is_schema(extra):
                        kw["items"] = self._child(loc + ("additionalItems",))
                elif _is_schema(value):
                    kw["items"] = self._child(loc + (key,))
                else:
                    raise InvalidSchema(f"{node.pointer}/items: expected a schema")
            elif key in LIST_SCHEMA_KEYWORDS:
                if not isinstance(value, list) or not all(_is_schema(v) for v in value):
                    raise InvalidSchema(f"{node.pointer}/{key}: expected an array of schemas")
                if key != "prefixItems" and not value:
                    raise InvalidSchema(f"{node.pointer}/{key}: must not be empty")
                kw[key] = [self._child(loc + (key, i)) for i in range(len(value))]
            elif key in ("$defs", "definitions"):
                if not isinstance(value, dict):
                    raise InvalidSchema(f"{node.pointer}/{key}: expected an object")
                defs = kw.setdefault("$defs", {})
                for name in value:
                    defs[name] = self._child(loc + (key, name))
            elif key in ("properties", "patternProperties", "dependentSchemas"):
                if not isinstance(value, dict) or not all(_is_schema(v) for v in value.values()):
                    raise InvalidSchema(f"{node.pointer}/{key}: expected an object of schemas")
                kw[key] = {name: self._child(loc + (key, name)) for name in value}
            elif key == "dependencies":
                if not isinstance(value, dict):
                    raise InvalidSchema(f"{node.pointer}/dependencies: expected an object")
                for name, dep in value.items():
                    if isinstance(dep, list):
                        kw.setdefault("dependentRequired", {})[name] = list(dep)
                    elif _is_schema(dep):
                        kw.setdefault("dependentSchemas", {})[name] = self._child(loc + (key, name))
                    else:
                        raise InvalidSchema(f"{node.pointer}/dependencies/{name}: bad value")
            elif key == "type":
                types = [value] if isinstance(value, str) else value
                if not isinstance(types, list) or not types or not all(isinstance(t, str) for t in types):
                    raise InvalidSchema(f"{node.pointer}/type: expected a type name or array of names")
                if "any" in types:
                    continue
                kw["type"] = tuple(types)
            elif key in ("exclusiveMinimum", "exclusiveMaximum") and isinstance(value, bool):
                # draft-04 boolean modifiers
                bound = "minimum" if key == "exclusiveMinimum" else "maximum"
                if value and bound in raw:
                    kw[key] = raw[bound]
                    kw["__drop_" + bound] = True
            elif key == "id" and self.draft in ("draft-03", "draft-04"):
                kw["$id"] = value
            elif key in KNOWN_KEYWORDS:
                kw[key] = value
            else:
                unknown.append(key)
        for bound in ("minimum", "maximum"):
            if kw.pop("__drop_" + bound, False):
                kw.pop(bound, None)
        node.keywords = kw
        node.unknown = tuple(unknown)

    # -- reference resolution ----------------------------------------------
    def resolve(self, base: str, ref: str) -> int:
        target = _join(base, ref)
        uri, frag = _defrag(target)
        if target in self.anchors:
            return self.node_id(self.anchors[target])
        if uri not in self.resources:
            bundled = bundled_metaschema(uri)
            if bundled is None:
                raise UnresolvedExternalRef(target)
            loc0: Location = ("$bundled", uri)
            self.discover(bundled, loc0, uri)
            self.resources.setdefault(uri, loc0)
        res_loc = self.resources[uri]
        if not frag:
            return self.node_id(res_loc)
        if not frag.startswith("/"):
            raise InvalidSchema(f"unknown anchor in reference {ref!r}")
        tokens = [unquote(t).replace("~1", "/").replace("~0", "~") for t in frag.split("/")[1:]]
        loc: Location = res_loc
        value = self.raw_by_loc[res_loc]
        for tok in tokens:
            if isinstance(value, dict) and tok in value:
                value = value[tok]
                loc = loc + (tok,)
            elif isinstance(value, list) and tok.isdigit() and int(tok) < len(value):
                value = value[int(tok)]
                loc = loc + (int(tok),)
            else:
                raise InvalidSchema(f"dangling reference {ref!r}")
        if loc not in self.raw_by_loc:
            if not _is_schema(value):
                raise InvalidSchema(f"reference {ref!r} does not point at a schema")
            self.discover(value, loc, self.base_by_loc.get(res_loc, base))
        return self.node_id(loc)

    def run(self) -> SchemaIR:
        root_base = ROOT_BASE
        self.resources[root_base] = ()
        self.discover(self.doc.raw, (), root_base)
        root = self.node_id(())
        while self.pending_refs:
            nid, base, ref = self.pending_refs.pop(0)
            self.nodes[nid].keywords["$ref"] = self.resolve(base, ref)
        definitions: dict[str, int] = {}
        for node in self.nodes:
            for name, child in node.keywords.get("$defs", {}).items():
                definitions.setdefault(name, child)
        cycles = _cyclic_nodes(self.nodes)
        _check_ref_only_cycles(self.nodes)
        return SchemaIR(self.nodes, root, self.draft, definitions, cycles, self.doc.source_id)


def _cyclic_nodes(nodes: list[IRNode]) -> frozenset[int]:
    """Nodes that lie on some cycle of the child+reference graph (Tarjan)."""
    index: dict[int, int] = {}
    low: dict[int, int] = {}
    on_stack: set[int] = set()
    stack: list[int] = []
    cyclic: set[int] = set()
    counter = 0
    adj = [_child_ids(n.keywords) for n in nodes]
    for start in range(len(nodes)):
        if start in index:
            continue
        work = [(start, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack.add(v)
            if i < len(adj[v]):
                work.append((v, i + 1))
                w = adj[v][i]
                if w not in index:
                    work.append((w, 0))
                elif w in on_stack:
                    low[v] = min(low[v], index[w])
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.append(w)
                    if w == v:
                        break
                if len(comp) > 1 or v in adj[v]:
                    cyclic.update(comp)
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return frozenset(cyclic)


def _check_ref_only_cycles(nodes: list[IRNode]) -> None:
    for start in nodes:
        seen = set()
        cur = start
        while "$ref" in cur.keywords and len(cur.keywords) == 1:
            if cur.id in seen:
                raise RefCycleTooDeep(f"{start.pointer}: reference chain never reaches a schema")
            seen.add(cur.id)
            cur = nodes[cur.keywords["$ref"]]


def normalize(doc: SchemaDocument) -> SchemaIR:
    """Build the IR for a parsed document, resolving internal references."""
    return _Normalizer(doc).run()
