"""Lowering from :class:`SchemaIR` to a graph of value nodes.

A *choice* is the compiled form of a conjunction of IR nodes: a list of
alternative value nodes (``VNode``). Applicators that do not consume input
(``$ref``, ``allOf``, ``anyOf`` and union-compiled ``oneOf``) are expanded
away, so every ``VNode`` only carries local constraints per JSON kind plus
child choices for array items and object members.

Self-references that would re-enter a schema at the same instance location
contribute nothing (least fixpoint), which matches the validator.
"""

from __future__ import annotations

import math
import re
import time
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .. import jsonvalue
from ..jsonvalue import canonical_key, is_number
from ..schema import formats
from ..schema.ir import SchemaIR
from ..schema.validator import _Validator
from . import chardfa, regex
from .chardfa import CharDFA

ALL_KINDS = frozenset({"null", "boolean", "integer", "number", "string", "array", "object"})
MAX_ALTERNATIVES = 512

_NUMBER_RE = r"-?(0|[1-9][0-9]*)(\.[0-9]+)?([eE][+-]?[0-9]+)?"
_INTEGER_RE = r"-?(0|[1-9][0-9]*)"


class CompileLimit(Exception):
    """The schema is inside the manifest but too large to lower."""


class Deadline(Exception):
    pass


def number_dfa() -> CharDFA:
    return regex.compile_full(_NUMBER_RE)


def integer_dfa() -> CharDFA:
    return regex.compile_full(_INTEGER_RE)


@dataclass(frozen=True)
class NumberSpec:
    """Either a DFA over the number text, or exact integer bounds."""

    dfa: Optional[CharDFA] = None
    lo: Optional[int] = None
    hi: Optional[int] = None
    mult: int = 1


@dataclass
class ArraySpec:
    prefix: tuple[int, ...]
    rest: int
    min_items: int = 0
    max_items: Optional[int] = None
    # items beyond this count are impossible (unsatisfiable position)
    limit: Optional[int] = None

    def choice_at(self, i: int) -> int:
        return self.prefix[i] if i < len(self.prefix) else self.rest

    def cap(self) -> Optional[int]:
        caps = [c for c in (self.max_items, self.limit) if c is not None]
        return min(caps) if caps else None


@dataclass
class ObjectSpec:
    names: tuple[str, ...]
    name_choice: dict[str, int]
    other: CharDFA
    required: frozenset[str]
    deps: dict[str, frozenset[str]]
    min_props: int = 0
    max_props: Optional[int] = None
    # finalized after the satisfiability pass
    allowed: frozenset[str] = frozenset()
    other_finite: Optional[frozenset[str]] = None
    other_any: bool = False


@dataclass
class VNode:
    id: int
    origin: str
    null: bool = False
    true: bool = False
    false: bool = False
    number: Optional[NumberSpec] = None
    string: Optional[CharDFA] = None
    array: Optional[ArraySpec] = None
    obj: Optional[ObjectSpec] = None


@dataclass
class Lowered:
    vnodes: list[VNode]
    choices: list[tuple[int, ...]]
    root: int
    choice_keys: list[Any] = field(default_factory=list)


def _kinds(types) -> frozenset[str]:
    out = set(types)
    if "number" in out:
        out.add("integer")
    return frozenset(out) & ALL_KINDS


def _ceil(x: Fraction) -> int:
    return -((-x.numerator) // x.denominator)


def _floor(x: Fraction) -> int:
    return x.numerator // x.denominator


def int_has_multiple(lo: Optional[int], hi: Optional[int], m: int) -> bool:
    if lo is not None and hi is not None:
        if lo > hi:
            return False
        first = -((-lo) // m) * m
        return first <= hi
    return True


def decimal_text(q: Fraction) -> Optional[str]:
    """Shortest plain decimal text for ``q``, or None if it does not terminate."""
    d = q.denominator
    for f in (2, 5):
        while d % f == 0:
            d //= f
    if d != 1:
        return None
    scale = 0
    while (q * 10**scale).denominator != 1:
        scale += 1
    n = q * 10**scale
    digits = str(abs(n.numerator)).rjust(scale + 1, "0")
    sign = "-" if q < 0 else ""
    if scale == 0:
        return sign + digits
    return sign + digits[:-scale] + "." + digits[-scale:]


def number_literal_pattern(v: Any) -> Optional[str]:
    """Regex over number text accepting plain spellings of the value ``v``."""
    q = Fraction(v)
    text = decimal_text(q)
    if text is None:
        return None
    if q == 0:
        return r"-?0(\.0+)?"
    if q.denominator == 1:
        return re.escape(text).replace("\\-", "-") + r"(\.0+)?"
    return text.replace(".", r"\.") + "0*"


def string_part(alternatives: list[frozenset[int]], ir: SchemaIR, check=None) -> CharDFA:
    """Union of the string languages admitted by a list of alternatives."""
    parts = []
    for alt in alternatives:
        nodes = [ir.nodes[i] for i in sorted(alt)]
        kinds = ALL_KINDS
        for n in nodes:
            if "type" in n.keywords:
                kinds &= _kinds(n.keywords["type"])
        values = _exact_candidates(nodes)
        if values is not None:
            v = _Validator(ir)
            strs = [x for x in values if isinstance(x, str) and all(v.ok(n.id, x, ()) for n in nodes)]
            parts.append(chardfa.literal_set(strs))
        elif "string" in kinds:
            parts.append(_string_dfa(nodes, check))
    return chardfa.union_of(parts, check=check)


def _exact_candidates(nodes) -> Optional[list]:
    for n in nodes:
        if "const" in n.keywords:
            return [n.keywords["const"]]
    for n in nodes:
        if "enum" in n.keywords:
            return list(n.keywords["enum"])
    return None


_STRING_CACHE: dict[tuple, CharDFA] = {}


def _string_dfa(nodes, check=None) -> CharDFA:
    pats: set[str] = set()
    fmts: set[str] = set()
    lo = 0
    hi: Optional[int] = None
    for n in nodes:
        kw = n.keywords
        if isinstance(kw.get("pattern"), str):
            pats.add(kw["pattern"])
        if formats.is_asserted(kw.get("format")):
            fmts.add(kw["format"])
        if "minLength" in kw:
            lo = max(lo, int(kw["minLength"]))
        if "maxLength" in kw:
            m = int(kw["maxLength"])
            hi = m if hi is None else min(hi, m)
    key = (tuple(sorted(pats)), tuple(sorted(fmts)), lo, hi)
    hit = _STRING_CACHE.get(key)
    if hit is not None:
        return hit
    dfas = [regex.compile_search(p) for p in key[0]]
    dfas += [regex.compile_full(formats.FORMATS[f]) for f in key[1]]
    if not dfas and lo == 0 and hi is None:
        out = chardfa.ANY_STRING
    else:
        try:
            out = chardfa.product(dfas, lo, hi, check=check)
        except OverflowError:
            raise CompileLimit("string constraint automaton too large") from None
    if len(_STRING_CACHE) > 4096:
        _STRING_CACHE.clear()
    _STRING_CACHE[key] = out
    return out


class Lowering:
    def __init__(self, ir: SchemaIR, deadline: Optional[float] = None) -> None:
        self.ir = ir
        self.deadline = deadline
        self.cyclic = ir.cycles
        self.validator = _Validator(ir)
        self.vnodes: list[VNode] = []
        self.choices: list[tuple[int, ...]] = []
        self.choice_keys: list[Any] = []
        self.choice_ids: dict[Any, int] = {}
        self.alt_vnodes: dict[frozenset[int], tuple[int, ...]] = {}
        self.exact_vnodes: dict[str, int] = {}
        self.expand_memo: dict[tuple, list[frozenset[int]]] = {}
        self.work: deque = deque()
        self.raw_other: dict[int, CharDFA] = {}
        self._ticks = 0

    # -- deadline ----------------------------------------------------------
    def check(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise Deadline()

    # -- expansion of non-consuming applicators ----------------------------
    def expand(self, nid: int, anc: frozenset[int]) -> list[frozenset[int]]:
        node = self.ir.nodes[nid]
        if node.boolean is True:
            return [frozenset()]
        if node.boolean is False or nid in anc:
            return []
        key = (nid, anc & self.cyclic)
        hit = self.expand_memo.get(key)
        if hit is not None:
            return hit
        self._ticks += 1
        if self._ticks % 256 == 0:
            self.check()
        anc2 = anc | {nid}
        alts = [frozenset([nid])]
        kw = node.keywords
        if "$ref" in kw:
            alts = _cross(alts, self.expand(kw["$ref"], anc2))
        for sub in kw.get("allOf", ()):
            alts = _cross(alts, self.expand(sub, anc2))
        for app in ("anyOf", "oneOf"):
            if app in kw:
                union: list[frozenset[int]] = []
                for sub in kw[app]:
                    union.extend(self.expand(sub, anc2))
                alts = _cross(alts, _dedupe(union))
        self.expand_memo[key] = alts
        return alts

    def expand_set(self, conj: frozenset[int]) -> list[frozenset[int]]:
        alts = [frozenset()]
        for nid in sorted(conj):
            alts = _cross(alts, self.expand(nid, frozenset()))
            if not alts:
                break
        return alts

    # -- choices -----------------------------------------------------------
    def choice_for(self, conj: frozenset[int]) -> int:
        cid = self.choice_ids.get(conj)
        if cid is None:
            cid = len(self.choices)
            self.choice_ids[conj] = cid
            self.choices.append(())
            self.choice_keys.append(conj)
            self.work.append(cid)
        return cid

    def exact_choice(self, value: Any) -> int:
        key = ("exact", canonical_key(value))
        cid = self.choice_ids.get(key)
        if cid is None:
            cid = len(self.choices)
            self.choice_ids[key] = cid
            self.choice_keys.append(key)
            self.choices.append(())
            self.choices[cid] = tuple(self.exact_vnodes_for([value]))
        return cid

    def run(self) -> Lowered:
        root = self.choice_for(frozenset([self.ir.root]))
        while self.work:
            self.check()
            cid = self.work.popleft()
            conj = self.choice_keys[cid]
            out: list[int] = []
            for alt in self.expand_set(conj):
                for vid in self.vnodes_for_alt(alt):
                    if vid not in out:
                        out.append(vid)
            self.choices[cid] = tuple(out)
        self.finalize()
        return Lowered(self.vnodes, self.choices, root, self.choice_keys)

    # -- value nodes -------------------------------------------------------
    def _new(self, origin: str) -> VNode:
        v = VNode(len(self.vnodes), origin)
        self.vnodes.append(v)
        return v

    def vnodes_for_alt(self, alt: frozenset[int]) -> tuple[int, ...]:
        hit = self.alt_vnodes.get(alt)
        if hit is not None:
            return hit
        nodes = [self.ir.nodes[i] for i in sorted(alt)]
        values = _exact_candidates(nodes)
        if values is not None:
            keep = [x for x in values if all(self.validator.ok(n.id, x, ()) for n in nodes)]
            out = tuple(self.exact_vnodes_for(keep))
        else:
            out = (self.general_vnode(alt, nodes),)
        self.alt_vnodes[alt] = out
        return out

    def exact_vnodes_for(self, values: list) -> list[int]:
        uniq: dict[str, Any] = {}
        for x in values:
            uniq.setdefault(canonical_key(x), x)
        values = list(uniq.values())
        out: list[int] = []
        scalars = [x for x in values if not isinstance(x, (list, dict))]
        if scalars:
            v = self._new("exact:" + jsonvalue.dumps(scalars))
            v.null = any(x is None for x in scalars)
            v.true = any(x is True for x in scalars)
            v.false = any(x is False for x in scalars)
            pats = [number_literal_pattern(x) for x in scalars if is_number(x)]
            pats = [p for p in pats if p is not None]
            if pats:
                v.number = NumberSpec(dfa=regex.to_dfa("|".join(f"({p})" for p in sorted(set(pats))), search=False))
            strs = [x for x in scalars if isinstance(x, str)]
            if strs:
                v.string = chardfa.literal_set(strs)
            out.append(v.id)
        for x in values:
            if not isinstance(x, (list, dict)):
                continue
            key = canonical_key(x)
            hit = self.exact_vnodes.get(key)
            if hit is not None:
                out.append(hit)
                continue
            v = self._new("exact:" + jsonvalue.dumps(x))
            self.exact_vnodes[key] = v.id
            if isinstance(x, list):
                items = tuple(self.exact_choice(item) for item in x)
                v.array = ArraySpec(items, self._nothing_choice(), len(x), len(x))
            else:
                names = tuple(sorted(x))
                v.obj = ObjectSpec(
                    names=names,
                    name_choice={k: self.exact_choice(x[k]) for k in names},
                    other=chardfa.EMPTY,
                    required=frozenset(names),
                    deps={},
                    min_props=len(names),
                    max_props=len(names),
                )
            out.append(v.id)
        return out

    def _nothing_choice(self) -> int:
        key = ("nothing",)
        cid = self.choice_ids.get(key)
        if cid is None:
            cid = len(self.choices)
            self.choice_ids[key] = cid
            self.choice_keys.append(key)
            self.choices.append(())
        return cid

    def general_vnode(self, alt: frozenset[int], nodes) -> int:
        kinds = ALL_KINDS
        for n in nodes:
            if "type" in n.keywords:
                kinds &= _kinds(n.keywords["type"])
        v = self._new("schema:" + ",".join(n.pointer for n in nodes) if nodes else "any")
        v.null = "null" in kinds
        v.true = v.false = "boolean" in kinds
        if "integer" in kinds:
            v.number = self._number(nodes, "number" in kinds)
        if "string" in kinds:
            dfa = _string_dfa(nodes, self.check)
            v.string = None if dfa.empty else dfa
        if "array" in kinds:
            v.array = self._array(nodes)
        if "object" in kinds:
            v.obj = self._object(v.id, nodes)
        return v.id

    def _number(self, nodes, any_number: bool) -> Optional[NumberSpec]:
        lo: Optional[int] = None
        hi: Optional[int] = None
        mult = 1
        bounded = False
        for n in nodes:
            kw = n.keywords
            for key in ("minimum", "exclusiveMinimum", "maximum", "exclusiveMaximum", "multipleOf"):
                if key not in kw or not is_number(kw[key]):
                    continue
                bounded = True
                x = Fraction(kw[key])
                if key == "minimum":
                    b = _ceil(x)
                    lo = b if lo is None else max(lo, b)
                elif key == "exclusiveMinimum":
                    b = _floor(x) + 1
                    lo = b if lo is None else max(lo, b)
                elif key == "maximum":
                    b = _floor(x)
                    hi = b if hi is None else min(hi, b)
                elif key == "exclusiveMaximum":
                    b = _ceil(x) - 1
                    hi = b if hi is None else min(hi, b)
                elif x > 0:
                    # an integer is a multiple of p/q (lowest terms) iff it is a multiple of p
                    p = x.numerator
                    mult = math.lcm(mult, p)
        if bounded and any_number:
            raise CompileLimit("numeric bounds on non-integer numbers are not supported")
        if any_number:
            return NumberSpec(dfa=number_dfa())
        if lo is None and hi is None and mult == 1:
            return NumberSpec(dfa=integer_dfa())
        if not int_has_multiple(lo, hi, mult):
            return None
        return NumberSpec(lo=lo, hi=hi, mult=mult)

    def _array(self, nodes) -> ArraySpec:
        plen = 0
        lo = 0
        hi: Optional[int] = None
        for n in nodes:
            kw = n.keywords
            plen = max(plen, len(kw.get("prefixItems", ())))
            if "minItems" in kw:
                lo = max(lo, int(kw["minItems"]))
            if "maxItems" in kw:
                m = int(kw["maxItems"])
                hi = m if hi is None else min(hi, m)

        def conj_at(i: Optional[int]) -> frozenset[int]:
            out = set()
            for n in nodes:
                kw = n.keywords
                prefix = kw.get("prefixItems", ())
                if i is not None and i < len(prefix):
                    out.add(prefix[i])
                elif "items" in kw:
                    out.add(kw["items"])
            return frozenset(out)

        prefix = tuple(self.choice_for(conj_at(i)) for i in range(plen))
        return ArraySpec(prefix, self.choice_for(conj_at(None)), lo, hi)

    def _object(self, vid: int, nodes) -> ObjectSpec:
        names: set[str] = set()
        required: set[str] = set()
        deps: dict[str, set[str]] = {}
        lo = 0
        hi: Optional[int] = None
        pats: list[tuple[int, str, int]] = []
        name_filters = []
        for idx, n in enumerate(nodes):
            kw = n.keywords
            names.update(kw.get("properties", {}))
            required.update(kw.get("required", ()))
            for k, ds in kw.get("dependentRequired", {}).items():
                deps.setdefault(k, set()).update(ds)
                names.add(k)
                names.update(ds)
            for p, sub in kw.get("patternProperties", {}).items():
                pats.append((idx, p, sub))
            if "propertyNames" in kw:
                alts = self.expand(kw["propertyNames"], frozenset())
                name_filters.append(string_part(alts, self.ir, self.check))
            if "minProperties" in kw:
                lo = max(lo, int(kw["minProperties"]))
            if "maxProperties" in kw:
                m = int(kw["maxProperties"])
                hi = m if hi is None else min(hi, m)
        names.update(required)
        pat_dfas = [regex.compile_search(p) for _, p, _ in pats]
        try:
            names_dfa = chardfa.product(name_filters, check=self.check) if name_filters else None
        except OverflowError:
            raise CompileLimit("propertyNames automaton too large") from None

        def conj_for(matched: frozenset[int], name: Optional[str]) -> frozenset[int]:
            out = set()
            for idx, n in enumerate(nodes):
                kw = n.keywords
                hit = False
                if name is not None and name in kw.get("properties", {}):
                    out.add(kw["properties"][name])
                    hit = True
                for j, (pidx, _, sub) in enumerate(pats):
                    if pidx == idx and j in matched:
                        out.add(sub)
                        hit = True
                if not hit and "additionalProperties" in kw:
                    out.add(kw["additionalProperties"])
            return frozenset(out)

        name_choice: dict[str, int] = {}
        for name in sorted(names):
            if names_dfa is not None and not names_dfa.accepts(name):
                continue
            matched = frozenset(j for j, d in enumerate(pat_dfas) if d.accepts(name))
            name_choice[name] = self.choice_for(conj_for(matched, name))

        # keys outside ``names``: track every pattern plus the propertyNames filter
        filt = names_dfa

        def expand(key):
            states, fs = key
            dfas = list(pat_dfas) + [chardfa.ANY_STRING]
            sts = [s if s >= 0 else None for s in states] + [0]
            if filt is not None:
                dfas.append(filt)
                sts.append(fs)
            # ANY_STRING keeps characters no pattern mentions: such keys fall
            # through to additionalProperties
            for lo_, hi_ in chardfa._joint_partition(dfas, sts):
                nxt = tuple(d.step(s, lo_) if s >= 0 else -1 for d, s in zip(pat_dfas, states))
                if filt is not None:
                    f2 = filt.step(fs, lo_)
                    if f2 < 0:
                        continue
                else:
                    f2 = 0
                yield lo_, hi_, (nxt, f2)

        def label(key):
            states, fs = key
            if filt is not None and not filt.accepting[fs]:
                return None
            matched = frozenset(j for j, (d, s) in enumerate(zip(pat_dfas, states)) if s >= 0 and d.accepting[s])
            return self.choice_for(conj_for(matched, None))

        start = (tuple(0 for _ in pat_dfas), 0)
        if filt is not None and filt.empty:
            other = chardfa.EMPTY
        else:
            try:
                other = chardfa.build(start, expand, lambda k: True, check=self.check, label=label, max_states=20000)
            except OverflowError:
                raise CompileLimit("patternProperties automaton too large") from None
        self.raw_other[vid] = other
        return ObjectSpec(
            names=tuple(sorted(name_choice)),
            name_choice=name_choice,
            other=other,
            required=frozenset(required),
            deps={k: frozenset(v) for k, v in deps.items()},
            min_props=lo,
            max_props=hi,
        )

    # -- satisfiability ----------------------------------------------------
    def finalize(self) -> None:
        sat = [False] * len(self.vnodes)
        choice_sat = [False] * len(self.choices)
        other_cache: dict[int, tuple] = {}

        def csat(c: int) -> bool:
            return choice_sat[c]

        changed = True
        while changed:
            self.check()
            changed = False
            for v in self.vnodes:
                if sat[v.id]:
                    continue
                if self._vnode_sat(v, csat, other_cache):
                    sat[v.id] = True
                    changed = True
            for c, alts in enumerate(self.choices):
                if not choice_sat[c] and any(sat[v] for v in alts):
                    choice_sat[c] = True
                    changed = True
        for c, alts in enumerate(self.choices):
            self.choices[c] = tuple(v for v in alts if sat[v])
        for v in self.vnodes:
            if v.array is not None:
                a = v.array
                a.limit = _first_unsat(a, csat)
            if v.obj is not None:
                _finalize_object(v.obj, csat)

    def _vnode_sat(self, v: VNode, csat: Callable[[int], bool], cache: dict) -> bool:
        if v.null or v.true or v.false:
            return True
        if v.number is not None:
            return True
        if v.string is not None and not v.string.empty:
            return True
        if v.array is not None:
            a = v.array
            fits = a.max_items is None or a.min_items <= a.max_items
            if fits and all(csat(a.choice_at(i)) for i in range(min(a.min_items, len(a.prefix) + 1))):
                return True
        if v.obj is not None:
            o = v.obj
            probe = ObjectSpec(o.names, o.name_choice, o.other, o.required, o.deps, o.min_props, o.max_props)
            _finalize_object(probe, csat)
            if object_feasible(probe, frozenset()):
                return True
        return False


def _first_unsat(a: ArraySpec, csat) -> Optional[int]:
    for i in range(len(a.prefix)):
        if not csat(a.prefix[i]):
            return i
    if not csat(a.rest):
        return len(a.prefix)
    return None


def _finalize_object(o: ObjectSpec, csat) -> None:
    o.allowed = frozenset(k for k in o.names if csat(o.name_choice[k]))
    raw = o.other
    if raw.empty or raw.labels is None:
        o.other = chardfa.EMPTY
    else:
        o.other = _retrim(raw, lambda lab: lab is not None and csat(lab))
    if o.other.empty:
        o.other_finite = frozenset()
        o.other_any = False
    else:
        limit = len(o.names) + 64
        fin = o.other.finite_language(0, limit)
        if fin is not None:
            fin = frozenset(fin - set(o.names))
        o.other_finite = fin
        o.other_any = fin is None or bool(fin)


def _retrim(raw: CharDFA, ok: Callable[[Any], bool]) -> CharDFA:
    edges = [raw.transitions(s) for s in range(raw.n_states)]
    acc = [ok(raw.labels[s]) for s in range(raw.n_states)]
    return chardfa._trim(edges, acc, list(raw.labels))


# -- object feasibility (shared with the matcher) ---------------------------


def needed_keys(o: ObjectSpec, seen: frozenset) -> frozenset[str]:
    need = set(o.required)
    for k in seen:
        d = o.deps.get(k)
        if d:
            need.update(d)
    frontier = list(need)
    while frontier:
        k = frontier.pop()
        for d in o.deps.get(k, ()):
            if d not in need:
                need.add(d)
                frontier.append(d)
    return frozenset(need)


def object_feasible(o: ObjectSpec, seen: frozenset, extra_other: int = 0) -> bool:
    """Can an object whose keys so far are ``seen`` still be completed?

    ``extra_other`` counts additional keys outside the known names that are
    being added without naming them.
    """
    need = needed_keys(o, seen)
    missing = need - seen
    if not missing <= o.allowed:
        return False
    total = len(seen) + extra_other + len(missing)
    if o.max_props is not None and total > o.max_props:
        return False
    if total >= o.min_props:
        return True
    if o.max_props is not None and o.min_props > o.max_props:
        return False
    have = seen | need
    avail = 0
    for k in o.allowed:
        if k in have:
            continue
        if needed_keys(o, have | {k}) <= have | {k}:
            avail += 1
    if o.other_finite is None:
        return True
    others = len(o.other_finite - seen) - extra_other
    return total + avail + max(others, 0) >= o.min_props


def _cross(a: list[frozenset[int]], b: list[frozenset[int]]) -> list[frozenset[int]]:
    if not a or not b:
        return []
    out = _dedupe([x | y for x in a for y in b])
    if len(out) > MAX_ALTERNATIVES:
        raise CompileLimit("too many alternatives after expanding anyOf")
    return out


def _dedupe(items: list[frozenset[int]]) -> list[frozenset[int]]:
    seen: set = set()
    out = []
    for x in items:
        if x not in seen:
            seen.add(x)
            out.append(x)
    return out


def lower(ir: SchemaIR, deadline: Optional[float] = None) -> Lowered:
    return Lowering(ir, deadline).run()
