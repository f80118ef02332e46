"""Independent reference implementations used as test oracles.

Nothing here imports the engine internals it is checking: the JSON text
enumerator follows the JSON grammar directly, the trie builder uses plain
dicts, and the format checkers lean on the standard library.
"""

from __future__ import annotations

import datetime
import ipaddress
import json
import re
import uuid
from functools import lru_cache
from itertools import product
from typing import Any, Iterable, Optional

from jsoncd.errors import DepthExceeded

# ---------------------------------------------------------------- JSON texts

_ESCAPES = {'"': '\\"', "\\": "\\\\", "\b": "\\b", "\f": "\\f", "\n": "\\n", "\r": "\\r", "\t": "\\t", "/": "\\/"}


def string_units(sigma: str, gamma: str) -> list[str]:
    """Spellings of single characters inside a string literal: the plain
    characters of ``gamma`` plus every escape whose bytes lie in ``sigma``."""
    units = [c for c in gamma if c not in '"\\' and ord(c) >= 0x20]
    if "\\" in sigma:
        units += [e for e in _ESCAPES.values() if set(e) <= set(sigma)]
    return sorted(set(units))


class TextUniverse:
    """Every JSON text with no insignificant whitespace and no duplicate
    object names, spelled over ``sigma``, of at most ``limit`` bytes.
    String contents draw from ``gamma`` (plus escapes spellable in sigma)."""

    def __init__(self, sigma: str, limit: int, gamma: Optional[str] = None) -> None:
        self.sigma = set(sigma)
        self.limit = limit
        if gamma is None:
            gamma = "".join(c for c in sigma if c.isalnum())
        self.units = string_units(sigma, gamma)
        self._memo: dict[int, list[str]] = {}

    def texts(self) -> list[str]:
        return self.values(self.limit)

    def values(self, budget: int) -> list[str]:
        if budget in self._memo:
            return self._memo[budget]
        out = [t for t in ("true", "false", "null") if len(t) <= budget and set(t) <= self.sigma]
        out += self.numbers(budget)
        out += self.strings(budget)
        out += self.arrays(budget)
        out += self.objects(budget)
        self._memo[budget] = out
        return out

    def numbers(self, budget: int) -> list[str]:
        digits = sorted(c for c in self.sigma if c.isdigit())
        if not digits:
            return []
        ints = ["0"] if "0" in digits else []
        for n in range(1, budget + 1):
            for first in (d for d in digits if d != "0"):
                ints += [first + "".join(r) for r in product(digits, repeat=n - 1)]
        signs = [""] + (["-"] if "-" in self.sigma else [])
        runs = [("".join(r)) for n in range(1, budget + 1) for r in product(digits, repeat=n)]
        fracs = [""] + (["." + r for r in runs] if "." in self.sigma else [])
        exps = [""]
        for e in (c for c in "eE" if c in self.sigma):
            for s in [""] + [c for c in "+-" if c in self.sigma]:
                exps += [e + s + r for r in runs]
        out = []
        for sign in signs:
            for i in ints:
                head = sign + i
                if len(head) > budget:
                    continue
                for f in fracs:
                    if len(head) + len(f) > budget:
                        continue
                    for e in exps:
                        if len(head) + len(f) + len(e) <= budget:
                            out.append(head + f + e)
        return out

    def strings(self, budget: int) -> list[str]:
        if '"' not in self.sigma or budget < 2:
            return []
        return ['"' + body + '"' for body in self._bodies(budget - 2)]

    @lru_cache(maxsize=None)
    def _bodies(self, budget: int) -> tuple[str, ...]:
        out = [""]
        for u in self.units:
            if len(u) <= budget:
                out += [u + rest for rest in self._bodies(budget - len(u))]
        return tuple(out)

    def _seqs(self, budget: int, item) -> list[tuple[str, ...]]:
        """Non-empty comma-separated sequences of items, total text ≤ budget."""
        out = []
        for first in item(budget):
            out.append((first,))
            rem = budget - len(first) - 1
            if rem >= 1 and "," in self.sigma:
                out += [(first,) + rest for rest in self._seqs(rem, item)]
        return out

    def arrays(self, budget: int) -> list[str]:
        if budget < 2 or not {"[", "]"} <= self.sigma:
            return []
        return ["[]"] + ["[" + ",".join(s) + "]" for s in self._seqs(budget - 2, self.values)]

    def _members(self, budget: int) -> list[str]:
        out = []
        for key in self.strings(budget - 2):
            out += [key + ":" + v for v in self.values(budget - len(key) - 1)]
        return out

    def objects(self, budget: int) -> list[str]:
        if budget < 2 or not {"{", "}"} <= self.sigma:
            return []
        if ":" not in self.sigma or '"' not in self.sigma:
            return ["{}"]
        out = ["{}"]
        for seq in self._seqs(budget - 2, self._members):
            names = [json.loads(m[: _key_end(m)]) for m in seq]
            if len(set(names)) == len(names):
                out.append("{" + ",".join(seq) + "}")
        return out


def _key_end(member: str) -> int:
    """Index just past the closing quote of the member's name."""
    i = 1
    while member[i] != '"':
        i += 2 if member[i] == "\\" else 1
    return i + 1


# ------------------------------------------------------------ toy values

# booleans, small integers, short strings over {a,b,c}, containers of depth ≤ 2
_SCALARS = [True, False, None, -2, -1, 0, 1, 2] + ["".join(p) for n in range(3) for p in product("abc", repeat=n)]
_LEVEL1 = (
    [[]] + [[x] for x in _SCALARS] + [[x, y] for x in _SCALARS for y in _SCALARS]
    + [{}] + [{k: x} for k in "ab" for x in _SCALARS] + [{"a": x, "b": y} for x in _SCALARS for y in _SCALARS]
)
_LEVEL2 = [[c] for c in _LEVEL1] + [{"a": c} for c in _LEVEL1] + [[c, 0] for c in _LEVEL1[:60]]
TOY_UNIVERSE = _SCALARS + _LEVEL1 + _LEVEL2


# ------------------------------------------------------- automaton language


def accepted_strings(a, sigma: str, limit: int, generation: bool = False) -> list[bytes]:
    """Every byte string over ``sigma`` of length ≤ limit that the automaton
    accepts, found by exploring all live prefixes."""
    alphabet = sorted(set(sigma.encode("utf-8")))
    out = []
    stack = [(b"", a.start(generation))]
    while stack:
        prefix, s = stack.pop()
        if a.can_terminate(s):
            out.append(prefix)
        if len(prefix) == limit:
            continue
        for c in alphabet:
            try:
                nxt = a.advance_byte(s, c)
            except DepthExceeded:
                nxt = None
            if nxt is not None:
                stack.append((prefix + bytes([c]), nxt))
    return sorted(out)


def brute_mask(a, s, tokens: Iterable[bytes]) -> list[bool]:
    """Try-advance every non-empty token byte by byte."""
    out = []
    for tok in tokens:
        if not tok:
            out.append(False)
            continue
        cur = s
        for b in tok:
            try:
                cur = a.advance_byte(cur, b) if cur is not None else None
            except DepthExceeded:
                cur = None
            if cur is None:
                break
        out.append(cur is not None)
    return out


# ------------------------------------------------------------ trie builder


def dict_trie_nodes(tokens: Iterable[bytes]) -> int:
    """Node count (root included) of a nested-dict prefix tree."""
    root: dict = {}
    count = 1
    for tok in tokens:
        node = root
        for b in tok:
            if b not in node:
                node[b] = {}
                count += 1
            node = node[b]
    return count


# ------------------------------------------------------- reference cycles


def ref_cycles(raw: Any) -> set[str]:
    """Names under ``$defs`` that can reach themselves through local
    ``#/$defs/<name>`` references."""
    defs = raw.get("$defs", {}) if isinstance(raw, dict) else {}

    def refs_in(v: Any) -> set[str]:
        found = set()
        if isinstance(v, dict):
            r = v.get("$ref")
            if isinstance(r, str) and r.startswith("#/$defs/"):
                found.add(r[len("#/$defs/"):])
            for k, x in v.items():
                if k != "$defs":
                    found |= refs_in(x)
        elif isinstance(v, list):
            for x in v:
                found |= refs_in(x)
        return found

    graph = {name: refs_in(body) for name, body in defs.items()}
    cyclic = set()
    for start in graph:
        seen, todo = set(), list(graph[start])
        while todo:
            n = todo.pop()
            if n == start:
                cyclic.add(start)
                break
            if n in seen or n not in graph:
                continue
            seen.add(n)
            todo.extend(graph[n])
    return cyclic


# --------------------------------------------------------- format checks

_DATE = re.compile(r"^(\d{4})-(\d{2})-(\d{2})$")
_TIME = re.compile(r"^(\d{2}):(\d{2}):(\d{2})(\.\d+)?([Zz]|[+-](\d{2}):(\d{2}))$")


def _date_ok(s: str) -> bool:
    m = _DATE.match(s)
    if not m:
        return False
    try:
        datetime.date(int(m[1]), int(m[2]), int(m[3]))
    except ValueError:
        return False
    return True


def _time_ok(s: str) -> bool:
    m = _TIME.match(s)
    if not m:
        return False
    if int(m[1]) > 23 or int(m[2]) > 59 or int(m[3]) > 59:
        return False
    return m[6] is None or (int(m[6]) <= 23 and int(m[7]) <= 59)


def _ipv4_ok(s: str) -> bool:
    if not re.fullmatch(r"\d{1,3}(\.\d{1,3}){3}", s):
        return False
    try:
        ipaddress.IPv4Address(s)
    except ValueError:
        return False
    return True


def _ipv6_ok(s: str) -> bool:
    if "%" in s or not s.isascii():
        return False
    try:
        ipaddress.IPv6Address(s)
    except ValueError:
        return False
    return True


def _uuid_ok(s: str) -> bool:
    if not re.fullmatch(r"[0-9A-Fa-f-]{36}", s) or [len(p) for p in s.split("-")] != [8, 4, 4, 4, 12]:
        return False
    uuid.UUID(s)
    return True


def _date_time_ok(s: str) -> bool:
    parts = re.split("[Tt]", s)
    return len(parts) == 2 and _date_ok(parts[0]) and _time_ok(parts[1])


FORMAT_CHECKERS = {
    "date": _date_ok,
    "time": _time_ok,
    "date-time": _date_time_ok,
    "ipv4": _ipv4_ok,
    "ipv6": _ipv6_ok,
    "uuid": _uuid_ok,
}
