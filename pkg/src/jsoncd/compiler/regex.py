"""ECMA-262 regular expressions compiled to code point DFAs.

Supports literals, escapes, classes, ``.``, groups (capturing, non-capturing,
named), alternation, greedy/lazy quantifiers and ``^``/``$`` anchors.
Lookaround, backreferences, word boundaries and property escapes raise
:class:`UnsupportedPattern`; they are not regular or need context the
byte-level matcher does not keep.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Optional

from . import chardfa
from .chardfa import MAX_CP, CharDFA, Intervals, negate, normalize, union


class UnsupportedPattern(ValueError):
    pass


DIGIT: Intervals = ((0x30, 0x39),)
WORD: Intervals = normalize([(0x30, 0x39), (0x41, 0x5A), (0x5F, 0x5F), (0x61, 0x7A)])
SPACE: Intervals = normalize(
    [
        (0x09, 0x0D),
        (0x20, 0x20),
        (0xA0, 0xA0),
        (0x1680, 0x1680),
        (0x2000, 0x200A),
        (0x2028, 0x2029),
        (0x202F, 0x202F),
        (0x205F, 0x205F),
        (0x3000, 0x3000),
        (0xFEFF, 0xFEFF),
    ]
)
LINE_TERMINATORS: Intervals = normalize([(0x0A, 0x0A), (0x0D, 0x0D), (0x2028, 0x2029)])
DOT: Intervals = negate(LINE_TERMINATORS)

MAX_REPEAT = 1000
MAX_NFA_STATES = 50_000

_CLASS_ESCAPES = {
    "d": DIGIT,
    "D": negate(DIGIT),
    "w": WORD,
    "W": negate(WORD),
    "s": SPACE,
    "S": negate(SPACE),
}
_CONTROL_ESCAPES = {"t": 9, "n": 10, "v": 11, "f": 12, "r": 13}


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Chars:
    set: Intervals


@dataclass(frozen=True)
class Cat:
    items: tuple


@dataclass(frozen=True)
class Alt:
    items: tuple


@dataclass(frozen=True)
class Repeat:
    item: object
    min: int
    max: Optional[int]


@dataclass(frozen=True)
class Bol:
    pass


@dataclass(frozen=True)
class Eol:
    pass


class _Parser:
    def __init__(self, src: str) -> None:
        self.src = src
        self.i = 0

    def error(self, msg: str) -> UnsupportedPattern:
        return UnsupportedPattern(f"{msg} at {self.i} in {self.src!r}")

    def peek(self, k: int = 0) -> Optional[str]:
        j = self.i + k
        return self.src[j] if j < len(self.src) else None

    def parse(self):
        node = self.alternation()
        if self.i != len(self.src):
            raise self.error("unbalanced ')'")
        return node

    def alternation(self):
        branches = [self.concat()]
        while self.peek() == "|":
            self.i += 1
            branches.append(self.concat())
        return branches[0] if len(branches) == 1 else Alt(tuple(branches))

    def concat(self):
        items = []
        while self.peek() is not None and self.peek() not in "|)":
            atom = self.atom()
            atom = self.quantified(atom)
            items.append(atom)
        return items[0] if len(items) == 1 else Cat(tuple(items))

    def quantified(self, atom):
        while True:
            c = self.peek()
            if c == "*":
                lo, hi = 0, None
                self.i += 1
            elif c == "+":
                lo, hi = 1, None
                self.i += 1
            elif c == "?":
                lo, hi = 0, 1
                self.i += 1
            elif c == "{":
                bounds = self._braces()
                if bounds is None:
                    return atom
                lo, hi = bounds
            else:
                return atom
            if isinstance(atom, (Bol, Eol)):
                raise self.error("quantified assertion")
            if self.peek() == "?":
                self.i += 1  # lazy: same language
            if hi is not None and hi < lo:
                raise self.error("bad quantifier range")
            if lo > MAX_REPEAT or (hi is not None and hi > MAX_REPEAT):
                raise self.error("repeat count too large")
            atom = Repeat(atom, lo, hi)

    def _braces(self):
        j = self.i + 1
        src = self.src
        k = j
        while k < len(src) and src[k].isdigit():
            k += 1
        if k == j:
            return None
        lo = int(src[j:k])
        hi: Optional[int] = lo
        if k < len(src) and src[k] == ",":
            k += 1
            m = k
            while k < len(src) and src[k].isdigit():
                k += 1
            hi = int(src[m:k]) if k > m else None
        if k >= len(src) or src[k] != "}":
            return None
        self.i = k + 1
        return lo, hi

    def atom(self):
        c = self.src[self.i]
        if c == "(":
            self.i += 1
            if self.src.startswith("?:", self.i):
                self.i += 2
            elif self.src.startswith("?<", self.i) and self.peek(2) not in ("=", "!"):
                end = self.src.find(">", self.i)
                if end < 0:
                    raise self.error("unterminated group name")
                self.i = end + 1
            elif self.peek() == "?":
                raise self.error("lookaround")
            node = self.alternation()
            if self.peek() != ")":
                raise self.error("missing ')'")
            self.i += 1
            return node
        if c == "[":
            return Chars(self.char_class())
        if c == ".":
            self.i += 1
            return Chars(DOT)
        if c == "^":
            self.i += 1
            return Bol()
        if c == "$":
            self.i += 1
            return Eol()
        if c == "\\":
            return Chars(self.escape(in_class=False))
        if c in "*+?":
            raise self.error("nothing to repeat")
        if c == "{" and self._braces_lookahead():
            raise self.error("nothing to repeat")
        self.i += 1
        cp = ord(c)
        return Chars(((cp, cp),))

    def _braces_lookahead(self) -> bool:
        save = self.i
        res = self._braces()
        self.i = save
        return res is not None

    def escape(self, in_class: bool) -> Intervals:
        self.i += 1
        c = self.peek()
        if c is None:
            raise self.error("trailing backslash")
        self.i += 1
        if c in _CLASS_ESCAPES:
            return _CLASS_ESCAPES[c]
        if c in _CONTROL_ESCAPES:
            cp = _CONTROL_ESCAPES[c]
            return ((cp, cp),)
        if c == "b":
            if in_class:
                return ((8, 8),)
            raise self.error("word boundary")
        if c == "B":
            raise self.error("word boundary")
        if c == "0" and not (self.peek() or "").isdigit():
            return ((0, 0),)
        if c.isdigit():
            raise self.error("backreference")
        if c == "k" and self.peek() == "<":
            raise self.error("named backreference")
        if c in "pP" and self.peek() == "{":
            raise self.error("unicode property escape")
        if c == "x":
            h = self.src[self.i : self.i + 2]
            if len(h) == 2 and all(ch in "0123456789abcdefABCDEF" for ch in h):
                self.i += 2
                cp = int(h, 16)
                return ((cp, cp),)
            return ((ord("x"), ord("x")),)
        if c == "u":
            h = self.src[self.i : self.i + 4]
            if len(h) == 4 and all(ch in "0123456789abcdefABCDEF" for ch in h):
                self.i += 4
                cp = int(h, 16)
                return ((cp, cp),)
            if self.peek() == "{":
                raise self.error("braced unicode escape")
            return ((ord("u"), ord("u")),)
        if c == "c":
            letter = self.peek()
            if letter is not None and letter.isascii() and letter.isalpha():
                self.i += 1
                cp = ord(letter) % 32
                return ((cp, cp),)
            self.i -= 1
            return ((ord("\\"), ord("\\")),)
        cp = ord(c)
        return ((cp, cp),)

    def char_class(self) -> Intervals:
        self.i += 1
        negated = False
        if self.peek() == "^":
            negated = True
            self.i += 1
        parts: list[Intervals] = []
        first = True
        while True:
            c = self.peek()
            if c is None:
                raise self.error("unterminated class")
            if c == "]" and not first:
                self.i += 1
                break
            if c == "]" and first:
                # ECMA: '[]' is the empty class, '[^]' matches anything
                self.i += 1
                return negate(()) if negated else ()
            first = False
            lo_set = self._class_atom()
            if self.peek() == "-" and self.peek(1) not in (None, "]"):
                save = self.i
                self.i += 1
                hi_set = self._class_atom()
                if _single(lo_set) is not None and _single(hi_set) is not None:
                    lo, hi = _single(lo_set), _single(hi_set)
                    if lo > hi:
                        raise self.error("range out of order")
                    parts.append(((lo, hi),))
                    continue
                # class escape in a range: '-' is literal (Annex B)
                self.i = save + 1
                parts.append(lo_set)
                parts.append(((ord("-"), ord("-")),))
                parts.append(hi_set)
                continue
            parts.append(lo_set)
        result = union(*parts) if parts else ()
        return negate(result) if negated else result

    def _class_atom(self) -> Intervals:
        c = self.peek()
        if c == "\\":
            return self.escape(in_class=True)
        self.i += 1
        cp = ord(c)
        return ((cp, cp),)


def _single(s: Intervals) -> Optional[int]:
    if len(s) == 1 and s[0][0] == s[0][1]:
        return s[0][0]
    return None


def parse(pattern: str):
    return _Parser(pattern).parse()


# -- NFA ---------------------------------------------------------------------


@dataclass
class _NFA:
    edges: list = field(default_factory=list)  # state -> list[(Intervals, target)]
    eps: list = field(default_factory=list)  # state -> list[target]
    bol: list = field(default_factory=list)  # state -> list[target] taken only at start
    eol: list = field(default_factory=list)  # state -> list[target] taken only at end

    def new(self) -> int:
        self.edges.append([])
        self.eps.append([])
        self.bol.append([])
        self.eol.append([])
        if len(self.edges) > MAX_NFA_STATES:
            raise UnsupportedPattern("pattern too large")
        return len(self.edges) - 1


def _build(nfa: _NFA, node, start: int) -> int:
    """Add ``node`` starting at ``start``; return its end state."""
    if isinstance(node, Chars):
        end = nfa.new()
        if node.set:
            nfa.edges[start].append((node.set, end))
        return end
    if isinstance(node, Cat):
        cur = start
        for item in node.items:
            cur = _build(nfa, item, cur)
        return cur
    if isinstance(node, Alt):
        end = nfa.new()
        for item in node.items:
            s = nfa.new()
            nfa.eps[start].append(s)
            e = _build(nfa, item, s)
            nfa.eps[e].append(end)
        return end
    if isinstance(node, Bol):
        end = nfa.new()
        nfa.bol[start].append(end)
        return end
    if isinstance(node, Eol):
        end = nfa.new()
        nfa.eol[start].append(end)
        return end
    if isinstance(node, Repeat):
        cur = start
        for _ in range(node.min):
            cur = _build(nfa, node.item, cur)
        if node.max is None:
            loop = nfa.new()
            nfa.eps[cur].append(loop)
            body_end = _build(nfa, node.item, loop)
            nfa.eps[body_end].append(loop)
            return loop
        end = nfa.new()
        nfa.eps[cur].append(end)
        for _ in range(node.max - node.min):
            nxt = _build(nfa, node.item, cur)
            nfa.eps[nxt].append(end)
            cur = nxt
        return end
    if node == ():
        return start
    raise TypeError(node)


def _closure(nfa: _NFA, states, at_start: bool, at_end: bool) -> frozenset[int]:
    seen = set(states)
    stack = list(states)
    while stack:
        s = stack.pop()
        nxt = list(nfa.eps[s])
        if at_start:
            nxt.extend(nfa.bol[s])
        if at_end:
            nxt.extend(nfa.eol[s])
        for t in nxt:
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return frozenset(seen)


def to_dfa(pattern: str, search: bool = True, check: Optional[Callable[[], None]] = None) -> CharDFA:
    """Compile ``pattern``.

    ``search=True`` gives JSON Schema ``pattern`` semantics (the regex may
    match anywhere in the string); ``search=False`` requires a full match.
    """
    ast = parse(pattern)
    nfa = _NFA()
    start = nfa.new()
    accept = _build(nfa, ast, start)

    # DFA key: ("done",) once a match has been found in search mode,
    # otherwise (frozenset of NFA states, at_start flag).
    done = ("done",)

    def accepting(key) -> bool:
        if key == done:
            return True
        states, at_start = key
        return accept in _closure(nfa, states, at_start, True)

    def expand(key):
        if key == done:
            yield 0, MAX_CP, done
            return
        states, at_start = key
        closed = _closure(nfa, states, at_start, False)
        sets = []
        targets = []
        for s in closed:
            for cs, t in nfa.edges[s]:
                sets.append(cs)
                targets.append(t)
        for lo, hi, members in chardfa.partition(sets):
            nxt = {targets[m] for m in members}
            if search:
                nxt.add(start)
            if not nxt:
                continue
            nxt_closed = _closure(nfa, nxt, False, False)
            if search and accept in nxt_closed:
                yield lo, hi, done
            else:
                yield lo, hi, (nxt_closed, False)

    init_closed = _closure(nfa, {start}, True, False)
    if search and accept in init_closed:
        return chardfa.build(done, expand, accepting, check=check)
    return chardfa.build((init_closed, True), expand, accepting, check=check)


@lru_cache(maxsize=1024)
def compile_search(pattern: str) -> CharDFA:
    return to_dfa(pattern, search=True)


@lru_cache(maxsize=64)
def compile_full(pattern: str) -> CharDFA:
    return to_dfa(pattern, search=False)
