"""Incremental byte-level matcher over the lowered value-node graph.

A :class:`MatcherState` is a set of *threads*; each thread is a persistent
stack of frames (a linked list of tuples). Alternatives that cannot be told
apart yet (``anyOf`` branches, several ``enum`` objects) live in separate
threads, so stepping is deterministic at the state level.

Frame layouts (first field is the tag)::

    (T,)                                   root value finished
    (V, choice)                            expecting a value
    (L, rest)                              inside null/true/false
    (N, vnode, dfa_state)                  number text checked by a DFA
    (I, vnode, neg, magnitude, ndigits)    integer with exact bounds
    (S, vnode, char_state, esc)            inside a string value
    (A, vnode, depth, count, phase)        array
    (O, vnode, depth, seen, phase, sub)    object

In *generation* mode structural whitespace is refused and escapes are
limited to the ones a compact serializer needs; walking accepts both.
"""

from __future__ import annotations

from bisect import bisect_left
from typing import Iterable, Optional

from ..errors import DepthExceeded
from .build import ArraySpec, Lowered, ObjectSpec, VNode, object_feasible
from .chardfa import CharDFA

T, V, L, N, I, S, A, O = range(8)

WS = frozenset(b" \t\n\r")
_DIGITS = frozenset(b"0123456789")
_SIMPLE_ESCAPES = {0x22: 0x22, 0x5C: 0x5C, 0x2F: 0x2F, 0x62: 8, 0x66: 12, 0x6E: 10, 0x72: 13, 0x74: 9}
_GEN_ESCAPES = {k: v for k, v in _SIMPLE_ESCAPES.items() if k != 0x2F}
_GEN_U_RANGES = ((0, 7), (11, 11), (14, 31))
_WALK_U_RANGES = ((0, 0xD7FF), (0xE000, 0x10FFFF))
_UTF8_VALID = {
    2: ((0x80, 0x7FF),),
    3: ((0x800, 0xD7FF), (0xE000, 0xFFFF)),
    4: ((0x10000, 0x10FFFF),),
}
_CACHE_LIMIT = 200_000


def _hexval(b: int) -> int:
    if 0x30 <= b <= 0x39:
        return b - 0x30
    if 0x61 <= b <= 0x66:
        return b - 0x57
    if 0x41 <= b <= 0x46:
        return b - 0x37
    return -1


def _clip(lo: int, hi: int, ranges) -> list[tuple[int, int]]:
    out = []
    for a, b in ranges:
        x, y = max(lo, a), min(hi, b)
        if x <= y:
            out.append((x, y))
    return out


def _unit_cps(ulo: int, uhi: int, gen: bool) -> list[tuple[int, int]]:
    """Code points reachable from a \\u escape whose 16-bit unit lies in [ulo, uhi]."""
    if gen:
        return _clip(ulo, uhi, _GEN_U_RANGES)
    out = _clip(ulo, uhi, ((0, 0xD7FF), (0xE000, 0xFFFF)))
    a, b = max(ulo, 0xD800), min(uhi, 0xDBFF)
    if a <= b:
        out.append((0x10000 + (a - 0xD800) * 0x400, 0x10000 + (b - 0xD800) * 0x400 + 0x3FF))
    return out


class _Chars:
    """Character-level view of a string value DFA."""

    __slots__ = ("dfa",)

    def __init__(self, dfa: CharDFA) -> None:
        self.dfa = dfa

    def step(self, st, cp):
        t = self.dfa.step(st, cp)
        return None if t < 0 else t

    def live_ranges(self, st, ranges) -> bool:
        d = self.dfa
        return any(d.range_live(st, lo, hi) for lo, hi in ranges)

    def can_close(self, st) -> bool:
        return self.dfa.accepting[st]


class _Keys:
    """Character-level view of the property names an object may still take.

    State is (text so far, state in the other-keys DFA or -1).
    """

    def __init__(self, spec: ObjectSpec, seen: frozenset) -> None:
        self.o = spec
        self.seen = seen
        self.names = spec.names
        self.name_set = frozenset(spec.names)
        self.bound = len(spec.names) + len(seen) + 1
        self.other_ok = spec.other_any and object_feasible(spec, seen, extra_other=1)
        self._known: dict[str, bool] = {}
        self._fin: dict[int, Optional[frozenset]] = {}

    def start(self):
        return ("", 0 if self.other_ok else -1)

    def known_ok(self, name: str) -> bool:
        hit = self._known.get(name)
        if hit is None:
            o = self.o
            hit = name in o.allowed and name not in self.seen and object_feasible(o, self.seen | {name})
            self._known[name] = hit
        return hit

    def _prefixed(self, text: str) -> Iterable[str]:
        names = self.names
        i = bisect_left(names, text)
        while i < len(names) and names[i].startswith(text):
            yield names[i]
            i += 1

    def _other_live(self, text: str, st: int) -> bool:
        if st < 0:
            return False
        fin = self._fin.get(st, 0)
        if fin == 0:
            fin = self.o.other.finite_language(st, self.bound)
            self._fin[st] = fin
        if fin is None:
            return True
        for w in fin:
            k = text + w
            if k not in self.name_set and k not in self.seen:
                return True
        return False

    def live(self, text: str, st: int) -> bool:
        for name in self._prefixed(text):
            if self.known_ok(name):
                return True
        return self._other_live(text, st)

    def step(self, cstate, cp):
        text, st = cstate
        t2 = text + chr(cp)
        s2 = self.o.other.step(st, cp) if st >= 0 else -1
        return (t2, s2) if self.live(t2, s2) else None

    def live_ranges(self, cstate, ranges) -> bool:
        text, st = cstate
        n = len(text)
        for name in self._prefixed(text):
            if len(name) > n:
                cp = ord(name[n])
                if any(lo <= cp <= hi for lo, hi in ranges) and self.known_ok(name):
                    return True
        if st < 0:
            return False
        for lo, hi, t in self.o.other.transitions(st):
            for a, b in _clip(lo, hi, ranges):
                if b - a + 1 > self.bound:
                    return True
                for cp in range(a, b + 1):
                    if self._other_live(text + chr(cp), t):
                        return True
        return False

    def can_close(self, cstate) -> bool:
        text, st = cstate
        if text in self.name_set:
            return self.known_ok(text)
        return st >= 0 and self.o.other.accepting[st] and text not in self.seen

    def choice(self, cstate) -> int:
        text, st = cstate
        if text in self.name_set:
            return self.o.name_choice[text]
        return self.o.other.labels[st]


_CLOSE = object()


def _scan(cm, cs, esc, b: int, gen: bool):
    """Advance a string scanner by one byte.

    Returns None (dead), _CLOSE (closing quote accepted) or (char_state, esc).
    """
    if esc is None:
        if b == 0x22:
            return _CLOSE if cm.can_close(cs) else None
        if b == 0x5C:
            table = _GEN_ESCAPES if gen else _SIMPLE_ESCAPES
            for cp in table.values():
                if cm.step(cs, cp) is not None:
                    return cs, (0,)
            return (cs, (0,)) if cm.live_ranges(cs, _GEN_U_RANGES if gen else _WALK_U_RANGES) else None
        if b < 0x20:
            return None
        if b < 0x80:
            n = cm.step(cs, b)
            return None if n is None else (n, None)
        if 0xC2 <= b <= 0xDF:
            size, rem, base = 2, 1, (b & 0x1F) << 6
        elif 0xE0 <= b <= 0xEF:
            size, rem, base = 3, 2, (b & 0x0F) << 12
        elif 0xF0 <= b <= 0xF4:
            size, rem, base = 4, 3, (b & 0x07) << 18
        else:
            return None
        ranges = _clip(base, base + (1 << (6 * rem)) - 1, _UTF8_VALID[size])
        if ranges and cm.live_ranges(cs, ranges):
            return cs, (5, base, rem, size)
        return None
    kind = esc[0]
    if kind == 5:
        if not 0x80 <= b <= 0xBF:
            return None
        _, base, rem, size = esc
        rem -= 1
        base += (b & 0x3F) << (6 * rem)
        if rem == 0:
            if not any(lo <= base <= hi for lo, hi in _UTF8_VALID[size]):
                return None
            n = cm.step(cs, base)
            return None if n is None else (n, None)
        ranges = _clip(base, base + (1 << (6 * rem)) - 1, _UTF8_VALID[size])
        if ranges and cm.live_ranges(cs, ranges):
            return cs, (5, base, rem, size)
        return None
    if kind == 0:
        table = _GEN_ESCAPES if gen else _SIMPLE_ESCAPES
        cp = table.get(b)
        if cp is not None:
            n = cm.step(cs, cp)
            return None if n is None else (n, None)
        if b == 0x75:
            ranges = _GEN_U_RANGES if gen else _WALK_U_RANGES
            return (cs, (1, 0, 0)) if cm.live_ranges(cs, ranges) else None
        return None
    if kind == 1:
        h = _hexval(b)
        if h < 0:
            return None
        val = esc[1] * 16 + h
        n = esc[2] + 1
        if n == 4:
            if 0xD800 <= val <= 0xDBFF and not gen:
                lo = 0x10000 + (val - 0xD800) * 0x400
                return (cs, (2, val)) if cm.live_ranges(cs, ((lo, lo + 0x3FF),)) else None
            if not _unit_cps(val, val, gen) or 0xD800 <= val <= 0xDFFF:
                return None
            nxt = cm.step(cs, val)
            return None if nxt is None else (nxt, None)
        shift = 4 * (4 - n)
        ranges = _unit_cps(val << shift, ((val + 1) << shift) - 1, gen)
        return (cs, (1, val, n)) if ranges and cm.live_ranges(cs, ranges) else None
    if kind == 2:
        return (cs, (3, esc[1])) if b == 0x5C else None
    if kind == 3:
        return (cs, (4, esc[1], 0, 0)) if b == 0x75 else None
    if kind == 4:
        h = _hexval(b)
        if h < 0:
            return None
        hi_unit = esc[1]
        val = esc[2] * 16 + h
        n = esc[3] + 1
        shift = 4 * (4 - n)
        a, z = max(val << shift, 0xDC00), min(((val + 1) << shift) - 1, 0xDFFF)
        if a > z:
            return None
        base = 0x10000 + (hi_unit - 0xD800) * 0x400 - 0xDC00
        if n == 4:
            nxt = cm.step(cs, base + val)
            return None if nxt is None else (nxt, None)
        return (cs, (4, hi_unit, val, n)) if cm.live_ranges(cs, ((base + a, base + z),)) else None
    return None


def int_feasible(lo: Optional[int], hi: Optional[int], m: int, neg: bool, val: int, nd: int) -> bool:
    """Is there an integer with this text prefix inside [lo, hi] divisible by m?"""
    if nd == 0:
        top = 0 if hi is None else min(0, hi)
        if lo is None:
            return True
        return _has_multiple(lo, top, m)
    if val == 0:
        return (lo is None or lo <= 0) and (hi is None or hi >= 0)
    p = 1
    while True:
        a, b = val * p, val * p + p - 1
        if neg:
            a, b = -b, -a
        x = a if lo is None else max(a, lo)
        y = b if hi is None else min(b, hi)
        if x <= y and _has_multiple(x, y, m):
            return True
        if neg:
            if lo is not None and b < lo:
                return False
        elif hi is not None and a > hi:
            return False
        p *= 10


def _has_multiple(lo: int, hi: int, m: int) -> bool:
    if lo > hi:
        return False
    return -((-lo) // m) * m <= hi


class MatcherState:
    """Immutable matcher configuration. ``pos`` counts consumed bytes and is
    not part of equality."""

    __slots__ = ("threads", "generation", "pos", "_h")

    def __init__(self, threads: frozenset, generation: bool, pos: int = 0) -> None:
        self.threads = threads
        self.generation = generation
        self.pos = pos
        self._h = hash((threads, generation))

    def __hash__(self) -> int:
        return self._h

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, MatcherState)
            and self._h == other._h
            and self.generation == other.generation
            and self.threads == other.threads
        )

    @property
    def alive(self) -> bool:
        return bool(self.threads)

    @property
    def key(self) -> tuple:
        return (self.threads, self.generation)

    def depth(self) -> int:
        best = 0
        for th in self.threads:
            n = 0
            while th is not None:
                n += 1
                th = th[1]
            best = max(best, n)
        return best

    def __repr__(self) -> str:
        return f"MatcherState(threads={len(self.threads)}, pos={self.pos}, generation={self.generation})"


class _DepthHit(Exception):
    pass


class ConstraintAutomaton:
    """Compiled constraint for one schema. Shareable; holds memo caches."""

    def __init__(self, lowered: Lowered, source_id: str = "", max_depth: int = 64) -> None:
        self.vnodes: list[VNode] = lowered.vnodes
        self.choices: list[tuple[int, ...]] = lowered.choices
        self.root_choice = lowered.root
        self.compiled_from = source_id
        self.max_depth = max_depth
        self._keys: dict[tuple, _Keys] = {}
        self._chars: dict[int, _Chars] = {}
        self._succ: dict[tuple, dict[int, frozenset]] = {}
        # per-state token masks, filled by the token engine
        self.mask_cache: dict[tuple, object] = {}
        self._one: dict[tuple, Optional[frozenset]] = {}
        self._ascii: dict[int, "np.ndarray"] = {}

    # -- public API --------------------------------------------------------
    def start(self, generation: bool = False) -> MatcherState:
        th = ((V, self.root_choice), ((T,), None))
        return MatcherState(frozenset([th]) if self.choices[self.root_choice] else frozenset(), generation)

    @property
    def satisfiable(self) -> bool:
        return bool(self.choices[self.root_choice])

    def advance_byte(self, s: MatcherState, b: int) -> Optional[MatcherState]:
        """Successor state, or None when ``b`` is rejected."""
        if not s.threads:
            return None
        cached = self._succ.get(s.key)
        if cached is not None:
            nxt = cached.get(b)
            return None if nxt is None else MatcherState(nxt, s.generation, s.pos + 1)
        out: set = set()
        depth_hit = False
        for th in s.threads:
            try:
                out.update(self._step(th, b, s.generation))
            except _DepthHit:
                depth_hit = True
        if not out:
            if depth_hit:
                raise DepthExceeded(f"nesting deeper than {self.max_depth}")
            return None
        return MatcherState(frozenset(out), s.generation, s.pos + 1)

    def advance_bytes(self, s: Optional[MatcherState], data: bytes) -> Optional[MatcherState]:
        for b in data:
            if s is None:
                return None
            s = self.advance_byte(s, b)
        return s

    def can_terminate(self, s: MatcherState) -> bool:
        return any(self._terminable(th) for th in s.threads)

    def accepts(self, data: bytes, generation: bool = False) -> bool:
        try:
            s = self.advance_bytes(self.start(generation), data)
        except DepthExceeded:
            return False
        return s is not None and self.can_terminate(s)

    def successors(self, s: MatcherState) -> dict[int, frozenset]:
        """Map byte -> successor thread set for every non-rejected byte (memoized)."""
        key = s.key
        hit = self._succ.get(key)
        if hit is not None:
            return hit
        gen = s.generation
        out: dict[int, frozenset] = {}
        threads = s.threads
        if threads:
            for b in self._candidate_bytes(threads):
                nxt: set = set()
                for th in threads:
                    try:
                        nxt.update(self._step(th, b, gen))
                    except _DepthHit:
                        pass
                if nxt:
                    out[b] = frozenset(nxt)
        if len(self._succ) > _CACHE_LIMIT:
            self._succ.clear()
        self._succ[key] = out
        return out

    def step_cached(self, s: MatcherState, b: int) -> Optional[MatcherState]:
        """Like :meth:`advance_byte` but memoized and without depth errors."""
        full = self._succ.get(s.key)
        if full is not None:
            nxt = full.get(b)
        else:
            k = (s.threads, s.generation, b)
            if k in self._one:
                nxt = self._one[k]
            else:
                out: set = set()
                for th in s.threads:
                    try:
                        out.update(self._step(th, b, s.generation))
                    except _DepthHit:
                        pass
                nxt = frozenset(out) if out else None
                if len(self._one) > _CACHE_LIMIT:
                    self._one.clear()
                self._one[k] = nxt
        return None if nxt is None else MatcherState(nxt, s.generation, s.pos + 1)

    def plain_string(self, s: MatcherState) -> Optional[tuple[int, int, object]]:
        """(vnode, dfa state, parent) when ``s`` is a single thread inside a
        string value with no escape or multi-byte character pending."""
        if len(s.threads) != 1:
            return None
        (th,) = s.threads
        f = th[0]
        if f[0] != S or f[3] is not None:
            return None
        return f[1], f[2], th[1]

    def string_state(self, vid: int, q: int, parent, generation: bool) -> MatcherState:
        return MatcherState(frozenset([((S, vid, q, None), parent)]), generation)

    def ascii_table(self, vid: int) -> "np.ndarray":
        """[states, 128] int32 table for string contents: DFA successor,
        -1 for dead, -2 where the general matcher is needed."""
        t = self._ascii.get(vid)
        if t is None:
            import numpy as np

            dfa = self.vnodes[vid].string
            t = np.full((dfa.n_states, 128), -1, dtype=np.int32)
            for q in range(dfa.n_states):
                for lo, hi, dst in dfa.transitions(q):
                    a, z = max(lo, 0x20), min(hi, 0x7F)
                    if a <= z:
                        t[q, a : z + 1] = dst
                t[q, 0x22] = -2
                t[q, 0x5C] = -2
            self._ascii[vid] = t
        return t

    def allowed_bytes(self, s: MatcherState) -> list[int]:
        return sorted(self.successors(s))

    def clear_caches(self) -> None:
        self._succ.clear()
        self._one.clear()
        self._keys.clear()
        self.mask_cache.clear()

    # -- internals ---------------------------------------------------------
    def _candidate_bytes(self, threads) -> Iterable[int]:
        # only string contents can take arbitrary bytes; a key that must be
        # one of the declared names can only continue with one of their bytes
        extra: set[int] = set()
        for th in threads:
            f = th[0]
            tag = f[0]
            if tag == S:
                return range(256)
            if tag == O and f[4] == 1:
                (text, st), esc = f[5]
                if esc is not None or st >= 0:
                    return range(256)
                n = len(text)
                extra.update((0x22, 0x5C))
                for name in self._keys_for(f[1], f[3])._prefixed(text):
                    if len(name) > n:
                        extra.add(name[n].encode("utf-8", "surrogatepass")[0])
        if extra:
            return sorted(extra.union(_STRUCTURAL))
        return _STRUCTURAL

    def _chars_for(self, vid: int) -> _Chars:
        c = self._chars.get(vid)
        if c is None:
            c = self._chars[vid] = _Chars(self.vnodes[vid].string)
        return c

    def _keys_for(self, vid: int, seen: frozenset) -> _Keys:
        k = self._keys.get((vid, seen))
        if k is None:
            if len(self._keys) > _CACHE_LIMIT:
                self._keys.clear()
            k = self._keys[(vid, seen)] = _Keys(self.vnodes[vid].obj, seen)
        return k

    def _terminable(self, th) -> bool:
        while True:
            f = th[0]
            tag = f[0]
            if tag == T:
                return True
            if tag == N:
                if not self.vnodes[f[1]].number.dfa.accepting[f[2]]:
                    return False
            elif tag == I:
                if not self._int_accepting(f):
                    return False
            else:
                return False
            th = self._complete(th[1])

    def _int_accepting(self, f) -> bool:
        _, vid, neg, val, nd = f
        if nd == 0:
            return False
        spec = self.vnodes[vid].number
        v = -val if neg else val
        return (spec.lo is None or v >= spec.lo) and (spec.hi is None or v <= spec.hi) and v % spec.mult == 0

    @staticmethod
    def _complete(parent):
        f = parent[0]
        tag = f[0]
        if tag == A:
            return ((A, f[1], f[2], f[3] + 1, 1), parent[1])
        if tag == O:
            return ((O, f[1], f[2], f[3], 4, None), parent[1])
        return parent

    def _depth_of(self, th) -> int:
        f = th[0]
        return f[2] if f[0] in (A, O) else 0

    def _start(self, vid: int, b: int, parent, out: list) -> None:
        v = self.vnodes[vid]
        if b == 0x22:
            if v.string is not None:
                out.append(((S, vid, 0, None), parent))
        elif b == 0x2D or 0x30 <= b <= 0x39:
            spec = v.number
            if spec is None:
                return
            if spec.dfa is not None:
                st = spec.dfa.step(0, b)
                if st >= 0:
                    out.append(((N, vid, st), parent))
            else:
                neg = b == 0x2D
                val = 0 if neg else b - 0x30
                nd = 0 if neg else 1
                if int_feasible(spec.lo, spec.hi, spec.mult, neg, val, nd):
                    out.append(((I, vid, neg, val, nd), parent))
        elif b == 0x7B:
            if v.obj is not None:
                d = self._depth_of(parent) + 1
                if d > self.max_depth:
                    raise _DepthHit()
                out.append(((O, vid, d, frozenset(), 0, None), parent))
        elif b == 0x5B:
            if v.array is not None:
                d = self._depth_of(parent) + 1
                if d > self.max_depth:
                    raise _DepthHit()
                out.append(((A, vid, d, 0, 0), parent))
        elif b == 0x6E:
            if v.null:
                out.append(((L, b"ull"), parent))
        elif b == 0x74:
            if v.true:
                out.append(((L, b"rue"), parent))
        elif b == 0x66:
            if v.false:
                out.append(((L, b"alse"), parent))

    def _start_value(self, choice: int, b: int, parent, out: list) -> None:
        for vid in self.choices[choice]:
            self._start(vid, b, parent, out)

    def _step(self, th, b: int, gen: bool) -> list:
        f = th[0]
        tag = f[0]
        out: list = []
        if tag == S:
            r = _scan(self._chars_for(f[1]), f[2], f[3], b, gen)
            if r is _CLOSE:
                out.append(self._complete(th[1]))
            elif r is not None:
                out.append(((S, f[1], r[0], r[1]), th[1]))
            return out
        if tag == L:
            rest = f[1]
            if b == rest[0]:
                out.append(self._complete(th[1]) if len(rest) == 1 else ((L, rest[1:]), th[1]))
            return out
        if tag == N:
            dfa = self.vnodes[f[1]].number.dfa
            st = dfa.step(f[2], b) if b < 0x80 else -1
            if st >= 0:
                out.append(((N, f[1], st), th[1]))
            elif dfa.accepting[f[2]]:
                return self._step(self._complete(th[1]), b, gen)
            return out
        if tag == I:
            _, vid, neg, val, nd = f
            if b in _DIGITS and not (nd >= 1 and val == 0):
                spec = self.vnodes[vid].number
                val2 = val * 10 + (b - 0x30)
                if int_feasible(spec.lo, spec.hi, spec.mult, neg, val2, nd + 1):
                    out.append(((I, vid, neg, val2, nd + 1), th[1]))
                return out
            if self._int_accepting(f):
                return self._step(self._complete(th[1]), b, gen)
            return out
        if tag == V:
            if b in WS:
                if not gen:
                    out.append(th)
                return out
            self._start_value(f[1], b, th[1], out)
            return out
        if tag == A:
            return self._step_array(th, f, b, gen)
        if tag == O:
            return self._step_object(th, f, b, gen)
        if tag == T:
            if b in WS and not gen:
                out.append(th)
            return out
        raise AssertionError(f"bad frame {f!r}")

    def _step_array(self, th, f, b: int, gen: bool) -> list:
        _, vid, depth, count, phase = f
        spec: ArraySpec = self.vnodes[vid].array
        out: list = []
        if b in WS:
            if not gen:
                out.append(th)
            return out
        cap = spec.cap()
        if phase == 1:
            if b == 0x2C:
                if cap is None or count < cap:
                    out.append(((A, vid, depth, count, 2), th[1]))
            elif b == 0x5D and count >= spec.min_items:
                out.append(self._complete(th[1]))
            return out
        if phase == 0 and b == 0x5D:
            if spec.min_items == 0:
                out.append(self._complete(th[1]))
            return out
        if cap is not None and count >= cap:
            return out
        holder = ((A, vid, depth, count, 3), th[1])
        self._start_value(spec.choice_at(count), b, holder, out)
        return out

    def _step_object(self, th, f, b: int, gen: bool) -> list:
        _, vid, depth, seen, phase, sub = f
        out: list = []
        if phase == 1:
            keys = self._keys_for(vid, seen)
            r = _scan(keys, sub[0], sub[1], b, gen)
            if r is _CLOSE:
                text = sub[0][0]
                out.append(((O, vid, depth, seen | {text}, 2, keys.choice(sub[0])), th[1]))
            elif r is not None:
                out.append(((O, vid, depth, seen, 1, r), th[1]))
            return out
        if b in WS:
            if not gen:
                out.append(th)
            return out
        spec: ObjectSpec = self.vnodes[vid].obj
        if phase == 2:
            if b == 0x3A:
                out.append(((V, sub), ((O, vid, depth, seen, 3, None), th[1])))
            return out
        if phase in (0, 4) and b == 0x7D:
            if self._can_close_object(spec, seen):
                out.append(self._complete(th[1]))
            return out
        if (phase in (0, 5) and b == 0x22) or (phase == 4 and b == 0x2C):
            keys = self._keys_for(vid, seen)
            cs = keys.start()
            if not keys.live(cs[0], cs[1]):
                return out
            if b == 0x22:
                out.append(((O, vid, depth, seen, 1, (cs, None)), th[1]))
            else:
                out.append(((O, vid, depth, seen, 5, None), th[1]))
        return out

    @staticmethod
    def _can_close_object(spec: ObjectSpec, seen: frozenset) -> bool:
        if len(seen) < spec.min_props:
            return False
        if spec.max_props is not None and len(seen) > spec.max_props:
            return False
        from .build import needed_keys

        return needed_keys(spec, seen) <= seen

    # -- debugging ---------------------------------------------------------
    def dump(self) -> str:
        """Deterministic text listing of choices and value nodes."""
        lines = [f"automaton from={self.compiled_from!r} root=c{self.root_choice} max_depth={self.max_depth}"]
        for cid, alts in enumerate(self.choices):
            lines.append(f"c{cid} = " + (" | ".join(f"v{v}" for v in alts) if alts else "<none>"))
        for v in self.vnodes:
            parts = []
            if v.null:
                parts.append("null")
            if v.true or v.false:
                parts.append("bool" if v.true and v.false else ("true" if v.true else "false"))
            if v.number is not None:
                n = v.number
                if n.dfa is not None:
                    parts.append(f"number[dfa {n.dfa.n_states} states]")
                else:
                    parts.append(f"integer[{n.lo}..{n.hi} step {n.mult}]")
            if v.string is not None:
                parts.append(f"string[dfa {v.string.n_states} states]")
            if v.array is not None:
                a = v.array
                prefix = ",".join(f"c{c}" for c in a.prefix)
                parts.append(f"array[prefix=({prefix}) rest=c{a.rest} items={a.min_items}..{a.max_items}]")
            if v.obj is not None:
                o = v.obj
                props = ",".join(f"{k}:c{o.name_choice[k]}" for k in o.names)
                parts.append(
                    f"object[{{{props}}} required={sorted(o.required)} "
                    f"other={'yes' if o.other_any else 'no'} props={o.min_props}..{o.max_props}]"
                )
            lines.append(f"v{v.id} {v.origin}: " + (" ".join(parts) if parts else "<nothing>"))
        return "\n".join(lines) + "\n"


_STRUCTURAL = sorted(set(b' \t\n\r{}[]:,"-0123456789ntrufalse.eE+'))
