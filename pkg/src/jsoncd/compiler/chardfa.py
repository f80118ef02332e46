"""Deterministic automata over Unicode code points.

Transitions are stored per state as sorted, disjoint ``[lo, hi]`` code point
intervals so that full-Unicode character classes stay small. A
:class:`CharDFA` is always trimmed: every state can still reach an
accepting state, so a live state never dead-ends.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Sequence

MAX_CP = 0x10FFFF

Intervals = tuple  # tuple[tuple[int, int], ...]


# -- interval sets -----------------------------------------------------------


def normalize(intervals: Iterable[tuple[int, int]]) -> Intervals:
    items = sorted((lo, hi) for lo, hi in intervals if lo <= hi)
    out: list[tuple[int, int]] = []
    for lo, hi in items:
        if out and lo <= out[-1][1] + 1:
            if hi > out[-1][1]:
                out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return tuple(out)


def negate(intervals: Intervals) -> Intervals:
    out = []
    prev = 0
    for lo, hi in intervals:
        if lo > prev:
            out.append((prev, lo - 1))
        prev = hi + 1
    if prev <= MAX_CP:
        out.append((prev, MAX_CP))
    return tuple(out)


def union(*sets: Intervals) -> Intervals:
    return normalize(iv for s in sets for iv in s)


def intersect(a: Intervals, b: Intervals) -> Intervals:
    out = []
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if lo <= hi:
            out.append((lo, hi))
        if a[i][1] < b[j][1]:
            i += 1
        else:
            j += 1
    return tuple(out)


def contains(intervals: Intervals, cp: int) -> bool:
    for lo, hi in intervals:
        if lo <= cp <= hi:
            return True
        if cp < lo:
            return False
    return False


def partition(sets: Sequence[Intervals]) -> list[tuple[int, int, frozenset[int]]]:
    """Split the code point space into maximal intervals on which membership
    in each of ``sets`` is constant. Yields (lo, hi, indices-containing)."""
    points = {0, MAX_CP + 1}
    for s in sets:
        for lo, hi in s:
            points.add(lo)
            points.add(hi + 1)
    cuts = sorted(points)
    out = []
    for lo, nxt in zip(cuts, cuts[1:]):
        hi = nxt - 1
        members = frozenset(i for i, s in enumerate(sets) if contains(s, lo))
        out.append((lo, hi, members))
    return out


# -- the automaton -----------------------------------------------------------


@dataclass(frozen=True)
class CharDFA:
    """Trimmed DFA; state 0 is the start state.

    ``los[s]``/``his[s]``/``targets[s]`` are parallel sorted lists describing
    the transitions of state ``s``. An empty-language DFA has no states.
    """

    los: tuple[tuple[int, ...], ...]
    his: tuple[tuple[int, ...], ...]
    targets: tuple[tuple[int, ...], ...]
    accepting: tuple[bool, ...]
    labels: Optional[tuple] = None

    @property
    def n_states(self) -> int:
        return len(self.accepting)

    @property
    def empty(self) -> bool:
        return not self.accepting

    def step(self, state: int, cp: int) -> int:
        los = self.los[state]
        i = bisect_right(los, cp) - 1
        if i >= 0 and cp <= self.his[state][i]:
            return self.targets[state][i]
        return -1

    def range_live(self, state: int, lo: int, hi: int) -> bool:
        """True if some code point in [lo, hi] has a transition from ``state``."""
        los = self.los[state]
        his = self.his[state]
        i = bisect_right(los, hi) - 1
        return i >= 0 and his[i] >= lo

    def has_transitions(self, state: int) -> bool:
        return bool(self.los[state])

    def accepts(self, text: str) -> bool:
        if self.empty:
            return False
        s = 0
        for ch in text:
            s = self.step(s, ord(ch))
            if s < 0:
                return False
        return self.accepting[s]

    def transitions(self, state: int) -> list[tuple[int, int, int]]:
        return list(zip(self.los[state], self.his[state], self.targets[state]))

    def finite_language(self, state: int, limit: int = 256) -> Optional[frozenset[str]]:
        """All completions from ``state`` if there are at most ``limit`` of them."""
        out: set[str] = set()
        on_path: set[int] = set()

        def walk(s: int, prefix: str) -> bool:
            if s in on_path:
                return False
            if self.accepting[s]:
                out.add(prefix)
                if len(out) > limit:
                    return False
            on_path.add(s)
            for lo, hi, t in self.transitions(s):
                if hi - lo > limit:
                    on_path.discard(s)
                    return False
                for cp in range(lo, hi + 1):
                    if not walk(t, prefix + chr(cp)):
                        on_path.discard(s)
                        return False
            on_path.discard(s)
            return True

        return frozenset(out) if walk(state, "") else None


def build(
    start: object,
    expand: Callable[[object], Iterable[tuple[int, int, object]]],
    is_accepting: Callable[[object], bool],
    max_states: int = 200_000,
    check: Optional[Callable[[], None]] = None,
    label: Optional[Callable[[object], object]] = None,
) -> CharDFA:
    """Explore a DFA given by a successor function over hashable keys, then
    trim it. ``expand(key)`` yields (lo, hi, next_key) with disjoint ranges.
    ``label(key)``, when given, is kept per surviving state."""
    index: dict[object, int] = {start: 0}
    keys = [start]
    raw: list[list[tuple[int, int, int]]] = []
    i = 0
    while i < len(keys):
        if check is not None and i % 64 == 0:
            check()
        key = keys[i]
        edges = []
        for lo, hi, nxt in expand(key):
            j = index.get(nxt)
            if j is None:
                j = len(keys)
                if j >= max_states:
                    raise OverflowError("automaton too large")
                index[nxt] = j
                keys.append(nxt)
            edges.append((lo, hi, j))
        raw.append(edges)
        i += 1
    accepting = [is_accepting(k) for k in keys]
    labels = [label(k) for k in keys] if label is not None else None
    return _trim(raw, accepting, labels)


def _trim(raw: list[list[tuple[int, int, int]]], accepting: list[bool], labels: Optional[list] = None) -> CharDFA:
    n = len(raw)
    rev: list[list[int]] = [[] for _ in range(n)]
    for s, edges in enumerate(raw):
        for _, _, t in edges:
            rev[t].append(s)
    live = [False] * n
    stack = [s for s in range(n) if accepting[s]]
    for s in stack:
        live[s] = True
    while stack:
        t = stack.pop()
        for s in rev[t]:
            if not live[s]:
                live[s] = True
                stack.append(s)
    if n == 0 or not live[0]:
        return EMPTY
    # renumber reachable live states, keeping 0 as start
    order = [0]
    new_id = {0: 0}
    k = 0
    while k < len(order):
        s = order[k]
        for _, _, t in raw[s]:
            if live[t] and t not in new_id:
                new_id[t] = len(order)
                order.append(t)
        k += 1
    los, his, tgts, acc = [], [], [], []
    for s in order:
        merged: list[tuple[int, int, int]] = []
        for lo, hi, t in sorted(raw[s]):
            if not live[t]:
                continue
            t2 = new_id[t]
            if merged and merged[-1][2] == t2 and merged[-1][1] + 1 == lo:
                merged[-1] = (merged[-1][0], hi, t2)
            else:
                merged.append((lo, hi, t2))
        los.append(tuple(m[0] for m in merged))
        his.append(tuple(m[1] for m in merged))
        tgts.append(tuple(m[2] for m in merged))
        acc.append(accepting[s])
    lab = tuple(labels[s] for s in order) if labels is not None else None
    return CharDFA(tuple(los), tuple(his), tuple(tgts), tuple(acc), lab)


# -- constructors ------------------------------------------------------------

EMPTY = CharDFA((), (), (), ())
ANY_STRING = CharDFA(((0,),), ((MAX_CP,),), ((0,),), (True,))


def literal_set(words: Iterable[str]) -> CharDFA:
    """DFA accepting exactly the given strings (a trie)."""
    words = sorted(set(words))

    def expand(prefix: str):
        n = len(prefix)
        nxt = sorted({w[n] for w in words if len(w) > n and w.startswith(prefix)})
        for ch in nxt:
            yield ord(ch), ord(ch), prefix + ch

    return build("", expand, lambda p: p in words)


def product(dfas: Sequence[CharDFA], min_len: int = 0, max_len: Optional[int] = None,
            check: Optional[Callable[[], None]] = None) -> CharDFA:
    """Intersection of ``dfas`` further restricted to lengths in [min_len, max_len]."""
    if any(d.empty for d in dfas):
        return EMPTY
    if max_len is not None and max_len < min_len:
        return EMPTY
    if not dfas:
        dfas = [ANY_STRING]
    cap = max_len if max_len is not None else min_len

    def expand(key):
        states, count = key
        if max_len is not None and count >= max_len:
            return
        nxt_count = min(count + 1, cap) if max_len is None else count + 1
        for lo, hi in _joint_partition(dfas, states):
            targets = tuple(d.step(s, lo) for d, s in zip(dfas, states))
            if all(t >= 0 for t in targets):
                yield lo, hi, (targets, nxt_count)

    def accepting(key):
        states, count = key
        return count >= min_len and all(d.accepting[s] for d, s in zip(dfas, states))

    start = (tuple(0 for _ in dfas), 0)
    return build(start, expand, accepting, check=check)


def union_of(dfas: Sequence[CharDFA], check: Optional[Callable[[], None]] = None) -> CharDFA:
    """DFA accepting the union of the languages of ``dfas``."""
    dfas = [d for d in dfas if not d.empty]
    if not dfas:
        return EMPTY
    if len(dfas) == 1:
        return dfas[0]

    def expand(states):
        for lo, hi in _joint_partition(dfas, [s if s >= 0 else None for s in states]):
            targets = tuple(d.step(s, lo) if s >= 0 else -1 for d, s in zip(dfas, states))
            if any(t >= 0 for t in targets):
                yield lo, hi, targets

    def accepting(states):
        return any(s >= 0 and d.accepting[s] for d, s in zip(dfas, states))

    return build(tuple(0 for _ in dfas), expand, accepting, check=check)


def _joint_partition(dfas: Sequence[CharDFA], states: Sequence[int]):
    points = set()
    for d, s in zip(dfas, states):
        if s is None:
            continue
        for lo, hi in zip(d.los[s], d.his[s]):
            points.add(lo)
            points.add(hi + 1)
    cuts = sorted(points)
    for lo, nxt in zip(cuts, cuts[1:]):
        yield lo, nxt - 1
