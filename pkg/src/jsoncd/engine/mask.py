"""Token masks, token-level advancing and fast-forwarding."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..compiler.automaton import ConstraintAutomaton, MatcherState
from ..errors import RejectAt
from . import kernels
from .trie import TokenTrie


@dataclass(frozen=True, eq=False)
class TokenMask:
    bits: np.ndarray  # bool, one per token id
    eos_id: int

    @property
    def count(self) -> int:
        return int(self.bits.sum())

    @property
    def size(self) -> int:
        return len(self.bits)

    @property
    def eos(self) -> bool:
        return bool(self.bits[self.eos_id])

    def __contains__(self, token_id: int) -> bool:
        return bool(self.bits[token_id])

    def ids(self) -> list[int]:
        return np.flatnonzero(self.bits).tolist()

    @classmethod
    def all_ones(cls, size: int, eos_id: int) -> "TokenMask":
        return cls(np.ones(size, dtype=bool), eos_id)

    @classmethod
    def empty(cls, size: int, eos_id: int) -> "TokenMask":
        return cls(np.zeros(size, dtype=bool), eos_id)


def advance_token(a: ConstraintAutomaton, s: MatcherState, token: bytes) -> MatcherState:
    """Fold :meth:`advance_byte` over ``token``; raises RejectAt(offset)."""
    for i, b in enumerate(token):
        nxt = a.advance_byte(s, b)
        if nxt is None:
            raise RejectAt(i)
        s = nxt
    return s


def _walk(a: ConstraintAutomaton, s: MatcherState, trie: TokenTrie, node: int, bits: np.ndarray) -> None:
    kids = trie.kid_maps[node]
    if node == 0 or len(kids) > 32:
        succ = a.successors(s)
        items = [(b, k, succ.get(b)) for b, k in kids.items()]
        gen = s.generation
        for b, kid, t in items:
            if t is None:
                continue
            for tid in trie.ends[kid]:
                bits[tid] = True
            if trie.kid_maps[kid]:
                _walk(a, MatcherState(t, gen, s.pos + 1), trie, kid, bits)
        return
    for b, kid in kids.items():
        ns = a.step_cached(s, b)
        if ns is None:
            continue
        for tid in trie.ends[kid]:
            bits[tid] = True
        if trie.kid_maps[kid]:
            _walk(a, ns, trie, kid, bits)


def _string_base(a: ConstraintAutomaton, trie: TokenTrie, vid: int, q: int, gen: bool) -> tuple[np.ndarray, list[tuple[int, int]]]:
    """Parent-independent part of a string-content mask.

    Returns the bits of every token decided by the ASCII table or by a
    single byte that cannot close the string, plus the (node, dfa state)
    pairs that still need the enclosing context.
    """
    key = ("str", trie, vid, q, gen)
    hit = a.mask_cache.get(key)
    if hit is not None:
        return hit
    labels = kernels.string_trie_walk(
        trie.child_start, trie.edge_byte, trie.edge_child, a.ascii_table(vid), q, trie.n_nodes
    )
    nodes = trie.token_node
    real = nodes >= 0
    bits = np.zeros(trie.vocab.size, dtype=bool)
    bits[real] = labels[nodes[real]] >= 0
    pending = []
    for kid in np.flatnonzero(labels == kernels.SLOW).tolist():
        pq = int(labels[trie.parent[kid]])
        b = int(trie.in_byte[kid])
        if b != 0x22 and not trie.kid_maps[kid]:
            # an escape or multi-byte lead cannot leave the string
            if a.step_cached(a.string_state(vid, pq, None, gen), b) is not None:
                for tid in trie.ends[kid]:
                    bits[tid] = True
        else:
            pending.append((kid, pq))
    a.mask_cache[key] = (bits, pending)
    return bits, pending


def _string_fast(a: ConstraintAutomaton, s: MatcherState, trie: TokenTrie, bits: np.ndarray) -> bool:
    hit = a.plain_string(s)
    if hit is None:
        return False
    vid, q, parent = hit
    base, pending = _string_base(a, trie, vid, q, s.generation)
    bits |= base
    for kid, pq in pending:
        start = a.string_state(vid, pq, parent, s.generation)
        ns = a.step_cached(start, int(trie.in_byte[kid]))
        if ns is None:
            continue
        for tid in trie.ends[kid]:
            bits[tid] = True
        if trie.kid_maps[kid]:
            _walk(a, ns, trie, kid, bits)
    return True


MASK_CACHE_LIMIT = 50_000


def compute_mask(
    a: ConstraintAutomaton, s: Optional[MatcherState], trie: TokenTrie, fast: bool = True, cache: bool = True
) -> TokenMask:
    """Allowed-token mask for ``s``. Masks depend only on the matcher
    configuration, so they are memoized per (trie, state); the returned
    bit array is read-only."""
    vocab = trie.vocab
    if s is None or not s.alive:
        return TokenMask(np.zeros(vocab.size, dtype=bool), vocab.eos_id)
    key = (trie, s.key) if cache else None
    if key is not None:
        hit = a.mask_cache.get(key)
        if hit is not None:
            return hit
    bits = np.zeros(vocab.size, dtype=bool)
    if not (fast and _string_fast(a, s, trie, bits)):
        _walk(a, s, trie, 0, bits)
    bits[vocab.eos_id] = a.can_terminate(s)
    bits.flags.writeable = False
    mask = TokenMask(bits, vocab.eos_id)
    if key is not None:
        if len(a.mask_cache) > MASK_CACHE_LIMIT:
            a.mask_cache.clear()
        a.mask_cache[key] = mask
    return mask


def fast_forward(
    a: ConstraintAutomaton, s: MatcherState, trie: TokenTrie, limit: Optional[int] = None
) -> tuple[list[int], MatcherState]:
    """Emit tokens while exactly one non-EOS token is allowed."""
    out: list[int] = []
    while limit is None or len(out) < limit:
        mask = compute_mask(a, s, trie)
        if mask.count != 1 or mask.eos:
            break
        tid = mask.ids()[0]
        s = advance_token(a, s, trie.vocab.tokens[tid])
        out.append(tid)
    return out, s
