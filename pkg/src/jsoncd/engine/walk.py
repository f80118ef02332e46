"""Token walks: feed a pre-tokenized instance through the constraint."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from ..compiler.automaton import ConstraintAutomaton
from ..errors import DepthExceeded, RejectAt, UntokenizableBytes
from .mask import advance_token
from .trie import TokenTrie


@dataclass(frozen=True)
class Accepted:
    tokens: tuple[int, ...]


@dataclass(frozen=True)
class RejectedAt:
    pos: int


@dataclass(frozen=True)
class PrematureEnd:
    pos: int


WalkResult = Union[Accepted, RejectedAt, PrematureEnd]


def tokenize(trie: TokenTrie, data: bytes) -> list[int]:
    """Greedy longest-match tokenization."""
    out: list[int] = []
    pos = 0
    while pos < len(data):
        hit = trie.longest_match(data, pos)
        if hit is None:
            raise UntokenizableBytes(pos)
        tid, n = hit
        out.append(tid)
        pos += n
    return out


def walk_instance(a: ConstraintAutomaton, trie: TokenTrie, data: bytes) -> WalkResult:
    tokens = tokenize(trie, data)
    state = a.start(generation=False)
    pos = 0
    for tid in tokens:
        tok = trie.vocab.tokens[tid]
        try:
            state = advance_token(a, state, tok)
        except RejectAt as e:
            return RejectedAt(pos + e.offset)
        except DepthExceeded:
            return RejectedAt(pos)
        pos += len(tok)
    if not a.can_terminate(state):
        return PrematureEnd(pos)
    return Accepted(tuple(tokens))
