"""Byte-labelled prefix tree over a vocabulary, stored in CSR arrays."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .vocab import Vocabulary


@dataclass(frozen=True, eq=False)
class TokenTrie:
    """Node 0 is the root. Children of node ``n`` are the edges
    ``child_start[n]:child_start[n+1]`` (sorted by byte); tokens ending at
    ``n`` are ``token_ids[token_start[n]:token_start[n+1]]``."""

    vocab: Vocabulary
    child_start: np.ndarray
    edge_byte: np.ndarray
    edge_child: np.ndarray
    token_start: np.ndarray
    token_ids: np.ndarray
    token_node: np.ndarray  # terminal node per token id (-1 for eos)
    depth: np.ndarray
    kid_maps: tuple[dict[int, int], ...]  # same edges as dicts, for Python-side walks
    ends: tuple[tuple[int, ...], ...]
    parent: np.ndarray  # parent node (-1 for the root)
    in_byte: np.ndarray  # byte on the edge from the parent (-1 for the root)

    @property
    def n_nodes(self) -> int:
        return len(self.child_start) - 1

    def children(self, node: int):
        return self.kid_maps[node].items()

    def tokens_at(self, node: int) -> tuple[int, ...]:
        return self.ends[node]

    def child(self, node: int, b: int) -> int:
        return self.kid_maps[node].get(b, -1)

    def path(self, token_id: int) -> bytes:
        return self.vocab.tokens[token_id]

    def longest_match(self, data: bytes, pos: int) -> Optional[tuple[int, int]]:
        """(token id, length) of the longest token that prefixes data[pos:]."""
        node, best = 0, None
        i = pos
        while i < len(data):
            node = self.child(node, data[i])
            if node < 0:
                break
            i += 1
            ids = self.tokens_at(node)
            if ids:
                best = (ids[0], i - pos)
        return best

    def matches(self, data: bytes, pos: int) -> list[tuple[int, int]]:
        """Every (token id, length) whose bytes prefix data[pos:]."""
        out = []
        node, i = 0, pos
        while i < len(data):
            node = self.child(node, data[i])
            if node < 0:
                break
            i += 1
            out.extend((t, i - pos) for t in self.tokens_at(node))
        return out


def build_trie(vocab: Vocabulary) -> TokenTrie:
    kids: list[dict[int, int]] = [{}]
    ends: list[list[int]] = [[]]
    depth = [0]
    token_node = np.full(vocab.size, -1, dtype=np.int64)
    for tid, tok in enumerate(vocab.tokens):
        if tid == vocab.eos_id:
            continue
        node = 0
        for b in tok:
            nxt = kids[node].get(b)
            if nxt is None:
                nxt = len(kids)
                kids[node][b] = nxt
                kids.append({})
                ends.append([])
                depth.append(depth[node] + 1)
            node = nxt
        ends[node].append(tid)
        token_node[tid] = node
    n = len(kids)
    parent = np.full(n, -1, dtype=np.int64)
    in_byte = np.full(n, -1, dtype=np.int64)
    for i, k in enumerate(kids):
        for b, c in k.items():
            parent[c] = i
            in_byte[c] = b
    child_start = np.zeros(n + 1, dtype=np.int64)
    edge_byte, edge_child = [], []
    token_start = np.zeros(n + 1, dtype=np.int64)
    token_ids: list[int] = []
    for i in range(n):
        for b in sorted(kids[i]):
            edge_byte.append(b)
            edge_child.append(kids[i][b])
        child_start[i + 1] = len(edge_byte)
        token_ids.extend(sorted(ends[i]))
        token_start[i + 1] = len(token_ids)
    return TokenTrie(
        vocab,
        child_start,
        np.asarray(edge_byte, dtype=np.int64),
        np.asarray(edge_child, dtype=np.int64),
        token_start,
        np.asarray(token_ids, dtype=np.int64),
        token_node,
        np.asarray(depth, dtype=np.int64),
        tuple({b: k[b] for b in sorted(k)} for k in kids),
        tuple(tuple(sorted(e)) for e in ends),
        parent,
        in_byte,
    )
