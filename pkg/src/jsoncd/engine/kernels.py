"""Hot loop for masks inside plain string values.

``string_trie_walk`` walks the token trie against an ASCII transition table
of a string-content DFA and labels every reached trie node with its DFA
state. Bytes that need the general matcher (quote, backslash, non-ASCII)
are marked ``SLOW`` so the caller can finish those subtrees in Python.

The numba version is used unless ``JSONCD_NO_NUMBA=1`` is set or numba is
unavailable; the numpy version does the same walk breadth-first.
"""

from __future__ import annotations

import os

import numpy as np

DEAD = -1
SLOW = -2

_DISABLED = os.environ.get("JSONCD_NO_NUMBA", "") not in ("", "0")

try:  # pragma: no cover - depends on the environment
    if _DISABLED:
        raise ImportError("disabled by JSONCD_NO_NUMBA")
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False


def string_trie_walk_numpy(child_start, edge_byte, edge_child, table, start_state, n_nodes):
    """Label trie nodes with DFA states (DEAD/SLOW for the rest)."""
    out = np.full(n_nodes, DEAD, dtype=np.int32)
    out[0] = start_state
    frontier = np.array([0], dtype=np.int64)
    states = np.array([start_state], dtype=np.int64)
    width = table.shape[1]
    while frontier.size:
        lo = child_start[frontier]
        counts = child_start[frontier + 1] - lo
        total = int(counts.sum())
        if total == 0:
            break
        offsets = np.arange(total) - np.repeat(np.cumsum(counts) - counts, counts)
        idx = np.repeat(lo, counts) + offsets
        src = np.repeat(states, counts)
        bytes_ = edge_byte[idx]
        kids = edge_child[idx]
        ascii_ = bytes_ < width
        nxt = np.full(total, SLOW, dtype=np.int64)
        nxt[ascii_] = table[src[ascii_], bytes_[ascii_]]
        out[kids] = nxt
        live = nxt >= 0
        frontier = kids[live]
        states = nxt[live]
    return out


if HAVE_NUMBA:

    @njit(cache=True, nogil=True)
    def _walk_numba(child_start, edge_byte, edge_child, table, start_state, n_nodes):  # pragma: no cover
        out = np.full(n_nodes, -1, dtype=np.int32)
        out[0] = start_state
        stack = np.empty(n_nodes, dtype=np.int64)
        top = 0
        stack[top] = 0
        top += 1
        width = table.shape[1]
        while top > 0:
            top -= 1
            node = stack[top]
            st = out[node]
            for e in range(child_start[node], child_start[node + 1]):
                b = edge_byte[e]
                kid = edge_child[e]
                if b >= width:
                    out[kid] = -2
                    continue
                ns = table[st, b]
                out[kid] = ns
                if ns >= 0:
                    stack[top] = kid
                    top += 1
        return out

    def string_trie_walk(child_start, edge_byte, edge_child, table, start_state, n_nodes):
        return _walk_numba(child_start, edge_byte, edge_child, table, np.int64(start_state), n_nodes)

else:
    string_trie_walk = string_trie_walk_numpy


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"
