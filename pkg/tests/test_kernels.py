from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from jsoncd.engine import kernels

SLOW, DEAD = kernels.SLOW, kernels.DEAD


def random_table(n_states: int, seed: int) -> np.ndarray:
    rng = np.random.default_rng(seed)
    t = rng.integers(-1, n_states, size=(n_states, 128), dtype=np.int32)
    t[:, 0x22] = SLOW
    t[:, 0x5C] = SLOW
    return t


def reference_walk(trie, table, start):
    """Plain recursive labelling of trie nodes."""
    out = [DEAD] * trie.n_nodes
    out[0] = start

    def visit(node, q):
        for e in range(trie.child_start[node], trie.child_start[node + 1]):
            b, kid = int(trie.edge_byte[e]), int(trie.edge_child[e])
            ns = SLOW if b >= table.shape[1] else int(table[q, b])
            out[kid] = ns
            if ns >= 0:
                visit(kid, ns)

    visit(0, start)
    return out


def _args(trie, table, start):
    return trie.child_start, trie.edge_byte, trie.edge_child, table, start, trie.n_nodes


@pytest.mark.parametrize("seed", range(6))
def test_numpy_kernel_matches_reference(bpe_trie, seed):
    table = random_table(5, seed)
    got = kernels.string_trie_walk_numpy(*_args(bpe_trie, table, seed % 5))
    assert got.tolist() == reference_walk(bpe_trie, table, seed % 5)


@pytest.mark.parametrize("seed", range(6))
def test_backends_agree(bpe_trie, seed):
    table = random_table(7, 100 + seed)
    a = kernels.string_trie_walk(*_args(bpe_trie, table, 1))
    b = kernels.string_trie_walk_numpy(*_args(bpe_trie, table, 1))
    assert np.array_equal(a, b)


def test_non_ascii_edges_are_slow(byte_trie):
    table = np.zeros((1, 128), dtype=np.int32)
    out = kernels.string_trie_walk(*_args(byte_trie, table, 0))
    for b in range(256):
        kid = byte_trie.child(0, b)
        assert out[kid] == (SLOW if b >= 128 else 0)


_CHILD = """
import json
from jsoncd.compiler.compile import compile_value
from jsoncd.engine import kernels
from jsoncd.engine.mask import compute_mask
from jsoncd.engine.trie import build_trie
from jsoncd.engine.vocab import load_vocabulary
a = compile_value({"type": "string", "pattern": "^[a-z ]{0,12}$"}).automaton
trie = build_trie(load_vocabulary(name="bpe1k"))
s = a.advance_bytes(a.start(True), b'"ab')
print(json.dumps({"backend": kernels.backend(), "ids": compute_mask(a, s, trie, cache=False).ids()}))
"""


def _child(disable: bool) -> dict:
    env = dict(os.environ)
    env.pop("JSONCD_NO_NUMBA", None)
    if disable:
        env["JSONCD_NO_NUMBA"] = "1"
    out = subprocess.run([sys.executable, "-c", _CHILD], env=env, capture_output=True, text=True, check=True)
    return json.loads(out.stdout.strip().splitlines()[-1])


def test_numpy_fallback_gives_identical_masks():
    off = _child(True)
    on = _child(False)
    assert off["backend"] == "numpy"
    assert on["backend"] == ("numba" if kernels.HAVE_NUMBA else "numpy")
    assert off["ids"] == on["ids"] and off["ids"]
