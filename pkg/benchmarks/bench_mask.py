"""Compare the numba and numpy string-mask kernels.

Times ``string_trie_walk`` on the bundled vocabularies and on a synthetic
32k-token vocabulary, then times uncached ``compute_mask`` calls inside a
string value with each backend swapped in. Run with

    python3 benchmarks/bench_mask.py [--repeat 200] [--json out.json]
"""

from __future__ import annotations

import argparse
import json
import random
import time
from pathlib import Path

import numpy as np

from jsoncd.compiler.compile import compile_value
from jsoncd.engine import kernels, mask
from jsoncd.engine.trie import build_trie
from jsoncd.engine.vocab import Vocabulary, load_vocabulary

SCHEMA = {"type": "string", "pattern": "^[a-z ]{0,40}$"}


def synthetic_vocab(size: int, seed: int = 0) -> Vocabulary:
    rng = random.Random(seed)
    alphabet = "abcdefghijklmnopqrstuvwxyz ABCDEFGHIJ0123456789_\",:{}[]"
    seen = {bytes([b]) for b in range(256)}
    tokens = [bytes([b]) for b in range(256)]
    while len(tokens) < size - 1:
        t = "".join(rng.choice(alphabet) for _ in range(rng.randint(2, 8))).encode()
        if t not in seen:
            seen.add(t)
            tokens.append(t)
    return Vocabulary(tuple(tokens) + (b"",), len(tokens))


def _time(fn, repeat: int) -> float:
    fn()  # warm-up (includes JIT compilation on first use)
    t0 = time.perf_counter()
    for _ in range(repeat):
        fn()
    return (time.perf_counter() - t0) / repeat


def bench(repeat: int) -> list[dict]:
    a = compile_value(SCHEMA).automaton
    s = a.advance_bytes(a.start(True), b'"ab')
    vid, q, _ = a.plain_string(s)
    table = a.ascii_table(vid)
    rows = []
    vocabs = {
        "byte": load_vocabulary(name="byte"),
        "bpe1k": load_vocabulary(name="bpe1k"),
        "synthetic32k": synthetic_vocab(32_000),
    }
    for name, vocab in vocabs.items():
        trie = build_trie(vocab)
        args = (trie.child_start, trie.edge_byte, trie.edge_child, table, q, trie.n_nodes)
        row = {"vocab": name, "tokens": vocab.size, "trie_nodes": trie.n_nodes}
        row["kernel_numpy_us"] = _time(lambda: kernels.string_trie_walk_numpy(*args), repeat) * 1e6
        if kernels.HAVE_NUMBA:
            ref = kernels.string_trie_walk_numpy(*args)
            got = kernels.string_trie_walk(*args)
            assert np.array_equal(ref, got), "backends disagree"
            row["kernel_numba_us"] = _time(lambda: kernels.string_trie_walk(*args), repeat) * 1e6
        for backend, fn in (("numpy", kernels.string_trie_walk_numpy), ("numba", kernels.string_trie_walk)):
            if backend == "numba" and not kernels.HAVE_NUMBA:
                continue
            saved = kernels.string_trie_walk
            kernels.string_trie_walk = fn
            try:
                def uncached() -> None:
                    a.mask_cache.clear()
                    mask.compute_mask(a, s, trie)

                row[f"mask_{backend}_us"] = _time(uncached, max(1, repeat // 4)) * 1e6
            finally:
                kernels.string_trie_walk = saved
        rows.append(row)
    return rows


def main(argv: list[str] | None = None) -> int:
    ap = argparse.ArgumentParser(description="numba vs numpy string-mask kernels")
    ap.add_argument("--repeat", type=int, default=200)
    ap.add_argument("--json", type=Path)
    args = ap.parse_args(argv)
    rows = bench(args.repeat)
    cols = list(rows[0])
    print("  ".join(f"{c:>16}" for c in cols))
    for r in rows:
        print("  ".join(f"{r[c]:>16.1f}" if isinstance(r[c], float) else f"{r[c]:>16}" for c in cols))
    print(f"active backend: {kernels.backend()}")
    if args.json:
        args.json.write_text(json.dumps(rows, indent=2) + "\n", "utf-8")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
