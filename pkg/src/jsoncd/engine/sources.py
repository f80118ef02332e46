"""Scripted logits sources standing in for a language model."""

from __future__ import annotations

from typing import Protocol, Sequence

import numpy as np

from .trie import TokenTrie
from .vocab import Vocabulary

_CLOSERS = frozenset(b'}]"')


class LogitsSource(Protocol):
    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        """Return one real score per vocabulary token."""
        ...


class ReplaySource:
    """Prefers the longest token that continues a fixed byte target, then EOS."""

    def __init__(self, trie: TokenTrie, target: bytes) -> None:
        self.trie = trie
        self.vocab = trie.vocab
        self.target = bytes(target)

    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        vocab = self.vocab
        scores = np.full(vocab.size, -1.0)
        done = self.vocab.decode(output)
        if not self.target.startswith(done):
            return scores
        pos = len(done)
        if pos == len(self.target):
            scores[vocab.eos_id] = 1.0
            return scores
        for tid, n in self.trie.matches(self.target, pos):
            scores[tid] = float(n)
        return scores


class _Rows:
    """Lazily drawn per-position random rows: row n depends only on the
    seed and n, whatever order positions are requested in."""

    def __init__(self, seed: int, width: int) -> None:
        self.rng = np.random.default_rng(seed)
        self.width = width
        self.rows: list[np.ndarray] = []

    def __getitem__(self, n: int) -> np.ndarray:
        while len(self.rows) <= n:
            self.rows.append(self.rng.random(self.width))
        return self.rows[n]


class UniformSource:
    """Independent uniform scores per position, reproducible from the seed
    and the position."""

    def __init__(self, size: int, seed: int = 0) -> None:
        self.size = size
        self.seed = seed
        self._rows = _Rows(seed, size)

    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        return self._rows[len(output)]


class AdversarialSource:
    """Random scores that push towards structurally risky tokens.

    Closing brackets, quotes, commas and EOS get a bonus that grows with
    the output length, so runs end quickly while probing every point where
    an unsound mask would let an invalid instance through.
    """

    def __init__(self, vocab: Vocabulary, seed: int = 0, horizon: int = 64) -> None:
        self.vocab = vocab
        self.seed = seed
        self.horizon = horizon
        risky = np.zeros(vocab.size)
        for tid, tok in enumerate(vocab.tokens):
            if tok and (tok[-1] in _CLOSERS or b"," in tok):
                risky[tid] = 1.0
        risky[vocab.eos_id] = 1.5
        self.risky = risky
        self._rows = _Rows(seed, vocab.size + 1)

    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        n = len(output)
        row = self._rows[n]
        pressure = min(1.0, n / self.horizon) * 2.0
        return row[:-1] + self.risky * (row[-1] * pressure)


class TokenScriptSource:
    """Returns fixed score vectors in order; handy for protocol fixtures."""

    def __init__(self, rows: Sequence[Sequence[float]]) -> None:
        self.rows = [np.asarray(r, dtype=float) for r in rows]

    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        return self.rows[min(len(output), len(self.rows) - 1)]
