"""The constrained decoding loop with timing instrumentation."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ..compiler.automaton import ConstraintAutomaton
from ..errors import DepthExceeded, RejectAt
from .mask import TokenMask, advance_token, compute_mask, fast_forward
from .sources import LogitsSource
from .trie import TokenTrie

EOS = "eos"
MAX_TOKENS = "max_tokens"
TIMEOUT = "timeout"
DEAD_END = "dead_end"


@dataclass(frozen=True)
class DecodeOptions:
    max_tokens: int = 256
    generation_timeout: float = 40.0
    fast_forward: bool = False
    # False gives the unconstrained baseline: same loop, pass-through mask
    use_mask: bool = True
    include_gct_in_ttft: bool = True
    # sample from softmax(scores) instead of greedy argmax when set
    sample_seed: Optional[int] = None


@dataclass
class Timing:
    gct: float = 0.0
    ttft: float = 0.0
    per_token: list[float] = field(default_factory=list)
    tgt: float = 0.0


@dataclass
class DecodeResult:
    tokens: list[int]
    data: bytes
    terminated_by: str
    timing: Timing
    ff_token_count: int = 0
    sampled_steps: int = 0

    @property
    def output_tokens(self) -> int:
        return len(self.tokens)


def pick_token(scores: np.ndarray, mask: TokenMask, rng: Optional[np.random.Generator] = None) -> int:
    """Greedy argmax over allowed tokens; ties go to the lowest id."""
    masked = np.where(mask.bits, scores, -np.inf)
    if rng is None:
        return int(np.argmax(masked))
    allowed = np.flatnonzero(mask.bits)
    logits = scores[allowed] - scores[allowed].max()
    p = np.exp(logits)
    return int(allowed[rng.choice(len(allowed), p=p / p.sum())])


def constrained_decode(
    a: Optional[ConstraintAutomaton],
    source: LogitsSource,
    trie: TokenTrie,
    opts: Optional[DecodeOptions] = None,
    prompt: Sequence[int] = (),
    gct: float = 0.0,
) -> DecodeResult:
    opts = opts or DecodeOptions()
    vocab = trie.vocab
    rng = np.random.default_rng(opts.sample_seed) if opts.sample_seed is not None else None
    offset = gct if opts.include_gct_in_ttft else 0.0
    timing = Timing(gct=gct)
    t0 = time.monotonic()
    last = t0
    first: Optional[float] = None
    # the automaton may be omitted for the pass-through (mask-off) baseline
    state = a.start(generation=True) if opts.use_mask else None
    out: list[int] = []
    ff_count = sampled = 0
    terminated = MAX_TOKENS

    def emit(tid: int) -> None:
        nonlocal last, first
        now = time.monotonic()
        timing.per_token.append(now - last)
        last = now
        if first is None:
            first = now
        out.append(tid)

    while len(out) < opts.max_tokens:
        if time.monotonic() - t0 > opts.generation_timeout:
            terminated = TIMEOUT
            break
        if opts.fast_forward and opts.use_mask:
            forced, state = fast_forward(a, state, trie, limit=opts.max_tokens - len(out))
            for tid in forced:
                emit(tid)
            ff_count += len(forced)
            if len(out) >= opts.max_tokens:
                break
        if opts.use_mask:
            mask = compute_mask(a, state, trie)
            if mask.count == 0:
                terminated = DEAD_END
                break
        else:
            mask = TokenMask.all_ones(vocab.size, vocab.eos_id)
        scores = np.asarray(source.score(prompt, out), dtype=float)
        tid = pick_token(scores, mask, rng)
        sampled += 1
        if tid == vocab.eos_id:
            terminated = EOS
            break
        if opts.use_mask:
            try:
                state = advance_token(a, state, vocab.tokens[tid])
            except (RejectAt, DepthExceeded):
                terminated = DEAD_END
                emit(tid)
                break
        emit(tid)
    end = time.monotonic()
    timing.ttft = offset + ((first if first is not None else end) - t0)
    timing.tgt = offset + (end - t0)
    return DecodeResult(out, vocab.decode(out), terminated, timing, ff_count, sampled)
