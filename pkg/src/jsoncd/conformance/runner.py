"""Running suite cases by walking each instance through the automaton."""

from __future__ import annotations

import enum
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .. import jsonvalue
from ..compiler.compile import CompileOptions, Compiled, compile_schema
from ..engine.trie import TokenTrie, build_trie
from ..engine.vocab import Vocabulary, byte_vocabulary
from ..engine.walk import Accepted, walk_instance
from ..errors import JsonCDError
from ..schema.ir import normalize
from .suite import TestCase


class FailureKind(enum.Enum):
    COMPILE_ERROR = "CompileError"
    OVER_CONSTRAINED = "OverConstrained"
    UNDER_CONSTRAINED = "UnderConstrained"

    def __str__(self) -> str:
        return self.value


PASS = "Pass"
FAIL = "Fail"


@dataclass(frozen=True)
class InstanceVerdict:
    description: str
    expected_valid: bool
    accepted: Optional[bool]  # None when the schema did not compile
    detail: str = ""

    @property
    def kind(self) -> Optional[FailureKind]:
        if self.accepted is None:
            return None
        if self.expected_valid and not self.accepted:
            return FailureKind.OVER_CONSTRAINED
        if not self.expected_valid and self.accepted:
            return FailureKind.UNDER_CONSTRAINED
        return None


@dataclass
class CaseOutcome:
    category: str
    index: int
    description: str
    status: str
    failures: frozenset = frozenset()
    verdicts: list[InstanceVerdict] = field(default_factory=list)
    compile_error: str = ""

    @property
    def case_id(self) -> str:
        return f"{self.category}/{self.index}"

    def to_json(self) -> dict:
        return {
            "case": self.case_id,
            "description": self.description,
            "status": self.status,
            "failures": sorted(str(f) for f in self.failures),
            "compile_error": self.compile_error,
            "instances": [
                {
                    "description": v.description,
                    "valid": v.expected_valid,
                    "accepted": v.accepted,
                    **({"detail": v.detail} if v.detail else {}),
                }
                for v in self.verdicts
            ],
        }


def instance_bytes(data) -> bytes:
    """Canonical compact serialization used for walking."""
    return jsonvalue.dumps(data).encode("utf-8", "surrogatepass")


def run_case(case: TestCase, opts: Optional[CompileOptions] = None, trie: Optional[TokenTrie] = None) -> CaseOutcome:
    trie = trie or _default_trie()
    opts = opts or CompileOptions()
    try:
        outcome = compile_schema(normalize(case.schema), opts, case.case_id)
    except JsonCDError as e:
        outcome = e
    if not isinstance(outcome, Compiled):
        reason = getattr(outcome, "reason", None) or str(outcome)
        if hasattr(outcome, "keywords"):
            reason = f"{reason}: {', '.join(outcome.keywords)}"
        verdicts = [InstanceVerdict(t.description, t.valid, None) for t in case.tests]
        if all(not t.valid for t in case.tests):
            return CaseOutcome(case.category, case.index, case.description, PASS, frozenset(), verdicts, reason)
        return CaseOutcome(
            case.category, case.index, case.description, FAIL, frozenset({FailureKind.COMPILE_ERROR}), verdicts, reason
        )
    a = outcome.automaton
    verdicts = []
    for t in case.tests:
        res = walk_instance(a, trie, instance_bytes(t.data))
        verdicts.append(InstanceVerdict(t.description, t.valid, isinstance(res, Accepted), "" if isinstance(res, Accepted) else repr(res)))
    failures = frozenset(k for k in (v.kind for v in verdicts) if k is not None)
    return CaseOutcome(case.category, case.index, case.description, FAIL if failures else PASS, failures, verdicts)


_TRIE: Optional[TokenTrie] = None


def _default_trie() -> TokenTrie:
    global _TRIE
    if _TRIE is None:
        _TRIE = build_trie(byte_vocabulary())
    return _TRIE


def _run_chunk(args) -> list[CaseOutcome]:
    cases, opts, vocab = args
    trie = build_trie(vocab) if vocab is not None else _default_trie()
    return [run_case(c, opts, trie) for c in cases]


def run_suite(
    cases: Sequence[TestCase],
    opts: Optional[CompileOptions] = None,
    vocab: Optional[Vocabulary] = None,
    jobs: int = 1,
) -> list[CaseOutcome]:
    """Run every case; results are ordered by (category, case index)."""
    cases = list(cases)
    if jobs <= 1 or len(cases) < 2:
        out = _run_chunk((cases, opts, vocab))
    else:
        jobs = min(jobs, os.cpu_count() or 1, len(cases))
        chunks = [cases[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            out = [o for part in pool.map(_run_chunk, [(c, opts, vocab) for c in chunks]) for o in part]
    return sorted(out, key=lambda o: (o.category, o.index))
