"""Declared coverage, empirical coverage and compliance rate."""

from __future__ import annotations

import enum
import os
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from decimal import ROUND_HALF_UP, Decimal
from typing import Callable, Iterable, Optional, Sequence, Union

from .. import jsonvalue
from ..compiler.compile import CompileOptions, Compiled, Rejected, compile_schema
from ..compiler.manifest import load_manifest
from ..engine.decode import DEAD_END, EOS, TIMEOUT, DecodeOptions, DecodeResult, constrained_decode
from ..engine.sources import AdversarialSource, LogitsSource, UniformSource
from ..engine.trie import TokenTrie, build_trie
from ..engine.vocab import Vocabulary
from ..engine.walk import tokenize
from ..errors import JsonCDError, MalformedJson
from ..schema.ingest import DatasetRecord
from ..schema.ir import normalize
from ..schema.validator import validate_instance
from .config import RunConfig
from .prompt import DEFAULT_SHOTS, build_prompt


class Failure(enum.Enum):
    COMPILE_REJECT = "CompileReject"
    COMPILE_TIMEOUT = "CompileTimeout"
    GEN_TIMEOUT = "GenTimeout"
    DEAD_END = "DeadEnd"
    INVALID = "Invalid"
    # the engine raised during generation; demotes the schema from declared
    ENGINE_ERROR = "EngineError"

    def __str__(self) -> str:
        return self.value


@dataclass
class EfficiencyRecord:
    gct: float
    ttft: float
    tgt: float
    output_tokens: int
    ff_tokens: int
    sampled_steps: int = 0

    @property
    def tpot_ms(self) -> Optional[float]:
        if self.output_tokens <= 1:
            return None
        return (self.tgt - self.ttft) / (self.output_tokens - 1) * 1000.0

    @classmethod
    def from_result(cls, r: DecodeResult) -> "EfficiencyRecord":
        return cls(r.timing.gct, r.timing.ttft, r.timing.tgt, r.output_tokens, r.ff_token_count, r.sampled_steps)

    def to_json(self) -> dict:
        return {
            "gct": self.gct,
            "ttft": self.ttft,
            "tpot_ms": self.tpot_ms,
            "tgt": self.tgt,
            "output_tokens": self.output_tokens,
            "ff_tokens": self.ff_tokens,
        }


@dataclass
class SchemaRunRecord:
    source_id: str
    dataset: str
    declared: bool
    generated: Optional[bytes] = None
    compliant: Optional[bool] = None
    failure: Optional[Failure] = None
    efficiency: Optional[EfficiencyRecord] = None
    detail: str = ""

    def to_json(self, timing: bool = True) -> dict:
        d = {
            "source_id": self.source_id,
            "dataset": self.dataset,
            "declared": self.declared,
            "generated": None if self.generated is None else self.generated.decode("utf-8", "replace"),
            "compliant": self.compliant,
            "failure": None if self.failure is None else str(self.failure),
        }
        if timing:
            d["efficiency"] = None if self.efficiency is None else self.efficiency.to_json()
        return d


def round_half_up(x: float, places: int = 2) -> float:
    q = Decimal(1).scaleb(-places)
    return float(Decimal(repr(x)).quantize(q, rounding=ROUND_HALF_UP))


def compliance_rate(declared: float, empirical: float) -> Optional[float]:
    """Empirical / declared coverage; None (rendered NA) when declared is 0."""
    if declared == 0:
        return None
    return empirical / declared


@dataclass
class DatasetCoverage:
    dataset: str
    framework: str
    total: int
    declared_count: int
    empirical_count: int
    failures: dict[str, int] = field(default_factory=dict)

    @property
    def declared(self) -> float:
        return self.declared_count / self.total if self.total else 0.0

    @property
    def empirical(self) -> float:
        return self.empirical_count / self.total if self.total else 0.0

    @property
    def compliance(self) -> Optional[float]:
        if self.declared_count == 0:
            return None
        return self.empirical_count / self.declared_count

    def row(self) -> dict:
        c = self.compliance
        return {
            "dataset": self.dataset,
            "framework": self.framework,
            "schemas": self.total,
            "declared": round_half_up(self.declared),
            "empirical": round_half_up(self.empirical),
            "compliance": None if c is None else round_half_up(c),
        }


@dataclass
class CoverageReport:
    rows: list[DatasetCoverage]

    def to_json(self) -> dict:
        return {
            "rows": [
                dict(
                    r.row(),
                    declared_count=r.declared_count,
                    empirical_count=r.empirical_count,
                    failures=dict(sorted(r.failures.items())),
                )
                for r in self.rows
            ]
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoverageReport":
        return cls(
            [
                DatasetCoverage(
                    r["dataset"], r["framework"], r["schemas"], r["declared_count"], r["empirical_count"], dict(r.get("failures", {}))
                )
                for r in data.get("rows", [])
            ]
        )


SourceFactory = Callable[[DatasetRecord, int], LogitsSource]


def run_seed(seed: int, source_id: str, sample: int) -> int:
    """Stable per-run seed (independent of PYTHONHASHSEED)."""
    return zlib.crc32(f"{seed}:{source_id}:{sample}".encode("utf-8"))


@dataclass(frozen=True)
class AdversarialFactory:
    """Picklable factory so coverage runs can fan out to worker processes."""

    vocab: Vocabulary
    seed: int = 0

    def __call__(self, record: DatasetRecord, sample: int) -> LogitsSource:
        return AdversarialSource(self.vocab, seed=run_seed(self.seed, record.source_id, sample))


@dataclass(frozen=True)
class UniformFactory:
    vocab: Vocabulary
    seed: int = 0

    def __call__(self, record: DatasetRecord, sample: int) -> LogitsSource:
        return UniformSource(self.vocab.size, seed=run_seed(self.seed, record.source_id, sample))


def default_source_factory(trie: TokenTrie, seed: int = 0, kind: str = "adversarial") -> SourceFactory:
    if kind == "adversarial":
        return AdversarialFactory(trie.vocab, seed)
    if kind == "uniform":
        return UniformFactory(trie.vocab, seed)
    raise ValueError(f"unknown source kind {kind!r}")


def _prompt_ids(trie: TokenTrie, record: DatasetRecord) -> list[int]:
    return tokenize(trie, build_prompt(record.schema.raw, DEFAULT_SHOTS).encode("utf-8"))


def run_schema(
    record: DatasetRecord,
    config: RunConfig,
    factory: SourceFactory,
    trie: TokenTrie,
    framework: str = "jsoncd",
    use_mask: bool = True,
    fast_forward: Optional[bool] = None,
) -> SchemaRunRecord:
    sid, ds = record.source_id, record.dataset
    try:
        ir = normalize(record.schema)
    except JsonCDError as e:
        return SchemaRunRecord(sid, ds, False, failure=Failure.COMPILE_REJECT, detail=str(e))
    automaton = None
    gct = 0.0
    if use_mask:
        manifest = load_manifest(config.manifest) if config.manifest else None
        opts = CompileOptions(compile_timeout=config.compile_timeout, manifest=manifest)
        outcome = compile_schema(ir, opts, sid)
        if isinstance(outcome, Rejected):
            return SchemaRunRecord(sid, ds, False, failure=Failure.COMPILE_REJECT, detail=", ".join(outcome.keywords))
        if not isinstance(outcome, Compiled):
            return SchemaRunRecord(sid, ds, False, failure=Failure.COMPILE_TIMEOUT)
        automaton, gct = outcome.automaton, outcome.seconds
    dopts = DecodeOptions(
        max_tokens=config.max_tokens,
        generation_timeout=config.generation_timeout,
        fast_forward=config.fast_forward if fast_forward is None else fast_forward,
        use_mask=use_mask,
        include_gct_in_ttft=config.include_gct_in_ttft,
    )
    prompt = _prompt_ids(trie, record)
    rec = SchemaRunRecord(sid, ds, True)
    for sample in range(config.samples_per_schema):
        try:
            result = constrained_decode(automaton, factory(record, sample), trie, dopts, prompt, gct)
        except Exception as e:  # engine crash: not declared-covered after all
            return SchemaRunRecord(sid, ds, False, failure=Failure.ENGINE_ERROR, detail=f"{type(e).__name__}: {e}")
        rec.generated = result.data
        rec.efficiency = EfficiencyRecord.from_result(result)
        failure = _judge(ir, result)
        if failure is not None:
            rec.compliant, rec.failure = False, failure
            return rec
    rec.compliant = True
    return rec


def _judge(ir, result: DecodeResult) -> Optional[Failure]:
    if result.terminated_by == TIMEOUT:
        return Failure.GEN_TIMEOUT
    if result.terminated_by == DEAD_END:
        return Failure.DEAD_END
    if result.terminated_by != EOS:
        return Failure.INVALID
    try:
        value = jsonvalue.loads(result.data)
    except MalformedJson:
        return Failure.INVALID
    return None if validate_instance(ir, value).valid else Failure.INVALID


def summarize(records: Iterable[SchemaRunRecord], framework: str = "jsoncd") -> CoverageReport:
    by: dict[str, DatasetCoverage] = {}
    for r in records:
        row = by.setdefault(r.dataset or "all", DatasetCoverage(r.dataset or "all", framework, 0, 0, 0))
        row.total += 1
        row.declared_count += r.declared
        row.empirical_count += bool(r.compliant)
        if r.failure is not None:
            row.failures[str(r.failure)] = row.failures.get(str(r.failure), 0) + 1
    return CoverageReport([by[k] for k in sorted(by)])


def _run_chunk(args) -> list[SchemaRunRecord]:
    records, config, factory, vocab, framework = args
    trie = build_trie(vocab)
    return [run_schema(r, config, factory, trie, framework) for r in records]


def run_coverage(
    records: Sequence[DatasetRecord],
    config: RunConfig,
    trie: TokenTrie,
    source: Union[SourceFactory, LogitsSource, None] = None,
    framework: str = "jsoncd",
) -> tuple[list[SchemaRunRecord], CoverageReport]:
    """Compile, decode and validate every record; failures are data.

    With ``config.jobs > 1`` and a picklable factory, schemas are spread over
    a process pool. Results are always reduced in source_id order.
    """
    if source is None:
        factory = default_source_factory(trie, config.seed, config.source)
    elif hasattr(source, "score"):
        fixed = source
        factory = lambda record, sample: fixed  # noqa: E731
    else:
        factory = source
    ordered = sorted(records, key=lambda r: r.source_id)
    jobs = min(config.jobs, os.cpu_count() or 1, len(ordered))
    if jobs > 1 and isinstance(factory, (AdversarialFactory, UniformFactory)):
        chunks = [ordered[i::jobs] for i in range(jobs)]
        with ProcessPoolExecutor(jobs) as pool:
            parts = pool.map(_run_chunk, [(c, config, factory, trie.vocab, framework) for c in chunks])
            runs = [r for part in parts for r in part]
        runs.sort(key=lambda r: r.source_id)
    else:
        runs = [run_schema(r, config, factory, trie, framework) for r in ordered]
    return runs, summarize(runs, framework)
