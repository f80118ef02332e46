"""Efficiency runs: per-variant timings on the intersection of covered schemas."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

from ..engine.trie import TokenTrie
from ..errors import EmptyIntersection
from ..schema.ingest import DatasetRecord, lower_median
from .config import DEFAULT_VARIANTS, RunConfig, Variant
from .coverage import SchemaRunRecord, SourceFactory, default_source_factory, run_schema

METRICS = ("gct", "ttft", "tpot_ms", "tgt", "output_tokens", "ff_tokens")


def intersect_covered(runs: Mapping[str, Iterable[SchemaRunRecord]]) -> list[str]:
    """Source ids declared-covered by every variant, sorted."""
    sets = [{r.source_id for r in rs if r.declared} for rs in runs.values()]
    if not sets:
        raise EmptyIntersection("no variants")
    common = set.intersection(*sets)
    if not common:
        raise EmptyIntersection("no schema is declared-covered by every variant")
    return sorted(common)


def median_or_none(values: Sequence[float]) -> Optional[float]:
    return lower_median(list(values)) if values else None


@dataclass
class VariantSummary:
    variant: str
    schemas: int
    medians: dict[str, Optional[float]]

    def row(self) -> dict:
        return {"variant": self.variant, "schemas": self.schemas, **self.medians}


def summarize_variant(name: str, runs: Iterable[SchemaRunRecord], keep: set[str]) -> VariantSummary:
    effs = [r.efficiency for r in runs if r.source_id in keep and r.efficiency is not None]
    medians: dict[str, Optional[float]] = {}
    for m in METRICS:
        vals = [v for v in (getattr(e, m) for e in effs) if v is not None]
        medians[m] = median_or_none(vals)
    return VariantSummary(name, len(effs), medians)


@dataclass
class EfficiencyReport:
    intersection: list[str]
    summaries: list[VariantSummary]
    runs: dict[str, list[SchemaRunRecord]]

    def to_json(self, timing: bool = True) -> dict:
        return {
            "intersection": self.intersection,
            "variants": [s.row() for s in self.summaries] if timing else [s.variant for s in self.summaries],
            "runs": {
                name: [r.to_json(timing) for r in rs] for name, rs in self.runs.items()
            },
        }


def run_efficiency(
    records: Sequence[DatasetRecord],
    config: RunConfig,
    trie: TokenTrie,
    variants: Optional[Sequence[Variant]] = None,
    factory: Optional[SourceFactory] = None,
) -> EfficiencyReport:
    """Run every variant over the corpus, then take per-variant lower medians
    over the schemas every variant declared-covered."""
    variants = list(variants or config.variants or DEFAULT_VARIANTS)
    if not variants:
        raise EmptyIntersection("no variants")
    factory = factory or default_source_factory(trie, config.seed, config.source)
    ordered = sorted(records, key=lambda r: r.source_id)
    runs: dict[str, list[SchemaRunRecord]] = {}
    for v in variants:
        runs[v.name] = [
            run_schema(r, config, factory, trie, use_mask=v.use_mask, fast_forward=v.fast_forward) for r in ordered
        ]
    keep = intersect_covered(runs)
    keep_set = set(keep)
    summaries = [summarize_variant(v.name, runs[v.name], keep_set) for v in variants]
    return EfficiencyReport(keep, summaries, runs)
