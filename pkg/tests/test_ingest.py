from __future__ import annotations

import json
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jsoncd.errors import EmptyInput
from jsoncd.schema.document import document_from_value
from jsoncd.schema.ingest import (
    ComplexityTier,
    IngestOptions,
    assign_tier,
    count_fields,
    ingest_dataset,
    ingest_sources,
    lower_median,
    make_record,
    schema_depth,
    schema_stats,
)

TIER_ORDER = list(ComplexityTier)


def recursive_key_count(v) -> int:
    if isinstance(v, dict):
        return len(v) + sum(recursive_key_count(x) for x in v.values())
    if isinstance(v, list):
        return sum(recursive_key_count(x) for x in v)
    return 0


def test_count_fields_examples():
    assert count_fields(document_from_value({})) == 0
    raw = {"type": "object", "properties": {"a": {"type": "integer"}}}
    assert count_fields(document_from_value(raw)) == 4 == recursive_key_count(raw)


def test_glaive_style_schema_has_21_fields(corpus_dir):
    raw = json.loads((corpus_dir / "glaive_weather.json").read_text("utf-8"))
    assert count_fields(raw) == 21


def test_count_fields_matches_recursive_counter_on_corpus(corpus):
    for r in corpus:
        assert r.field_count == recursive_key_count(r.schema.raw), r.source_id


@pytest.mark.parametrize(
    "n,tier",
    [(6, "Trivial"), (175, "Hard"), (9, "Trivial"), (10, "Easy"), (30, "Easy"), (31, "Medium"), (100, "Medium"), (101, "Hard"), (500, "Hard"), (501, "Ultra"), (0, "Trivial")],
)
def test_assign_tier_boundaries(n, tier):
    assert assign_tier(n).value == tier


@given(st.integers(min_value=0, max_value=10_000), st.integers(min_value=0, max_value=10_000))
def test_assign_tier_is_monotone(a, b):
    lo, hi = sorted((a, b))
    assert TIER_ORDER.index(assign_tier(lo)) <= TIER_ORDER.index(assign_tier(hi))


def test_depth_convention():
    assert schema_depth({"properties": {"a": {"properties": {"b": {}}}}}) == 2
    assert schema_depth({}) == 0


def _src(sid: str, value) -> tuple[str, bytes]:
    return sid, json.dumps(value).encode()


def test_dedup_ignores_key_order():
    a = {"type": "object", "properties": {"x": {"type": "string"}, "y": {"type": "integer"}}}
    b = {"properties": {"y": {"type": "integer"}, "x": {"type": "string"}}, "type": "object"}
    records, report = ingest_sources([_src("a", a), _src("b", b)])
    assert len(records) == 1
    assert report.dropped["duplicate"] == 1


def test_empty_and_invalid_schemas_dropped():
    records, report = ingest_sources(
        [_src("empty", {}), _src("annot", {"title": "x"}), _src("ok", {"type": "string"}), ("bad", b"{"), _src("remote", {"$ref": "http://x/y.json"})]
    )
    assert [r.source_id for r in records] == ["ok"]
    assert report.dropped["empty"] == 2
    assert report.seen == 5 and report.kept == 1
    assert sum(report.dropped.values()) == 4


def test_ingest_is_idempotent(corpus):
    again, report = ingest_sources([(r.source_id, json.dumps(r.schema.raw).encode()) for r in corpus])
    assert [r.source_id for r in again] == [r.source_id for r in corpus]
    assert report.kept == len(corpus)


def test_ingest_ndjson(tmp_path):
    path = tmp_path / "set.ndjson"
    path.write_text('{"type":"string"}\n\n{"type":"integer"}\n{"type":"string"}\n', "utf-8")
    records, report = ingest_dataset(path, IngestOptions(default_dataset="nd"))
    assert [r.source_id for r in records] == ["set:1", "set:3"]
    assert {r.dataset for r in records} == {"nd"}
    assert report.dropped["duplicate"] == 1


def test_corpus_has_fifty_hand_labelled_records(corpus, corpus_dir):
    labels = json.loads((corpus_dir / "metadata.json").read_text("utf-8"))
    assert len(corpus) == 50
    assert {r.source_id for r in corpus} == set(labels)
    for r in corpus:
        assert r.tier.value == labels[r.source_id]["tier"], r.source_id
        assert r.dataset == labels[r.source_id]["dataset"]


def test_stats_single_record():
    rec = make_record(document_from_value({"type": "object", "properties": {"a": {}}}, "one"), 100, "d")
    row = schema_stats([rec]).rows[0]
    assert row.median == row.maximum


def test_stats_empty_input():
    with pytest.raises(EmptyInput):
        schema_stats([])


def test_stats_medians_match_sort_oracle(corpus):
    table = schema_stats(corpus, by="dataset")
    for row in table.rows:
        members = [r for r in corpus if r.dataset == row.group]
        assert row.count == len(members)
        for col, get in (("field_count", lambda r: r.field_count), ("depth", lambda r: r.depth), ("max_fan_out", lambda r: r.max_fan_out)):
            vals = [get(r) for r in members]
            assert row.median[col] == statistics.median_low(vals)
            assert row.maximum[col] == max(vals)


@given(st.lists(st.integers(min_value=-1000, max_value=1000), min_size=1, max_size=40))
def test_lower_median_matches_sort_oracle(xs):
    ordered = sorted(xs)
    assert lower_median(xs) == ordered[(len(ordered) - 1) // 2] == statistics.median_low(xs)
