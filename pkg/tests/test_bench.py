from __future__ import annotations

import json
import statistics

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jsoncd.bench.config import DEFAULT_VARIANTS, RunConfig, Variant, load_config
from jsoncd.bench.coverage import (
    AdversarialFactory,
    CoverageReport,
    DatasetCoverage,
    EfficiencyRecord,
    Failure,
    SchemaRunRecord,
    compliance_rate,
    round_half_up,
    run_coverage,
    run_schema,
    run_seed,
    summarize,
)
from jsoncd.bench.efficiency import intersect_covered, run_efficiency, summarize_variant
from jsoncd.bench.prompt import DEFAULT_SHOTS, OUTPUT_MARKER, SCHEMA_MARKER, build_prompt
from jsoncd.bench.report import NA, emit_report, parse_csv
from jsoncd.engine.sources import ReplaySource
from jsoncd.errors import EmptyIntersection, UnknownFormat
from jsoncd.schema.document import document_from_value
from jsoncd.schema.ingest import lower_median, make_record

from conftest import DATA

REQUIRED_A = {"type": "object", "properties": {"a": {"type": "integer"}}, "required": ["a"]}


def record(raw, sid="s", dataset="d"):
    return make_record(document_from_value(raw, sid), len(json.dumps(raw)), dataset)


# ------------------------------------------------------------------ config


def test_config_defaults():
    c = RunConfig()
    assert (c.compile_timeout, c.generation_timeout, c.max_tokens, c.samples_per_schema) == (40.0, 40.0, 256, 1)
    assert [v.name for v in c.variants] == [v.name for v in DEFAULT_VARIANTS]


def test_config_file_and_replace(tmp_path):
    path = tmp_path / "run.json"
    path.write_text(json.dumps({"max_tokens": 64, "corpus": "x", "variants": [{"name": "m"}]}), "utf-8")
    c = load_config(path)
    assert c.max_tokens == 64 and c.corpus == ("x",) and c.variants == (Variant("m"),)
    assert c.replace(max_tokens=None, seed=3) == RunConfig(max_tokens=64, corpus=("x",), variants=(Variant("m"),), seed=3)


@pytest.mark.parametrize("bad", [{"max_tokens": 0}, {"compile_timeout": 0}, {"samples_per_schema": 0}, {"bogus": 1}])
def test_config_rejects_bad_values(tmp_path, bad):
    path = tmp_path / "run.json"
    path.write_text(json.dumps(bad), "utf-8")
    with pytest.raises((ValueError, TypeError)):
        load_config(path)


# -------------------------------------------------------- coverage metrics


def test_coverage_arithmetic_ten_nine_nine():
    runs = [SchemaRunRecord(f"s{i}", "d", i < 9, compliant=i < 9 or None) for i in range(10)]
    row = summarize(runs).rows[0]
    assert (row.total, row.declared_count, row.empirical_count) == (10, 9, 9)
    assert row.row()["declared"] == 0.9 and row.row()["empirical"] == 0.9 and row.row()["compliance"] == 1.0


def test_compliance_example():
    assert round_half_up(compliance_rate(0.90, 0.86)) == 0.96


def test_compliance_na_when_nothing_declared():
    assert compliance_rate(0, 0) is None
    assert DatasetCoverage("d", "f", 3, 0, 0).row()["compliance"] is None


@pytest.mark.parametrize("x,expected", [(0.125, 0.13), (0.955, 0.96), (0.005, 0.01), (0.994, 0.99), (1.0, 1.0)])
def test_round_half_up(x, expected):
    assert round_half_up(x) == expected


def _table_rows():
    return json.loads((DATA / "coverage_rows.json").read_text("utf-8"))


def test_published_consistent_rows_reproduce():
    rows = _table_rows()["consistent"]
    assert len(rows) == 46
    for r in rows:
        got = round_half_up(compliance_rate(r["declared"], r["empirical"]))
        assert abs(got - r["compliance"]) <= 0.01 + 1e-9, r


def test_published_inconsistent_rows_do_not_reproduce():
    for r in _table_rows()["inconsistent"]:
        got = round_half_up(compliance_rate(r["declared"], r["empirical"]))
        assert abs(got - r["compliance"]) > 0.01, r


def test_coverage_report_json_round_trip():
    rep = CoverageReport([DatasetCoverage("d", "jsoncd", 10, 9, 8, {"Invalid": 1}), DatasetCoverage("e", "jsoncd", 2, 0, 0)])
    again = CoverageReport.from_json(json.loads(json.dumps(rep.to_json())))
    assert again.to_json() == rep.to_json()


# ------------------------------------------------------------- run_schema


def test_replay_source_gives_full_compliance(byte_trie):
    recs = [record(REQUIRED_A, "req"), record({"type": "boolean"}, "bool")]
    targets = {"req": b'{"a":42}', "bool": b"false"}
    runs = [run_schema(r, RunConfig(), lambda rec, i: ReplaySource(byte_trie, targets[rec.source_id]), byte_trie) for r in recs]
    assert [r.generated for r in runs] == [targets["req"], targets["bool"]]
    row = summarize(runs).rows[0]
    assert row.compliance == 1.0


def test_rejected_schema_is_not_declared(byte_trie):
    r = run_schema(record({"not": {"type": "string"}}), RunConfig(), AdversarialFactory(byte_trie.vocab), byte_trie)
    assert not r.declared and r.failure == Failure.COMPILE_REJECT


def test_generation_timeout_keeps_schema_declared(byte_trie):
    cfg = RunConfig(generation_timeout=1e-9)
    r = run_schema(record({"type": "string"}), cfg, AdversarialFactory(byte_trie.vocab), byte_trie)
    assert r.declared and r.failure == Failure.GEN_TIMEOUT and r.compliant is False


def test_engine_crash_demotes_schema(byte_trie):
    class Broken:
        def score(self, prompt, output):
            raise RuntimeError("boom")

    r = run_schema(record({"type": "string"}), RunConfig(), lambda rec, i: Broken(), byte_trie)
    assert not r.declared and r.failure == Failure.ENGINE_ERROR


def test_run_seed_is_stable():
    assert run_seed(0, "x", 0) == run_seed(0, "x", 0) != run_seed(0, "x", 1)


def test_coverage_run_is_deterministic(corpus, byte_trie):
    subset = corpus[:8]
    cfg = RunConfig(max_tokens=64)
    a, rep_a = run_coverage(subset, cfg, byte_trie)
    b, rep_b = run_coverage(list(reversed(subset)), cfg, byte_trie)
    assert [r.to_json(timing=False) for r in a] == [r.to_json(timing=False) for r in b]
    assert rep_a.to_json() == rep_b.to_json()


# --------------------------------------------------------------- efficiency


def _rec(sid, declared=True, tgt=1.0):
    eff = EfficiencyRecord(0.1, 0.2, tgt, 5, 0) if declared else None
    return SchemaRunRecord(sid, "d", declared, compliant=declared, efficiency=eff)


def test_intersection_of_covered_schemas():
    runs = {
        "a": [_rec("x"), _rec("y"), _rec("z", False)],
        "b": [_rec("x"), _rec("y", False), _rec("z")],
        "c": [_rec("x"), _rec("y"), _rec("z")],
    }
    assert intersect_covered(runs) == ["x"]


def test_empty_intersection_raises():
    with pytest.raises(EmptyIntersection):
        intersect_covered({"a": [_rec("x")], "b": [_rec("y")]})


def test_median_of_three_is_middle():
    s = summarize_variant("v", [_rec("a", tgt=1), _rec("b", tgt=2), _rec("c", tgt=100)], {"a", "b", "c"})
    assert s.medians["tgt"] == 2
    s = summarize_variant("v", [_rec("a", tgt=1), _rec("b", tgt=2), _rec("c", tgt=100)], {"a", "c"})
    assert s.medians["tgt"] == 1


@given(st.lists(st.floats(min_value=0, max_value=1e6), min_size=1, max_size=30))
def test_lower_median_oracle(xs):
    assert lower_median(xs) == statistics.median_low(xs)


def test_tpot_identity():
    e = EfficiencyRecord(0.0, 0.5, 2.5, 5, 0)
    assert e.tpot_ms == pytest.approx(500.0)
    assert EfficiencyRecord(0.0, 0.5, 0.5, 1, 0).tpot_ms is None


def test_efficiency_run_on_corpus(corpus, byte_trie):
    subset = [r for r in corpus if r.source_id.startswith("ff_fixed")]
    rep = run_efficiency(subset, RunConfig(max_tokens=48), byte_trie)
    assert rep.intersection == sorted(r.source_id for r in subset)
    names = [s.variant for s in rep.summaries]
    assert names == ["lm-only", "masked", "masked+ff"]
    ff = next(s for s in rep.summaries if s.variant == "masked+ff")
    assert ff.medians["ff_tokens"] > 0
    for runs in rep.runs.values():
        for r in runs:
            e = r.efficiency
            if e.output_tokens > 1:
                assert abs(e.tpot_ms / 1000 * (e.output_tokens - 1) - (e.tgt - e.ttft)) < 1e-9


# ------------------------------------------------------------------ prompt


def test_prompt_matches_golden():
    text = build_prompt(REQUIRED_A, DEFAULT_SHOTS)
    assert text == (DATA / "prompt_golden.txt").read_text("utf-8")
    assert text.endswith(OUTPUT_MARKER + "\n")
    assert text.count(SCHEMA_MARKER) == 3


def test_prompt_is_key_order_stable():
    assert build_prompt({"a": 1, "b": 2}) == build_prompt({"a": 1, "b": 2})


# ------------------------------------------------------------------ report


def _coverage():
    return CoverageReport([DatasetCoverage("glaive", "jsoncd", 10, 9, 9), DatasetCoverage("wp", "jsoncd", 4, 0, 0)])


def test_report_csv_round_trip_and_na():
    data = emit_report(_coverage(), "csv")
    rows = parse_csv(data)
    assert rows[0] == {"dataset": "glaive", "framework": "jsoncd", "schemas": 10, "declared": 0.9, "empirical": 0.9, "compliance": 1.0}
    assert rows[1]["compliance"] is None
    assert f",{NA}\n" in data.decode()


def test_report_json_uses_null():
    out = json.loads(emit_report(_coverage(), "json"))
    assert out["rows"][1]["compliance"] is None
    assert out["columns"][0] == "dataset"


def test_report_table_and_empty():
    table = emit_report(_coverage(), "table").decode()
    assert "NA" in table.splitlines()[-1]
    assert parse_csv(emit_report(None, "csv")) == []
    assert emit_report(None, "json").startswith(b"{")


def test_report_unknown_format():
    with pytest.raises(UnknownFormat):
        emit_report(_coverage(), "xml")
