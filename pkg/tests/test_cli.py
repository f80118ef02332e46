from __future__ import annotations

import json
import subprocess
import sys

import pytest

from jsoncd.cli import DATA_FAILURE, OK, USAGE, dispatch
from jsoncd.compiler.compile import compile_value

from oracles import brute_mask

REQUIRED_A = {"type": "object", "properties": {"a": {"type": "integer"}}, "required": ["a"], "additionalProperties": False}


@pytest.fixture
def schema_file(tmp_path):
    path = tmp_path / "schema.json"
    path.write_text(json.dumps(REQUIRED_A), "utf-8")
    return str(path)


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, "utf-8")
    return str(path)


def test_version_and_help(capsys):
    assert dispatch(["--version"]) == OK
    assert "jsoncd" in capsys.readouterr().out
    assert dispatch(["--help"]) == OK


def test_missing_command_is_usage_error(capsys):
    assert dispatch([]) == USAGE
    assert "command is required" in capsys.readouterr().err


def test_unknown_flag_is_usage_error(capsys):
    assert dispatch(["compile", "--bogus"]) == USAGE


def test_missing_schema_flag(capsys):
    assert dispatch(["compile"]) == USAGE
    assert "--schema" in capsys.readouterr().err


def test_validate_valid_and_invalid(tmp_path, schema_file, capsys):
    assert dispatch(["validate", "--schema", schema_file, "--instance", write(tmp_path, "ok.json", '{"a": 1}')]) == OK
    assert capsys.readouterr().out.strip() == "valid"
    assert dispatch(["validate", "--schema", schema_file, "--instance", write(tmp_path, "bad.json", '{"a": "x"}')]) == DATA_FAILURE
    assert "type" in capsys.readouterr().out


def test_malformed_schema_is_usage_error(tmp_path, capsys):
    assert dispatch(["compile", "--schema", write(tmp_path, "s.json", '{"type": }')]) == USAGE
    assert "MalformedJson" in capsys.readouterr().err


def test_unreadable_file(tmp_path, capsys):
    assert dispatch(["compile", "--schema", str(tmp_path / "nope.json")]) == USAGE


def test_compile_rejected_is_data_failure(tmp_path, capsys):
    assert dispatch(["compile", "--schema", write(tmp_path, "s.json", '{"not": {}}')]) == DATA_FAILURE
    assert "/not" in capsys.readouterr().err


def test_compile_writes_automaton(tmp_path, schema_file):
    out = tmp_path / "out"
    assert dispatch(["compile", "--schema", schema_file, "--out", str(out), "--quiet"]) == OK
    assert (out / "automaton.txt").read_text("utf-8")


def test_mask_after_prefix(schema_file, byte_trie, capsys):
    assert dispatch(["mask", "--schema", schema_file, "--prefix", '{"a":1']) == OK
    lines = capsys.readouterr().out.splitlines()
    printed = [int(line.split("\t")[0]) for line in lines[1:]]
    a = compile_value(REQUIRED_A).automaton
    s = a.advance_bytes(a.start(True), b'{"a":1')
    oracle = [i for i, ok in enumerate(brute_mask(a, s, byte_trie.vocab.tokens)) if ok]
    oracle += [byte_trie.vocab.eos_id] if a.can_terminate(s) else []
    assert printed == oracle
    assert lines[0] == "11 allowed"  # ten digits and the closing brace


def test_mask_rejected_prefix(schema_file, capsys):
    assert dispatch(["mask", "--schema", schema_file, "--prefix", '{"b"']) == DATA_FAILURE


def test_generate_produces_valid_output(tmp_path, schema_file, capsys):
    out = tmp_path / "out"
    assert dispatch(["generate", "--schema", schema_file, "--seed", "3", "--fast-forward", "--out", str(out)]) == OK
    record = json.loads((out / "generate.json").read_text("utf-8"))
    assert record["valid"] is True and record["terminated_by"] == "eos"
    assert record["ff_tokens"] > 0


def test_walk(tmp_path, schema_file, capsys):
    assert dispatch(["walk", "--schema", schema_file, "--instance", write(tmp_path, "i.json", '{"a":7}'), "--vocab", "bpe1k"]) == OK
    assert dispatch(["walk", "--schema", schema_file, "--instance", write(tmp_path, "j.json", '{"a":"7"}')]) == DATA_FAILURE
    assert "rejectedat at byte 5" in capsys.readouterr().out


def test_bad_vocab_name(schema_file, capsys):
    assert dispatch(["mask", "--schema", schema_file, "--vocab", "gpt9"]) == USAGE


def test_ingest_and_stats(tmp_path, capsys):
    out = tmp_path / "out"
    assert dispatch(["ingest", "--out", str(out), "--quiet"]) == OK
    data = json.loads((out / "ingest.json").read_text("utf-8"))
    assert len(data["records"]) == 50
    assert dispatch(["stats", "--by", "tier", "--out", str(out)]) == OK
    assert (out / "stats.json").exists()


def test_conformance_command(tmp_path, capsys):
    out = tmp_path / "out"
    code = dispatch(["conformance", "--out", str(out), "--jobs", "1"])
    assert code == DATA_FAILURE  # some categories are rejected by design
    rep = json.loads((out / "conformance.json").read_text("utf-8"))
    assert rep["categories"] == 43 and rep["undocumented_failures"] == []


def test_conformance_missing_suite(tmp_path):
    assert dispatch(["conformance", "--suite", str(tmp_path / "none")]) == USAGE


def test_bench_coverage_and_report(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.json").write_text(json.dumps(REQUIRED_A), "utf-8")
    (corpus / "b.json").write_text('{"type": "boolean"}', "utf-8")
    (corpus / "c.json").write_text('{"type": "array", "uniqueItems": true}', "utf-8")
    out = tmp_path / "out"
    code = dispatch(["bench-coverage", "--corpus", str(corpus), "--out", str(out), "--jobs", "1", "--max-tokens", "64"])
    assert code == DATA_FAILURE  # the uniqueItems schema is rejected
    rep = json.loads((out / "coverage.json").read_text("utf-8"))
    row = rep["rows"][0]
    assert (row["schemas"], row["declared_count"], row["empirical_count"]) == (3, 2, 2)
    capsys.readouterr()
    assert dispatch(["report", "--input", str(out / "coverage.json"), "--format", "csv"]) == OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "dataset,framework,schemas,declared,empirical,compliance"
    assert lines[1].endswith(",3,0.67,0.67,1.0")


def test_bench_efficiency(tmp_path, capsys):
    corpus = tmp_path / "corpus"
    corpus.mkdir()
    (corpus / "a.json").write_text(json.dumps(REQUIRED_A), "utf-8")
    out = tmp_path / "out"
    assert dispatch(["bench-efficiency", "--corpus", str(corpus), "--out", str(out), "--max-tokens", "32", "--quiet"]) == OK
    rep = json.loads((out / "efficiency.json").read_text("utf-8"))
    assert rep["intersection"] == ["a"]
    assert [v["variant"] for v in rep["variants"]] == ["lm-only", "masked", "masked+ff"]


def test_report_rejects_garbage(tmp_path):
    assert dispatch(["report", "--input", write(tmp_path, "r.json", "[1,2]")]) == USAGE
    assert dispatch(["report"]) == USAGE


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-c", "from jsoncd.cli import main; main()", "--version"], capture_output=True, text=True)
    assert out.returncode == 0 and out.stdout.startswith("jsoncd ")
