from __future__ import annotations

import json

import pytest

from jsoncd.compiler.compile import CompileOptions
from jsoncd.conformance.aggregate import (
    THRESHOLDS,
    aggregate,
    failure_breakdown,
    load_divergences,
    render_failures,
    render_thresholds,
    suite_report,
    suite_text,
    threshold_counts,
    undocumented_failures,
)
from jsoncd.conformance.runner import FAIL, PASS, CaseOutcome, FailureKind, instance_bytes, run_case
from jsoncd.conformance.suite import EXCLUDED_CATEGORIES, TestCase, TestInstance, load_suite_detailed, parse_category, verify_snapshot
from jsoncd.errors import MalformedSuiteFile
from jsoncd.schema.document import document_from_value

from conftest import DATA


def case(schema, tests, category="demo", index=0) -> TestCase:
    inst = tuple(TestInstance(d, v, desc) for d, v, desc in tests)
    return TestCase("demo", document_from_value(schema), inst, category, index)


# -------------------------------------------------------------------- suite


def test_snapshot_checksums():
    assert verify_snapshot() == []


def test_suite_has_43_categories():
    load = load_suite_detailed()
    assert len(load.categories) == 43
    assert not EXCLUDED_CATEGORIES & set(load.categories)
    assert all(cid.startswith(("ref", "dynamicRef", "id", "anchor", "defs")) for cid, _ in load.excluded_cases)


def test_parse_category_fixture():
    cases = parse_category(DATA / "mini_category.json")
    assert [c.case_id for c in cases] == ["mini_category/0", "mini_category/1"]
    assert [t.valid for t in cases[0].tests] == [True, False]


def test_parse_category_malformed(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('[{"schema": {}, "tests": [{"data": 1}]}]', "utf-8")
    with pytest.raises(MalformedSuiteFile):
        parse_category(path)
    path.write_text("{", "utf-8")
    with pytest.raises(MalformedSuiteFile):
        parse_category(path)


# --------------------------------------------------------------- run_case


def test_run_case_pass():
    out = run_case(case({"type": "integer"}, [(1, True, "one"), ("a", False, "str")]))
    assert out.status == PASS and not out.failures


def test_run_case_over_constrained():
    out = run_case(case({"type": "integer"}, [(1.0, True, "float one")]))
    assert out.status == FAIL and out.failures == {FailureKind.OVER_CONSTRAINED}


def test_run_case_compile_error_with_valid_instance_fails():
    out = run_case(case({"not": {"type": "string"}}, [(1, True, "int")]))
    assert out.failures == {FailureKind.COMPILE_ERROR}
    assert out.verdicts[0].accepted is None and out.verdicts[0].kind is None


def test_run_case_compile_error_with_only_invalid_instances_passes():
    out = run_case(case({"not": {}}, [(1, False, "int"), ("a", False, "str")]))
    assert out.status == PASS


def test_oneof_as_union_is_under_constrained():
    c = case({"oneOf": [{"type": "integer"}, {"type": "integer", "maximum": 2}]}, [(1, False, "both"), (5, True, "first only")])
    out = run_case(c, CompileOptions(oneof_as_union=True))
    assert out.failures == {FailureKind.UNDER_CONSTRAINED}
    assert run_case(c).failures == {FailureKind.COMPILE_ERROR}


def test_instance_bytes_is_compact():
    assert instance_bytes({"a": [1, True, None]}) == b'{"a":[1,true,null]}'


# -------------------------------------------------------------- aggregate


def _outcome(category, index, passed, failures=()):
    return CaseOutcome(category, index, "", PASS if passed else FAIL, frozenset(failures))


def test_threshold_boundaries_are_strict():
    assert threshold_counts([0.75]) == [1, 1, 1, 0, 0]
    assert threshold_counts([0.25]) == [1, 0, 0, 0, 0]
    assert threshold_counts([0.0]) == [0, 0, 0, 0, 0]
    assert threshold_counts([1.0]) == [1, 1, 1, 1, 1]


def test_aggregate_three_of_four_passing():
    outs = [_outcome("c", i, i < 3, () if i < 3 else [FailureKind.UNDER_CONSTRAINED]) for i in range(4)]
    covs, th = aggregate(outs)
    assert covs[0].proportion == 0.75
    assert list(th.values()) == [1, 1, 1, 0, 0]
    assert covs[0].failure_counts == {"UnderConstrained": 1}


def test_failure_breakdown_counts_categories_not_cases():
    outs = [_outcome("a", 0, False, [FailureKind.COMPILE_ERROR]), _outcome("a", 1, False, [FailureKind.COMPILE_ERROR]), _outcome("b", 0, False, [FailureKind.OVER_CONSTRAINED, FailureKind.COMPILE_ERROR])]
    assert failure_breakdown(outs) == {"CompileError": 2, "OverConstrained": 1, "UnderConstrained": 0}


def _synthetic_engine():
    """43 categories shaped to give 30/25/21/17/13 threshold counts and
    25/7/1 failure categories."""
    proportions = [1.0] * 13 + [0.8] * 4 + [0.6] * 4 + [0.3] * 4 + [0.1] * 5 + [0.0] * 13
    compile_err, over, under = set(range(13, 38)), {13, 14, 38, 39, 40, 41, 42}, {15}
    outs = []
    for ci, p in enumerate(proportions):
        n_pass = round(p * 10)
        for i in range(10):
            fails = set()
            if i >= n_pass:
                fails |= {FailureKind.COMPILE_ERROR} if ci in compile_err else set()
                fails |= {FailureKind.OVER_CONSTRAINED} if ci in over else set()
                fails |= {FailureKind.UNDER_CONSTRAINED} if ci in under else set()
            outs.append(_outcome(f"cat{ci:02d}", i, i < n_pass, fails))
    return outs


def test_rendered_tables_match_golden():
    outs = _synthetic_engine()
    _, th = aggregate(outs)
    fb = failure_breakdown(outs)
    assert list(th.values()) == [30, 25, 21, 17, 13]
    assert list(fb.values()) == [25, 7, 1]
    ours = [36, 29, 26, 25, 19]
    text = render_thresholds({"Guidance": list(th.values()), "jsoncd": ours}) + "\n" + render_failures({"Guidance": list(fb.values())})
    assert text == (DATA / "coverage_tables.txt").read_text("utf-8")


def test_threshold_labels():
    assert [label for label, _ in THRESHOLDS][-1] == "Full coverage (100%)"


# ---------------------------------------------------------- bundled suite


def test_only_documented_divergences(suite_outcomes):
    assert undocumented_failures(suite_outcomes, load_divergences()) == []


def test_divergence_list_entries_are_real(suite_outcomes):
    seen = {(o.case_id, v.description, str(v.kind)) for o in suite_outcomes for v in o.verdicts if v.kind}
    for d in load_divergences():
        assert (d.case, d.test, d.kind) in seen


def test_no_under_constrained_failures(suite_outcomes):
    assert failure_breakdown(suite_outcomes)["UnderConstrained"] == 0


def test_suite_report_round_trip(suite_outcomes):
    rep = suite_report(suite_outcomes)
    assert rep["categories"] == 43
    again = json.loads(json.dumps(rep))
    assert suite_text(again) == suite_text(rep)
    assert "Full coverage (100%)" in suite_text(rep)
