"""Loading the official JSON Schema Test Suite layout."""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Any, Optional

from .. import jsonvalue
from ..errors import JsonCDError, MalformedJson, MalformedSuiteFile, UnresolvedExternalRef
from ..schema.document import SchemaDocument, document_from_value
from ..schema.ir import normalize

log = logging.getLogger(__name__)

# categories removed before running: string formats are checked by a
# separate optional suite, the others need network resources or
# vocabulary negotiation
EXCLUDED_CATEGORIES = frozenset({"format", "refRemote", "vocabulary"})


@dataclass(frozen=True)
class TestInstance:
    data: Any
    valid: bool
    description: str


@dataclass(frozen=True)
class TestCase:
    description: str
    schema: SchemaDocument
    tests: tuple[TestInstance, ...]
    category: str
    index: int = 0

    @property
    def case_id(self) -> str:
        return f"{self.category}/{self.index}"


# keep pytest from collecting these as test classes
TestInstance.__test__ = False  # type: ignore[attr-defined]
TestCase.__test__ = False  # type: ignore[attr-defined]


@dataclass
class SuiteLoad:
    cases: list[TestCase]
    categories: list[str]
    excluded_cases: list[tuple[str, str]]


def bundled_suite_dir() -> Path:
    return Path(str(resources.files("jsoncd.data").joinpath("suite/draft2020-12")))


def verify_snapshot(root: Optional[Path] = None) -> list[str]:
    """Compare bundled files against SHA256SUMS; returns mismatching names."""
    root = root or bundled_suite_dir()
    sums = (root.parent / "SHA256SUMS").read_text("utf-8").split("\n")
    bad = []
    for line in sums:
        if not line.strip():
            continue
        digest, name = line.split(maxsplit=1)
        path = root / name.strip().lstrip("*")
        if not path.exists() or hashlib.sha256(path.read_bytes()).hexdigest() != digest:
            bad.append(name.strip())
    return bad


def parse_category(path: Path) -> list[TestCase]:
    category = path.stem
    try:
        raw = jsonvalue.loads(path.read_bytes())
    except MalformedJson as e:
        raise MalformedSuiteFile(str(path), str(e)) from None
    if not isinstance(raw, list):
        raise MalformedSuiteFile(str(path), "top level must be an array of cases")
    cases = []
    for i, item in enumerate(raw):
        if not isinstance(item, dict) or "schema" not in item or not isinstance(item.get("tests"), list):
            raise MalformedSuiteFile(str(path), f"case {i} lacks schema or tests")
        tests = []
        for t in item["tests"]:
            if not isinstance(t, dict) or "data" not in t or not isinstance(t.get("valid"), bool):
                raise MalformedSuiteFile(str(path), f"case {i} has a malformed test")
            tests.append(TestInstance(t["data"], t["valid"], str(t.get("description", ""))))
        if not tests:
            raise MalformedSuiteFile(str(path), f"case {i} has no tests")
        try:
            doc = document_from_value(item["schema"], f"{category}/{i}")
        except JsonCDError as e:
            raise MalformedSuiteFile(str(path), f"case {i}: {e}") from None
        cases.append(TestCase(str(item.get("description", "")), doc, tuple(tests), category, i))
    return cases


def load_suite_detailed(directory: Optional[str | Path] = None) -> SuiteLoad:
    root = Path(directory) if directory is not None else bundled_suite_dir()
    cases: list[TestCase] = []
    categories: list[str] = []
    excluded: list[tuple[str, str]] = []
    for path in sorted(root.glob("*.json")):
        if path.stem in EXCLUDED_CATEGORIES:
            continue
        kept = 0
        for case in parse_category(path):
            try:
                normalize(case.schema)
            except UnresolvedExternalRef as e:
                log.info("excluding %s: %s", case.case_id, e)
                excluded.append((case.case_id, str(e)))
                continue
            cases.append(case)
            kept += 1
        if kept:
            categories.append(path.stem)
    return SuiteLoad(cases, categories, excluded)


def load_suite(directory: Optional[str | Path] = None) -> list[TestCase]:
    return load_suite_detailed(directory).cases


def category_counts(cases: list[TestCase]) -> dict[str, int]:
    out: dict[str, int] = {}
    for c in cases:
        out[c.category] = out.get(c.category, 0) + 1
    return out


def dumps_case(case: TestCase) -> str:
    return json.dumps({"category": case.category, "index": case.index, "description": case.description})
