from __future__ import annotations

from importlib import resources
from pathlib import Path

import pytest

from jsoncd.conformance.runner import run_suite
from jsoncd.conformance.suite import load_suite
from jsoncd.engine.trie import build_trie
from jsoncd.engine.vocab import load_vocabulary
from jsoncd.schema.ingest import ingest_dataset

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return Path(str(resources.files("jsoncd.data").joinpath("corpus")))


@pytest.fixture(scope="session")
def byte_trie():
    return build_trie(load_vocabulary(name="byte"))


@pytest.fixture(scope="session")
def bpe_trie():
    return build_trie(load_vocabulary(name="bpe1k"))


@pytest.fixture(scope="session")
def corpus(corpus_dir):
    records, report = ingest_dataset(corpus_dir)
    return records


@pytest.fixture(scope="session")
def suite_cases():
    return load_suite()


@pytest.fixture(scope="session")
def suite_outcomes(suite_cases):
    return run_suite(suite_cases)


# criterion number -> (passed, one-line detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}")
