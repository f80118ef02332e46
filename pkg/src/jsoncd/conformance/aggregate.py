"""Per-category coverage, threshold counts and failure breakdowns."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Optional, Sequence

from .runner import CaseOutcome, FailureKind, PASS

# (label, predicate on the pass proportion); strict except full coverage
THRESHOLDS = (
    ("Minimal coverage (>0%)", lambda p: p > 0),
    ("Partial coverage (>25%)", lambda p: p > 0.25),
    ("Moderate coverage (>50%)", lambda p: p > 0.5),
    ("High coverage (>75%)", lambda p: p > 0.75),
    ("Full coverage (100%)", lambda p: p == 1),
)

FAILURE_ROWS = (
    ("Compile Error", FailureKind.COMPILE_ERROR),
    ("Over-constrained", FailureKind.OVER_CONSTRAINED),
    ("Under-constrained", FailureKind.UNDER_CONSTRAINED),
)


@dataclass
class CategoryCoverage:
    category: str
    total: int
    passed: int
    failure_counts: dict[str, int] = field(default_factory=dict)

    @property
    def proportion(self) -> float:
        return self.passed / self.total if self.total else 0.0

    def to_json(self) -> dict:
        return {
            "category": self.category,
            "total": self.total,
            "passed": self.passed,
            "proportion": round(self.proportion, 6),
            "failures": dict(sorted(self.failure_counts.items())),
        }


def category_coverage(outcomes: Iterable[CaseOutcome]) -> list[CategoryCoverage]:
    by: dict[str, CategoryCoverage] = {}
    for o in outcomes:
        cov = by.setdefault(o.category, CategoryCoverage(o.category, 0, 0))
        cov.total += 1
        cov.passed += o.status == PASS
        for f in o.failures:
            cov.failure_counts[str(f)] = cov.failure_counts.get(str(f), 0) + 1
    return [by[k] for k in sorted(by)]


def threshold_counts(proportions: Iterable[float]) -> list[int]:
    ps = list(proportions)
    return [sum(1 for p in ps if pred(p)) for _, pred in THRESHOLDS]


def aggregate(outcomes: Iterable[CaseOutcome]) -> tuple[list[CategoryCoverage], dict[str, int]]:
    covs = category_coverage(outcomes)
    counts = threshold_counts(c.proportion for c in covs)
    return covs, {label: n for (label, _), n in zip(THRESHOLDS, counts)}


def failure_breakdown(outcomes: Iterable[CaseOutcome]) -> dict[str, int]:
    """Number of categories with at least one failure of each kind."""
    cats: dict[FailureKind, set[str]] = {k: set() for _, k in FAILURE_ROWS}
    for o in outcomes:
        for f in o.failures:
            cats[f].add(o.category)
    return {str(k): len(cats[k]) for _, k in FAILURE_ROWS}


def render_table(title: str, rows: Sequence[str], columns: Mapping[str, Sequence[int]]) -> str:
    """Aligned text table: one row label per line, one column per engine."""
    names = list(columns)
    width = max([len(title)] + [len(r) for r in rows])
    cw = [max(len(n), 3) for n in names]
    lines = [f"{title:<{width}}" + "".join(f"  {n:>{w}}" for n, w in zip(names, cw))]
    lines.append("-" * len(lines[0]))
    for i, r in enumerate(rows):
        lines.append(f"{r:<{width}}" + "".join(f"  {columns[n][i]:>{w}}" for n, w in zip(names, cw)))
    return "\n".join(lines) + "\n"


def render_thresholds(columns: Mapping[str, Sequence[int]]) -> str:
    return render_table("Coverage", [label for label, _ in THRESHOLDS], columns)


def render_failures(columns: Mapping[str, Sequence[int]]) -> str:
    return render_table("Failure type", [label for label, _ in FAILURE_ROWS], columns)


@dataclass(frozen=True)
class Divergence:
    case: str
    test: str
    kind: str
    reason: str


def load_divergences(path: Optional[str] = None) -> list[Divergence]:
    if path is None:
        text = resources.files("jsoncd.data").joinpath("divergences.json").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    data = json.loads(text)
    return [Divergence(e["case"], e["test"], e["kind"], e["reason"]) for e in data["entries"]]


def undocumented_failures(outcomes: Iterable[CaseOutcome], divergences: Iterable[Divergence]) -> list[tuple[str, str, str]]:
    """Over- or under-constrained instance verdicts not on the divergence list."""
    known = {(d.case, d.test, d.kind) for d in divergences}
    out = []
    for o in outcomes:
        for v in o.verdicts:
            k = v.kind
            if k is not None and (o.case_id, v.description, str(k)) not in known:
                out.append((o.case_id, v.description, str(k)))
    return out


def suite_report(outcomes: Sequence[CaseOutcome], engine: str = "jsoncd") -> dict:
    covs, thresholds = aggregate(outcomes)
    return {
        "engine": engine,
        "categories": len(covs),
        "cases": [o.to_json() for o in outcomes],
        "coverage": [c.to_json() for c in covs],
        "thresholds": thresholds,
        "failure_breakdown": failure_breakdown(outcomes),
        "undocumented_failures": [
            {"case": c, "test": t, "kind": k} for c, t, k in undocumented_failures(outcomes, load_divergences())
        ],
    }


def suite_text(report: dict) -> str:
    engine = report["engine"]
    lines = [f"{'category':<28} {'passed':>7} {'total':>6} {'coverage':>9}"]
    for c in report["coverage"]:
        lines.append(f"{c['category']:<28} {c['passed']:>7} {c['total']:>6} {c['proportion'] * 100:>8.1f}%")
    text = "\n".join(lines) + "\n\n"
    text += render_thresholds({engine: list(report["thresholds"].values())}) + "\n"
    text += render_failures({engine: list(report["failure_breakdown"].values())})
    return text
