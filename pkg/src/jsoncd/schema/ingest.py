"""Corpus ingestion: cleaning, deduplication, tiering and statistics."""

from __future__ import annotations

import enum
import json
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Iterator, Optional

from .. import jsonvalue
from ..errors import EmptyInput, JsonCDError
from .document import SchemaDocument, parse_schema
from .ir import ASSERTION_KEYWORDS, LIST_SCHEMA_KEYWORDS, MAP_SCHEMA_KEYWORDS, SINGLE_SCHEMA_KEYWORDS, normalize


class ComplexityTier(enum.Enum):
    TRIVIAL = "Trivial"
    EASY = "Easy"
    MEDIUM = "Medium"
    HARD = "Hard"
    ULTRA = "Ultra"

    def __str__(self) -> str:
        return self.value


# inclusive upper edges of each tier; Ultra is everything above the last
TIER_EDGES = ((9, ComplexityTier.TRIVIAL), (30, ComplexityTier.EASY), (100, ComplexityTier.MEDIUM), (500, ComplexityTier.HARD))


def assign_tier(field_count: int) -> ComplexityTier:
    for edge, tier in TIER_EDGES:
        if field_count <= edge:
            return tier
    return ComplexityTier.ULTRA


def count_fields(doc: SchemaDocument | Any) -> int:
    """Total number of object keys anywhere in the raw document, including
    keys inside ``enum``/``const`` literals."""
    raw = doc.raw if isinstance(doc, SchemaDocument) else doc
    total = 0
    stack = [raw]
    while stack:
        v = stack.pop()
        if isinstance(v, dict):
            total += len(v)
            stack.extend(v.values())
        elif isinstance(v, list):
            stack.extend(v)
    return total


def subschemas(raw: Any) -> list[Any]:
    """Immediate child schemas of a raw schema object."""
    if not isinstance(raw, dict):
        return []
    out: list[Any] = []
    for key, value in raw.items():
        if key in SINGLE_SCHEMA_KEYWORDS:
            out.append(value)
        elif key == "items":
            out.extend(value if isinstance(value, list) else [value])
        elif key in LIST_SCHEMA_KEYWORDS and isinstance(value, list):
            out.extend(value)
        elif key in MAP_SCHEMA_KEYWORDS and isinstance(value, dict):
            out.extend(value.values())
        elif key == "dependencies" and isinstance(value, dict):
            out.extend(v for v in value.values() if isinstance(v, (dict, bool)))
    return [s for s in out if isinstance(s, (dict, bool))]


def schema_depth(raw: Any) -> int:
    """Nesting depth of schema nodes; the root alone is depth 0."""
    best = 0
    stack = [(raw, 0)]
    while stack:
        node, d = stack.pop()
        best = max(best, d)
        stack.extend((c, d + 1) for c in subschemas(node))
    return best


def max_fan_out(raw: Any) -> int:
    """Largest number of immediate child schemas of any schema node."""
    best = 0
    stack = [raw]
    while stack:
        kids = subschemas(stack.pop())
        best = max(best, len(kids))
        stack.extend(kids)
    return best


def is_empty_schema(raw: Any) -> bool:
    """True when the schema constrains nothing (``true``, ``{}``, annotations only)."""
    if raw is True:
        return True
    return isinstance(raw, dict) and not any(k in ASSERTION_KEYWORDS and k != "$defs" for k in raw)


@dataclass(frozen=True)
class DatasetRecord:
    schema: SchemaDocument
    tier: ComplexityTier
    field_count: int
    size_bytes: int
    max_fan_out: int
    depth: int
    dataset: str = ""

    @property
    def source_id(self) -> str:
        return self.schema.source_id


def make_record(doc: SchemaDocument, size_bytes: int, dataset: str = "") -> DatasetRecord:
    n = count_fields(doc)
    return DatasetRecord(doc, assign_tier(n), n, size_bytes, max_fan_out(doc.raw), schema_depth(doc.raw), dataset)


@dataclass
class IngestionReport:
    seen: int = 0
    kept: int = 0
    dropped: Counter = field(default_factory=Counter)
    details: list[tuple[str, str]] = field(default_factory=list)

    def drop(self, source_id: str, reason: str) -> None:
        self.dropped[reason] += 1
        self.details.append((source_id, reason))

    def to_json(self) -> dict:
        return {
            "seen": self.seen,
            "kept": self.kept,
            "dropped": dict(sorted(self.dropped.items())),
            "details": [{"source_id": s, "reason": r} for s, r in self.details],
        }

    def to_text(self) -> str:
        lines = [f"seen {self.seen:>6}", f"kept {self.kept:>6}"]
        lines += [f"drop {n:>6}  {reason}" for reason, n in sorted(self.dropped.items())]
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class IngestOptions:
    metadata: Optional[Path] = None
    drop_empty: bool = True
    require_valid: bool = True
    default_dataset: str = ""


METADATA_NAME = "metadata.json"


def _iter_sources(path: Path) -> Iterator[tuple[str, bytes]]:
    if path.is_dir():
        for p in sorted(path.glob("*.json")):
            if p.name != METADATA_NAME:
                yield p.stem, p.read_bytes()
        return
    for i, line in enumerate(path.read_bytes().splitlines()):
        if line.strip():
            yield f"{path.stem}:{i + 1}", line


def load_metadata(path: Optional[Path]) -> dict[str, Any]:
    if path is None or not path.exists():
        return {}
    data = json.loads(path.read_text("utf-8"))
    if not isinstance(data, dict):
        raise JsonCDError(f"{path}: metadata must map source ids to dataset names")
    return data


def _dataset_of(meta: dict[str, Any], sid: str, default: str) -> str:
    entry = meta.get(sid, default)
    if isinstance(entry, dict):
        return str(entry.get("dataset", default))
    return str(entry)


def ingest_dataset(path: str | Path, options: Optional[IngestOptions] = None) -> tuple[list[DatasetRecord], IngestionReport]:
    """Load, clean and deduplicate a corpus directory or NDJSON file."""
    options = options or IngestOptions()
    path = Path(path)
    meta_path = options.metadata or (path / METADATA_NAME if path.is_dir() else None)
    meta = load_metadata(meta_path)
    return ingest_sources(_iter_sources(path), meta, options)


def ingest_sources(
    sources: Iterable[tuple[str, bytes]], meta: Optional[dict] = None, options: Optional[IngestOptions] = None
) -> tuple[list[DatasetRecord], IngestionReport]:
    options = options or IngestOptions()
    meta = meta or {}
    report = IngestionReport()
    keys: set[str] = set()
    records: list[DatasetRecord] = []
    for sid, data in sorted(sources, key=lambda item: item[0]):
        report.seen += 1
        try:
            doc = parse_schema(data, sid)
        except JsonCDError as e:
            report.drop(sid, f"unparseable: {type(e).__name__}")
            continue
        if options.drop_empty and is_empty_schema(doc.raw):
            report.drop(sid, "empty")
            continue
        if options.require_valid:
            try:
                normalize(doc)
            except JsonCDError as e:
                report.drop(sid, f"invalid: {type(e).__name__}")
                continue
        key = jsonvalue.canonical_key(doc.raw)
        if key in keys:
            report.drop(sid, "duplicate")
            continue
        keys.add(key)
        records.append(make_record(doc, len(data), _dataset_of(meta, sid, options.default_dataset)))
    report.kept = len(records)
    return records, report


def lower_median(values: Iterable[float]) -> float:
    """Median; for even counts the lower of the two central values."""
    xs = sorted(values)
    if not xs:
        raise EmptyInput("median of no values")
    return xs[(len(xs) - 1) // 2]


STAT_COLUMNS = ("size_kb", "field_count", "max_fan_out", "depth")


@dataclass
class StatsRow:
    group: str
    count: int
    median: dict[str, float]
    maximum: dict[str, float]


@dataclass
class StatsTable:
    rows: list[StatsRow]

    def to_json(self) -> list[dict]:
        return [
            {"group": r.group, "count": r.count, "median": r.median, "max": r.maximum} for r in self.rows
        ]

    def to_text(self) -> str:
        head = f"{'group':<20} {'n':>5}" + "".join(f" {c:>22}" for c in STAT_COLUMNS)
        lines = [head, "-" * len(head)]
        for r in self.rows:
            cells = "".join(f" {_fmt(r.median[c]) + ' / ' + _fmt(r.maximum[c]):>22}" for c in STAT_COLUMNS)
            lines.append(f"{r.group:<20} {r.count:>5}{cells}")
        return "\n".join(lines) + "\n"


def _fmt(v: float) -> str:
    return f"{v:.2f}" if isinstance(v, float) and not v.is_integer() else str(int(v))


def _stat_values(r: DatasetRecord) -> dict[str, float]:
    return {
        "size_kb": r.size_bytes / 1024,
        "field_count": r.field_count,
        "max_fan_out": r.max_fan_out,
        "depth": r.depth,
    }


def schema_stats(records: list[DatasetRecord], by: str = "dataset") -> StatsTable:
    """Per-group median and maximum of the corpus statistics.

    ``by`` is ``"dataset"``, ``"tier"`` or ``"all"``.
    """
    if not records:
        raise EmptyInput("no records to summarize")
    groups: dict[str, list[DatasetRecord]] = {}
    for r in records:
        if by == "tier":
            g = r.tier.value
        elif by == "dataset":
            g = r.dataset or "all"
        else:
            g = "all"
        groups.setdefault(g, []).append(r)
    rows = []
    for g in sorted(groups):
        vals = [_stat_values(r) for r in groups[g]]
        rows.append(
            StatsRow(
                g,
                len(vals),
                {c: lower_median(v[c] for v in vals) for c in STAT_COLUMNS},
                {c: max(v[c] for v in vals) for c in STAT_COLUMNS},
            )
        )
    return StatsTable(rows)
