"""Report rendering: JSON, CSV and aligned text tables."""

from __future__ import annotations

import csv
import io
import json
from typing import Any, Optional, Sequence, Union

from ..errors import UnknownFormat
from .coverage import CoverageReport
from .efficiency import METRICS, EfficiencyReport

FORMATS = ("json", "csv", "table")
COVERAGE_COLUMNS = ("dataset", "framework", "schemas", "declared", "empirical", "compliance")
EFFICIENCY_COLUMNS = ("variant", "schemas") + METRICS
NA = "NA"
_INT_COLUMNS = {"schemas", "output_tokens", "ff_tokens"}


def _norm_format(fmt: str) -> str:
    fmt = "table" if fmt == "text-table" else fmt
    if fmt not in FORMATS:
        raise UnknownFormat(f"unknown report format {fmt!r}; expected one of {', '.join(FORMATS)}")
    return fmt


def _rows(report: Union[CoverageReport, EfficiencyReport, Sequence[CoverageReport], None]) -> tuple[tuple[str, ...], list[dict]]:
    if isinstance(report, EfficiencyReport):
        return EFFICIENCY_COLUMNS, [s.row() for s in report.summaries]
    reports = [] if report is None else [report] if isinstance(report, CoverageReport) else list(report)
    return COVERAGE_COLUMNS, [r.row() for rep in reports for r in rep.rows]


def _cell(v: Any) -> str:
    if v is None:
        return NA
    if isinstance(v, float):
        return f"{v:.2f}" if not v.is_integer() or abs(v) < 10 else str(int(v))
    return str(v)


def emit_report(report, fmt: str = "json") -> bytes:
    """Render coverage reports (one or many) or an efficiency report.

    Field order is fixed by the column tuples; missing compliance renders as
    ``null`` in JSON and the literal ``NA`` in CSV and tables.
    """
    fmt = _norm_format(fmt)
    columns, rows = _rows(report)
    if fmt == "json":
        return (json.dumps({"columns": list(columns), "rows": [{c: r.get(c) for c in columns} for r in rows]}, indent=2) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for r in rows:
            w.writerow([NA if r.get(c) is None else r.get(c) for c in columns])
        return buf.getvalue().encode("utf-8")
    cells = [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
    head = "  ".join(f"{c:<{w}}" for c, w in zip(columns, widths))
    lines = [head, "-" * len(head)]
    for row in cells:
        lines.append("  ".join(f"{v:<{w}}" if i < 2 else f"{v:>{w}}" for i, (v, w) in enumerate(zip(row, widths))))
    return ("\n".join(lines) + "\n").encode("utf-8")


def _parse_cell(column: str, text: str) -> Optional[Union[str, int, float]]:
    if text == NA:
        return None
    if column in _INT_COLUMNS:
        return int(text)
    if column in ("dataset", "framework", "variant"):
        return text
    return float(text)


def parse_csv(data: bytes) -> list[dict]:
    """Inverse of the CSV rendering for the tabular fields."""
    reader = csv.reader(io.StringIO(data.decode("utf-8")))
    header = next(reader, None)
    if header is None:
        return []
    return [{c: _parse_cell(c, v) for c, v in zip(header, row)} for row in reader]
