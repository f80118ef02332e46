"""Few-shot prompt construction for generation runs."""

from __future__ import annotations

from typing import Any, Sequence

from .. import jsonvalue

SYSTEM_LINE = "You need to generate a JSON object that matches the schema below."
SCHEMA_MARKER = "## Input Schema:"
OUTPUT_MARKER = "## Expected Output:"


def _block(schema: Any) -> str:
    return f"{SCHEMA_MARKER}\n{jsonvalue.dumps(schema)}\n{OUTPUT_MARKER}\n"


def build_prompt(schema: Any, shots: Sequence[tuple[Any, Any]] = ()) -> str:
    """System line, one block per (schema, output) shot, then the target
    schema with an open output marker. Byte-stable for equal inputs."""
    parts = [SYSTEM_LINE + "\n\n"]
    for shot_schema, shot_output in shots:
        parts.append(_block(shot_schema) + jsonvalue.dumps(shot_output) + "\n\n")
    parts.append(_block(schema))
    return "".join(parts)


# two small fixed demonstrations used by default in benchmark runs
DEFAULT_SHOTS: tuple[tuple[Any, Any], ...] = (
    (
        {"type": "object", "properties": {"name": {"type": "string"}, "age": {"type": "integer"}}, "required": ["name"]},
        {"name": "Ada", "age": 36},
    ),
    (
        {"type": "array", "items": {"type": "boolean"}, "maxItems": 2},
        [True, False],
    ),
)
