from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from .. import jsonvalue
from ..errors import NotASchema

DRAFTS = ("draft-03", "draft-04", "draft-06", "draft-07", "2019-09", "2020-12")
DEFAULT_DRAFT = "2020-12"

_DRAFT_MARKERS = (
    ("draft-03", "draft-03"),
    ("draft-04", "draft-04"),
    ("draft-06", "draft-06"),
    ("draft-07", "draft-07"),
    ("2019-09", "2019-09"),
    ("2020-12", "2020-12"),
)


@dataclass(frozen=True)
class SchemaDocument:
    raw: object
    source_id: str = ""
    declared_draft: Optional[str] = None

    @property
    def draft(self) -> str:
        return self.declared_draft or DEFAULT_DRAFT


def draft_from_uri(uri: object) -> Optional[str]:
    if not isinstance(uri, str):
        return None
    for marker, tag in _DRAFT_MARKERS:
        if marker in uri:
            return tag
    return None


def parse_schema(text: str | bytes, source_id: str = "") -> SchemaDocument:
    """Parse schema text. Raises MalformedJson or NotASchema."""
    raw = jsonvalue.loads(text)
    return document_from_value(raw, source_id)


def document_from_value(raw: object, source_id: str = "") -> SchemaDocument:
    if isinstance(raw, bool):
        return SchemaDocument(raw, source_id, None)
    if not isinstance(raw, dict):
        raise NotASchema(f"top-level {jsonvalue.json_type(raw)} is not a schema")
    return SchemaDocument(raw, source_id, draft_from_uri(raw.get("$schema")))
