"""Token vocabularies: id -> byte sequence tables with an EOS id.

File format: line one is a header object ``{"eos_id": n}``; the rest of the
file is a JSON array of base64 strings indexed by token id (an object
keyed by decimal ids is accepted too, so gaps can be detected).
"""

from __future__ import annotations

import base64
import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from ..errors import GapInIds, JsonCDError, MissingEos


@dataclass(frozen=True)
class Vocabulary:
    tokens: tuple[bytes, ...]
    eos_id: int

    def __post_init__(self) -> None:
        if not 0 <= self.eos_id < len(self.tokens):
            raise MissingEos(f"eos id {self.eos_id} outside vocabulary of size {len(self.tokens)}")
        for i, t in enumerate(self.tokens):
            if not t and i != self.eos_id:
                raise JsonCDError(f"token {i} has an empty byte sequence")

    @property
    def size(self) -> int:
        return len(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)

    def decode(self, ids) -> bytes:
        return b"".join(self.tokens[i] for i in ids if i != self.eos_id)

    def render(self, token_id: int) -> str:
        if token_id == self.eos_id:
            return "<eos>"
        return repr(self.tokens[token_id])[1:]

    def dumps(self) -> str:
        body = [base64.b64encode(t).decode("ascii") for t in self.tokens]
        return json.dumps({"eos_id": self.eos_id}) + "\n" + json.dumps(body) + "\n"


def byte_vocabulary() -> Vocabulary:
    """256 single-byte tokens (id = byte value) followed by EOS."""
    return Vocabulary(tuple(bytes([b]) for b in range(256)) + (b"",), 256)


def parse_vocabulary(text: str) -> Vocabulary:
    head, _, rest = text.partition("\n")
    try:
        header = json.loads(head)
        body = json.loads(rest)
    except json.JSONDecodeError as e:
        raise JsonCDError(f"malformed vocabulary file: {e}") from None
    if not isinstance(header, dict) or "eos_id" not in header:
        raise MissingEos("vocabulary header lacks eos_id")
    if isinstance(body, dict):
        ids = sorted(int(k) for k in body)
        if ids != list(range(len(ids))):
            missing = sorted(set(range(max(ids, default=-1) + 1)) - set(ids))
            raise GapInIds(f"token ids are not dense; first gap at {missing[0] if missing else len(ids)}")
        entries = [body[str(i)] for i in ids]
    elif isinstance(body, list):
        entries = body
    else:
        raise JsonCDError("vocabulary body must be an array or an object")
    tokens = tuple(base64.b64decode(e) for e in entries)
    eos = header["eos_id"]
    if not isinstance(eos, int) or not 0 <= eos < len(tokens):
        raise MissingEos(f"eos id {eos!r} is not a token id")
    return Vocabulary(tokens, eos)


def load_vocabulary(path: Optional[str | Path] = None, name: str = "byte") -> Vocabulary:
    """Load a vocabulary file, or a bundled one by name (``byte``, ``bpe1k``)."""
    if path is None:
        text = resources.files("jsoncd.data").joinpath(f"vocab/{name}.json").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return parse_vocabulary(text)
