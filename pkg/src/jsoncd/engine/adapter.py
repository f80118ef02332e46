"""Line protocol for plugging an external scorer in as a logits source.

Request:  ``{"id": k, "prompt": [ids], "output": [ids]}``
Response: ``{"id": k, "scores": [V floats]}``

One request is in flight per stream.
"""

from __future__ import annotations

import json
from typing import IO, Sequence

import numpy as np

from ..errors import ProtocolError, StreamClosed
from .sources import LogitsSource


class ExternalSource:
    def __init__(self, reader: IO[bytes], writer: IO[bytes], size: int) -> None:
        self.reader = reader
        self.writer = writer
        self.size = size
        self.next_id = 0

    def score(self, prompt: Sequence[int], output: Sequence[int]) -> np.ndarray:
        k = self.next_id
        self.next_id += 1
        line = json.dumps({"id": k, "prompt": list(prompt), "output": list(output)}) + "\n"
        try:
            self.writer.write(line.encode("utf-8"))
            self.writer.flush()
        except (BrokenPipeError, ValueError, OSError) as e:
            raise StreamClosed(f"cannot send request {k}: {e}") from None
        reply = self.reader.readline()
        if not reply:
            raise StreamClosed(f"stream closed before the reply to request {k}")
        try:
            msg = json.loads(reply)
        except (json.JSONDecodeError, UnicodeDecodeError) as e:
            raise ProtocolError(f"malformed response line: {e}") from None
        if not isinstance(msg, dict) or msg.get("id") != k:
            raise ProtocolError(f"response does not answer request {k}")
        scores = msg.get("scores")
        if not isinstance(scores, list) or len(scores) != self.size:
            raise ProtocolError(f"expected {self.size} scores")
        try:
            return np.asarray(scores, dtype=float)
        except (TypeError, ValueError):
            raise ProtocolError("scores must be numbers") from None


def serve(source: LogitsSource, reader: IO[bytes], writer: IO[bytes]) -> int:
    """Answer requests from ``reader`` with ``source`` until EOF.

    Returns the number of requests served.
    """
    n = 0
    for line in iter(reader.readline, b""):
        msg = json.loads(line)
        scores = source.score(msg["prompt"], msg["output"])
        reply = {"id": msg["id"], "scores": [float(x) for x in scores]}
        writer.write((json.dumps(reply) + "\n").encode("utf-8"))
        writer.flush()
        n += 1
    return n
