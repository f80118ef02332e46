"""Schema compilation entry point with conservative rejection."""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Optional, Union

from ..schema.ir import SchemaIR
from .automaton import ConstraintAutomaton
from .build import CompileLimit, Deadline, lower
from .manifest import KeywordManifest, declared_covered, default_manifest
from .regex import UnsupportedPattern


@dataclass(frozen=True)
class CompileOptions:
    compile_timeout: float = 40.0
    max_depth: int = 64
    # compile every oneOf as a plain union, regardless of the manifest
    oneof_as_union: bool = False
    manifest: Optional[KeywordManifest] = None

    def effective_manifest(self) -> KeywordManifest:
        m = self.manifest or default_manifest()
        if self.oneof_as_union:
            m = m.with_levels(oneOf="full")
        return m


@dataclass
class Compiled:
    automaton: ConstraintAutomaton
    seconds: float


@dataclass
class Rejected:
    keywords: list[str]
    seconds: float = 0.0
    reason: str = ""

    def __post_init__(self) -> None:
        if not self.keywords:
            raise ValueError("a rejection must name at least one keyword")


@dataclass
class TimedOut:
    seconds: float
    reason: str = field(default="compile timeout")


CompileOutcome = Union[Compiled, Rejected, TimedOut]


def compile_schema(ir: SchemaIR, opts: Optional[CompileOptions] = None, source_id: str = "") -> CompileOutcome:
    """Compile ``ir`` into a :class:`ConstraintAutomaton`.

    Schemas using keywords outside the manifest are rejected before any
    lowering happens. ``seconds`` records the grammar compilation time.
    """
    opts = opts or CompileOptions()
    t0 = time.monotonic()
    ok, bad = declared_covered(ir, opts.effective_manifest())
    if not ok:
        return Rejected(bad, time.monotonic() - t0, "keywords outside the manifest")
    try:
        lowered = lower(ir, t0 + opts.compile_timeout)
    except Deadline:
        return TimedOut(time.monotonic() - t0)
    except UnsupportedPattern as e:
        return Rejected(["/pattern"], time.monotonic() - t0, str(e))
    except CompileLimit as e:
        return Rejected([_limit_keyword(str(e))], time.monotonic() - t0, str(e))
    auto = ConstraintAutomaton(lowered, source_id, opts.max_depth)
    return Compiled(auto, time.monotonic() - t0)


def _limit_keyword(msg: str) -> str:
    for key in ("propertyNames", "patternProperties", "anyOf"):
        if key in msg:
            return "/" + key
    if "numeric" in msg:
        return "/minimum"
    return "/pattern"


def ir_from_value(raw, source_id: str = "") -> SchemaIR:
    """Normalize a schema given as a Python value or JSON text."""
    from ..schema.document import document_from_value, parse_schema
    from ..schema.ir import normalize

    if isinstance(raw, (str, bytes)):
        return normalize(parse_schema(raw, source_id))
    return normalize(document_from_value(raw, source_id))


def compile_value(raw, opts: Optional[CompileOptions] = None, source_id: str = "") -> CompileOutcome:
    return compile_schema(ir_from_value(raw, source_id), opts, source_id)
