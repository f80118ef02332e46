"""Run configuration for coverage and efficiency benchmarks."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Optional


@dataclass(frozen=True)
class Variant:
    """One engine configuration compared in an efficiency run."""

    name: str
    use_mask: bool = True
    fast_forward: bool = False


DEFAULT_VARIANTS = (
    Variant("lm-only", use_mask=False),
    Variant("masked"),
    Variant("masked+ff", fast_forward=True),
)


@dataclass(frozen=True)
class RunConfig:
    compile_timeout: float = 40.0
    generation_timeout: float = 40.0
    max_tokens: int = 256
    samples_per_schema: int = 1
    fast_forward: bool = False
    seed: int = 0
    vocab: Optional[str] = None
    manifest: Optional[str] = None
    corpus: tuple[str, ...] = ()
    variants: tuple[Variant, ...] = DEFAULT_VARIANTS
    include_gct_in_ttft: bool = True
    jobs: int = 1
    source: str = "adversarial"

    def __post_init__(self) -> None:
        if self.compile_timeout <= 0 or self.generation_timeout <= 0:
            raise ValueError("timeouts must be positive")
        if self.samples_per_schema < 1:
            raise ValueError("samples_per_schema must be at least 1")
        if self.max_tokens < 1:
            raise ValueError("max_tokens must be at least 1")

    def replace(self, **changes: Any) -> "RunConfig":
        data = {f.name: getattr(self, f.name) for f in fields(self)}
        data.update({k: v for k, v in changes.items() if v is not None})
        return RunConfig(**data)

    def to_json(self) -> dict:
        d = asdict(self)
        d["corpus"] = list(self.corpus)
        d["variants"] = [asdict(v) for v in self.variants]
        return d


def load_config(path: str | Path) -> RunConfig:
    data = json.loads(Path(path).read_text("utf-8"))
    if not isinstance(data, dict):
        raise ValueError("config must be a JSON object")
    known = {f.name for f in fields(RunConfig)}
    unknown = set(data) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")
    if "corpus" in data:
        data["corpus"] = tuple([data["corpus"]] if isinstance(data["corpus"], str) else data["corpus"])
    if "variants" in data:
        data["variants"] = tuple(Variant(**v) for v in data["variants"])
    return RunConfig(**data)
