"""Verification reports shared by every check and emitted by the CLI."""

from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from typing import Any, Iterator

SCHEMA_VERSION = "1"


@dataclass
class VerificationReport:
    command: str
    genus: int
    level: int | None
    expected: Any
    computed: Any
    passed: bool
    elapsed_ms: int = 0
    details: list[str] = field(default_factory=list)
    seed: int | None = None
    data: Any = None

    def to_dict(self) -> dict[str, Any]:
        out = {"schema": SCHEMA_VERSION}
        out.update(asdict(self))
        if out["seed"] is None:
            del out["seed"]
        if out["data"] is None:
            del out["data"]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = f"g={self.genus}" + (f" n={self.level}" if self.level is not None else "")
        return (
            f"[{status}] {self.command} {where}: expected {self.expected}, "
            f"computed {self.computed} ({self.elapsed_ms} ms)"
        )


@contextmanager
def stopwatch() -> Iterator[list[int]]:
    """Yields a one-element list filled with elapsed milliseconds on exit."""
    box = [0]
    start = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = int(round((time.perf_counter() - start) * 1000))
