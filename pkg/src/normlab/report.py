"""Machine-readable check reports and their JSON encoding."""

from __future__ import annotations

import hashlib
import json
import math
import time
from contextlib import contextmanager
from dataclasses import dataclass, field

PASS = "Pass"
FAIL = "Fail"
INDETERMINATE = "Indeterminate"
HYPOTHESIS_FAILED = "HypothesisFailed"
VERDICTS = (PASS, FAIL, INDETERMINATE, HYPOTHESIS_FAILED)


def jsonable(x):
    """Convert numpy scalars, complex numbers and dataclass-ish objects to JSON types."""
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, complex):
        return [jsonable(x.real), jsonable(x.imag)]
    if isinstance(x, float):
        return x if math.isfinite(x) else repr(x)
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    # numpy scalars and arrays
    if hasattr(x, "tolist"):
        return jsonable(x.tolist())
    if hasattr(x, "__float__"):
        return jsonable(float(x))
    return str(x)


def config_hash(config: dict) -> str:
    blob = json.dumps(jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:16]


@dataclass
class CheckReport:
    check: str
    verdict: str
    margins: dict = field(default_factory=dict)
    meta: dict = field(default_factory=dict)
    timing: float | None = None
    sample: object = None
    detail: str = ""

    def __post_init__(self):
        if self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        if self.verdict == FAIL and self.sample is None:
            raise ValueError("a Fail report must carry the offending sample")

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def to_json(self, deterministic: bool = False) -> dict:
        out = {"check": self.check, "verdict": self.verdict,
               "margins": jsonable(self.margins), "meta": jsonable(self.meta)}
        if self.sample is not None:
            out["sample"] = jsonable(self.sample)
        if self.detail:
            out["detail"] = self.detail
        if not deterministic and self.timing is not None:
            out["timing_s"] = self.timing
        return out

    def dumps(self, deterministic: bool = False) -> str:
        return json.dumps(self.to_json(deterministic), sort_keys=True)


@contextmanager
def stopwatch():
    """Yields a one-element list that receives the elapsed seconds on exit."""
    box = [0.0]
    t0 = time.perf_counter()
    try:
        yield box
    finally:
        box[0] = time.perf_counter() - t0


def combine(verdicts) -> str:
    """Overall verdict: any Fail wins, then HypothesisFailed, then Indeterminate."""
    vs = list(verdicts)
    for v in (FAIL, HYPOTHESIS_FAILED, INDETERMINATE):
        if v in vs:
            return v
    return PASS
