"""JSON report documents: serialization of forms, scalars and check records.

Reports are written with sorted keys. Everything that varies between two
runs of the same configuration (creation time, wall times) lives under the
single top-level ``timestamp`` key.
"""

from __future__ import annotations

import hashlib
import json
import time
from datetime import datetime, timezone
from fractions import Fraction

from . import __version__
from .forms import BinaryForm
from .scalars import FieldSpec

PASS = "pass"
FAIL = "fail"
RECORDED = "recorded"  # exploratory outcome, never fails the run


def scalar_to_json(v):
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else [v.numerator, v.denominator]
    return int(v)


def scalar_from_json(v, field: FieldSpec):
    if isinstance(v, list):
        if len(v) != 2:
            raise ValueError(f"rational must be [num, den], got {v!r}")
        return field(Fraction(int(v[0]), int(v[1])))
    if isinstance(v, str):
        return field(Fraction(v))
    if isinstance(v, bool) or not isinstance(v, int):
        raise ValueError(f"bad coefficient {v!r}")
    return field(v)


def form_to_json(f: BinaryForm) -> list:
    """Coefficients in ascending powers of x."""
    return [scalar_to_json(c) for c in f.coeffs]


def form_from_json(coeffs, field: FieldSpec) -> BinaryForm:
    if not isinstance(coeffs, list) or not coeffs:
        raise ValueError("a form is a nonempty list of coefficients")
    return BinaryForm.from_coeffs([scalar_from_json(c, field) for c in coeffs], field)


def optional_form_to_json(f):
    return None if f is None else form_to_json(f)


def digest(obj) -> str:
    """Short sha256 of the canonical JSON of obj."""
    text = json.dumps(obj, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()[:16]


def jsonable(obj):
    """Recursively convert Fractions, tuples and forms to plain JSON data."""
    if isinstance(obj, BinaryForm):
        return form_to_json(obj)
    if isinstance(obj, Fraction):
        return scalar_to_json(obj)
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    return obj


class Report:
    """Accumulates check records for one run."""

    def __init__(self, command: str, config: dict):
        self.command = command
        self.config = config
        self.checks: list[dict] = []
        self.wall_times: dict[str, float] = {}
        self._started = time.perf_counter()

    def add(self, name: str, inputs, outcome: str, data=None, expected=None, resamples=None, seconds=None) -> dict:
        if outcome not in (PASS, FAIL, RECORDED):
            raise ValueError(f"bad outcome {outcome!r}")
        inputs = jsonable(inputs)
        record = {
            "name": name,
            "inputs": inputs,
            "inputs_digest": digest(inputs),
            "outcome": outcome,
            "expected": jsonable(expected),
            "data": jsonable(data or {}),
            "resamples": jsonable(resamples or []),
        }
        self.checks.append(record)
        if seconds is not None:
            self.wall_times[f"{len(self.checks) - 1}:{name}"] = round(seconds, 6)
        return record

    @property
    def ok(self) -> bool:
        return all(c["outcome"] != FAIL for c in self.checks)

    def document(self) -> dict:
        return {
            "tool": "reesdepth",
            "version": __version__,
            "command": self.command,
            "config": jsonable(self.config),
            "checks": self.checks,
            "ok": self.ok,
            "timestamp": {
                "created": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "total_seconds": round(time.perf_counter() - self._started, 6),
                "wall_times": self.wall_times,
            },
        }


def dumps(doc: dict) -> str:
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def stable_part(doc: dict) -> dict:
    """The document without its timestamp, for replay comparisons."""
    return {k: v for k, v in doc.items() if k != "timestamp"}
