"""Check reports shared by every verification routine."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class CheckReport:
    name: str
    passed: bool = True
    checked: int = 0
    witness: Any = None
    details: dict = field(default_factory=dict)

    def fail(self, witness) -> None:
        if self.passed:
            self.witness = witness
        self.passed = False

    def merge(self, other: "CheckReport") -> None:
        self.checked += other.checked
        if not other.passed:
            self.fail({"sub": other.name, "witness": other.witness})

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "checked": self.checked,
            "witness": jsonable(self.witness),
            "details": jsonable(self.details),
        }

    def __bool__(self):
        return self.passed


def jsonable(obj):
    """Convert nested report payloads (tuples, KPoly, Fp values) to JSON data."""
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(x) for x in obj]
    return repr(obj)
