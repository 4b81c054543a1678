"""Pass/fail bookkeeping used by every verification routine."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class Assertion:
    name: str
    status: str  # "pass" | "fail" | "skipped"
    checked: int = 0
    witness: Any = None

    @property
    def passed(self) -> bool:
        return self.status != "fail"

    def to_dict(self) -> dict:
        out = {"name": self.name, "status": self.status, "checked": self.checked}
        if self.witness is not None:
            out["witness"] = _jsonable(self.witness)
        return out


@dataclass
class Report:
    title: str
    assertions: list[Assertion] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    def check(self, name: str, ok: bool, checked: int = 0, witness: Any = None) -> bool:
        self.assertions.append(
            Assertion(name, "pass" if ok else "fail", checked, None if ok else witness)
        )
        return ok

    def skip(self, name: str, reason: str) -> None:
        self.assertions.append(Assertion(name, "skipped", 0, reason))

    def extend(self, other: "Report", prefix: str = "") -> None:
        for a in other.assertions:
            self.assertions.append(Assertion(prefix + a.name, a.status, a.checked, a.witness))

    @property
    def ok(self) -> bool:
        return all(a.passed for a in self.assertions)

    def failures(self) -> list[Assertion]:
        return [a for a in self.assertions if not a.passed]

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "ok": self.ok,
            "assertions": [a.to_dict() for a in self.assertions],
            "data": _jsonable(self.data),
        }

    def lines(self) -> list[str]:
        return [f"[{a.status.upper():7}] {a.name} ({a.checked} checked)" for a in self.assertions]


def _jsonable(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, set, frozenset)):
        items = [_jsonable(v) for v in obj]
        return sorted(items, key=str) if isinstance(obj, (set, frozenset)) else items
    if isinstance(obj, (str, int, float, bool)) or obj is None:
        return obj
    return str(obj)
