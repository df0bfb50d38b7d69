"""Machine-readable outcomes of identity suites."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field


@dataclass
class IdentityResult:
    """One checked identity: pass iff no residual is recorded."""

    name: str
    status: str  # "pass" | "fail"
    residual: str | None = None

    def __post_init__(self):
        if self.status not in ("pass", "fail"):
            raise ValueError(f"bad status {self.status!r}")
        if (self.residual is None) != (self.status == "pass"):
            raise ValueError("status must be pass exactly when residual is absent")

    def to_dict(self) -> dict:
        d = {"name": self.name, "status": self.status}
        if self.residual is not None:
            d["residual"] = self.residual
        return d


@dataclass
class CheckReport:
    """Outcome of a named identity suite over one presentation."""

    suite: str
    presentation: str
    identities: list[IdentityResult] = field(default_factory=list)
    elapsed_ms: int = 0
    notes: list[str] = field(default_factory=list)

    def add(self, result: IdentityResult) -> None:
        self.identities.append(result)

    def check(self, name: str, residual_element) -> None:
        """Record pass when the residual element is zero, else its normal form."""
        if residual_element.is_zero():
            self.add(IdentityResult(name, "pass"))
        else:
            self.add(IdentityResult(name, "fail", str(residual_element)))

    def expect_nonzero(self, name: str, element) -> None:
        """Record pass when the witness element is nonzero (negative controls)."""
        if element.is_zero():
            self.add(IdentityResult(name, "fail", "0 (expected a nonzero witness)"))
        else:
            self.add(IdentityResult(name, "pass"))

    @property
    def passed(self) -> bool:
        return all(r.status == "pass" for r in self.identities)

    def to_dict(self) -> dict:
        d = {
            "suite": self.suite,
            "presentation": self.presentation,
            "elapsed_ms": self.elapsed_ms,
            "identities": [r.to_dict() for r in self.identities],
        }
        if self.notes:
            d["notes"] = list(self.notes)
        return d

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @staticmethod
    def from_dict(d: dict) -> "CheckReport":
        rep = CheckReport(d["suite"], d["presentation"], elapsed_ms=d["elapsed_ms"])
        for r in d["identities"]:
            rep.add(IdentityResult(r["name"], r["status"], r.get("residual")))
        rep.notes = list(d.get("notes", []))
        return rep

    @staticmethod
    def from_json(text: str) -> "CheckReport":
        return CheckReport.from_dict(json.loads(text))

    def render_text(self, color: bool = False) -> str:
        ok = "\x1b[32mPASS\x1b[0m" if color else "PASS"
        bad = "\x1b[31mFAIL\x1b[0m" if color else "FAIL"
        n = len(self.identities)
        fails = sum(r.status == "fail" for r in self.identities)
        head = f"suite {self.suite} [{self.presentation}]: {n} identities, "
        head += "all pass" if not fails else f"{fails} FAILED"
        head += f" ({self.elapsed_ms} ms)"
        lines = [head]
        for r in self.identities:
            mark = ok if r.status == "pass" else bad
            line = f"  {mark}  {r.name}"
            if r.residual is not None:
                line += f"\n        residual: {r.residual}"
            lines.append(line)
        for note in self.notes:
            lines.append(f"  note: {note}")
        return "\n".join(lines)


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["suite", "presentation", "elapsed_ms", "identities"],
    "additionalProperties": False,
    "properties": {
        "suite": {"type": "string"},
        "presentation": {"type": "string"},
        "elapsed_ms": {"type": "integer", "minimum": 0},
        "notes": {"type": "array", "items": {"type": "string"}},
        "identities": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["name", "status"],
                "additionalProperties": False,
                "properties": {
                    "name": {"type": "string"},
                    "status": {"enum": ["pass", "fail"]},
                    "residual": {"type": "string"},
                },
            },
        },
    },
}


@contextmanager
def timed_report(suite: str, presentation: str):
    rep = CheckReport(suite, presentation)
    t0 = time.perf_counter()
    try:
        yield rep
    finally:
        rep.elapsed_ms = int((time.perf_counter() - t0) * 1000)
