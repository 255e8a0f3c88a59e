"""Machine-readable verification outcomes shared by every checker."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Any

PASS = "PASS"
FAIL = "FAIL"
CONJECTURE_PASS = "CONJECTURE-PASS"
CONJECTURE_FAIL = "CONJECTURE-FAIL"
PRECONDITION_FAIL = "PRECONDITION-FAIL"
NON_UNIQUE = "NON-UNIQUE"
STATUSES = (PASS, FAIL, CONJECTURE_PASS, CONJECTURE_FAIL, PRECONDITION_FAIL, NON_UNIQUE)

INSTANCE_KEYS = ("family", "bn", "bm", "kind", "block", "params")


def params_digest(params: dict[str, str] | None) -> str | None:
    """Short stable digest of a parameter assignment (text values)."""
    if not params:
        return None
    blob = json.dumps(params, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def make_instance(family=None, bn=None, bm=None, kind=None, block=None, params=None) -> dict:
    return {
        "family": family,
        "bn": bn,
        "bm": bm,
        "kind": kind,
        "block": block,
        "params": params if isinstance(params, str) or params is None else params_digest(params),
    }


@dataclass
class VerificationReport:
    check: str
    instance: dict
    status: str
    witness: dict | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.status not in STATUSES:
            raise ValueError(f"unknown status {self.status!r}")
        self.instance = {k: self.instance.get(k) for k in INSTANCE_KEYS}

    @property
    def ok(self) -> bool:
        return self.status in (PASS, CONJECTURE_PASS)

    def as_conjecture(self) -> "VerificationReport":
        mapping = {PASS: CONJECTURE_PASS, FAIL: CONJECTURE_FAIL}
        return VerificationReport(
            self.check, dict(self.instance), mapping.get(self.status, self.status), self.witness, list(self.notes)
        )

    def to_json(self) -> dict[str, Any]:
        return {
            "check": self.check,
            "instance": self.instance,
            "status": self.status,
            "witness": self.witness,
            "notes": list(self.notes),
        }

    @classmethod
    def from_json(cls, d: dict) -> "VerificationReport":
        return cls(d["check"], d["instance"], d["status"], d.get("witness"), list(d.get("notes", [])))

    def sort_key(self) -> tuple:
        inst = self.instance
        return (
            self.check,
            str(inst["family"]),
            inst["bn"] if inst["bn"] is not None else -1,
            inst["bm"] if inst["bm"] is not None else -1,
            str(inst["kind"]),
            inst["block"] if inst["block"] is not None else -1,
            str(inst["params"]),
        )


def canonical_dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def dumps_reports(reports: list[VerificationReport]) -> str:
    return canonical_dumps([r.to_json() for r in reports])


def loads_reports(text: str) -> list[VerificationReport]:
    return [VerificationReport.from_json(d) for d in json.loads(text)]
