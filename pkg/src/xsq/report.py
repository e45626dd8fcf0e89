"""Pass/fail reports produced by the axiom verifiers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from .errors import _plain


@dataclass
class Check:
    name: str
    ok: bool
    witness: Any = None
    detail: str = ""

    def __bool__(self):
        return self.ok

    def to_dict(self):
        d = {"name": self.name, "ok": self.ok}
        if self.witness is not None:
            d["witness"] = _plain(self.witness)
        if self.detail:
            d["detail"] = self.detail
        return d


class Report:
    """Ordered collection of named checks."""

    def __init__(self, title: str = ""):
        self.title = title
        self.checks: dict[str, Check] = {}

    def add(self, name, ok, witness=None, detail="") -> Check:
        c = Check(name, bool(ok), None if ok else witness, detail)
        self.checks[name] = c
        return c

    def extend(self, other: "Report", prefix: str = ""):
        for name, c in other.checks.items():
            self.checks[prefix + name] = Check(prefix + name, c.ok, c.witness, c.detail)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks.values())

    def __bool__(self):
        return self.ok

    def __getitem__(self, name) -> Check:
        return self.checks[name]

    def __contains__(self, name):
        return name in self.checks

    def failures(self) -> list:
        return [c for c in self.checks.values() if not c.ok]

    def failed_groups(self) -> set:
        """Axiom labels (text before the first '.' or ':') that have a failing check."""
        return {c.name.split(":")[0] for c in self.failures()}

    def to_dict(self):
        return {"title": self.title, "ok": self.ok, "checks": [c.to_dict() for c in self.checks.values()]}

    def __repr__(self):
        status = "ok" if self.ok else "FAILED " + ", ".join(c.name for c in self.failures())
        return f"<Report {self.title}: {status}>"
