"""Small result types for validation routines.

A CheckReport is a flat list of named pass/fail checks.  Validators
return reports instead of raising so a caller can see every violated
identity at once; the CLI turns reports into JSON and exit codes.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: bool
    where: tuple[int, ...] | None = None
    detail: str = ""

    def as_dict(self) -> dict:
        out = {"name": self.name, "passed": self.passed}
        if self.where is not None:
            out["where"] = list(self.where)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass
class CheckReport:
    subject: str
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]

    def add(self, name: str, passed: bool, where=None, detail: str = "") -> None:
        self.checks.append(Check(name, bool(passed), where, detail))

    def add_zero(self, name: str, residual) -> None:
        """Record a check that a tensor residual vanishes identically."""
        from .tensor import first_nonzero

        idx = first_nonzero(residual)
        self.checks.append(Check(name, idx is None, idx))

    def as_dict(self) -> dict:
        return {
            "subject": self.subject,
            "ok": self.ok,
            "checks": [c.as_dict() for c in self.checks],
        }
