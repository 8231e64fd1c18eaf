"""Pass/fail clauses with witnesses, shared by every verifier."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Clause:
    name: str
    passed: bool
    witness: dict | None = None

    def to_dict(self) -> dict:
        return {"name": self.name, "status": "pass" if self.passed else "fail", "witness": self.witness}


@dataclass
class Report:
    clauses: list[Clause] = field(default_factory=list)
    data: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.clauses)

    def add(self, name: str, passed: bool, witness: dict | None = None) -> Clause:
        c = Clause(name, bool(passed), None if passed else witness)
        self.clauses.append(c)
        return c

    def clause(self, name: str) -> Clause:
        return next(c for c in self.clauses if c.name == name)

    def to_dict(self) -> dict:
        return {"status": "pass" if self.passed else "fail", "clauses": [c.to_dict() for c in self.clauses], **self.data}
