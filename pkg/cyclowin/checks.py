"""Outcome of an axiom or property check."""

from dataclasses import dataclass, field

from .exceptions import AxiomViolation


@dataclass
class CheckReport:
    name: str
    failures: list[str] = field(default_factory=list)
    checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def expect(self, condition: bool, detail: str) -> bool:
        self.checked += 1
        if not condition:
            self.failures.append(detail)
        return condition

    def merge(self, other: "CheckReport") -> "CheckReport":
        self.failures.extend(f"{other.name}: {failure}" for failure in other.failures)
        self.checked += other.checked
        return self

    def raise_for_failures(self) -> "CheckReport":
        if self.failures:
            raise AxiomViolation(f"{self.name}: " + "; ".join(self.failures))
        return self

    def to_json(self) -> dict:
        return {"name": self.name, "passed": self.passed, "checked": self.checked, "failures": list(self.failures)}
