"""Report container shared by all experiments."""

from __future__ import annotations

from dataclasses import dataclass, field

from .. import io


@dataclass
class Check:
    """One named pass/fail criterion with its threshold and measured value."""

    value: float
    threshold: float
    passed: bool
    comparison: str = "<="


@dataclass
class ExperimentReport:
    name: str
    parameters: dict
    statistics: dict
    checks: dict = field(default_factory=dict)
    artifacts: list = field(default_factory=list)

    def add_check(self, key: str, value: float, threshold: float,
                  comparison: str = "<="):
        ok = {"<=": value <= threshold, ">=": value >= threshold}[comparison]
        self.checks[key] = Check(value=float(value), threshold=float(threshold),
                                 passed=bool(ok), comparison=comparison)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks.values())

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "parameters": self.parameters,
            "statistics": self.statistics,
            "checks": {k: {"value": c.value, "threshold": c.threshold,
                           "comparison": c.comparison, "passed": c.passed}
                       for k, c in self.checks.items()},
            "passed": self.passed,
            "artifacts": list(self.artifacts),
        }

    def write(self, path) -> None:
        io.write_report(path, self.to_dict())
        self.artifacts.append(str(path))
