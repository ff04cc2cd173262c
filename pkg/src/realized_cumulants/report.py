"""Pass/fail records for exact and Monte Carlo checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

DEFAULT_Z_GATE = 4.0

__all__ = ["DEFAULT_Z_GATE", "VerificationReport", "suite_payload"]


@dataclass
class VerificationReport:
    """Outcome of comparing an estimate with its target.

    The gate is ``max(abs_tol, z * standard_error) + bias_allowance``; the
    check passes when ``|estimate - target|`` is within it.  Exact checks
    use ``standard_error = 0``.
    """

    name: str
    estimate: float
    target: float
    standard_error: float = 0.0
    n_samples: int = 0
    z: float = DEFAULT_Z_GATE
    abs_tol: float = 0.0
    bias_allowance: float = 0.0
    details: dict = field(default_factory=dict)

    @property
    def gate(self) -> float:
        return max(self.abs_tol, self.z * self.standard_error) + self.bias_allowance

    @property
    def error(self) -> float:
        return abs(self.estimate - self.target)

    @property
    def passed(self) -> bool:
        return math.isfinite(self.estimate) and self.error <= self.gate

    @property
    def rule(self) -> str:
        parts = [f"|estimate - target| <= max({self.abs_tol:g}, {self.z:g}*SE)"]
        if self.bias_allowance:
            parts.append(f"+ {self.bias_allowance:g}")
        return " ".join(parts)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "estimate": self.estimate,
            "target": self.target,
            "standard_error": self.standard_error,
            "n_samples": self.n_samples,
            "gate": self.gate,
            "rule": self.rule,
            "pass": self.passed,
            "details": self.details,
        }

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: estimate={self.estimate:.6g} target={self.target:.6g} "
                f"err={self.error:.3g} gate={self.gate:.3g}")


def suite_payload(suite: str, reports: list[VerificationReport]) -> dict:
    return {
        "suite": suite,
        "reports": [r.to_dict() for r in reports],
        "pass": all(r.passed for r in reports),
    }
