"""Verification report record shared by the hierarchy and dispersionless
check suites."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple


@dataclass(frozen=True)
class VerificationReport:
    check: str
    params: Tuple
    passed: bool
    witness: Optional[object]  # json-able payload of the offending object
    millis: int

    def __post_init__(self):
        if not self.passed and self.witness is None:
            raise ValueError("failing report must carry a witness")

    def to_json(self) -> dict:
        return {
            "check": self.check,
            "params": list(self.params),
            "pass": self.passed,
            "witness": self.witness,
            "millis": self.millis,
        }

    def render(self) -> str:
        tag = "PASS" if self.passed else "FAIL"
        params = ",".join(str(p) for p in self.params)
        label = f"{self.check}({params})" if params else self.check
        return f"{tag} {label} [{self.millis} ms]"
