"""Shared result type for every checker: equivalent, not, or undecided."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional

EQUIVALENT = "Equivalent"
NOT_EQUIVALENT = "NotEquivalent"
INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class Verdict:
    status: str
    method: str
    witness: Optional[dict[str, Any]] = None  # required for NotEquivalent
    reason: Optional[str] = None  # required for Inconclusive

    def __post_init__(self) -> None:
        if self.status not in (EQUIVALENT, NOT_EQUIVALENT, INCONCLUSIVE):
            raise ValueError(f"unknown verdict status {self.status!r}")
        if self.status == NOT_EQUIVALENT and self.witness is None:
            raise ValueError("NotEquivalent verdicts need a witness")
        if self.status == INCONCLUSIVE and self.reason is None:
            raise ValueError("Inconclusive verdicts need a reason")

    @property
    def equivalent(self) -> bool:
        return self.status == EQUIVALENT

    def exit_code(self) -> int:
        return {EQUIVALENT: 0, NOT_EQUIVALENT: 1, INCONCLUSIVE: 2}[self.status]

    def __str__(self) -> str:
        parts = [self.status, f"[{self.method}]"]
        if self.reason:
            parts.append(f"reason: {self.reason}")
        return " ".join(parts)
