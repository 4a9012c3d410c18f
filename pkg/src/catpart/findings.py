"""Findings shared by verification and frame generation."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Any


class Severity(enum.Enum):
    ERROR = "Error"
    WARNING = "Warning"


@dataclass(frozen=True)
class Finding:
    severity: Severity
    check: str
    subject: tuple = ()
    detail: str = ""
    witness: dict[str, Any] | None = field(default=None, compare=False)

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def subject_text(self) -> str:
        return ", ".join(str(s) for s in self.subject)
