from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class Diagnostic:
    """One finding about a model.

    ``subject`` is the human-readable entity, link or diagram name the
    finding is about; ``target`` is its id (used to map findings back to
    source spans).
    """

    code: str
    severity: Severity
    subject: str
    message: str
    target: str | None = None

    @property
    def is_error(self) -> bool:
        return self.severity is Severity.ERROR

    def render(self) -> str:
        return f"{self.code} {self.severity.value} {self.subject}: {self.message}"


def sort_key(diag: Diagnostic):
    return (diag.code[0], int(diag.code[1:]), diag.subject, diag.message)


def errors_only(diags):
    return [d for d in diags if d.is_error]
