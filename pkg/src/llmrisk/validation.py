"""Validation report primitives shared by scheme, catalog and document checks."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ValidationIssue:
    code: str
    message: str
    locus: str | None = None

    def __str__(self) -> str:
        where = f" ({self.locus})" if self.locus else ""
        return f"[{self.code}]{where} {self.message}"


@dataclass
class ValidationReport:
    """Accumulated errors and warnings from a validation pass.

    Errors mark invariant violations; warnings flag suspicious but
    permitted input (e.g. a non-monotone severity chart).
    """

    errors: list[ValidationIssue] = field(default_factory=list)
    warnings: list[ValidationIssue] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.errors

    def error(self, code: str, message: str, locus: str | None = None) -> None:
        self.errors.append(ValidationIssue(code, message, locus))

    def warn(self, code: str, message: str, locus: str | None = None) -> None:
        self.warnings.append(ValidationIssue(code, message, locus))

    def extend(self, other: "ValidationReport") -> None:
        self.errors.extend(other.errors)
        self.warnings.extend(other.warnings)
