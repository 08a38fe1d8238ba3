"""Threat matrix: catalog entries joined with evaluated assessments.

Every catalog entry (optionally filtered by stakeholder) becomes one row.
Rows for threats whose assessment has reached the evaluated state carry
likelihood, impact and severity cells; all other rows keep those cells
blank, so an unassessed matrix doubles as a worksheet template. Rendering
is deterministic: identical inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from . import rating
from .assessment import AssessmentDocument, Status, evaluate_document
from .catalog import Catalog, StakeholderGroup, ThreatEntry, filter_by_stakeholder
from .rating import RatingScheme, RiskRating

FORMAT_VERSION = 1

RENDER_FORMATS = ("csv", "markup_table", "canonical_json")


class MatrixError(ValueError):
    pass


class AmbiguousAssessmentError(MatrixError):
    def __init__(self, threat_id: str, doc_ids: Sequence[str]):
        super().__init__(
            f"multiple assessments target threat {threat_id!r}: " + ", ".join(doc_ids)
        )
        self.threat_id = threat_id
        self.doc_ids = tuple(doc_ids)


class UnknownThreatError(MatrixError):
    def __init__(self, doc_id: str, ref: str):
        super().__init__(f"assessment {doc_id!r} references unknown threat {ref!r}")
        self.doc_id = doc_id
        self.ref = ref


@dataclass(frozen=True)
class MatrixRow:
    threat: ThreatEntry
    rating: RiskRating | None = None
    assessment_ref: str | None = None

    @property
    def assessed(self) -> bool:
        return self.rating is not None


@dataclass(frozen=True)
class ThreatMatrix:
    rows: tuple[MatrixRow, ...]
    scheme_id: str
    catalog_version: int
    stakeholder_filter: StakeholderGroup | None = None
    generated_at: str | None = None


def build_matrix(
    catalog: Catalog,
    assessments: Sequence[AssessmentDocument],
    scheme: RatingScheme,
    stakeholder: StakeholderGroup | None = None,
    generated_at: str | None = None,
) -> ThreatMatrix:
    """Join the catalog with evaluated assessments into a renderable matrix.

    Rejects two assessments targeting one threat and assessments whose
    threat reference does not resolve in the catalog. Assessments below the
    evaluated state contribute blank rating cells.
    """
    by_threat: dict[str, AssessmentDocument] = {}
    for doc in assessments:
        entry = catalog.resolve(doc.threat)
        if entry is None:
            raise UnknownThreatError(doc.id, doc.threat)
        if entry.id in by_threat:
            raise AmbiguousAssessmentError(entry.id, [by_threat[entry.id].id, doc.id])
        by_threat[entry.id] = doc

    entries = (
        catalog.entries
        if stakeholder is None
        else tuple(filter_by_stakeholder(catalog, stakeholder))
    )

    rows = []
    for entry in entries:
        doc = by_threat.get(entry.id)
        if doc is not None and doc.status.rank >= Status.EVALUATED.rank:
            rows.append(
                MatrixRow(
                    threat=entry,
                    rating=evaluate_document(doc, scheme),
                    assessment_ref=doc.id,
                )
            )
        else:
            rows.append(MatrixRow(threat=entry))
    return ThreatMatrix(
        rows=tuple(rows),
        scheme_id=scheme.id,
        catalog_version=catalog.format_version,
        stakeholder_filter=stakeholder,
        generated_at=generated_at,
    )


# ---------------------------------------------------------------------------
# Rendering.
# ---------------------------------------------------------------------------

_HEADER = (
    "id",
    "name",
    "causes",
    "consequences",
    "likelihood",
    "impact",
    "risk_rating",
    "static_controls",
    "dynamic_controls",
    "traditional_cybersec",
    "stakeholders",
    "assessment",
)


def _row_cells(row: MatrixRow, joiner: str) -> tuple[str, ...]:
    t = row.threat
    stakeholders = joiner.join(
        s.display_name for s in sorted(t.stakeholders, key=lambda g: g.value)
    )
    if row.rating is not None:
        likelihood = row.rating.likelihood_level.display
        impact = row.rating.impact_level.display
        sev = row.rating.severity.display
    else:
        likelihood = impact = sev = ""
    return (
        t.id,
        t.name,
        joiner.join(t.causes),
        joiner.join(t.consequences),
        likelihood,
        impact,
        sev,
        joiner.join(t.static_controls),
        joiner.join(t.dynamic_controls),
        "Yes" if t.traditional_cybersec else "No",
        stakeholders,
        row.assessment_ref or "",
    )


def _render_csv(matrix: ThreatMatrix) -> bytes:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(_HEADER)
    for row in matrix.rows:
        writer.writerow(_row_cells(row, "\n"))
    return buf.getvalue().encode("utf-8")


def _render_markup(matrix: ThreatMatrix) -> bytes:
    lines = ["| " + " | ".join(_HEADER) + " |"]
    lines.append("| " + " | ".join("---" for _ in _HEADER) + " |")
    for row in matrix.rows:
        cells = [c.replace("|", "\\|") for c in _row_cells(row, "<br>")]
        lines.append("| " + " | ".join(cells) + " |")
    return ("\n".join(lines) + "\n").encode("utf-8")


def matrix_to_payload(matrix: ThreatMatrix) -> dict:
    rows = []
    for row in matrix.rows:
        t = row.threat
        rows.append(
            {
                "id": t.id,
                "name": t.name,
                "causes": list(t.causes),
                "consequences": list(t.consequences),
                "static_controls": list(t.static_controls),
                "dynamic_controls": list(t.dynamic_controls),
                "traditional_cybersec": t.traditional_cybersec,
                "stakeholders": sorted(s.value for s in t.stakeholders),
                "rating": None if row.rating is None else rating.rating_to_payload(row.rating),
                "assessment": row.assessment_ref,
            }
        )
    return {
        "format_version": FORMAT_VERSION,
        "generated_at": matrix.generated_at,
        "scheme": matrix.scheme_id,
        "catalog_version": matrix.catalog_version,
        "stakeholder_filter": (
            None if matrix.stakeholder_filter is None else matrix.stakeholder_filter.value
        ),
        "rows": rows,
    }


def matrix_from_payload(payload: Mapping) -> ThreatMatrix:
    rows = []
    for raw in payload["rows"]:
        entry = ThreatEntry(
            id=raw["id"],
            name=raw["name"],
            causes=tuple(raw["causes"]),
            consequences=tuple(raw["consequences"]),
            static_controls=tuple(raw["static_controls"]),
            dynamic_controls=tuple(raw["dynamic_controls"]),
            traditional_cybersec=raw["traditional_cybersec"],
            stakeholders=frozenset(
                StakeholderGroup.from_text(s) for s in raw["stakeholders"]
            ),
        )
        rows.append(
            MatrixRow(
                threat=entry,
                rating=(
                    None
                    if raw.get("rating") is None
                    else rating.rating_from_payload(raw["rating"])
                ),
                assessment_ref=raw.get("assessment"),
            )
        )
    stakeholder = payload.get("stakeholder_filter")
    return ThreatMatrix(
        rows=tuple(rows),
        scheme_id=payload["scheme"],
        catalog_version=payload["catalog_version"],
        stakeholder_filter=(
            None if stakeholder is None else StakeholderGroup.from_text(stakeholder)
        ),
        generated_at=payload.get("generated_at"),
    )


def _render_json(matrix: ThreatMatrix) -> bytes:
    text = json.dumps(matrix_to_payload(matrix), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def render(matrix: ThreatMatrix, fmt: str) -> bytes:
    """Render to one of csv | markup_table | canonical_json as bytes."""
    if fmt == "csv":
        return _render_csv(matrix)
    if fmt in ("markup_table", "md", "markdown"):
        return _render_markup(matrix)
    if fmt in ("canonical_json", "json"):
        return _render_json(matrix)
    raise MatrixError(
        f"unknown format {fmt!r}; expected one of {', '.join(RENDER_FORMATS)}"
    )
