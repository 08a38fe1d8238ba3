"""Assessment documents: scenario analysis, dependency mapping, impact analysis.

A document walks one threat through a three-step analysis. The scenario
section characterises the threat agent (skill, motive, opportunity, size),
the dependency section maps affected components against the vulnerability
factors, and the impact section scores technical and business impact. Each
scored factor carries a free-text rationale; rationale is evidence, never
computation input.

Documents are immutable values moving through a five-state lifecycle
(identified, analyzed, evaluated, treated, monitored). What-if control
adjustments derive a new document with overridden scores so a mitigation
can be modelled without touching the original: an adjustment that only
touches threat-agent or vulnerability factors can lower likelihood but
leaves every impact score exactly unchanged.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from . import rating
from .catalog import Catalog, StakeholderGroup
from .rating import FactorAssignment, FactorCategory, RatingScheme, RiskRating
from .validation import ValidationReport

FORMAT_VERSION = 1

_DOC_ID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")


class Status(str, Enum):
    IDENTIFIED = "identified"
    ANALYZED = "analyzed"
    EVALUATED = "evaluated"
    TREATED = "treated"
    MONITORED = "monitored"

    @property
    def rank(self) -> int:
        return _STATUS_ORDER.index(self)

    @classmethod
    def from_text(cls, text: str) -> "Status":
        return cls(text.strip().lower())


_STATUS_ORDER = [
    Status.IDENTIFIED,
    Status.ANALYZED,
    Status.EVALUATED,
    Status.TREATED,
    Status.MONITORED,
]


class LifecycleError(ValueError):
    """Base class for status-transition failures."""


class SequencingError(LifecycleError):
    """Transition skips a state or moves backwards."""


class GuardError(LifecycleError):
    """Transition target's entry guard is not satisfied."""


class DocumentError(ValueError):
    """Structurally malformed document payloads."""


@dataclass(frozen=True)
class ScenarioAnalysis:
    threat_agent_description: str
    method: str
    assignments: tuple[FactorAssignment, ...] = ()


@dataclass(frozen=True)
class Component:
    name: str
    weakness_note: str = ""


@dataclass(frozen=True)
class DependencyMapping:
    components: tuple[Component, ...] = ()
    assignments: tuple[FactorAssignment, ...] = ()


@dataclass(frozen=True)
class ImpactAnalysis:
    technical_assignments: tuple[FactorAssignment, ...] = ()
    business_assignments: tuple[FactorAssignment, ...] = ()


@dataclass(frozen=True)
class ControlAdjustment:
    """A what-if mitigation: absolute score overrides for selected factors."""

    label: str
    overrides: tuple[tuple[str, int], ...] = ()
    note: str = ""

    def override_map(self) -> dict[str, int]:
        return dict(self.overrides)


@dataclass(frozen=True)
class AssessmentDocument:
    id: str
    threat: str
    system_context: str = ""
    stakeholder: StakeholderGroup | None = None
    scenario: ScenarioAnalysis | None = None
    dependencies: DependencyMapping | None = None
    impact: ImpactAnalysis | None = None
    status: Status = Status.IDENTIFIED
    scheme_ref: str | None = None
    revision: int = 1
    adjustments: tuple[ControlAdjustment, ...] = ()
    acceptance_note: str | None = None
    disposition: str = ""
    review_notes: tuple[str, ...] = ()

    def all_assignments(self) -> tuple[FactorAssignment, ...]:
        parts: list[FactorAssignment] = []
        if self.scenario is not None:
            parts.extend(self.scenario.assignments)
        if self.dependencies is not None:
            parts.extend(self.dependencies.assignments)
        if self.impact is not None:
            parts.extend(self.impact.technical_assignments)
            parts.extend(self.impact.business_assignments)
        return tuple(parts)


# ---------------------------------------------------------------------------
# Validation and evaluation.
# ---------------------------------------------------------------------------

_SECTION_CATEGORY = {
    "scenario": FactorCategory.THREAT_AGENT,
    "dependencies": FactorCategory.VULNERABILITY,
}


def _check_section(
    report: ValidationReport,
    scheme: RatingScheme,
    section: str,
    assignments: Iterable[FactorAssignment],
    category: FactorCategory,
) -> None:
    seen: set[str] = set()
    for a in assignments:
        locus = f"{section}.{a.factor_id}"
        if a.factor_id in seen:
            report.error("duplicate_assignment", f"{a.factor_id!r} assigned twice", locus)
            continue
        seen.add(a.factor_id)
        if not scheme.has_factor(a.factor_id):
            report.error("unknown_factor", f"{a.factor_id!r} not in scheme", locus)
            continue
        factor = scheme.factor(a.factor_id)
        if factor.category is not category:
            report.error(
                "misplaced_factor",
                f"{a.factor_id!r} belongs to {factor.category.value}, not {category.value}",
                locus,
            )
        if not a.rationale.strip():
            report.warn("missing_rationale", f"no rationale for {a.factor_id!r}", locus)


def missing_factors(doc: AssessmentDocument, scheme: RatingScheme) -> tuple[str, ...]:
    """Weighted factor ids that the document does not yet score."""
    assigned = {a.factor_id for a in doc.all_assignments()}
    required = scheme.weighted_ids(*rating.LIKELIHOOD_CATEGORIES, *rating.IMPACT_CATEGORIES)
    return tuple(f for f in required if f not in assigned)


def validate_document(
    doc: AssessmentDocument, catalog: Catalog, scheme: RatingScheme
) -> ValidationReport:
    """Report invariant violations (errors) and suspicious gaps (warnings)."""
    report = ValidationReport()

    if not _DOC_ID_PATTERN.match(doc.id):
        report.error("invalid_id", f"document id {doc.id!r} is not filesystem-safe", doc.id)

    if catalog.resolve(doc.threat) is None:
        report.warn("unresolved_threat", f"threat reference {doc.threat!r} not in catalog", doc.threat)

    if doc.scenario is not None:
        _check_section(
            report, scheme, "scenario", doc.scenario.assignments, FactorCategory.THREAT_AGENT
        )
    if doc.dependencies is not None:
        _check_section(
            report,
            scheme,
            "dependencies",
            doc.dependencies.assignments,
            FactorCategory.VULNERABILITY,
        )
    if doc.impact is not None:
        _check_section(
            report,
            scheme,
            "impact.technical",
            doc.impact.technical_assignments,
            FactorCategory.TECHNICAL_IMPACT,
        )
        _check_section(
            report,
            scheme,
            "impact.business",
            doc.impact.business_assignments,
            FactorCategory.BUSINESS_IMPACT,
        )

    if doc.status.rank >= Status.ANALYZED.rank:
        for section in ("scenario", "dependencies", "impact"):
            if getattr(doc, section) is None:
                report.error(
                    "missing_section",
                    f"status {doc.status.value!r} requires the {section} section",
                    section,
                )
    if doc.status.rank >= Status.EVALUATED.rank:
        for factor_id in missing_factors(doc, scheme):
            report.error(
                "missing_factor",
                f"status {doc.status.value!r} requires a score for {factor_id!r}",
                factor_id,
            )

    for i, adj in enumerate(doc.adjustments):
        for factor_id, score in adj.overrides:
            locus = f"adjustments[{i}].{factor_id}"
            if not scheme.has_factor(factor_id):
                report.error("unknown_factor", f"{factor_id!r} not in scheme", locus)
            if not rating.SCORE_MIN <= score <= rating.SCORE_MAX:
                report.error("score_out_of_range", f"override {score} outside 0..9", locus)

    return report


def evaluate_document(doc: AssessmentDocument, scheme: RatingScheme) -> RiskRating:
    """Rate the document; requires every weighted factor to be scored."""
    return rating.evaluate(doc.all_assignments(), scheme)


# ---------------------------------------------------------------------------
# Lifecycle.
# ---------------------------------------------------------------------------

def advance_status(
    doc: AssessmentDocument, target: Status, scheme: RatingScheme | None = None
) -> AssessmentDocument:
    """Move to the immediate successor state, enforcing its entry guard.

    Returns a new document with the advanced status and a bumped revision.
    """
    if scheme is None:
        scheme = rating.default_scheme()
    if target.rank != doc.status.rank + 1:
        raise SequencingError(
            f"cannot move from {doc.status.value!r} to {target.value!r}: "
            "states advance one step at a time"
        )
    if target is Status.ANALYZED:
        absent = [
            name
            for name in ("scenario", "dependencies", "impact")
            if getattr(doc, name) is None
        ]
        if absent:
            raise GuardError(
                "analyzed requires all three analysis sections; missing: "
                + ", ".join(absent)
            )
    elif target is Status.EVALUATED:
        missing = missing_factors(doc, scheme)
        if missing:
            raise GuardError(
                "evaluated requires every factor scored; missing: " + ", ".join(missing)
            )
    elif target is Status.TREATED:
        if not doc.adjustments and not (doc.acceptance_note or "").strip():
            raise GuardError(
                "treated requires at least one control adjustment or an acceptance note"
            )
    return replace(doc, status=target, revision=doc.revision + 1)


# ---------------------------------------------------------------------------
# What-if adjustments.
# ---------------------------------------------------------------------------

def _override_assignment(
    a: FactorAssignment, overrides: Mapping[str, int], scheme: RatingScheme
) -> FactorAssignment:
    if a.factor_id not in overrides:
        return a
    new_score = overrides[a.factor_id]
    return replace(
        a,
        score=new_score,
        anchor_label=scheme.factor(a.factor_id).anchor_label(new_score),
    )


def apply_adjustment(
    doc: AssessmentDocument,
    adjustment: ControlAdjustment,
    scheme: RatingScheme | None = None,
) -> tuple[AssessmentDocument, RiskRating, RiskRating]:
    """Model a mitigation: returns (derived doc, rating before, rating after).

    The source document is never mutated; the derived document records the
    adjustment and bumps the revision.
    """
    if scheme is None:
        scheme = rating.default_scheme()
    overrides = adjustment.override_map()
    for factor_id, score in overrides.items():
        if not scheme.has_factor(factor_id):
            raise rating.UnknownFactorError(factor_id)
        if not rating.SCORE_MIN <= score <= rating.SCORE_MAX:
            raise rating.RatingError(
                f"override for {factor_id!r} out of range: {score}"
            )

    before = evaluate_document(doc, scheme)

    def patched(assignments: tuple[FactorAssignment, ...]) -> tuple[FactorAssignment, ...]:
        return tuple(_override_assignment(a, overrides, scheme) for a in assignments)

    derived = replace(
        doc,
        scenario=None
        if doc.scenario is None
        else replace(doc.scenario, assignments=patched(doc.scenario.assignments)),
        dependencies=None
        if doc.dependencies is None
        else replace(doc.dependencies, assignments=patched(doc.dependencies.assignments)),
        impact=None
        if doc.impact is None
        else replace(
            doc.impact,
            technical_assignments=patched(doc.impact.technical_assignments),
            business_assignments=patched(doc.impact.business_assignments),
        ),
        adjustments=doc.adjustments + (adjustment,),
        revision=doc.revision + 1,
    )
    after = evaluate_document(derived, scheme)
    return derived, before, after


# ---------------------------------------------------------------------------
# Serialization.
# ---------------------------------------------------------------------------

def adjustment_from_payload(raw: Mapping) -> ControlAdjustment:
    try:
        overrides_raw = raw.get("overrides", {})
        overrides = []
        for factor_id, score in overrides_raw.items():
            if isinstance(score, bool) or not isinstance(score, int):
                raise DocumentError(
                    f"override for {factor_id!r} must be an integer 0..9"
                )
            overrides.append((str(factor_id), score))
        return ControlAdjustment(
            label=str(raw["label"]),
            overrides=tuple(overrides),
            note=str(raw.get("note", "")),
        )
    except KeyError as exc:
        raise DocumentError(f"adjustment missing key {exc.args[0]!r}") from None


def adjustment_to_payload(adj: ControlAdjustment) -> dict:
    return {
        "label": adj.label,
        "overrides": {factor_id: score for factor_id, score in adj.overrides},
        "note": adj.note,
    }


def _assignments_from(raw: object, locus: str) -> tuple[FactorAssignment, ...]:
    if raw is None:
        return ()
    if not isinstance(raw, list):
        raise DocumentError(f"{locus}: expected a list of assignments")
    try:
        return tuple(rating.assignment_from_payload(a) for a in raw)
    except rating.RatingError as exc:
        raise DocumentError(f"{locus}: {exc}") from None


def document_from_payload(payload: Mapping) -> AssessmentDocument:
    if not isinstance(payload, Mapping):
        raise DocumentError("assessment document must be a mapping")
    try:
        doc_id = str(payload["id"])
        threat = str(payload["threat"])
    except KeyError as exc:
        raise DocumentError(f"document missing key {exc.args[0]!r}") from None

    scenario = None
    if payload.get("scenario") is not None:
        raw = payload["scenario"]
        scenario = ScenarioAnalysis(
            threat_agent_description=str(raw.get("threat_agent_description", "")),
            method=str(raw.get("method", "")),
            assignments=_assignments_from(raw.get("assignments"), "scenario"),
        )

    dependencies = None
    if payload.get("dependencies") is not None:
        raw = payload["dependencies"]
        components = tuple(
            Component(name=str(c.get("name", "")), weakness_note=str(c.get("weakness_note", "")))
            for c in raw.get("components", [])
        )
        dependencies = DependencyMapping(
            components=components,
            assignments=_assignments_from(raw.get("assignments"), "dependencies"),
        )

    impact = None
    if payload.get("impact") is not None:
        raw = payload["impact"]
        impact = ImpactAnalysis(
            technical_assignments=_assignments_from(
                raw.get("technical_assignments"), "impact.technical"
            ),
            business_assignments=_assignments_from(
                raw.get("business_assignments"), "impact.business"
            ),
        )

    try:
        status = Status.from_text(payload.get("status", "identified"))
    except ValueError as exc:
        raise DocumentError(f"status: {exc}") from None

    stakeholder = None
    if payload.get("stakeholder") is not None:
        try:
            stakeholder = StakeholderGroup.from_text(payload["stakeholder"])
        except ValueError as exc:
            raise DocumentError(f"stakeholder: {exc}") from None

    revision = payload.get("revision", 1)
    if isinstance(revision, bool) or not isinstance(revision, int) or revision < 1:
        raise DocumentError(f"revision must be a positive integer, got {revision!r}")

    return AssessmentDocument(
        id=doc_id,
        threat=threat,
        system_context=str(payload.get("system_context", "")),
        stakeholder=stakeholder,
        scenario=scenario,
        dependencies=dependencies,
        impact=impact,
        status=status,
        scheme_ref=payload.get("scheme"),
        revision=revision,
        adjustments=tuple(
            adjustment_from_payload(a) for a in payload.get("adjustments", [])
        ),
        acceptance_note=payload.get("acceptance_note"),
        disposition=str(payload.get("disposition", "")),
        review_notes=tuple(str(n) for n in payload.get("review_notes", [])),
    )


def document_to_payload(doc: AssessmentDocument) -> dict:
    payload: dict = {
        "format_version": FORMAT_VERSION,
        "id": doc.id,
        "threat": doc.threat,
        "system_context": doc.system_context,
        "stakeholder": None if doc.stakeholder is None else doc.stakeholder.value,
        "status": doc.status.value,
        "scheme": doc.scheme_ref,
        "revision": doc.revision,
    }
    payload["scenario"] = (
        None
        if doc.scenario is None
        else {
            "threat_agent_description": doc.scenario.threat_agent_description,
            "method": doc.scenario.method,
            "assignments": [
                rating.assignment_to_payload(a) for a in doc.scenario.assignments
            ],
        }
    )
    payload["dependencies"] = (
        None
        if doc.dependencies is None
        else {
            "components": [
                {"name": c.name, "weakness_note": c.weakness_note}
                for c in doc.dependencies.components
            ],
            "assignments": [
                rating.assignment_to_payload(a) for a in doc.dependencies.assignments
            ],
        }
    )
    payload["impact"] = (
        None
        if doc.impact is None
        else {
            "technical_assignments": [
                rating.assignment_to_payload(a) for a in doc.impact.technical_assignments
            ],
            "business_assignments": [
                rating.assignment_to_payload(a) for a in doc.impact.business_assignments
            ],
        }
    )
    payload["adjustments"] = [adjustment_to_payload(a) for a in doc.adjustments]
    payload["acceptance_note"] = doc.acceptance_note
    payload["disposition"] = doc.disposition
    payload["review_notes"] = list(doc.review_notes)
    return payload


def load_document(path: str | Path) -> AssessmentDocument:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{path}: invalid JSON: {exc}") from None
    return document_from_payload(payload)


def dump_document(doc: AssessmentDocument) -> bytes:
    text = json.dumps(document_to_payload(doc), indent=2, ensure_ascii=False)
    return (text + "\n").encode("utf-8")


def fixture_documents() -> tuple[AssessmentDocument, ...]:
    """The two bundled worked-example assessments (university assistant)."""
    docs = []
    root = resources.files("llmrisk.data").joinpath("assessments")
    for entry in sorted(root.iterdir(), key=lambda e: e.name):
        if entry.name.endswith(".json"):
            docs.append(document_from_payload(json.loads(entry.read_text("utf-8"))))
    return tuple(docs)
