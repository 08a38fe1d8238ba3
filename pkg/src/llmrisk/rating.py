"""OWASP-style risk-rating calculus over a configurable factor scheme.

A rating scheme groups scoring factors into four categories: threat agent
and vulnerability factors drive likelihood; technical and business impact
factors drive impact. Every factor is scored on an integer 0-9 scale. Each
category aggregates to a weighted mean; likelihood averages the threat-agent
and vulnerability category means, final impact averages the technical and
business means (or takes business alone), and both aggregates are
classified Low/Medium/High against configurable thresholds. Overall
severity is a chart lookup over the two levels, never an arithmetic
product.

All arithmetic is exact: scores are `fractions.Fraction` values, so a
weighted mean like 54/8 is exactly 6.75 with no floating-point rounding.
Everything in this module is a pure function over immutable inputs.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .validation import ValidationReport

SCORE_MIN = 0
SCORE_MAX = 9

FORMAT_VERSION = 1


class FactorCategory(str, Enum):
    THREAT_AGENT = "threat_agent"
    VULNERABILITY = "vulnerability"
    TECHNICAL_IMPACT = "technical_impact"
    BUSINESS_IMPACT = "business_impact"


LIKELIHOOD_CATEGORIES = (FactorCategory.THREAT_AGENT, FactorCategory.VULNERABILITY)
IMPACT_CATEGORIES = (FactorCategory.TECHNICAL_IMPACT, FactorCategory.BUSINESS_IMPACT)


class Level(str, Enum):
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"

    @property
    def rank(self) -> int:
        return _LEVEL_RANK[self]

    @property
    def display(self) -> str:
        return self.value.capitalize()

    @classmethod
    def from_text(cls, text: str) -> "Level":
        return cls(text.strip().lower())


_LEVEL_RANK = {Level.LOW: 0, Level.MEDIUM: 1, Level.HIGH: 2}


class Severity(str, Enum):
    NOTE = "note"
    LOW = "low"
    MEDIUM = "medium"
    HIGH = "high"
    CRITICAL = "critical"

    @property
    def rank(self) -> int:
        return _SEVERITY_RANK[self]

    @property
    def display(self) -> str:
        return self.value.upper()

    @classmethod
    def from_text(cls, text: str) -> "Severity":
        return cls(text.strip().lower())


_SEVERITY_RANK = {
    Severity.NOTE: 0,
    Severity.LOW: 1,
    Severity.MEDIUM: 2,
    Severity.HIGH: 3,
    Severity.CRITICAL: 4,
}


class ImpactMode(str, Enum):
    MEAN_OF_CATEGORY_MEANS = "mean_of_category_means"
    BUSINESS_ONLY = "business_only"


class RatingError(ValueError):
    """Base class for rating-engine errors."""


class UnknownFactorError(RatingError):
    def __init__(self, factor_id: str):
        super().__init__(f"unknown factor: {factor_id!r}")
        self.factor_id = factor_id


class DuplicateAssignmentError(RatingError):
    def __init__(self, factor_id: str):
        super().__init__(f"factor assigned more than once: {factor_id!r}")
        self.factor_id = factor_id


class IncompleteAssignmentError(RatingError):
    """Raised when weighted factors are left unscored.

    Carries every missing factor id at once so callers can report the
    full gap in a single pass.
    """

    def __init__(self, missing: Sequence[str]):
        self.missing = tuple(missing)
        super().__init__(
            "missing factor assignments: " + ", ".join(self.missing)
        )


@dataclass(frozen=True)
class FactorDefinition:
    """One factor of the scheme with its anchor labels and weight.

    Anchors are advisory reference points on the 0-9 scale (value, label);
    any integer score in range is legal regardless of anchors.
    """

    id: str
    display_name: str
    category: FactorCategory
    anchors: tuple[tuple[int, str], ...] = ()
    weight: Fraction = Fraction(1)

    def anchor_label(self, score: int) -> str | None:
        for value, label in self.anchors:
            if value == score:
                return label
        return None


@dataclass(frozen=True)
class RatingScheme:
    """The full calculus as data: factors, thresholds, severity chart."""

    id: str
    factors: tuple[FactorDefinition, ...]
    likelihood_thresholds: tuple[Fraction, Fraction] = (Fraction(3), Fraction(6))
    impact_thresholds: tuple[Fraction, Fraction] = (Fraction(3), Fraction(6))
    severity_chart: Mapping[tuple[Level, Level], Severity] = field(default_factory=dict)
    impact_mode: ImpactMode = ImpactMode.MEAN_OF_CATEGORY_MEANS

    def factor(self, factor_id: str) -> FactorDefinition:
        for f in self.factors:
            if f.id == factor_id:
                return f
        raise UnknownFactorError(factor_id)

    def has_factor(self, factor_id: str) -> bool:
        return any(f.id == factor_id for f in self.factors)

    def factors_in(self, *categories: FactorCategory) -> tuple[FactorDefinition, ...]:
        wanted = set(categories)
        return tuple(f for f in self.factors if f.category in wanted)

    def weighted_ids(self, *categories: FactorCategory) -> tuple[str, ...]:
        return tuple(f.id for f in self.factors_in(*categories) if f.weight > 0)


@dataclass(frozen=True)
class FactorAssignment:
    """A score for one factor, with the analyst's rationale."""

    factor_id: str
    score: int
    anchor_label: str | None = None
    rationale: str = ""

    def __post_init__(self) -> None:
        if not isinstance(self.score, int) or isinstance(self.score, bool):
            raise RatingError(f"score for {self.factor_id!r} must be an integer")
        if not SCORE_MIN <= self.score <= SCORE_MAX:
            raise RatingError(
                f"score for {self.factor_id!r} out of range: {self.score} "
                f"(expected {SCORE_MIN}..{SCORE_MAX})"
            )


@dataclass(frozen=True)
class RiskRating:
    """Computed scores, levels, and overall severity for one assessment."""

    likelihood_score: Fraction
    technical_impact_score: Fraction
    business_impact_score: Fraction
    final_impact_score: Fraction
    likelihood_level: Level
    impact_level: Level
    severity: Severity


# ---------------------------------------------------------------------------
# Score text: exact decimals where they terminate, p/q otherwise.
# ---------------------------------------------------------------------------

def format_score(value: Fraction | int) -> str:
    """Render an exact score as its shortest decimal (6.75, not 6.750).

    Fractions without a terminating decimal expansion are rendered as
    `p/q` so the text still parses back to the exact value.
    """
    value = Fraction(value)
    den = value.denominator
    for p in (2, 5):
        while den % p == 0:
            den //= p
    if den != 1:
        return f"{value.numerator}/{value.denominator}"
    digits = 0
    scaled = value
    while scaled.denominator != 1:
        scaled *= 10
        digits += 1
    text = str(scaled.numerator)
    if digits == 0:
        return text
    sign = "-" if text.startswith("-") else ""
    text = text.lstrip("-").rjust(digits + 1, "0")
    return f"{sign}{text[:-digits]}.{text[-digits:]}"


def parse_score(text: str | int | float) -> Fraction:
    """Parse a score rendered by :func:`format_score` back to a Fraction."""
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if isinstance(text, float):
        raise RatingError(f"refusing inexact float score: {text!r}")
    try:
        return Fraction(str(text))
    except (ValueError, ZeroDivisionError) as exc:
        raise RatingError(f"unparseable score: {text!r}") from exc


# ---------------------------------------------------------------------------
# The calculus.
# ---------------------------------------------------------------------------

def _index_assignments(
    assignments: Iterable[FactorAssignment],
) -> dict[str, FactorAssignment]:
    indexed: dict[str, FactorAssignment] = {}
    for a in assignments:
        if a.factor_id in indexed:
            raise DuplicateAssignmentError(a.factor_id)
        indexed[a.factor_id] = a
    return indexed


def _weighted_mean(
    indexed: Mapping[str, FactorAssignment],
    factors: Sequence[FactorDefinition],
) -> tuple[Fraction, list[str]]:
    total = Fraction(0)
    weight_sum = Fraction(0)
    missing: list[str] = []
    for f in factors:
        if f.weight == 0:
            continue
        a = indexed.get(f.id)
        if a is None:
            missing.append(f.id)
            continue
        total += f.weight * a.score
        weight_sum += f.weight
    if missing:
        return Fraction(0), missing
    return total / weight_sum, missing


def category_score(
    assignments: Iterable[FactorAssignment],
    scheme: RatingScheme,
    category: FactorCategory,
) -> Fraction:
    """Weighted mean of the assigned scores over one factor category."""
    indexed = _index_assignments(assignments)
    score, missing = _weighted_mean(indexed, scheme.factors_in(category))
    if missing:
        raise IncompleteAssignmentError(missing)
    return score


def likelihood_score(
    assignments: Iterable[FactorAssignment], scheme: RatingScheme
) -> Fraction:
    """Mean of the threat-agent and vulnerability category means.

    Weights act within their category only, so rescaling one category's
    weights by a constant never shifts the balance between the two groups.
    With equal weights over the standard four-plus-four factors this equals
    the plain mean of the eight scores (54/8 = 6.75 exactly).
    """
    indexed = _index_assignments(assignments)
    agent, missing_a = _weighted_mean(
        indexed, scheme.factors_in(FactorCategory.THREAT_AGENT)
    )
    vuln, missing_v = _weighted_mean(
        indexed, scheme.factors_in(FactorCategory.VULNERABILITY)
    )
    missing = missing_a + missing_v
    if missing:
        raise IncompleteAssignmentError(missing)
    return (agent + vuln) / 2


def impact_scores(
    assignments: Iterable[FactorAssignment], scheme: RatingScheme
) -> tuple[Fraction, Fraction, Fraction]:
    """Return (technical, business, final) impact scores.

    The final score is the mean of the two category means, or just the
    business score under ``impact_mode = business_only``.
    """
    indexed = _index_assignments(assignments)
    technical, missing_t = _weighted_mean(
        indexed, scheme.factors_in(FactorCategory.TECHNICAL_IMPACT)
    )
    business, missing_b = _weighted_mean(
        indexed, scheme.factors_in(FactorCategory.BUSINESS_IMPACT)
    )
    missing = missing_t + missing_b
    if missing:
        raise IncompleteAssignmentError(missing)
    if scheme.impact_mode is ImpactMode.BUSINESS_ONLY:
        final = business
    else:
        final = (technical + business) / 2
    return technical, business, final


def classify(
    score: Fraction | int, thresholds: tuple[Fraction, Fraction] = (Fraction(3), Fraction(6))
) -> Level:
    """Classify a 0-9 score as Low / Medium / High.

    Half-open intervals: LOW is [0, t1), MEDIUM is [t1, t2), HIGH is [t2, 9].
    """
    score = Fraction(score)
    if not SCORE_MIN <= score <= SCORE_MAX:
        raise RatingError(f"score out of domain [0, 9]: {format_score(score)}")
    t1, t2 = thresholds
    if score < t1:
        return Level.LOW
    if score < t2:
        return Level.MEDIUM
    return Level.HIGH


def severity(
    likelihood_level: Level,
    impact_level: Level,
    chart: Mapping[tuple[Level, Level], Severity],
) -> Severity:
    """Total chart lookup over (likelihood level, impact level)."""
    return chart[(likelihood_level, impact_level)]


def evaluate(
    assignments: Iterable[FactorAssignment], scheme: RatingScheme
) -> RiskRating:
    """Full rating: scores, level classification, and severity lookup.

    Raises :class:`IncompleteAssignmentError` listing every missing weighted
    factor at once, and :class:`UnknownFactorError` for an assignment that
    does not resolve in the scheme.
    """
    indexed = _index_assignments(assignments)
    for factor_id in indexed:
        if not scheme.has_factor(factor_id):
            raise UnknownFactorError(factor_id)
    missing = [
        factor_id
        for factor_id in scheme.weighted_ids(*LIKELIHOOD_CATEGORIES, *IMPACT_CATEGORIES)
        if factor_id not in indexed
    ]
    if missing:
        raise IncompleteAssignmentError(missing)

    values = indexed.values()
    lk = likelihood_score(values, scheme)
    technical, business, final = impact_scores(values, scheme)
    lk_level = classify(lk, scheme.likelihood_thresholds)
    im_level = classify(final, scheme.impact_thresholds)
    return RiskRating(
        likelihood_score=lk,
        technical_impact_score=technical,
        business_impact_score=business,
        final_impact_score=final,
        likelihood_level=lk_level,
        impact_level=im_level,
        severity=severity(lk_level, im_level, scheme.severity_chart),
    )


# ---------------------------------------------------------------------------
# Scheme validation.
# ---------------------------------------------------------------------------

def validate_scheme(scheme: RatingScheme) -> ValidationReport:
    """Check every scheme invariant; chart non-monotonicity is a warning."""
    report = ValidationReport()

    seen: set[str] = set()
    for f in scheme.factors:
        if f.id in seen:
            report.error("duplicate_factor_id", f"duplicate factor id {f.id!r}", f.id)
        seen.add(f.id)
        if not f.id:
            report.error("empty_factor_id", "factor id must be non-empty", f.id)
        if f.weight < 0:
            report.error("negative_weight", f"weight must be >= 0, got {f.weight}", f.id)
        previous = None
        for value, _label in f.anchors:
            if not SCORE_MIN <= value <= SCORE_MAX:
                report.error(
                    "anchor_out_of_range", f"anchor value {value} outside 0..9", f.id
                )
            if previous is not None and value <= previous:
                report.error(
                    "anchors_not_increasing",
                    f"anchor values must be strictly increasing (got {previous} then {value})",
                    f.id,
                )
            previous = value

    for category in FactorCategory:
        members = scheme.factors_in(category)
        if not any(f.weight > 0 for f in members):
            report.error(
                "category_without_weight",
                f"no factor in category {category.value!r} has weight > 0",
                category.value,
            )

    for name, (t1, t2) in (
        ("likelihood_thresholds", scheme.likelihood_thresholds),
        ("impact_thresholds", scheme.impact_thresholds),
    ):
        if not (t1 < t2):
            report.error("thresholds_not_ascending", f"{name} not ascending: {t1}, {t2}", name)
        if not (0 < t1 and t2 <= SCORE_MAX):
            report.error(
                "threshold_out_of_range",
                f"{name} must satisfy 0 < t1 < t2 <= 9, got {t1}, {t2}",
                name,
            )

    for lk in Level:
        for im in Level:
            if (lk, im) not in scheme.severity_chart:
                report.error(
                    "missing_chart_cell",
                    f"severity chart has no cell for ({lk.value}, {im.value})",
                    f"{lk.value}x{im.value}",
                )

    if report.ok and not _chart_is_monotone(scheme.severity_chart):
        report.warn(
            "non_monotone_severity_chart",
            "raising likelihood or impact lowers severity somewhere in the chart",
        )
    return report


def _chart_is_monotone(chart: Mapping[tuple[Level, Level], Severity]) -> bool:
    levels = list(Level)
    for lk in levels:
        for im in levels:
            here = chart[(lk, im)].rank
            for lk2 in levels:
                for im2 in levels:
                    if lk2.rank >= lk.rank and im2.rank >= im.rank:
                        if chart[(lk2, im2)].rank < here:
                            return False
    return True


# ---------------------------------------------------------------------------
# Serialization: scheme files and rating payloads.
# ---------------------------------------------------------------------------

class SchemeLoadError(ValueError):
    """Raised when a scheme file is structurally malformed or invalid."""


def _weight_from(raw: object, locus: str) -> Fraction:
    if isinstance(raw, bool):
        raise SchemeLoadError(f"{locus}: weight must be a number, got boolean")
    if isinstance(raw, int):
        return Fraction(raw)
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError) as exc:
            raise SchemeLoadError(f"{locus}: unparseable weight {raw!r}") from exc
    raise SchemeLoadError(f"{locus}: weight must be an integer or 'p/q' string")


def _weight_to(weight: Fraction) -> int | str:
    if weight.denominator == 1:
        return int(weight)
    return str(weight)


def scheme_from_payload(payload: Mapping) -> RatingScheme:
    if not isinstance(payload, Mapping):
        raise SchemeLoadError("scheme document must be a mapping")
    try:
        factors_raw = payload["factors"]
        chart_raw = payload["severity_chart"]
    except KeyError as exc:
        raise SchemeLoadError(f"scheme document missing key {exc.args[0]!r}") from exc

    factors = []
    for i, raw in enumerate(factors_raw):
        locus = f"factors[{i}]"
        try:
            anchors = tuple((int(v), str(label)) for v, label in raw.get("anchors", []))
            factors.append(
                FactorDefinition(
                    id=str(raw["id"]),
                    display_name=str(raw.get("display_name", raw["id"])),
                    category=FactorCategory(raw["category"]),
                    anchors=anchors,
                    weight=_weight_from(raw.get("weight", 1), locus),
                )
            )
        except SchemeLoadError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemeLoadError(f"{locus}: {exc}") from exc

    chart: dict[tuple[Level, Level], Severity] = {}
    try:
        for lk_text, row in chart_raw.items():
            for im_text, sev_text in row.items():
                chart[(Level.from_text(lk_text), Level.from_text(im_text))] = (
                    Severity.from_text(sev_text)
                )
    except (AttributeError, TypeError, ValueError) as exc:
        raise SchemeLoadError(f"severity_chart: {exc}") from exc

    def thresholds_from(key: str) -> tuple[Fraction, Fraction]:
        raw = payload.get(key, [3, 6])
        try:
            t1, t2 = raw
            return parse_score(t1), parse_score(t2)
        except (TypeError, ValueError, RatingError) as exc:
            raise SchemeLoadError(f"{key}: {exc}") from exc

    try:
        impact_mode = ImpactMode(payload.get("impact_mode", "mean_of_category_means"))
    except ValueError as exc:
        raise SchemeLoadError(f"impact_mode: {exc}") from exc

    return RatingScheme(
        id=str(payload.get("id", "custom")),
        factors=tuple(factors),
        likelihood_thresholds=thresholds_from("likelihood_thresholds"),
        impact_thresholds=thresholds_from("impact_thresholds"),
        severity_chart=chart,
        impact_mode=impact_mode,
    )


def scheme_to_payload(scheme: RatingScheme) -> dict:
    chart: dict[str, dict[str, str]] = {}
    for lk in Level:
        chart[lk.value] = {
            im.value: scheme.severity_chart[(lk, im)].value for im in Level
        }
    return {
        "format_version": FORMAT_VERSION,
        "id": scheme.id,
        "impact_mode": scheme.impact_mode.value,
        "likelihood_thresholds": [format_score(t) for t in scheme.likelihood_thresholds],
        "impact_thresholds": [format_score(t) for t in scheme.impact_thresholds],
        "severity_chart": chart,
        "factors": [
            {
                "id": f.id,
                "display_name": f.display_name,
                "category": f.category.value,
                "weight": _weight_to(f.weight),
                "anchors": [[v, label] for v, label in f.anchors],
            }
            for f in scheme.factors
        ],
    }


def load_scheme(path: str | Path | None = None, *, check: bool = True) -> RatingScheme:
    """Load a scheme file, or the bundled default when no path is given."""
    if path is None:
        return default_scheme()
    with open(path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise SchemeLoadError(f"{path}: invalid JSON: {exc}") from exc
    scheme = scheme_from_payload(payload)
    if check:
        report = validate_scheme(scheme)
        if not report.ok:
            raise SchemeLoadError(
                f"{path}: " + "; ".join(str(issue) for issue in report.errors)
            )
    return scheme


_DEFAULT_SCHEME: RatingScheme | None = None


def default_scheme() -> RatingScheme:
    """The bundled scheme: sixteen standard factors, OWASP charts, weights 1."""
    global _DEFAULT_SCHEME
    if _DEFAULT_SCHEME is None:
        text = (
            resources.files("llmrisk.data").joinpath("scheme_default.json").read_text("utf-8")
        )
        _DEFAULT_SCHEME = scheme_from_payload(json.loads(text))
    return _DEFAULT_SCHEME


def assignment_from_payload(raw: Mapping) -> FactorAssignment:
    try:
        score = raw["score"]
        if isinstance(score, bool) or not isinstance(score, int):
            raise RatingError(
                f"score for {raw.get('factor_id')!r} must be an integer 0..9"
            )
        return FactorAssignment(
            factor_id=str(raw["factor_id"]),
            score=score,
            anchor_label=raw.get("anchor_label"),
            rationale=str(raw.get("rationale", "")),
        )
    except KeyError as exc:
        raise RatingError(f"assignment missing key {exc.args[0]!r}") from exc


def assignment_to_payload(a: FactorAssignment) -> dict:
    return {
        "factor_id": a.factor_id,
        "score": a.score,
        "anchor_label": a.anchor_label,
        "rationale": a.rationale,
    }


def rating_to_payload(rating: RiskRating) -> dict:
    """Rating payload with exact score strings and table-style level casing."""
    return {
        "likelihood_score": format_score(rating.likelihood_score),
        "likelihood_level": rating.likelihood_level.display,
        "technical_impact_score": format_score(rating.technical_impact_score),
        "business_impact_score": format_score(rating.business_impact_score),
        "final_impact_score": format_score(rating.final_impact_score),
        "impact_level": rating.impact_level.display,
        "severity": rating.severity.display,
    }


def rating_from_payload(raw: Mapping) -> RiskRating:
    try:
        return RiskRating(
            likelihood_score=parse_score(raw["likelihood_score"]),
            technical_impact_score=parse_score(raw["technical_impact_score"]),
            business_impact_score=parse_score(raw["business_impact_score"]),
            final_impact_score=parse_score(raw["final_impact_score"]),
            likelihood_level=Level.from_text(raw["likelihood_level"]),
            impact_level=Level.from_text(raw["impact_level"]),
            severity=Severity.from_text(raw["severity"]),
        )
    except KeyError as exc:
        raise RatingError(f"rating payload missing key {exc.args[0]!r}") from exc
