"""Risk-assessment toolkit for LLM-integrated systems.

Scenario analysis, dependency mapping, and impact analysis over a
configurable 0-9 factor scheme; a bundled catalog of the OWASP Top 10 for
LLM threats with stakeholder mapping; threat-matrix generation; what-if
mitigation analysis; and a file-backed store with an HTTP API and CLI.
"""

from .assessment import (
    AssessmentDocument,
    ControlAdjustment,
    DependencyMapping,
    GuardError,
    ImpactAnalysis,
    ScenarioAnalysis,
    SequencingError,
    Status,
    advance_status,
    apply_adjustment,
    evaluate_document,
    fixture_documents,
    load_document,
    validate_document,
)
from .catalog import (
    Catalog,
    CatalogError,
    StakeholderGroup,
    ThreatEntry,
    bundled_catalog,
    filter_by_stakeholder,
    filter_traditional,
    load_catalog,
)
from .matrix import ThreatMatrix, build_matrix, render
from .rating import (
    FactorAssignment,
    FactorCategory,
    FactorDefinition,
    ImpactMode,
    IncompleteAssignmentError,
    Level,
    RatingScheme,
    RiskRating,
    Severity,
    category_score,
    classify,
    default_scheme,
    evaluate,
    format_score,
    impact_scores,
    likelihood_score,
    load_scheme,
    validate_scheme,
)
from .store import DocumentStore, NotFoundError, VersionConflictError

__version__ = "0.1.0"

__all__ = [
    "AssessmentDocument",
    "Catalog",
    "CatalogError",
    "ControlAdjustment",
    "DependencyMapping",
    "DocumentStore",
    "FactorAssignment",
    "FactorCategory",
    "FactorDefinition",
    "GuardError",
    "ImpactAnalysis",
    "ImpactMode",
    "IncompleteAssignmentError",
    "Level",
    "NotFoundError",
    "RatingScheme",
    "RiskRating",
    "ScenarioAnalysis",
    "SequencingError",
    "Severity",
    "StakeholderGroup",
    "Status",
    "ThreatEntry",
    "ThreatMatrix",
    "VersionConflictError",
    "advance_status",
    "apply_adjustment",
    "build_matrix",
    "bundled_catalog",
    "category_score",
    "classify",
    "default_scheme",
    "evaluate",
    "evaluate_document",
    "filter_by_stakeholder",
    "filter_traditional",
    "fixture_documents",
    "format_score",
    "impact_scores",
    "likelihood_score",
    "load_catalog",
    "load_document",
    "load_scheme",
    "render",
    "validate_document",
    "validate_scheme",
]
