from __future__ import annotations

import pytest

from llmrisk import assessment, catalog, rating


@pytest.fixture(scope="session")
def scheme():
    return rating.default_scheme()


@pytest.fixture(scope="session")
def top10():
    return catalog.bundled_catalog()


@pytest.fixture(scope="session")
def fixture_docs():
    docs = assessment.fixture_documents()
    by_id = {d.id: d for d in docs}
    return by_id


@pytest.fixture(scope="session")
def prompt_injection(fixture_docs):
    return fixture_docs["uva-prompt-injection"]


@pytest.fixture(scope="session")
def data_poisoning(fixture_docs):
    return fixture_docs["uva-training-data-poisoning"]


def make_assignments(scores: dict[str, int]) -> list[rating.FactorAssignment]:
    return [
        rating.FactorAssignment(factor_id=fid, score=s) for fid, s in scores.items()
    ]


# The two worked-example score sets, keyed by factor id.
PROMPT_INJECTION_SCORES = {
    "skill_level": 6,
    "motive": 4,
    "opportunity": 7,
    "size": 6,
    "ease_of_discovery": 9,
    "ease_of_exploit": 5,
    "awareness": 9,
    "intrusion_detection": 8,
    "loss_of_confidentiality": 5,
    "loss_of_integrity": 0,
    "loss_of_availability": 0,
    "loss_of_accountability": 7,
    "financial_damage": 7,
    "reputation_damage": 5,
    "non_compliance": 5,
    "privacy_violation": 7,
}

DATA_POISONING_SCORES = {
    "skill_level": 6,
    "motive": 4,
    "opportunity": 0,
    "size": 9,
    "ease_of_discovery": 3,
    "ease_of_exploit": 3,
    "awareness": 1,
    "intrusion_detection": 8,
    "loss_of_confidentiality": 0,
    "loss_of_integrity": 7,
    "loss_of_availability": 0,
    "loss_of_accountability": 9,
    "financial_damage": 7,
    "reputation_damage": 9,
    "non_compliance": 5,
    "privacy_violation": 7,
}
