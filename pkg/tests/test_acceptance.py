"""Acceptance suite: one test per criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -q -s`` to see the lines.
"""

from __future__ import annotations

import json
import random
import threading
import time
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction
from pathlib import Path

import pytest

from llmrisk import matrix as matrix_mod, rating
from llmrisk.assessment import (
    ControlAdjustment,
    GuardError,
    SequencingError,
    Status,
    advance_status,
    apply_adjustment,
)
from llmrisk.catalog import StakeholderGroup, filter_by_stakeholder, filter_traditional
from llmrisk.rating import Level, Severity
from llmrisk.store import DocumentStore, VersionConflictError

from conftest import DATA_POISONING_SCORES, PROMPT_INJECTION_SCORES, make_assignments
from oracle import ALL_FACTORS, oracle_evaluate

GOLDEN = Path(__file__).parent / "golden" / "matrix_usecase.csv"

CASES = 10_000


@contextmanager
def criterion(name: str):
    started = time.monotonic()
    try:
        yield
    except BaseException:
        print(f"ACCEPTANCE FAIL: {name}", flush=True)
        raise
    elapsed = time.monotonic() - started
    print(f"ACCEPTANCE PASS: {name} ({elapsed:.2f}s)", flush=True)


def test_worked_example_ratings(scheme):
    """Both worked-example ratings, exact rationals, zero tolerance, <1s."""
    with criterion("Worked-example ratings reproduced (exact rationals, <1s)"):
        started = time.monotonic()

        pi = rating.evaluate(make_assignments(PROMPT_INJECTION_SCORES), scheme)
        assert pi.likelihood_score == Fraction(54, 8)
        assert pi.likelihood_level is Level.HIGH
        assert pi.technical_impact_score == Fraction(3)
        assert pi.business_impact_score == Fraction(6)
        assert pi.final_impact_score == Fraction(9, 2)
        assert pi.impact_level is Level.MEDIUM
        assert pi.severity is Severity.HIGH

        dp = rating.evaluate(make_assignments(DATA_POISONING_SCORES), scheme)
        assert dp.likelihood_score == Fraction(34, 8)
        assert dp.likelihood_level is Level.MEDIUM
        assert dp.technical_impact_score == Fraction(4)
        assert dp.business_impact_score == Fraction(7)
        assert dp.final_impact_score == Fraction(11, 2)
        assert dp.impact_level is Level.MEDIUM
        assert dp.severity is Severity.MEDIUM

        assert time.monotonic() - started < 1.0


def test_usecase_matrix_golden(top10, fixture_docs, scheme):
    """Matrix from the two fixtures; csv render byte-equals the golden file."""
    with criterion("Use-case matrix golden (byte-exact csv)"):
        matrix = matrix_mod.build_matrix(top10, list(fixture_docs.values()), scheme)
        by_id = {row.threat.id: row for row in matrix.rows}
        assert (
            by_id["LLM01"].rating.likelihood_level.display,
            by_id["LLM01"].rating.impact_level.display,
            by_id["LLM01"].rating.severity.display,
        ) == ("High", "Medium", "HIGH")
        assert (
            by_id["LLM03"].rating.likelihood_level.display,
            by_id["LLM03"].rating.impact_level.display,
            by_id["LLM03"].rating.severity.display,
        ) == ("Medium", "Medium", "MEDIUM")
        assert sum(1 for row in matrix.rows if row.rating is None) == 8
        assert matrix_mod.render(matrix, "csv") == GOLDEN.read_bytes()


def test_catalog_suite(top10):
    """Catalog size, stakeholder filter sizes, traditional flags."""
    with criterion("Threat catalog suite (10 entries, 9/7/7 filters, 3 traditional)"):
        assert len(top10.entries) == 10
        assert len(filter_by_stakeholder(top10, StakeholderGroup.FINE_TUNING_DEVELOPER)) == 9
        assert len(filter_by_stakeholder(top10, StakeholderGroup.API_INTEGRATION_DEVELOPER)) == 7
        assert len(filter_by_stakeholder(top10, StakeholderGroup.END_USER)) == 7
        assert len(filter_traditional(top10, True)) == 3
        overreliance = top10.resolve("Overreliance")
        assert overreliance.stakeholders == frozenset({StakeholderGroup.END_USER})


# ---------------------------------------------------------------------------
# Property suite: >= 10,000 randomized cases per property, under 60s total.
# ---------------------------------------------------------------------------

def _random_scores(rng: random.Random) -> dict[str, int]:
    return {fid: rng.randint(0, 9) for fid in ALL_FACTORS}


def _weighted(scheme, rng: random.Random):
    """Scheme with random non-negative integer weights, >=1 per category."""
    weights = {f.id: Fraction(rng.randint(0, 4)) for f in scheme.factors}
    for category in rating.FactorCategory:
        members = [f.id for f in scheme.factors_in(category)]
        if all(weights[m] == 0 for m in members):
            weights[rng.choice(members)] = Fraction(rng.randint(1, 4))
    factors = tuple(replace(f, weight=weights[f.id]) for f in scheme.factors)
    return replace(scheme, factors=factors)


def test_property_suite(scheme, prompt_injection):
    suite_started = time.monotonic()

    with criterion(f"Property: boundedness ({CASES} cases)"):
        rng = random.Random(0xB0)
        for i in range(CASES):
            active = _weighted(scheme, rng) if i % 2 else scheme
            got = rating.evaluate(make_assignments(_random_scores(rng)), active)
            assert 0 <= got.likelihood_score <= 9
            assert 0 <= got.technical_impact_score <= 9
            assert 0 <= got.business_impact_score <= 9
            assert 0 <= got.final_impact_score <= 9

    with criterion(f"Property: single-factor monotonicity ({CASES} cases)"):
        rng = random.Random(0x0707)
        for _ in range(CASES):
            scores = _random_scores(rng)
            factor = rng.choice(ALL_FACTORS)
            raised = dict(scores)
            raised[factor] = rng.randint(scores[factor], 9)
            before = rating.evaluate(make_assignments(scores), scheme)
            after = rating.evaluate(make_assignments(raised), scheme)
            assert after.likelihood_score >= before.likelihood_score
            assert after.final_impact_score >= before.final_impact_score
            assert after.likelihood_level.rank >= before.likelihood_level.rank
            assert after.impact_level.rank >= before.impact_level.rank
            assert after.severity.rank >= before.severity.rank

    with criterion(f"Property: weight-scaling invariance ({CASES} cases)"):
        rng = random.Random(0x5CA1E)
        categories = list(rating.FactorCategory)
        for _ in range(CASES):
            scores = _random_scores(rng)
            category = rng.choice(categories)
            scale = Fraction(rng.randint(1, 12), rng.randint(1, 12))
            scaled_factors = tuple(
                replace(f, weight=f.weight * scale) if f.category is category else f
                for f in scheme.factors
            )
            scaled = replace(scheme, factors=scaled_factors)
            base = rating.evaluate(make_assignments(scores), scheme)
            got = rating.evaluate(make_assignments(scores), scaled)
            assert got == base

    with criterion(f"Property: equal-weight mean reduction ({CASES} cases)"):
        rng = random.Random(0xE0)
        likelihood_ids = ALL_FACTORS[:8]
        technical_ids = ALL_FACTORS[8:12]
        business_ids = ALL_FACTORS[12:]
        for _ in range(CASES):
            scores = _random_scores(rng)
            w = Fraction(rng.randint(1, 6))
            uniform = replace(
                scheme, factors=tuple(replace(f, weight=w) for f in scheme.factors)
            )
            got = rating.evaluate(make_assignments(scores), uniform)
            assert got.likelihood_score == Fraction(
                sum(scores[f] for f in likelihood_ids), 8
            )
            assert got.technical_impact_score == Fraction(
                sum(scores[f] for f in technical_ids), 4
            )
            assert got.business_impact_score == Fraction(
                sum(scores[f] for f in business_ids), 4
            )
        # the worked example, exactly: 54/8 = 6.75 with no floating error
        assert rating.likelihood_score(
            make_assignments(PROMPT_INJECTION_SCORES), scheme
        ) == Fraction(54, 8)
        assert rating.format_score(Fraction(54, 8)) == "6.75"

    with criterion(f"Property: impact separation under what-if ({CASES} cases)"):
        rng = random.Random(0x1A9)
        likelihood_ids = ALL_FACTORS[:8]
        for _ in range(CASES):
            chosen = rng.sample(likelihood_ids, rng.randint(1, 8))
            adjustment = ControlAdjustment(
                label="mitigation",
                overrides=tuple((fid, rng.randint(0, 9)) for fid in chosen),
            )
            _derived, before, after = apply_adjustment(
                prompt_injection, adjustment, scheme
            )
            assert after.technical_impact_score == before.technical_impact_score
            assert after.business_impact_score == before.business_impact_score
            assert after.final_impact_score == before.final_impact_score

    with criterion(f"Property: oracle equivalence on {{0,3,6,9}}^16 ({CASES} cases)"):
        rng = random.Random(0x0AC1E)
        grid = (0, 3, 6, 9)
        for _ in range(CASES):
            scores = {fid: rng.choice(grid) for fid in ALL_FACTORS}
            got = rating.evaluate(make_assignments(scores), scheme)
            want = oracle_evaluate(scores)
            assert got.likelihood_score == want["likelihood"]
            assert got.technical_impact_score == want["technical"]
            assert got.business_impact_score == want["business"]
            assert got.final_impact_score == want["final"]
            assert got.likelihood_level.display == want["likelihood_level"]
            assert got.impact_level.display == want["impact_level"]
            assert got.severity.display == want["severity"]

    elapsed = time.monotonic() - suite_started
    print(f"property suite total: {elapsed:.1f}s", flush=True)
    assert elapsed < 60.0


def test_lifecycle_suite(prompt_injection, scheme):
    """Only the five-state chain is reachable; every guard violation rejected."""
    with criterion("Lifecycle suite (exhaustive transitions and guards)"):
        ready = replace(
            prompt_injection,
            adjustments=(ControlAdjustment(label="filter hardening"),),
        )
        for start in Status:
            doc = replace(ready, status=start)
            for target in Status:
                if target.rank == start.rank + 1:
                    assert advance_status(doc, target, scheme).status is target
                else:
                    with pytest.raises((SequencingError, GuardError)):
                        advance_status(doc, target, scheme)

        # Guard violations, one per guarded state.
        no_sections = replace(ready, status=Status.IDENTIFIED, impact=None)
        with pytest.raises(GuardError):
            advance_status(no_sections, Status.ANALYZED, scheme)

        missing_factor = replace(
            ready,
            status=Status.ANALYZED,
            scenario=replace(
                ready.scenario, assignments=ready.scenario.assignments[:-1]
            ),
        )
        with pytest.raises(GuardError):
            advance_status(missing_factor, Status.EVALUATED, scheme)

        untreated = replace(
            ready, status=Status.EVALUATED, adjustments=(), acceptance_note=None
        )
        with pytest.raises(GuardError):
            advance_status(untreated, Status.TREATED, scheme)

        # Acceptance note is an alternative treatment record.
        accepted = replace(untreated, acceptance_note="Risk accepted this term.")
        assert advance_status(accepted, Status.TREATED, scheme).status is Status.TREATED


def test_persistence_and_api_suite(tmp_path, fixture_docs, scheme, monkeypatch):
    """Store round-trip, linearized concurrent puts, crash safety, HTTP evaluate."""
    with criterion("Persistence: put/get round-trip equality"):
        store = DocumentStore(tmp_path / "docs")
        doc = fixture_docs["uva-prompt-injection"]
        revision = store.put(doc)
        assert store.get(doc.id) == replace(doc, revision=revision)

    with criterion("Persistence: concurrent-put linearization"):
        outcomes: list[object] = [None, None]
        barrier = threading.Barrier(2)

        def attempt(i: int) -> None:
            barrier.wait()
            try:
                outcomes[i] = store.put(doc, expected_revision=1)
            except VersionConflictError as exc:
                outcomes[i] = exc

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sum(1 for o in outcomes if o == 2) == 1
        assert sum(1 for o in outcomes if isinstance(o, VersionConflictError)) == 1

    with criterion("Persistence: crash-injected write leaves old-or-new file"):
        from llmrisk.store import StoreError

        path = store.root / f"{doc.id}.json"
        before_bytes = path.read_bytes()

        def explode(src, dst):
            raise OSError("simulated crash")

        monkeypatch.setattr("llmrisk.store.os.replace", explode)
        with pytest.raises(StoreError):
            store.put(replace(doc, disposition="mitigate"))
        monkeypatch.undo()

        after_bytes = path.read_bytes()
        assert after_bytes == before_bytes
        json.loads(after_bytes)  # parseable old version
        next_revision = store.put(replace(doc, disposition="mitigate"))
        json.loads(path.read_bytes())  # parseable new version
        assert store.get(doc.id).revision == next_revision

    with criterion("API: POST /evaluate returns the worked-example rating over HTTP"):
        import httpx
        import uvicorn

        from llmrisk.service import create_app

        app = create_app(store=DocumentStore(tmp_path / "api_docs"))
        config = uvicorn.Config(app, host="127.0.0.1", port=0, log_level="error")
        server = uvicorn.Server(config)
        thread = threading.Thread(target=server.run, daemon=True)
        thread.start()
        deadline = time.monotonic() + 10
        while not server.started:
            if time.monotonic() > deadline:
                raise RuntimeError("server did not start")
            time.sleep(0.01)
        port = server.servers[0].sockets[0].getsockname()[1]
        try:
            payload = {
                "assignments": [
                    {"factor_id": fid, "score": s}
                    for fid, s in PROMPT_INJECTION_SCORES.items()
                ]
            }
            response = httpx.post(
                f"http://127.0.0.1:{port}/evaluate", json=payload, timeout=10
            )
            assert response.status_code == 200
            body = response.json()
            assert body["likelihood_score"] == "6.75"
            assert body["likelihood_level"] == "High"
            assert body["final_impact_score"] == "4.5"
            assert body["impact_level"] == "Medium"
            assert body["severity"] == "HIGH"
        finally:
            server.should_exit = True
            thread.join(timeout=10)
