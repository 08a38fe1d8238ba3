from __future__ import annotations

import json
import os
import threading
from dataclasses import replace

import pytest

from llmrisk.store import (
    DocumentStore,
    NotFoundError,
    StoreError,
    VersionConflictError,
)


@pytest.fixture()
def store(tmp_path):
    return DocumentStore(tmp_path / "docs")


class TestPutGet:
    def test_first_put_is_revision_one(self, store, prompt_injection):
        assert store.put(prompt_injection) == 1

    def test_round_trip_equality(self, store, prompt_injection):
        revision = store.put(prompt_injection)
        loaded = store.get(prompt_injection.id)
        assert loaded == replace(prompt_injection, revision=revision)

    def test_revision_increments(self, store, prompt_injection):
        assert store.put(prompt_injection) == 1
        assert store.put(prompt_injection) == 2
        assert store.get(prompt_injection.id).revision == 2

    def test_expected_revision_mismatch(self, store, prompt_injection):
        store.put(prompt_injection)
        store.put(prompt_injection)  # revision 2
        with pytest.raises(VersionConflictError) as exc:
            store.put(prompt_injection, expected_revision=1)
        assert exc.value.expected == 1
        assert exc.value.actual == 2

    def test_create_only_with_expected_zero(self, store, prompt_injection):
        assert store.put(prompt_injection, expected_revision=0) == 1
        with pytest.raises(VersionConflictError):
            store.put(prompt_injection, expected_revision=0)

    def test_get_unknown(self, store):
        with pytest.raises(NotFoundError):
            store.get("nope")

    def test_delete_then_get(self, store, prompt_injection):
        store.put(prompt_injection)
        store.delete(prompt_injection.id)
        with pytest.raises(NotFoundError):
            store.get(prompt_injection.id)

    def test_delete_unknown(self, store):
        with pytest.raises(NotFoundError):
            store.delete("nope")

    def test_list_sorted_by_id(self, store, prompt_injection, data_poisoning):
        store.put(data_poisoning)
        store.put(prompt_injection)
        summaries = store.list()
        assert [s.id for s in summaries] == [
            "uva-prompt-injection",
            "uva-training-data-poisoning",
        ]
        assert summaries[0].threat == "LLM01"
        assert summaries[0].revision == 1

    def test_fixture_pair_lists_two(self, tmp_path, fixture_docs):
        store = DocumentStore(tmp_path / "pair")
        for doc in fixture_docs.values():
            store.put(doc)
        assert len(store.list()) == 2

    def test_unsafe_id_rejected(self, store, prompt_injection):
        from llmrisk.assessment import DocumentError

        evil = replace(prompt_injection, id="../escape")
        with pytest.raises(DocumentError):
            store.put(evil)


class TestConcurrency:
    def test_concurrent_puts_one_winner(self, store, prompt_injection):
        store.put(prompt_injection)  # revision 1
        results: list[object] = [None, None]
        barrier = threading.Barrier(2)

        def attempt(i: int) -> None:
            barrier.wait()
            try:
                results[i] = store.put(prompt_injection, expected_revision=1)
            except VersionConflictError as exc:
                results[i] = exc

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(2)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()

        winners = [r for r in results if r == 2]
        losers = [r for r in results if isinstance(r, VersionConflictError)]
        assert len(winners) == 1
        assert len(losers) == 1
        assert store.get(prompt_injection.id).revision == 2

    def test_many_concurrent_puts_linearize(self, store, prompt_injection):
        store.put(prompt_injection)
        n = 16
        outcomes: list[object] = [None] * n
        barrier = threading.Barrier(n)

        def attempt(i: int) -> None:
            barrier.wait()
            try:
                outcomes[i] = store.put(prompt_injection, expected_revision=1)
            except VersionConflictError as exc:
                outcomes[i] = exc

        threads = [threading.Thread(target=attempt, args=(i,)) for i in range(n)]
        for t in threads:
            t.start()
        for t in threads:
            t.join()
        assert sum(1 for o in outcomes if o == 2) == 1
        assert sum(1 for o in outcomes if isinstance(o, VersionConflictError)) == n - 1


class TestCrashSafety:
    def test_crash_before_commit_leaves_old_version(
        self, store, prompt_injection, monkeypatch
    ):
        store.put(prompt_injection)
        before = (store.root / f"{prompt_injection.id}.json").read_bytes()

        def explode(src, dst):
            raise OSError("simulated crash during rename")

        monkeypatch.setattr("llmrisk.store.os.replace", explode)
        updated = replace(prompt_injection, disposition="mitigate")
        with pytest.raises(StoreError):
            store.put(updated)
        monkeypatch.undo()

        on_disk = (store.root / f"{prompt_injection.id}.json").read_bytes()
        assert on_disk == before
        parsed = json.loads(on_disk)
        assert parsed["revision"] == 1
        assert store.get(prompt_injection.id).disposition == ""

    def test_retry_after_crash_succeeds(self, store, prompt_injection, monkeypatch):
        store.put(prompt_injection)

        real_replace = os.replace
        calls = {"n": 0}

        def flaky(src, dst):
            calls["n"] += 1
            if calls["n"] == 1:
                raise OSError("simulated crash")
            return real_replace(src, dst)

        monkeypatch.setattr("llmrisk.store.os.replace", flaky)
        with pytest.raises(StoreError):
            store.put(prompt_injection)
        assert store.put(prompt_injection) == 2
        assert store.get(prompt_injection.id).revision == 2

    def test_no_temp_litter_after_crash(self, store, prompt_injection, monkeypatch):
        store.put(prompt_injection)

        def explode(src, dst):
            raise OSError("simulated crash")

        monkeypatch.setattr("llmrisk.store.os.replace", explode)
        with pytest.raises(StoreError):
            store.put(prompt_injection)
        monkeypatch.undo()
        assert list(store.tmp.iterdir()) == []
