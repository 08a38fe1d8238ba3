"""Queryable catalog of LLM application threats with stakeholder mapping.

The bundled catalog covers the OWASP Top 10 for LLM Applications (v1.1.0
taxonomy): per threat, its typical causes and consequences, static and
dynamic controls, whether it is a traditional cybersecurity risk, and which
stakeholder groups it concerns. Catalogs are immutable after load and can
be replaced by user-supplied files in the same format.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from enum import Enum
from importlib import resources
from pathlib import Path
from typing import Mapping

FORMAT_VERSION = 1

_ID_PATTERN = re.compile(r"^LLM\d{2}$")


class StakeholderGroup(str, Enum):
    FINE_TUNING_DEVELOPER = "fine_tuning_developer"
    API_INTEGRATION_DEVELOPER = "api_integration_developer"
    END_USER = "end_user"

    @property
    def display_name(self) -> str:
        return _STAKEHOLDER_DISPLAY[self]

    @classmethod
    def from_text(cls, text: str) -> "StakeholderGroup":
        return cls(text.strip().lower())


_STAKEHOLDER_DISPLAY = {
    StakeholderGroup.FINE_TUNING_DEVELOPER: "LLM Fine-tuning Developers",
    StakeholderGroup.API_INTEGRATION_DEVELOPER: "LLM API Integration Developers",
    StakeholderGroup.END_USER: "End Users",
}


class CatalogError(ValueError):
    """Raised for malformed catalog files; carries the offending entry locus."""

    def __init__(self, message: str, locus: str | None = None):
        super().__init__(message if locus is None else f"{locus}: {message}")
        self.locus = locus


@dataclass(frozen=True)
class ThreatEntry:
    id: str
    name: str
    causes: tuple[str, ...]
    consequences: tuple[str, ...]
    static_controls: tuple[str, ...]
    dynamic_controls: tuple[str, ...]
    traditional_cybersec: bool
    stakeholders: frozenset[StakeholderGroup]


@dataclass(frozen=True)
class Catalog:
    entries: tuple[ThreatEntry, ...]
    source: str = "bundled"
    format_version: int = FORMAT_VERSION
    notes: tuple[str, ...] = ()

    def entry(self, threat_id: str) -> ThreatEntry | None:
        for e in self.entries:
            if e.id == threat_id:
                return e
        return None

    def resolve(self, ref: str) -> ThreatEntry | None:
        """Resolve a threat reference by id first, then by exact name."""
        by_id = self.entry(ref)
        if by_id is not None:
            return by_id
        for e in self.entries:
            if e.name == ref:
                return e
        return None


def filter_by_stakeholder(
    catalog: Catalog, group: StakeholderGroup
) -> list[ThreatEntry]:
    """Entries concerning the given stakeholder group, in catalog order."""
    return [e for e in catalog.entries if group in e.stakeholders]


def filter_traditional(catalog: Catalog, flag: bool) -> list[ThreatEntry]:
    """Entries whose traditional-cybersecurity flag equals ``flag``."""
    return [e for e in catalog.entries if e.traditional_cybersec is flag]


def _entry_from_payload(raw: Mapping, locus: str) -> ThreatEntry:
    try:
        entry_id = str(raw["id"])
        name = str(raw["name"])
        stakeholders = frozenset(
            StakeholderGroup.from_text(s) for s in raw["stakeholders"]
        )
        entry = ThreatEntry(
            id=entry_id,
            name=name,
            causes=tuple(str(c) for c in raw.get("causes", [])),
            consequences=tuple(str(c) for c in raw.get("consequences", [])),
            static_controls=tuple(str(c) for c in raw.get("static_controls", [])),
            dynamic_controls=tuple(str(c) for c in raw.get("dynamic_controls", [])),
            traditional_cybersec=bool(raw.get("traditional_cybersec", False)),
            stakeholders=stakeholders,
        )
    except KeyError as exc:
        raise CatalogError(f"missing key {exc.args[0]!r}", locus) from None
    except (TypeError, ValueError) as exc:
        raise CatalogError(str(exc), locus) from None
    if not _ID_PATTERN.match(entry.id):
        raise CatalogError(f"id {entry.id!r} does not match LLM<two digits>", locus)
    if not entry.name:
        raise CatalogError("entry name must be non-empty", locus)
    if not entry.stakeholders:
        raise CatalogError("stakeholder set must be non-empty", locus)
    return entry


def catalog_from_payload(payload: Mapping, source: str = "payload") -> Catalog:
    if not isinstance(payload, Mapping):
        raise CatalogError("catalog document must be a mapping")
    entries_raw = payload.get("entries")
    if not entries_raw:
        raise CatalogError("no entries")
    entries = []
    seen: set[str] = set()
    for i, raw in enumerate(entries_raw):
        locus = f"entries[{i}]"
        entry = _entry_from_payload(raw, locus)
        if entry.id in seen:
            raise CatalogError(f"duplicate id {entry.id!r}", locus)
        seen.add(entry.id)
        entries.append(entry)
    return Catalog(
        entries=tuple(entries),
        source=source,
        format_version=int(payload.get("format_version", FORMAT_VERSION)),
        notes=tuple(str(n) for n in payload.get("notes", [])),
    )


def catalog_to_payload(catalog: Catalog) -> dict:
    return {
        "format_version": catalog.format_version,
        "notes": list(catalog.notes),
        "entries": [
            {
                "id": e.id,
                "name": e.name,
                "causes": list(e.causes),
                "consequences": list(e.consequences),
                "static_controls": list(e.static_controls),
                "dynamic_controls": list(e.dynamic_controls),
                "traditional_cybersec": e.traditional_cybersec,
                "stakeholders": sorted(s.value for s in e.stakeholders),
            }
            for e in catalog.entries
        ],
    }


def load_catalog(source: str | Path | None = None) -> Catalog:
    """Load a catalog file, or the bundled LLM Top-10 catalog when omitted."""
    if source is None or source == "bundled":
        return bundled_catalog()
    with open(source, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise CatalogError(f"invalid JSON: {exc}", str(source)) from None
    return catalog_from_payload(payload, source=str(source))


_BUNDLED: Catalog | None = None


def bundled_catalog() -> Catalog:
    global _BUNDLED
    if _BUNDLED is None:
        text = (
            resources.files("llmrisk.data")
            .joinpath("catalog_llm_top10.json")
            .read_text("utf-8")
        )
        _BUNDLED = catalog_from_payload(json.loads(text), source="bundled")
    return _BUNDLED


def serialize_catalog(catalog: Catalog, indent: int = 2) -> bytes:
    text = json.dumps(catalog_to_payload(catalog), indent=indent, ensure_ascii=False)
    return (text + "\n").encode("utf-8")
