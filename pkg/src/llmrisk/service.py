"""HTTP API over the store, rating engine, catalog, and matrix builder.

All request and response bodies use the same JSON document shapes as the
on-disk files. Evaluation and what-if endpoints are stateless: responses
depend only on the request body and the loaded scheme, so repeated
identical requests produce identical bodies.

Error responses carry a machine-readable body::

    {"code": "<machine code>", "message": "<human text>", "locus": "<id>"}

Engine errors map to exactly one code each:

===============================  ======  =======================
exception                        status  code
===============================  ======  =======================
IncompleteAssignmentError        400     incomplete_factors
UnknownFactorError               400     validation
DuplicateAssignmentError         400     validation
RatingError (other)              400     validation
DocumentError / CatalogError     400     validation
SchemeLoadError                  400     validation
AmbiguousAssessmentError         400     ambiguous_assessment
UnknownThreatError               400     unknown_threat
json.JSONDecodeError             400     validation
NotFoundError                    404     not_found
VersionConflictError             409     version_conflict
GuardError                       422     guard_violation
SequencingError                  422     sequencing_violation
StoreError                       500     io_failure
===============================  ======  =======================
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response
from starlette.staticfiles import StaticFiles

from . import assessment, catalog as catalog_mod, matrix as matrix_mod, rating
from .assessment import (
    DocumentError,
    GuardError,
    SequencingError,
    Status,
    document_from_payload,
    document_to_payload,
    validate_document,
)
from .catalog import Catalog, CatalogError, StakeholderGroup
from .matrix import AmbiguousAssessmentError, MatrixError, UnknownThreatError
from .rating import IncompleteAssignmentError, RatingError, RatingScheme, SchemeLoadError
from .store import DocumentStore, NotFoundError, StoreError, VersionConflictError


def _error(status: int, code: str, message: str, locus: str | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"code": code, "message": message, "locus": locus},
    )


_ERROR_TABLE: tuple[tuple[type[Exception], int, str], ...] = (
    (IncompleteAssignmentError, 400, "incomplete_factors"),
    (VersionConflictError, 409, "version_conflict"),
    (NotFoundError, 404, "not_found"),
    (GuardError, 422, "guard_violation"),
    (SequencingError, 422, "sequencing_violation"),
    (AmbiguousAssessmentError, 400, "ambiguous_assessment"),
    (UnknownThreatError, 400, "unknown_threat"),
    (StoreError, 500, "io_failure"),
    (RatingError, 400, "validation"),
    (DocumentError, 400, "validation"),
    (CatalogError, 400, "validation"),
    (SchemeLoadError, 400, "validation"),
    (MatrixError, 400, "validation"),
    (json.JSONDecodeError, 400, "validation"),
)


def _locus_of(exc: Exception) -> str | None:
    if isinstance(exc, IncompleteAssignmentError):
        return ", ".join(exc.missing)
    for attr in ("factor_id", "doc_id", "locus", "threat_id"):
        value = getattr(exc, attr, None)
        if value:
            return str(value)
    return None


def create_app(
    store: DocumentStore,
    scheme: RatingScheme | None = None,
    catalog: Catalog | None = None,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    scheme = scheme or rating.default_scheme()
    catalog = catalog or catalog_mod.bundled_catalog()

    app = FastAPI(title="llmrisk", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    for exc_type, status, code in _ERROR_TABLE:
        def handler(request: Request, exc: Exception, status=status, code=code):
            message = "request body is not valid JSON" if code == "validation" and isinstance(
                exc, json.JSONDecodeError
            ) else str(exc)
            return _error(status, code, message, _locus_of(exc))

        app.add_exception_handler(exc_type, handler)

    def _stakeholder_of(text: str | None) -> StakeholderGroup | None:
        if text is None or text == "":
            return None
        try:
            return StakeholderGroup.from_text(text)
        except ValueError:
            raise DocumentError(
                f"unknown stakeholder {text!r}; expected one of "
                + ", ".join(g.value for g in StakeholderGroup)
            ) from None

    def _checked(doc: assessment.AssessmentDocument) -> assessment.AssessmentDocument:
        report = validate_document(doc, catalog, scheme)
        if not report.ok:
            first = report.errors[0]
            raise DocumentError(
                f"document invalid: {first.message}"
                + (f" (and {len(report.errors) - 1} more)" if len(report.errors) > 1 else "")
            )
        return doc

    # -- catalog & scheme ---------------------------------------------------

    @app.get("/catalog")
    def get_catalog(stakeholder: str | None = None, traditional: bool | None = None):
        entries = list(catalog.entries)
        group = _stakeholder_of(stakeholder)
        if group is not None:
            entries = [e for e in entries if group in e.stakeholders]
        if traditional is not None:
            entries = [e for e in entries if e.traditional_cybersec is traditional]
        payload = catalog_mod.catalog_to_payload(
            catalog_mod.Catalog(
                entries=tuple(entries),
                source=catalog.source,
                format_version=catalog.format_version,
                notes=catalog.notes,
            )
        )
        return JSONResponse(payload)

    @app.get("/catalog/{threat_id}")
    def get_catalog_entry(threat_id: str):
        entry = catalog.resolve(threat_id)
        if entry is None:
            return _error(404, "not_found", f"no catalog entry {threat_id!r}", threat_id)
        payload = catalog_mod.catalog_to_payload(
            catalog_mod.Catalog(entries=(entry,), source=catalog.source)
        )
        return JSONResponse(payload["entries"][0])

    @app.get("/scheme")
    def get_scheme():
        return JSONResponse(rating.scheme_to_payload(scheme))

    # -- assessments --------------------------------------------------------

    @app.get("/assessments")
    def list_assessments():
        return JSONResponse(
            {
                "assessments": [
                    {
                        "id": s.id,
                        "threat": s.threat,
                        "status": s.status.value,
                        "revision": s.revision,
                    }
                    for s in store.list()
                ]
            }
        )

    @app.post("/assessments")
    async def create_assessment(request: Request):
        doc = _checked(document_from_payload(await request.json()))
        revision = store.put(doc, expected_revision=0)
        return JSONResponse({"id": doc.id, "revision": revision}, status_code=201)

    @app.get("/assessments/{doc_id}")
    def get_assessment(doc_id: str):
        return JSONResponse(document_to_payload(store.get(doc_id)))

    @app.put("/assessments/{doc_id}")
    async def put_assessment(
        doc_id: str, request: Request, expected_revision: int | None = None
    ):
        doc = _checked(document_from_payload(await request.json()))
        if doc.id != doc_id:
            raise DocumentError(
                f"document id {doc.id!r} does not match path id {doc_id!r}"
            )
        revision = store.put(doc, expected_revision=expected_revision)
        return JSONResponse({"id": doc.id, "revision": revision})

    @app.delete("/assessments/{doc_id}")
    def delete_assessment(doc_id: str):
        store.delete(doc_id)
        return Response(status_code=204)

    # -- evaluation ---------------------------------------------------------

    @app.post("/evaluate")
    async def evaluate_assignments(request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "assignments" not in body:
            raise DocumentError('expected a body of the form {"assignments": [...]}')
        assignments = [
            rating.assignment_from_payload(raw) for raw in body["assignments"]
        ]
        result = rating.evaluate(assignments, scheme)
        return JSONResponse(rating.rating_to_payload(result))

    @app.post("/assessments/{doc_id}/whatif")
    async def whatif(doc_id: str, request: Request):
        doc = store.get(doc_id)
        adjustment = assessment.adjustment_from_payload(await request.json())
        _derived, before, after = assessment.apply_adjustment(doc, adjustment, scheme)
        return JSONResponse(
            {
                "adjustment": adjustment.label,
                "before": rating.rating_to_payload(before),
                "after": rating.rating_to_payload(after),
            }
        )

    @app.post("/assessments/{doc_id}/status")
    async def advance(doc_id: str, request: Request):
        body = await request.json()
        if not isinstance(body, dict) or "target" not in body:
            raise DocumentError('expected a body of the form {"target": "<status>"}')
        try:
            target = Status.from_text(body["target"])
        except ValueError:
            raise DocumentError(f"unknown status {body['target']!r}") from None
        doc = store.get(doc_id)
        advanced = assessment.advance_status(doc, target, scheme)
        revision = store.put(advanced, expected_revision=doc.revision)
        return JSONResponse(
            {"id": doc_id, "status": advanced.status.value, "revision": revision}
        )

    # -- matrix -------------------------------------------------------------

    @app.get("/matrix")
    def get_matrix(stakeholder: str | None = None, format: str = "json"):
        group = _stakeholder_of(stakeholder)
        built = matrix_mod.build_matrix(catalog, store.load_all(), scheme, group)
        if format in ("json", "canonical_json"):
            return Response(
                matrix_mod.render(built, "canonical_json"), media_type="application/json"
            )
        if format == "csv":
            return Response(matrix_mod.render(built, "csv"), media_type="text/csv")
        if format in ("md", "markdown", "markup_table"):
            return Response(
                matrix_mod.render(built, "markup_table"), media_type="text/markdown"
            )
        raise MatrixError(f"unknown format {format!r}; expected json, csv or md")

    if ui_dir is not None:
        app.mount("/ui", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


@dataclass
class ServeConfig:
    addr: str = "127.0.0.1:8497"
    store_root: str | Path = "assessments"
    scheme_path: str | Path | None = None
    catalog_path: str | Path | None = None
    ui_dir: str | Path | None = None


def serve(config: ServeConfig) -> None:
    """Run the HTTP service (binds loopback by default)."""
    import uvicorn

    host, _, port_text = config.addr.partition(":")
    app = create_app(
        store=DocumentStore(config.store_root),
        scheme=rating.load_scheme(config.scheme_path) if config.scheme_path else None,
        catalog=catalog_mod.load_catalog(config.catalog_path)
        if config.catalog_path
        else None,
        ui_dir=config.ui_dir,
    )
    uvicorn.run(app, host=host or "127.0.0.1", port=int(port_text or 8497))
