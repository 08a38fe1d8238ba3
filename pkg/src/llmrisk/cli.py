"""Command-line surface: validate, evaluate, whatif, matrix, catalog, serve.

Exit codes: 0 success, 1 validation/evaluation error, 2 usage error,
3 I/O error. Diagnostics go to stderr; with ``--format json`` stdout is
exactly one JSON document and nothing else.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import assessment, catalog as catalog_mod, matrix as matrix_mod, rating
from .assessment import AssessmentDocument, DocumentError, LifecycleError
from .catalog import Catalog, CatalogError, StakeholderGroup
from .matrix import MatrixError
from .rating import RatingError, RatingScheme, RiskRating, SchemeLoadError
from .store import StoreError
from .validation import ValidationReport

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2
EXIT_IO = 3

SCHEME_ENV = "LLMRISK_SCHEME"

_SEVERITY_COLORS = {
    "NOTE": "\x1b[90m",
    "LOW": "\x1b[32m",
    "MEDIUM": "\x1b[33m",
    "HIGH": "\x1b[31m",
    "CRITICAL": "\x1b[1;31m",
}
_RESET = "\x1b[0m"


def _print_json(payload: object) -> None:
    sys.stdout.write(json.dumps(payload, indent=2, ensure_ascii=False) + "\n")


def _colorize(text: str, use_color: bool) -> str:
    if use_color and text in _SEVERITY_COLORS:
        return f"{_SEVERITY_COLORS[text]}{text}{_RESET}"
    return text


def _use_color(args: argparse.Namespace) -> bool:
    return sys.stdout.isatty() and not args.no_color


def _load_scheme(args: argparse.Namespace) -> RatingScheme:
    path = getattr(args, "scheme", None) or os.environ.get(SCHEME_ENV)
    return rating.load_scheme(path) if path else rating.default_scheme()


def _load_catalog(args: argparse.Namespace) -> Catalog:
    path = getattr(args, "catalog", None)
    return catalog_mod.load_catalog(path)


def _stakeholder(text: str | None) -> StakeholderGroup | None:
    if text is None:
        return None
    try:
        return StakeholderGroup.from_text(text)
    except ValueError:
        raise DocumentError(
            f"unknown stakeholder {text!r}; expected one of "
            + ", ".join(g.value for g in StakeholderGroup)
        ) from None


# ---------------------------------------------------------------------------
# evaluate / whatif output, mirroring the factor-table layout.
# ---------------------------------------------------------------------------

def _factor_lines(
    doc: AssessmentDocument, scheme: RatingScheme, category: rating.FactorCategory
) -> list[str]:
    by_id = {a.factor_id: a for a in doc.all_assignments()}
    lines = []
    for factor in scheme.factors_in(category):
        a = by_id.get(factor.id)
        if a is None:
            continue
        label = a.anchor_label or factor.anchor_label(a.score) or ""
        lines.append(f"  {factor.display_name:<24} {a.score}  {label}".rstrip())
    return lines


def _print_rating_table(
    doc: AssessmentDocument,
    entry_name: str | None,
    result: RiskRating,
    scheme: RatingScheme,
    use_color: bool,
) -> None:
    out = sys.stdout.write
    threat = doc.threat if entry_name is None else f"{doc.threat} ({entry_name})"
    out(f"Assessment: {doc.id}\n")
    out(f"Threat: {threat}\n\n")
    out("Threat Agent Factors\n")
    out("\n".join(_factor_lines(doc, scheme, rating.FactorCategory.THREAT_AGENT)) + "\n")
    out("Vulnerability Factors\n")
    out("\n".join(_factor_lines(doc, scheme, rating.FactorCategory.VULNERABILITY)) + "\n")
    out(f"Likelihood Score: {rating.format_score(result.likelihood_score)}\n")
    out(f"Likelihood: {result.likelihood_level.display}\n\n")
    out("Technical Impact Factors\n")
    out("\n".join(_factor_lines(doc, scheme, rating.FactorCategory.TECHNICAL_IMPACT)) + "\n")
    out(f"Technical Impact Score: {rating.format_score(result.technical_impact_score)}\n")
    out("Business Impact Factors\n")
    out("\n".join(_factor_lines(doc, scheme, rating.FactorCategory.BUSINESS_IMPACT)) + "\n")
    out(f"Business Impact Score: {rating.format_score(result.business_impact_score)}\n")
    out(f"Final Impact Score: {rating.format_score(result.final_impact_score)}\n")
    out(f"Impact: {result.impact_level.display}\n\n")
    out(f"Risk Severity: {_colorize(result.severity.display, use_color)}\n")


def _print_before_after(before: RiskRating, after: RiskRating, use_color: bool) -> None:
    rows = [
        ("Likelihood Score", rating.format_score(before.likelihood_score),
         rating.format_score(after.likelihood_score)),
        ("Likelihood", before.likelihood_level.display, after.likelihood_level.display),
        ("Technical Impact Score", rating.format_score(before.technical_impact_score),
         rating.format_score(after.technical_impact_score)),
        ("Business Impact Score", rating.format_score(before.business_impact_score),
         rating.format_score(after.business_impact_score)),
        ("Final Impact Score", rating.format_score(before.final_impact_score),
         rating.format_score(after.final_impact_score)),
        ("Impact", before.impact_level.display, after.impact_level.display),
        ("Risk Severity", _colorize(before.severity.display, use_color),
         _colorize(after.severity.display, use_color)),
    ]
    sys.stdout.write(f"{'':<24} {'before':<10} {'after':<10}\n")
    for name, b, a in rows:
        sys.stdout.write(f"{name:<24} {b:<10} {a:<10}\n")


# ---------------------------------------------------------------------------
# Subcommands.
# ---------------------------------------------------------------------------

def _cmd_validate(args: argparse.Namespace) -> int:
    with open(args.path, "r", encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{args.path}: invalid JSON: {exc}") from None

    if isinstance(payload, dict) and "factors" in payload and "severity_chart" in payload:
        kind = "scheme"
        report = rating.validate_scheme(rating.scheme_from_payload(payload))
    elif isinstance(payload, dict) and "entries" in payload:
        kind = "catalog"
        report = ValidationReport()
        try:
            catalog_mod.catalog_from_payload(payload, source=str(args.path))
        except CatalogError as exc:
            report.error("catalog", str(exc), exc.locus)
    else:
        kind = "assessment"
        doc = assessment.document_from_payload(payload)
        report = assessment.validate_document(doc, _load_catalog(args), _load_scheme(args))

    if args.format == "json":
        _print_json(
            {
                "kind": kind,
                "errors": [vars(e) for e in report.errors],
                "warnings": [vars(w) for w in report.warnings],
            }
        )
    else:
        for issue in report.errors:
            sys.stdout.write(f"ERROR {issue}\n")
        for issue in report.warnings:
            sys.stdout.write(f"WARNING {issue}\n")
        sys.stdout.write(
            f"{kind}: {len(report.errors)} error(s), {len(report.warnings)} warning(s)\n"
        )
    return EXIT_OK if report.ok else EXIT_INVALID


def _cmd_evaluate(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    doc = assessment.load_document(args.path)
    result = assessment.evaluate_document(doc, scheme)
    if args.format == "json":
        _print_json(rating.rating_to_payload(result))
    else:
        entry = _load_catalog(args).resolve(doc.threat)
        _print_rating_table(
            doc, entry.name if entry else None, result, scheme, _use_color(args)
        )
    return EXIT_OK


def _cmd_whatif(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    doc = assessment.load_document(args.path)
    with open(args.adjust, "r", encoding="utf-8") as fh:
        try:
            adj_payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"{args.adjust}: invalid JSON: {exc}") from None
    adjustment = assessment.adjustment_from_payload(adj_payload)
    _derived, before, after = assessment.apply_adjustment(doc, adjustment, scheme)
    if args.format == "json":
        _print_json(
            {
                "adjustment": adjustment.label,
                "before": rating.rating_to_payload(before),
                "after": rating.rating_to_payload(after),
            }
        )
    else:
        sys.stdout.write(f"What-if: {adjustment.label}\n\n")
        _print_before_after(before, after, _use_color(args))
    return EXIT_OK


def _load_documents(directory: str | Path) -> list[AssessmentDocument]:
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"not a directory: {root}")
    return [assessment.load_document(p) for p in sorted(root.glob("*.json"))]


def _cmd_matrix(args: argparse.Namespace) -> int:
    scheme = _load_scheme(args)
    catalog = _load_catalog(args)
    docs = _load_documents(args.assessments_dir)
    built = matrix_mod.build_matrix(catalog, docs, scheme, _stakeholder(args.stakeholder))
    fmt = {"csv": "csv", "md": "markup_table", "json": "canonical_json"}[args.format]
    data = matrix_mod.render(built, fmt)
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


def _cmd_catalog_list(args: argparse.Namespace) -> int:
    catalog = _load_catalog(args)
    entries = list(catalog.entries)
    group = _stakeholder(args.stakeholder)
    if group is not None:
        entries = [e for e in entries if group in e.stakeholders]
    if args.traditional is not None:
        flag = args.traditional == "yes"
        entries = [e for e in entries if e.traditional_cybersec is flag]
    if args.format == "json":
        filtered = Catalog(
            entries=tuple(entries), source=catalog.source,
            format_version=catalog.format_version, notes=catalog.notes,
        )
        _print_json(catalog_mod.catalog_to_payload(filtered))
        return EXIT_OK
    for e in entries:
        groups = ", ".join(
            s.display_name for s in sorted(e.stakeholders, key=lambda g: g.value)
        )
        flag = "yes" if e.traditional_cybersec else "no"
        sys.stdout.write(f"{e.id}  {e.name:<34} traditional={flag:<4} {groups}\n")
    return EXIT_OK


def _cmd_catalog_export(args: argparse.Namespace) -> int:
    data = catalog_mod.serialize_catalog(_load_catalog(args))
    if args.out:
        Path(args.out).write_bytes(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    from .service import ServeConfig, serve

    serve(
        ServeConfig(
            addr=args.addr,
            store_root=args.store,
            scheme_path=args.scheme or os.environ.get(SCHEME_ENV) or None,
            catalog_path=args.catalog,
            ui_dir=args.ui,
        )
    )
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser.
# ---------------------------------------------------------------------------

def _add_scheme_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scheme", help=f"rating scheme file (default: ${SCHEME_ENV} or bundled)")
    p.add_argument("--catalog", help="threat catalog file (default: bundled)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="llmrisk",
        description="Risk-assessment toolkit for LLM-integrated systems.",
    )
    parser.add_argument("--no-color", action="store_true", help="disable ANSI colors")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate a scheme, catalog, or assessment file")
    p.add_argument("path")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_scheme_flags(p)
    p.set_defaults(func=_cmd_validate)

    p = sub.add_parser("evaluate", help="compute the risk rating for an assessment")
    p.add_argument("path")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_scheme_flags(p)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("whatif", help="apply a control adjustment and compare ratings")
    p.add_argument("path")
    p.add_argument("--adjust", required=True, help="adjustment file (label, overrides, note)")
    p.add_argument("--format", choices=["text", "json"], default="text")
    _add_scheme_flags(p)
    p.set_defaults(func=_cmd_whatif)

    p = sub.add_parser("matrix", help="build the threat matrix from a directory of assessments")
    p.add_argument("assessments_dir")
    p.add_argument("--stakeholder", help="filter rows by stakeholder group")
    p.add_argument("--format", choices=["csv", "md", "json"], default="md")
    p.add_argument("--out", help="write output to a file instead of stdout")
    _add_scheme_flags(p)
    p.set_defaults(func=_cmd_matrix)

    p = sub.add_parser("catalog", help="query or export the threat catalog")
    catalog_sub = p.add_subparsers(dest="catalog_command", required=True)
    pl = catalog_sub.add_parser("list", help="list catalog entries")
    pl.add_argument("--stakeholder", help="filter by stakeholder group")
    pl.add_argument("--traditional", choices=["yes", "no"], default=None)
    pl.add_argument("--format", choices=["text", "json"], default="text")
    pl.add_argument("--catalog", help="catalog file (default: bundled)")
    pl.set_defaults(func=_cmd_catalog_list)
    pe = catalog_sub.add_parser("export", help="export the catalog as JSON")
    pe.add_argument("--out", help="write to a file instead of stdout")
    pe.add_argument("--catalog", help="catalog file (default: bundled)")
    pe.set_defaults(func=_cmd_catalog_export)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--addr", default="127.0.0.1:8497")
    p.add_argument("--store", default="assessments", help="assessment store directory")
    p.add_argument("--ui", help="static workbench assets to mount at /ui")
    _add_scheme_flags(p)
    p.set_defaults(func=_cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (OSError, StoreError) as exc:
        sys.stderr.write(f"llmrisk: {exc}\n")
        return EXIT_IO
    except (
        RatingError,
        DocumentError,
        CatalogError,
        SchemeLoadError,
        MatrixError,
        LifecycleError,
    ) as exc:
        sys.stderr.write(f"llmrisk: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
