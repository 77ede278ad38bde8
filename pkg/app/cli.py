"""Command-line front end.

This module parses group specification files, runs the classification,
cell, isotropy and bundle pipelines, writes JSON reports and runs the
golden-table verification over the whole catalog.

Exit codes: 0 ok, 1 verification mismatch, 2 input error, 3 resource cap,
4 invariant violation.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from app import __version__
from app.bundleclass import classify_bundles
from app.canon import CanonicalClass, Conjugator, canonical_family, canonical_group, classify, instantiate_rows, select_rows
from app.cells import verify_1d_domain, verify_tiling, vertex_edge_census
from app.config import settings
from app.errors import TorusBundleError
from app.isotropy import compare_with_golden, isotropy_report, verify_counting
from app.models.group_spec import GroupSpecFile
from app.models.report import (
    BundleSection,
    CanonicalClassSection,
    CensusSection,
    CountingSection,
    DomainSection,
    GoldenDiffSection,
    IsotropySection,
    ReportFile,
    RowVerification,
    VerificationSection,
)
from app.templates_helpers import render_summary

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2


def _classified(args: argparse.Namespace) -> Tuple[CanonicalClass, Conjugator, int]:
    spec = GroupSpecFile.from_path(args.path)
    G = spec.build_group(args.cap)
    cc, eta = classify(G)
    return cc, eta, G.order


def _domain_section(cc: CanonicalClass) -> DomainSection:
    return DomainSection.from_checks(verify_tiling(cc), verify_1d_domain(cc))


def cmd_classify(args: argparse.Namespace) -> Tuple[ReportFile, int]:
    """Classify a group and report its canonical row and conjugator."""
    cc, eta, order = _classified(args)
    section = CanonicalClassSection.from_class(cc, eta, order)
    return ReportFile(command="classify", canonical_class=section), EXIT_OK


def cmd_cells(args: argparse.Namespace) -> Tuple[ReportFile, int]:
    """Classify a group and report the cell census and domain checks."""
    cc, eta, order = _classified(args)
    census = vertex_edge_census(cc)
    report = ReportFile(
        command="cells",
        canonical_class=CanonicalClassSection.from_class(cc, eta, order),
        census=CensusSection.from_census(census, _domain_section(cc)),
        counting=CountingSection.from_report(verify_counting(cc, census)),
    )
    return report, EXIT_OK


def cmd_isotropy(args: argparse.Namespace) -> Tuple[ReportFile, int]:
    """Classify a group and report its isotropy labels against the golden tables."""
    cc, eta, order = _classified(args)
    iso = isotropy_report(cc)
    diffs = compare_with_golden(cc, iso)
    report = ReportFile(
        command="isotropy",
        canonical_class=CanonicalClassSection.from_class(cc, eta, order),
        isotropy=IsotropySection.from_report(iso, diffs),
        counting=CountingSection.from_report(iso.counting),
    )
    mismatched = any(d.status == "mismatch" for d in diffs)
    return report, EXIT_MISMATCH if mismatched else EXIT_OK


def cmd_bundles(args: argparse.Namespace) -> Tuple[ReportFile, int]:
    """Classify a group and report the bundle classification up to ``--rank``."""
    cc, eta, order = _classified(args)
    bundles = classify_bundles(cc, args.rank, continuous=args.continuous)
    report = ReportFile(
        command="bundles",
        canonical_class=CanonicalClassSection.from_class(cc, eta, order),
        bundles=BundleSection.from_report(bundles),
    )
    return report, EXIT_OK


def verify_row(cc: CanonicalClass) -> RowVerification:
    """Recompute everything for one instantiated row and diff it against the golden tables.

    :param cc: Canonical class of a catalog row
    :type cc: CanonicalClass
    :returns: Per-check outcome with mismatches and flagged entries
    :rtype: RowVerification
    """
    try:
        found, _ = classify(canonical_group(cc))
        round_trip = found.family_row == canonical_family(cc.family_row)
    except TorusBundleError as e:
        logger.error(f"Row {cc.describe()}: classification failed: {e}")
        round_trip = False
    try:
        tiling = verify_tiling(cc).ok
    except TorusBundleError as e:
        logger.error(f"Row {cc.describe()}: {e}")
        tiling = False
    iso = isotropy_report(cc)
    diffs = [GoldenDiffSection.from_diff(d) for d in compare_with_golden(cc, iso)]
    row = RowVerification(
        family_row=cc.family_row,
        m1=cc.m1,
        m2=cc.m2,
        round_trip=round_trip,
        tiling=tiling,
        domain_1d=verify_1d_domain(cc).ok,
        counting=iso.counting.ok,
        edge_face_claim=iso.edge_face_claim,
        mismatches=[d for d in diffs if d.status == "mismatch"],
        flagged=[d for d in diffs if d.status == "flagged"],
    )
    if not row.ok:
        logger.warning(f"Row {cc.describe()} failed verification")
    return row


def cmd_verify_tables(args: argparse.Namespace) -> Tuple[ReportFile, int]:
    """Verify every instantiated catalog row, or those matching ``--row``."""
    rows = select_rows(args.row)
    verification = VerificationSection(rows=[verify_row(cc) for cc in instantiate_rows(rows)])
    logger.info(f"Verified {len(verification.rows)} rows: {verification.mismatches} failing, {verification.flagged} flagged")
    report = ReportFile(command="verify-tables", verification=verification)
    return report, EXIT_MISMATCH if verification.mismatches else EXIT_OK


COMMANDS: Dict[str, Callable[[argparse.Namespace], Tuple[ReportFile, int]]] = {
    "classify": cmd_classify,
    "cells": cmd_cells,
    "isotropy": cmd_isotropy,
    "bundles": cmd_bundles,
    "verify-tables": cmd_verify_tables,
}


def build_parser() -> argparse.ArgumentParser:
    """Create the argument parser with one subcommand per pipeline.

    :returns: Configured parser
    :rtype: argparse.ArgumentParser
    """
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", type=Path, help="write the JSON report to this file")
    common.add_argument("--json", action="store_true", help="print the JSON report to stdout")
    common.add_argument("--cap", type=int, help="closure cap for group generation")
    common.add_argument("--log-level", default=None, choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    parser = argparse.ArgumentParser(
        prog="torus-bundles",
        description="Classify finite isometric actions on flat tori and their equivariant bundles.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("classify", "cells", "isotropy"):
        p = sub.add_parser(name, parents=[common], help=COMMANDS[name].__doc__)
        p.add_argument("path", type=Path, help="group specification JSON file")
    p = sub.add_parser("bundles", parents=[common], help=cmd_bundles.__doc__)
    p.add_argument("path", type=Path, help="group specification JSON file")
    p.add_argument("--rank", type=int, required=True, help="largest bundle rank to enumerate")
    p.add_argument("--continuous", action="store_true", help="ask about a positive-dimensional family")
    p = sub.add_parser("verify-tables", parents=[common], help=cmd_verify_tables.__doc__)
    p.add_argument("--row", default=None, help="row id or point-group name to verify")
    return parser


def _emit(report: ReportFile, args: argparse.Namespace) -> None:
    payload = report.to_json() + "\n"
    if args.output:
        args.output.write_text(payload, encoding="utf-8")
        logger.info(f"Report written to {args.output}")
    elif args.json:
        sys.stdout.write(payload)
        return
    sys.stdout.write(render_summary(report))


def main(argv: Optional[List[str]] = None) -> int:
    """Run the command line.

    :param argv: Arguments without the program name (defaults to ``sys.argv[1:]``)
    :type argv: Optional[List[str]]
    :returns: Process exit code
    :rtype: int
    """
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=args.log_level or settings.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S',
        stream=sys.stderr,
    )
    if args.cap is not None:
        settings.closure_cap = args.cap
    try:
        report, code = COMMANDS[args.command](args)
        _emit(report, args)
    except TorusBundleError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return e.exit_code
    except OSError as e:
        logger.error(f"Cannot write report: {e}")
        return EXIT_INPUT
    return code


if __name__ == "__main__":
    sys.exit(main())
