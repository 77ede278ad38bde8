"""Shared Jinja2 environment with global filters.

This module initializes the Jinja2 environment used for the human
summaries printed by the command-line front end and registers the
filters available to all templates.
"""
from fractions import Fraction
from typing import Any

from jinja2 import Environment, PackageLoader, StrictUndefined

from app.models.report import ReportFile


def _rational(value: Any) -> str:
    return str(Fraction(value))


# Create environment with global filters
templates: Environment = Environment(
    loader=PackageLoader("app", "templates"),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)

templates.filters["rational"] = _rational
templates.filters["pairs"] = lambda rel: ", ".join(f"v^{i}~v^{k}" for i, k in rel) or "none"


def render_summary(report: ReportFile) -> str:
    """Render the plain-text summary of a report.

    :param report: Report to summarize
    :type report: ReportFile
    :returns: Human-readable summary
    :rtype: str
    """
    return templates.get_template("summary.txt.j2").render(report=report)
