"""Input and report models for the torus bundle classifier."""
from app.models.group_spec import GeneratorSpec, GroupSpecFile
from app.models.report import (
    BundleSection,
    CanonicalClassSection,
    CensusSection,
    ConjugatorSection,
    CountingSection,
    DomainSection,
    GoldenDiffSection,
    IsotropySection,
    ReportFile,
    RowVerification,
    ToolInfo,
    VerificationSection,
)

__all__ = [
    "GeneratorSpec",
    "GroupSpecFile",
    "BundleSection",
    "CanonicalClassSection",
    "CensusSection",
    "ConjugatorSection",
    "CountingSection",
    "DomainSection",
    "GoldenDiffSection",
    "IsotropySection",
    "ReportFile",
    "RowVerification",
    "ToolInfo",
    "VerificationSection",
]
