from hblm.schemas.ring import RingSpec, RingSummary, parse_key_values
from hblm.schemas.enumeration import (
    EnumConfig,
    Counts,
    ClassificationCounts,
    TypeCount,
    Classification,
)
from hblm.schemas.report import ReportMeta, VerificationReport, AtlasRow
from hblm.schemas.cli import CliConfig

__all__ = [
    # Ring
    "RingSpec",
    "RingSummary",
    "parse_key_values",
    # Enumeration
    "EnumConfig",
    "Counts",
    "ClassificationCounts",
    "TypeCount",
    "Classification",
    # Report
    "ReportMeta",
    "VerificationReport",
    "AtlasRow",
    # CLI
    "CliConfig",
]
