"""Utility functions for exact serialization.

This module re-exports the rational codec used by the report and input
schemas.
"""
from app.utils.rationals import RationalStr, format_pair, format_rational, parse_rational

__all__ = [
    "RationalStr",
    "format_pair",
    "format_rational",
    "parse_rational",
]
