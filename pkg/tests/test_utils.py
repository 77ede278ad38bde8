"""Tests for utility functions."""
from fractions import Fraction

import pytest

from app.utils import format_pair, format_rational, parse_rational


@pytest.mark.unit
class TestParseRational:
    """Tests for reading exact rationals."""

    @pytest.mark.parametrize("raw,expected", [
        ("3/4", Fraction(3, 4)),
        (" -2/6 ", Fraction(-1, 3)),
        ("5", Fraction(5)),
        (7, Fraction(7)),
        (Fraction(1, 2), Fraction(1, 2)),
    ])
    def test_valid(self, raw, expected):
        """Test accepted inputs."""
        assert parse_rational(raw) == expected

    @pytest.mark.parametrize("raw", [0.5, True, "1/0", "half", None])
    def test_invalid(self, raw):
        """Test rejected inputs."""
        with pytest.raises(ValueError):
            parse_rational(raw)


@pytest.mark.unit
class TestFormatRational:
    """Tests for writing exact rationals."""

    def test_integer(self):
        """Test that integers drop the denominator."""
        assert format_rational(Fraction(4, 2)) == "2"

    def test_negative(self):
        """Test the sign of a negative fraction."""
        assert format_rational(Fraction(-1, 3)) == "-1/3"

    def test_pair(self):
        """Test formatting of a coordinate pair."""
        assert format_pair((Fraction(1, 2), Fraction(0))) == ("1/2", "0")
