"""Pytest configuration and shared fixtures.

This module provides fixtures for testing the torus bundle classifier,
including canonical classes of catalog rows, common generators and
group specification files on disk.
"""
import json
from fractions import Fraction
from pathlib import Path
from typing import Callable, Dict

import pytest
from dotenv import load_dotenv

# Load .env file before tests run
load_dotenv()

from app.canon import CanonicalClass, canonical_group
from app.config import Settings, settings
from app.exactgeom import SQUARE_GRAM, Mat2, Vec2Q
from app.torusgroup import AffineTorusMap, FiniteTorusGroup, close_group


@pytest.fixture
def test_settings() -> Settings:
    """Create settings with the shipped defaults.

    :returns: Fresh settings instance
    :rtype: Settings
    """
    return Settings()


@pytest.fixture
def row_class() -> Callable[..., CanonicalClass]:
    """Factory for canonical classes of catalog rows.

    :returns: ``row_class(row_id, m1=1, m2=1)``
    :rtype: Callable[..., CanonicalClass]
    """
    def make(row_id: str, m1: int = 1, m2: int = 1) -> CanonicalClass:
        return CanonicalClass.for_row(row_id, m1, m2)
    return make


@pytest.fixture
def rot90() -> AffineTorusMap:
    """Quarter turn about the origin.

    :returns: Rotation generator
    :rtype: AffineTorusMap
    """
    return AffineTorusMap(Mat2.of([[0, -1], [1, 0]]))


@pytest.fixture
def glide() -> AffineTorusMap:
    """Glide reflection diag(1, -1) with shift (1/2, 0).

    :returns: Glide generator
    :rtype: AffineTorusMap
    """
    return AffineTorusMap(Mat2.diag(1, -1), Vec2Q(Fraction(1, 2), Fraction(0)))


@pytest.fixture
def p4_group(rot90: AffineTorusMap) -> FiniteTorusGroup:
    """Group of order 4 generated by the quarter turn on the square torus.

    :returns: Cyclic group of rotations
    :rtype: FiniteTorusGroup
    """
    return close_group(SQUARE_GRAM, [rot90])


@pytest.fixture
def d4_group(row_class) -> FiniteTorusGroup:
    """Canonical group of the D_4 row.

    :returns: Group of order 8
    :rtype: FiniteTorusGroup
    """
    return canonical_group(row_class("D_4"))


@pytest.fixture
def spec_file(tmp_path: Path) -> Callable[[Dict], Path]:
    """Write a group specification to a temporary JSON file.

    :returns: ``spec_file(payload)`` returning the file path
    :rtype: Callable[[Dict], Path]
    """
    def write(payload: Dict, name: str = "group.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(payload), encoding="utf-8")
        return path
    return write


@pytest.fixture
def rot90_spec() -> Dict:
    """Specification of the quarter turn on the square torus.

    :returns: JSON-ready payload
    :rtype: Dict
    """
    return {
        "gram": [["1", "0"], ["0", "1"]],
        "generators": [{"matrix": [[0, -1], [1, 0]], "translation": ["0", "0"]}],
    }


@pytest.fixture
def glide_spec() -> Dict:
    """Specification of the glide reflection on the square torus.

    :returns: JSON-ready payload
    :rtype: Dict
    """
    return {
        "gram": [["1", "0"], ["0", "1"]],
        "generators": [{"matrix": [[1, 0], [0, -1]], "translation": ["1/2", "0"]}],
    }


@pytest.fixture
def trivial_spec() -> Dict:
    """Specification of the trivial group on the square torus.

    :returns: JSON-ready payload
    :rtype: Dict
    """
    return {"gram": [["1", "0"], ["0", "1"]], "generators": []}


@pytest.fixture
def restore_settings():
    """Restore mutable settings fields after a test changes them.

    :yields: None
    """
    saved = (settings.closure_cap, settings.golden_tables_path, settings.rank_cap)
    yield
    settings.closure_cap, settings.golden_tables_path, settings.rank_cap = saved
