"""Group specification models.

This module defines the Pydantic input schema describing a finite group
acting on a flat torus: the Gram form of the lattice and a list of affine
generators with exact rational translations.
"""
import json
from pathlib import Path
from typing import List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator

from app.errors import SpecParseError
from app.exactgeom import Gram, Mat2, Vec2Q
from app.torusgroup import AffineTorusMap, FiniteTorusGroup, close_group
from app.utils.rationals import RationalStr, format_rational


class GeneratorSpec(BaseModel):
    """One affine generator ``x ↦ M x + t`` in lattice coordinates."""

    matrix: List[List[int]]  #: 2×2 integer matrix, row-major
    translation: Tuple[RationalStr, RationalStr] = ("0", "0")  #: Translation as "p/q" strings

    model_config = ConfigDict(
        extra="forbid",  #: Reject unknown keys
    )

    @field_validator("matrix")
    @classmethod
    def check_shape(cls, value: List[List[int]]) -> List[List[int]]:
        """Require a 2×2 matrix.

        :param value: Matrix rows
        :type value: List[List[int]]
        :returns: The unchanged rows
        :rtype: List[List[int]]
        :raises ValueError: If the shape is not 2×2
        """
        if len(value) != 2 or any(len(row) != 2 for row in value):
            raise ValueError(f"generator matrix must be 2x2, got {value}")
        return value

    def to_map(self) -> AffineTorusMap:
        return AffineTorusMap(Mat2.of(self.matrix), Vec2Q(*self.translation))

    @classmethod
    def from_map(cls, g: AffineTorusMap) -> "GeneratorSpec":
        rows = [[int(x) for x in row] for row in g.matrix.rows()]
        return cls(matrix=rows, translation=(g.translation.x, g.translation.y))


class GroupSpecFile(BaseModel):
    """Input file for the command-line front end.

    Example::

        {"gram": [["1", "0"], ["0", "1"]],
         "generators": [{"matrix": [[0, -1], [1, 0]], "translation": ["0", "0"]}]}
    """

    gram: List[List[RationalStr]]  #: 2×2 symmetric positive definite Gram matrix
    generators: List[GeneratorSpec] = Field(default_factory=list)  #: Generators; empty for the trivial group
    cap: Optional[int] = Field(None, ge=1)  #: Closure cap for this group

    model_config = ConfigDict(
        extra="forbid",  #: Reject unknown keys
    )

    @field_validator("gram")
    @classmethod
    def check_gram(cls, value: List[List]) -> List[List]:
        """Require a symmetric 2×2 Gram matrix.

        :raises ValueError: If the matrix is not 2×2 or not symmetric
        """
        if len(value) != 2 or any(len(row) != 2 for row in value):
            raise ValueError(f"gram must be 2x2, got {value}")
        if value[0][1] != value[1][0]:
            raise ValueError(f"gram must be symmetric, got off-diagonal {value[0][1]} and {value[1][0]}")
        return value

    def to_gram(self) -> Gram:
        return Gram.of(self.gram)

    def to_generators(self) -> List[AffineTorusMap]:
        return [g.to_map() for g in self.generators]

    def build_group(self, cap: Optional[int] = None) -> FiniteTorusGroup:
        """Close the generators into a finite torus group.

        :param cap: Closure cap overriding the file's own cap
        :type cap: Optional[int]
        :returns: Generated group
        :rtype: FiniteTorusGroup
        """
        return close_group(self.to_gram(), self.to_generators(), cap if cap is not None else self.cap)

    @classmethod
    def from_json(cls, text: Union[str, bytes]) -> "GroupSpecFile":
        """Parse a specification from JSON text.

        :raises SpecParseError: If the text is not valid JSON or fails validation
        """
        try:
            return cls.model_validate(json.loads(text))
        except (json.JSONDecodeError, ValidationError) as e:
            raise SpecParseError(f"invalid group specification: {e}")

    @classmethod
    def from_path(cls, path: Union[str, Path]) -> "GroupSpecFile":
        """Read and parse a specification file.

        :raises SpecParseError: If the file cannot be read or parsed
        """
        try:
            text = Path(path).read_text(encoding="utf-8")
        except OSError as e:
            raise SpecParseError(f"cannot read {path}: {e}")
        return cls.from_json(text)

    @classmethod
    def from_group(cls, G: FiniteTorusGroup) -> "GroupSpecFile":
        """Specification listing every element of ``G`` as a generator."""
        gram = [[format_rational(x) for x in row] for row in G.gram.rows()]
        return cls(gram=gram, generators=[GeneratorSpec.from_map(g) for g in G if g != AffineTorusMap.identity()])
