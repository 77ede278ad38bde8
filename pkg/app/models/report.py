"""Report models.

This module defines the Pydantic schema of the JSON reports written by
the command-line front end. Every rational is serialized as a ``"p/q"``
string and fields are declared in output order, so identical inputs
produce byte-identical reports.
"""
from typing import Dict, List, Optional, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from app import __version__
from app.bundleclass import ClassificationReport
from app.canon import CanonicalClass, Conjugator, Glide, canonical_family, get_row
from app.cells import Census, OneDimensionalCheck, TilingCertificate
from app.config import settings
from app.exactgeom import LatticeShape, Mat2
from app.isotropy import CountingReport, GoldenDiff, IsotropyReport
from app.utils.rationals import RationalStr


class ToolInfo(BaseModel):
    """Tool and schema version metadata."""

    name: str = "torus-bundles"
    version: str = __version__
    schema_version: str = Field(default_factory=lambda: settings.schema_version)


class ConjugatorSection(BaseModel):
    """Affine map ``x ↦ P x + c`` carrying the input group to the canonical one."""

    linear: List[List[RationalStr]]
    translation: Tuple[RationalStr, RationalStr]

    @classmethod
    def from_map(cls, eta: Conjugator) -> "ConjugatorSection":
        return cls(linear=[list(row) for row in eta.linear.rows()], translation=eta.translation.as_tuple())


class CanonicalClassSection(BaseModel):
    """Canonical class of a group and, for classified inputs, the conjugator."""

    family_row: str
    canonical_family: str
    point_group: str
    lambda_t_shape: str
    sublattice: List[List[RationalStr]]
    glide: str
    m1: int
    m2: int
    parameterized: bool
    group_order: Optional[int] = None
    conjugator: Optional[ConjugatorSection] = None

    @classmethod
    def from_class(cls, cc: CanonicalClass, conjugator: Optional[Conjugator] = None,
                   group_order: Optional[int] = None) -> "CanonicalClassSection":
        return cls(
            family_row=cc.family_row,
            canonical_family=canonical_family(cc.family_row),
            point_group=str(cc.point_group),
            lambda_t_shape=cc.lambda_t_shape.value,
            sublattice=[list(row) for row in cc.sublattice.rows()],
            glide=cc.glide.value,
            m1=cc.m1,
            m2=cc.m2,
            parameterized=cc.parameterized,
            group_order=group_order,
            conjugator=ConjugatorSection.from_map(conjugator) if conjugator is not None else None,
        )

    def to_class(self) -> CanonicalClass:
        """Re-instantiate the canonical class described by this section."""
        row = get_row(self.family_row)
        return CanonicalClass(
            row.row_id,
            row.label,
            LatticeShape(self.lambda_t_shape),
            Mat2.of(self.sublattice),
            Glide(self.glide),
        )


class DomainSection(BaseModel):
    """Tiling and one-dimensional fundamental domain checks."""

    tiling_ok: bool
    tile_count: int
    area_sum: RationalStr
    translates_checked: int
    covering: bool
    minimal: bool
    injective: bool
    vertex_collisions: List[Tuple[int, int]]
    vertices_distinct: bool

    @classmethod
    def from_checks(cls, tiling: TilingCertificate, domain: OneDimensionalCheck) -> "DomainSection":
        return cls(
            tiling_ok=tiling.ok,
            tile_count=tiling.tile_count,
            area_sum=tiling.area_sum,
            translates_checked=tiling.translates_checked,
            covering=domain.covering,
            minimal=domain.minimal,
            injective=domain.injective,
            vertex_collisions=list(domain.vertex_collisions),
            vertices_distinct=domain.vertices_distinct,
        )


class CensusSection(BaseModel):
    """Orbit census of the cell structure on the torus."""

    i_r: int
    j_r: int
    vertex_orbits: int
    edge_orbits: int
    faces: int
    torus_vertices: int
    vertex_classes: List[int]
    edge_classes: List[int]
    relations: List[Tuple[int, int]]
    area_ratio: RationalStr
    translations: int
    domain: Optional[DomainSection] = None

    @classmethod
    def from_census(cls, census: Census, domain: Optional[DomainSection] = None) -> "CensusSection":
        return cls(
            i_r=census.i_r,
            j_r=census.j_r,
            vertex_orbits=census.vertex_orbits,
            edge_orbits=census.edge_orbits,
            faces=census.faces,
            torus_vertices=census.torus_vertices,
            vertex_classes=census.vertex_classes,
            edge_classes=census.edge_classes,
            relations=census.relations,
            area_ratio=census.area_ratio,
            translations=census.translations,
            domain=domain,
        )


class CountingSection(BaseModel):
    """Both counting identities and their inputs."""

    translations: int
    area_ratio: RationalStr
    faces: int
    torus_vertices: int
    faces_identity: bool
    vertices_identity: bool

    @classmethod
    def from_report(cls, report: CountingReport) -> "CountingSection":
        return cls(
            translations=report.translations,
            area_ratio=report.area_ratio,
            faces=report.faces,
            torus_vertices=report.torus_vertices,
            faces_identity=report.faces_identity,
            vertices_identity=report.vertices_identity,
        )


class GoldenDiffSection(BaseModel):
    family_row: str
    point_kind: str
    index: int
    expected: str
    computed: str
    status: str
    note: str = ""

    @classmethod
    def from_diff(cls, diff: GoldenDiff) -> "GoldenDiffSection":
        return cls(
            family_row=diff.family_row,
            point_kind=diff.point_kind,
            index=diff.index,
            expected=diff.expected,
            computed=diff.computed,
            status=diff.status,
            note=diff.note,
        )


class IsotropySection(BaseModel):
    """Isotropy labels of the face, vertices, edges and cone lines."""

    face: str
    vertices: List[str]
    edges: List[str]
    edge_interiors: List[str]
    cones: Dict[int, str]
    vertex_relations: List[Tuple[int, int]]
    edge_face_intersections: List[str]
    edge_face_claim: bool
    golden: List[GoldenDiffSection] = Field(default_factory=list)

    @classmethod
    def from_report(cls, report: IsotropyReport, diffs: Optional[List[GoldenDiff]] = None) -> "IsotropySection":
        return cls(
            face=str(report.face_label),
            vertices=[str(x) for x in report.vertex_labels],
            edges=[str(x) for x in report.edge_labels],
            edge_interiors=[str(x) for x in report.edge_interior_labels],
            cones={i: str(x) for i, x in report.cone_labels.items()},
            vertex_relations=report.vertex_relations,
            edge_face_intersections=[str(x) for x in report.edge_face_intersections],
            edge_face_claim=report.edge_face_claim,
            golden=[GoldenDiffSection.from_diff(d) for d in diffs or []],
        )


class BundleSection(BaseModel):
    """Bundle classification shape and invariant tuple counts."""

    theorem_case: str
    tuple_count_by_rank: Dict[int, int]
    fiber_size: Union[int, str]
    chern_modulus: Optional[int] = None
    chern_offset: Optional[str] = None
    notice: str = ""

    @classmethod
    def from_report(cls, report: ClassificationReport) -> "BundleSection":
        return cls(
            theorem_case=report.theorem_case.value,
            tuple_count_by_rank=report.tuple_count_by_rank,
            fiber_size=report.fiber_size,
            chern_modulus=report.chern_modulus,
            chern_offset=report.chern_offset,
            notice=report.notice,
        )


class RowVerification(BaseModel):
    """Verification outcome for one instantiated catalog row."""

    family_row: str
    m1: int
    m2: int
    round_trip: bool
    tiling: bool
    domain_1d: bool
    counting: bool
    edge_face_claim: bool
    mismatches: List[GoldenDiffSection] = Field(default_factory=list)
    flagged: List[GoldenDiffSection] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (self.round_trip and self.tiling and self.domain_1d and self.counting
                and self.edge_face_claim and not self.mismatches)


class VerificationSection(BaseModel):
    rows: List[RowVerification] = Field(default_factory=list)

    @property
    def mismatches(self) -> int:
        return sum(0 if row.ok else 1 for row in self.rows)

    @property
    def flagged(self) -> int:
        return sum(len(row.flagged) for row in self.rows)


class ReportFile(BaseModel):
    """Top-level JSON report written by every command."""

    tool: ToolInfo = Field(default_factory=ToolInfo)
    command: str
    canonical_class: Optional[CanonicalClassSection] = None
    census: Optional[CensusSection] = None
    isotropy: Optional[IsotropySection] = None
    counting: Optional[CountingSection] = None
    bundles: Optional[BundleSection] = None
    verification: Optional[VerificationSection] = None

    model_config = ConfigDict(
        extra="forbid",  #: Reports are closed records
    )

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)
