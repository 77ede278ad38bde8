"""Isotropy module.

This module computes and labels the isotropy subgroups of a canonical
torus group at the face barycenter, the vertices, the edge barycenters,
generic interior edge points and the cone lines [d̄^i, b(P_R)], and
compares them with the shipped golden tables.
"""
from __future__ import annotations

import csv
import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import Dict, List, Optional, Tuple

from app.canon import CanonicalClass, canonical_group
from app.cells import Census, fundamental_domain_1d, fundamental_domain_2d, vertex_edge_census
from app.config import settings
from app.errors import InvalidParams
from app.exactgeom import Vec2Q, lerp
from app.torusgroup import (
    FiniteTorusGroup,
    PointGroupLabel,
    label_matrices,
    lift_fixing,
    stabilizer,
    subgroup,
)

logger = logging.getLogger(__name__)

GOLDEN_TABLES = Path(__file__).parent / "data" / "isotropy_tables.csv"

#: Parameter of the generic interior point of an edge.
INTERIOR_PARAMETER = Fraction(1, 3)


def _label(cc: CanonicalClass, H: FiniteTorusGroup) -> PointGroupLabel:
    return label_matrices((g.matrix for g in H), cc.frame)


def lifted_stabilizer(G: FiniteTorusGroup, base: Vec2Q, points: List[Vec2Q]) -> FiniteTorusGroup:
    """Elements fixing ``[base]`` whose lift through ``base`` fixes every point of ``points`` exactly."""
    kept = []
    for g in stabilizer(G, base):
        lift = lift_fixing(g, base)
        if all(lift.apply(p) == p for p in points):
            kept.append(g)
    return subgroup(G, kept)


def face_stabilizer(cc: CanonicalClass, G: Optional[FiniteTorusGroup] = None) -> FiniteTorusGroup:
    G = G or canonical_group(cc)
    return stabilizer(G, fundamental_domain_2d(cc).barycenter())


def face_isotropy(cc: CanonicalClass) -> PointGroupLabel:
    """Label of R_{b(f)}, the stabilizer of the barycenter of P_R.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Isotropy label in the canonical frame
    :rtype: PointGroupLabel
    """
    return _label(cc, face_stabilizer(cc))


def vertex_isotropy(cc: CanonicalClass) -> Tuple[List[PointGroupLabel], List[Tuple[int, int]]]:
    """Labels of R_{v^i} for every vertex of P_R and the relations v^i ∼ v^k.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Per-vertex labels and the orbit relations
    :rtype: Tuple[List[PointGroupLabel], List[Tuple[int, int]]]
    """
    G = canonical_group(cc)
    labels = [_label(cc, stabilizer(G, v)) for v in fundamental_domain_2d(cc).vertices]
    return labels, vertex_edge_census(cc).relations


def edge_stabilizer(cc: CanonicalClass, k: int, G: Optional[FiniteTorusGroup] = None) -> FiniteTorusGroup:
    G = G or canonical_group(cc)
    a, b = fundamental_domain_2d(cc).edges()[k]
    return stabilizer(G, lerp(a, b, Fraction(1, 2)))


def edge_isotropy(cc: CanonicalClass) -> List[PointGroupLabel]:
    """Labels of R_{b(e^i)} for every edge of P_R."""
    G = canonical_group(cc)
    count = len(fundamental_domain_2d(cc))
    return [_label(cc, edge_stabilizer(cc, k, G)) for k in range(count)]


def edge_interior_stabilizer(cc: CanonicalClass, k: int, G: Optional[FiniteTorusGroup] = None) -> FiniteTorusGroup:
    """R_{|e^k|}: elements fixing the edge e^k pointwise in the lifted complex."""
    G = G or canonical_group(cc)
    a, b = fundamental_domain_2d(cc).edges()[k]
    return lifted_stabilizer(G, lerp(a, b, INTERIOR_PARAMETER), [a, b])


def edge_interior_isotropy(cc: CanonicalClass) -> List[PointGroupLabel]:
    """Labels of R_{|e^i|}, the stabilizers of generic interior edge points."""
    G = canonical_group(cc)
    count = len(fundamental_domain_2d(cc))
    return [_label(cc, edge_interior_stabilizer(cc, k, G)) for k in range(count)]


def cone_stabilizer(cc: CanonicalClass, index: int, G: Optional[FiniteTorusGroup] = None) -> FiniteTorusGroup:
    """R_{C(d̄^i)}: face stabilizer elements whose lift also fixes d̄^i."""
    G = G or canonical_group(cc)
    path = fundamental_domain_1d(cc)
    return lifted_stabilizer(G, path.face.point, [path.point(index).point])


def cone_isotropy(cc: CanonicalClass) -> Dict[int, PointGroupLabel]:
    """Labels of the cone stabilizers over the index window I_R.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Map from marked index to label
    :rtype: Dict[int, PointGroupLabel]
    """
    G = canonical_group(cc)
    path = fundamental_domain_1d(cc)
    return {i: _label(cc, cone_stabilizer(cc, i, G)) for i in path.window}


def edge_face_intersections(cc: CanonicalClass) -> List[PointGroupLabel]:
    """R_{b(e^i)} ∩ R_{b(f)} on the lifted complex, per edge."""
    G = canonical_group(cc)
    polygon = fundamental_domain_2d(cc)
    centre = polygon.barycenter()
    return [
        _label(cc, lifted_stabilizer(G, centre, [lerp(a, b, Fraction(1, 2))]))
        for a, b in polygon.edges()
    ]


@dataclass
class CountingReport:
    """Both counting identities relating |R_t| to the face and vertex counts."""

    translations: int
    area_ratio: Fraction
    faces: int
    torus_vertices: int
    i_r: int
    j_r: int
    faces_identity: bool
    vertices_identity: bool

    @property
    def ok(self) -> bool:
        return self.faces_identity and self.vertices_identity


def verify_counting(cc: CanonicalClass, census: Optional[Census] = None) -> CountingReport:
    """Evaluate |R_t| = ratio·|B| and |R_t| = ratio·(j_R/i_R)·|V|.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Inputs and outcome of both identities
    :rtype: CountingReport
    """
    c = census or vertex_edge_census(cc)
    return CountingReport(
        translations=c.translations,
        area_ratio=c.area_ratio,
        faces=c.faces,
        torus_vertices=c.torus_vertices,
        i_r=c.i_r,
        j_r=c.j_r,
        faces_identity=c.faces_identity,
        vertices_identity=c.vertices_identity,
    )


@dataclass
class IsotropyReport:
    """All isotropy labels of one canonical class."""

    family_row: str
    face_label: PointGroupLabel
    vertex_labels: List[PointGroupLabel]
    edge_labels: List[PointGroupLabel]
    edge_interior_labels: List[PointGroupLabel]
    cone_labels: Dict[int, PointGroupLabel]
    vertex_relations: List[Tuple[int, int]]
    edge_face_intersections: List[PointGroupLabel]
    census: Census
    counting: CountingReport

    @property
    def edge_face_claim(self) -> bool:
        """Edge and face stabilizers meet trivially, except for the D_6 row."""
        if self.family_row == "D_6":
            return True
        return all(label.order == 1 for label in self.edge_face_intersections)


def isotropy_report(cc: CanonicalClass) -> IsotropyReport:
    """Compute every isotropy label and the counting identities of ``cc``.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Assembled report
    :rtype: IsotropyReport
    """
    census = vertex_edge_census(cc)
    vertices, relations = vertex_isotropy(cc)
    report = IsotropyReport(
        family_row=cc.family_row,
        face_label=face_isotropy(cc),
        vertex_labels=vertices,
        edge_labels=edge_isotropy(cc),
        edge_interior_labels=edge_interior_isotropy(cc),
        cone_labels=cone_isotropy(cc),
        vertex_relations=relations,
        edge_face_intersections=edge_face_intersections(cc),
        census=census,
        counting=verify_counting(cc, census),
    )
    logger.debug(f"Isotropy of {cc.family_row}: face {report.face_label}, vertices {[str(v) for v in vertices]}")
    return report


# Golden tables


@dataclass(frozen=True)
class GoldenRow:
    family_row: str
    point_kind: str
    index: int
    label: str
    published_label: str
    note: str = ""


@dataclass(frozen=True)
class GoldenDiff:
    """A golden-table entry that disagrees with the computation or carries a provenance note."""

    family_row: str
    point_kind: str
    index: int
    expected: str
    computed: str
    status: str  #: "mismatch" or "flagged"
    note: str = ""


@lru_cache(maxsize=4)
def _load_golden(path: str) -> Tuple[GoldenRow, ...]:
    with open(path, newline="", encoding="utf-8") as handle:
        reader = csv.DictReader(handle)
        return tuple(
            GoldenRow(r["family_row"], r["point_kind"], int(r["index"]), r["label"], r["published_label"], r.get("note") or "")
            for r in reader
        )


def golden_rows(family_row: Optional[str] = None) -> List[GoldenRow]:
    """Rows of the golden isotropy tables, optionally for one family row."""
    path = settings.golden_tables_path or str(GOLDEN_TABLES)
    rows = _load_golden(path)
    return [r for r in rows if family_row is None or r.family_row == family_row]


_LABEL_KINDS = ("face", "vertex", "edge", "edge_interior")


def _computed_values(report: IsotropyReport) -> Dict[Tuple[str, int], object]:
    c = report.census
    values: Dict[Tuple[str, int], object] = {
        ("face", -1): report.face_label,
        ("area", -1): c.area_ratio,
        ("vertex_orbits", -1): c.vertex_orbits,
        ("edge_orbits", -1): c.edge_orbits,
    }
    for k, label in enumerate(report.vertex_labels):
        values[("vertex", k)] = label
    for k, cls in enumerate(c.vertex_classes):
        values[("vertex_class", k)] = cls
    for k, label in enumerate(report.edge_labels):
        values[("edge", k)] = label
    for k, label in enumerate(report.edge_interior_labels):
        values[("edge_interior", k)] = label
    return values


def _matches(kind: str, expected: str, computed: object) -> bool:
    if kind in _LABEL_KINDS:
        return PointGroupLabel.parse(expected) == computed
    return Fraction(expected) == Fraction(computed)


def compare_with_golden(cc: CanonicalClass, report: Optional[IsotropyReport] = None) -> List[GoldenDiff]:
    """Diff computed isotropy data against the golden tables.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :param report: Precomputed report for ``cc``
    :type report: Optional[IsotropyReport]
    :returns: Mismatches and flagged (annotated) entries
    :rtype: List[GoldenDiff]
    :raises InvalidParams: If the golden tables have no rows for the family
    """
    expected = golden_rows(cc.family_row)
    if not expected:
        raise InvalidParams(f"golden tables have no entries for row {cc.family_row}")
    report = report or isotropy_report(cc)
    values = _computed_values(report)
    diffs: List[GoldenDiff] = []
    for row in expected:
        key = (row.point_kind, row.index)
        if key not in values:
            diffs.append(GoldenDiff(row.family_row, row.point_kind, row.index, row.label, "<missing>", "mismatch"))
            continue
        computed = values[key]
        if not _matches(row.point_kind, row.label, computed):
            diffs.append(GoldenDiff(row.family_row, row.point_kind, row.index, row.label, str(computed), "mismatch", row.note))
        elif not row.note and not _matches(row.point_kind, row.published_label, computed):
            diffs.append(GoldenDiff(row.family_row, row.point_kind, row.index, row.published_label, str(computed), "mismatch"))
        elif row.note:
            logger.warning(f"{row.family_row} {row.point_kind} {row.index}: oracle gives {computed}; {row.note}")
            diffs.append(GoldenDiff(row.family_row, row.point_kind, row.index, row.published_label, str(computed), "flagged", row.note))
    return diffs
