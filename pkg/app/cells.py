"""Fundamental domains and cell census.

This module provides the two-dimensional fundamental domain P_R of each
catalog row, the marked one-dimensional fundamental domain D̄_R on its
boundary, exact tiling and covering checks, and the vertex/edge/face
orbit census of the induced cell structure on the torus.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import floor
from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from app.canon import CanonicalClass, canonical_group
from app.config import settings
from app.errors import InvalidParams, TilingFailure
from app.exactgeom import (
    IDENTITY,
    Polygon,
    Vec2Q,
    lerp,
    polygon_area,
    polygons_interior_disjoint,
)
from app.torusgroup import FiniteTorusGroup, orbit, stabilizer

logger = logging.getLogger(__name__)

_H, _Q, _T = Fraction(1, 2), Fraction(1, 4), Fraction(1, 3)


def _v(x, y) -> Vec2Q:
    return Vec2Q(Fraction(x), Fraction(y))


_SQUARE_QUARTER = (_v(0, 0), _v(0, _H), _v(_H, _H), _v(_H, 0))
_HALF_STRIP = (_v(0, 0), _v(0, _H), _v(1, _H), _v(1, 0))
_TILTED = (_v(0, 0), _v(-_Q, _Q), _v(_Q, 3 * _Q), _v(_H, _H))
_TRIANGLE = (_v(0, 0), _v(0, 1), _v(1, 0))
_HEXAGON = (_v(0, 0), _v(-_T, 2 * _T), _v(0, 1), _v(2 * _T, 2 * _T), _v(1, 0), _v(2 * _T, -_T))
_DIAMOND = (_v(0, 0), _v(-_H, _H), _v(0, 1), _v(_H, _H))

#: Clockwise vertices v^0, v^1, ... of P_R in frame coordinates.
DOMAIN_VERTICES: Dict[str, Tuple[Vec2Q, ...]] = {
    "Z_2": _HALF_STRIP,
    "D_{2,2}": _TILTED,
    "D_2/sq": _SQUARE_QUARTER,
    "Z_4": _SQUARE_QUARTER,
    "D_4": _SQUARE_QUARTER,
    "D_2/tri": (_v(0, 0), _v(-_H, 1), _v(-_Q, 1), _v(_Q, 0)),
    "D_{2,3}": _TILTED,
    "D_3": _TRIANGLE,
    "Z_6": _TRIANGLE,
    "D_6": _TRIANGLE,
    "Z_3": _HEXAGON,
    "D_{3,2}": _HEXAGON,
    "id": (_v(0, 0), _v(0, 1), _v(1, 1), _v(1, 0)),
    "D_1/0": _HALF_STRIP,
    "D_{1,4}/0": _DIAMOND,
    "D_1/l0": (_v(_Q, -_H), _v(_Q, _H), _v(3 * _Q, _H), _v(3 * _Q, -_H)),
    "D_{1,4}/l0": (_v(_H, 0), _v(0, _H), _v(_H, 1), _v(1, _H)),
}

#: Marked points of D̄_R as ("v", k) for v̄^k or ("b", k) for b(ē^k), with the first index of I_R.
DOMAIN_PATHS: Dict[str, Tuple[int, Tuple[Tuple[str, int], ...]]] = {
    "Z_2": (1, (("b", 1), ("v", 2), ("v", 3), ("b", 3))),
    "D_{2,2}": (1, (("b", 1), ("v", 2), ("v", 3), ("v", 0), ("v", 1))),
    "D_2/sq": (0, (("v", 0), ("v", 1), ("v", 2), ("v", 3), ("v", 0))),
    "Z_4": (0, (("v", 0), ("v", 1), ("v", 2))),
    "D_4": (0, (("v", 0), ("v", 1), ("v", 2))),
    "D_2/tri": (2, (("b", 2), ("v", 3), ("v", 0), ("v", 1), ("v", 2))),
    "D_{2,3}": (1, (("b", 1), ("v", 2), ("v", 3), ("v", 0), ("v", 1))),
    "D_3": (2, (("b", 2), ("v", 0), ("b", 0))),
    "Z_6": (0, (("v", 0), ("b", 0))),
    "D_6": (0, (("v", 0), ("b", 0))),
    "Z_3": (0, (("v", 0), ("v", 1))),
    "D_{3,2}": (0, (("v", 0), ("v", 1))),
    "id": (2, (("v", 2), ("v", 3), ("v", 0))),
    "D_1/0": (1, (("v", 1), ("v", 2), ("v", 3), ("v", 0))),
    "D_{1,4}/0": (1, (("v", 1), ("v", 2), ("v", 3), ("v", 0))),
    "D_1/l0": (2, (("v", 2), ("v", 3), ("v", 0))),
    "D_{1,4}/l0": (1, (("v", 1), ("v", 2), ("v", 3), ("v", 0))),
}


@dataclass(frozen=True)
class MarkedPoint:
    """A marked point d̄^i: a vertex, an edge barycenter or (i = -1) the face barycenter."""

    index: int
    kind: str  #: "vertex", "edge" or "face"
    ref: int  #: vertex or edge number; -1 for the face
    point: Vec2Q  #: Λ-coordinates

    @property
    def name(self) -> str:
        if self.kind == "vertex":
            return f"v^{self.ref}"
        if self.kind == "edge":
            return f"b(e^{self.ref})"
        return "b(f)"


@dataclass(frozen=True)
class PathSegment:
    """Part of D̄_R between d̄^index and d̄^(index+1), on edge ``edge`` with parameters ``start..end``."""

    index: int
    edge: int
    start: Fraction
    end: Fraction


@dataclass(frozen=True)
class MarkedPath:
    """The one-dimensional fundamental domain with its index window I_R."""

    points: Tuple[MarkedPoint, ...]
    face: MarkedPoint
    segments: Tuple[PathSegment, ...]

    @property
    def window(self) -> Tuple[int, ...]:
        """I_R."""
        return tuple(p.index for p in self.points)

    @property
    def window_minus(self) -> Tuple[int, ...]:
        """I_R without its maximum."""
        return self.window[:-1]

    @property
    def window_plus(self) -> Tuple[int, ...]:
        """I_R together with the face index -1."""
        return (-1,) + self.window

    def point(self, index: int) -> MarkedPoint:
        if index == -1:
            return self.face
        return self.points[index - self.points[0].index]


@dataclass
class CellStructure:
    """Cells of P_R and the marked path D̄_R for one canonical class."""

    cc: CanonicalClass
    p_r: Polygon
    barycenter: Vec2Q
    edges: List[Tuple[Vec2Q, Vec2Q]]
    edge_barycenters: List[Vec2Q]
    d_path: MarkedPath
    vertex_orbit_relations: List[Tuple[int, int]] = field(default_factory=list)

    @property
    def i_r(self) -> int:
        return len(self.p_r)

    def edge_point(self, k: int, t: Fraction) -> Vec2Q:
        a, b = self.edges[k % self.i_r]
        return lerp(a, b, t)


def _row_key(cc: CanonicalClass) -> str:
    if cc.family_row not in DOMAIN_VERTICES:
        raise InvalidParams(f"no fundamental domain for row {cc.family_row}")
    return cc.family_row


def fundamental_domain_2d(cc: CanonicalClass) -> Polygon:
    """The polygon P_R in Λ-coordinates, vertices clockwise from v̄^0.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Fundamental polygon
    :rtype: Polygon
    """
    inv = cc.sublattice.inverse()
    return Polygon.of(inv @ v for v in DOMAIN_VERTICES[_row_key(cc)])


def _marked_param(kind: str, ref: int, edge: int) -> Fraction:
    if kind == "b":
        return Fraction(1, 2)
    return Fraction(0) if ref == edge else Fraction(1)


def fundamental_domain_1d(cc: CanonicalClass) -> MarkedPath:
    """Marked points d̄^i, i ∈ I_R, and the face point d̄^{-1} = b(P_R).

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Marked path on the boundary of P_R
    :rtype: MarkedPath
    """
    polygon = fundamental_domain_2d(cc)
    count = len(polygon)
    edges = polygon.edges()
    i0, specs = DOMAIN_PATHS[_row_key(cc)]
    points = []
    for offset, (kind, ref) in enumerate(specs):
        if kind == "v":
            points.append(MarkedPoint(i0 + offset, "vertex", ref, polygon.vertices[ref]))
        else:
            a, b = edges[ref]
            points.append(MarkedPoint(i0 + offset, "edge", ref, lerp(a, b, Fraction(1, 2))))
    segments = []
    for offset in range(len(specs) - 1):
        index = i0 + offset
        edge = index % count
        start = _marked_param(*specs[offset], edge)
        kind, ref = specs[offset + 1]
        end = Fraction(1, 2) if kind == "b" else (Fraction(1) if ref == (edge + 1) % count else Fraction(0))
        segments.append(PathSegment(index, edge, start, end))
    face = MarkedPoint(-1, "face", -1, polygon.barycenter())
    return MarkedPath(tuple(points), face, tuple(segments))


def cell_structure(cc: CanonicalClass) -> CellStructure:
    polygon = fundamental_domain_2d(cc)
    edges = polygon.edges()
    census = vertex_edge_census(cc)
    return CellStructure(
        cc=cc,
        p_r=polygon,
        barycenter=polygon.barycenter(),
        edges=edges,
        edge_barycenters=[lerp(a, b, Fraction(1, 2)) for a, b in edges],
        d_path=fundamental_domain_1d(cc),
        vertex_orbit_relations=census.relations,
    )


# Tiling


def _tile_key(polygon: Polygon) -> Tuple[Tuple[Fraction, Fraction], ...]:
    anchor = min(polygon.vertices)
    shift = Vec2Q(Fraction(floor(anchor.x)), Fraction(floor(anchor.y)))
    return tuple(sorted((v - shift).as_tuple() for v in polygon.vertices))


def tiles(cc: CanonicalClass, group: Optional[FiniteTorusGroup] = None) -> List[Polygon]:
    """Distinct images g(P_R) modulo Λ, each anchored near the unit cell."""
    G = group or canonical_group(cc)
    base = fundamental_domain_2d(cc)
    found: Dict[Tuple, Polygon] = {}
    for g in G:
        image = base.map(g.matrix, g.translation)
        anchor = min(image.vertices)
        image = image.translate(Vec2Q(Fraction(-floor(anchor.x)), Fraction(-floor(anchor.y))))
        found.setdefault(_tile_key(image), image)
    return list(found.values())


@dataclass
class TilingCertificate:
    """Outcome of the tiling check; truthy iff the tiles cover the torus without overlap."""

    ok: bool
    tile_count: int
    area_sum: Fraction
    translates_checked: int
    tiles: List[Polygon] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.ok


def _lattice_shifts(p: Polygon, q: Polygon) -> List[Vec2Q]:
    """Integer shifts λ for which the bounding boxes of p and q + λ meet."""
    px0, py0, px1, py1 = p.bounds()
    qx0, qy0, qx1, qy1 = q.bounds()
    xs = range(floor(px0 - qx1), floor(px1 - qx0) + 1)
    ys = range(floor(py0 - qy1), floor(py1 - qy0) + 1)
    return [Vec2Q(Fraction(i), Fraction(j)) for i in xs for j in ys]


def verify_tiling(cc: CanonicalClass) -> TilingCertificate:
    """Check that the images of P_R tile R²/Λ.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Certificate listing the tiles
    :rtype: TilingCertificate
    :raises TilingFailure: If two tiles overlap or the areas do not add up
    """
    G = canonical_group(cc)
    pieces = tiles(cc, G)
    area_sum = sum((polygon_area(t, G.gram) for t in pieces), Fraction(0))
    if area_sum != 1:
        raise TilingFailure(f"tiles of row {cc.family_row} have total area {area_sum}, expected 1")
    checked = 0
    for a, p in enumerate(pieces):
        for b in range(a, len(pieces)):
            q = pieces[b]
            for shift in _lattice_shifts(p, q):
                if a == b and shift.is_zero():
                    continue
                checked += 1
                if not polygons_interior_disjoint(p, q.translate(shift)):
                    raise TilingFailure(f"tiles {p.vertices} and {q.vertices} + {shift} overlap in row {cc.family_row}")
    logger.info(f"Row {cc.family_row}: {len(pieces)} tiles, {checked} translates checked")
    return TilingCertificate(True, len(pieces), area_sum, checked, pieces)


# One-dimensional domain


@dataclass
class OneDimensionalCheck:
    """Outcome of the covering and minimality checks of D̄_R; truthy iff all pass.

    ``vertex_collisions`` lists pairs of distinct vertices of D̄_R with
    the same image on R²/Λ. They fail the check only when
    ``distinct_vertices_required`` is set (point group other than id, D_1
    and D_{1,4}).
    """

    covering: bool
    minimal: bool
    injective: bool
    vertex_collisions: List[Tuple[int, int]] = field(default_factory=list)
    distinct_vertices_required: bool = False

    @property
    def vertices_distinct(self) -> bool:
        return not (self.distinct_vertices_required and self.vertex_collisions)

    @property
    def ok(self) -> bool:
        return self.covering and self.minimal and self.injective and self.vertices_distinct

    def __bool__(self) -> bool:
        return self.ok


def _segment_samples(cells_path: MarkedPath, polygon: Polygon, denominator: int) -> Dict[int, List[Vec2Q]]:
    edges = polygon.edges()
    out: Dict[int, List[Vec2Q]] = {}
    for seg in cells_path.segments:
        lo, hi = sorted((seg.start, seg.end))
        a, b = edges[seg.edge]
        out[seg.index] = [lerp(a, b, Fraction(k, denominator))
                          for k in range(denominator + 1) if lo <= Fraction(k, denominator) <= hi]
    return out


def _orbit_union(G: FiniteTorusGroup, points: Set[Vec2Q]) -> Set[Vec2Q]:
    return {g.apply(x) for x in points for g in G}


def verify_1d_domain(cc: CanonicalClass, denominator: Optional[int] = None) -> OneDimensionalCheck:
    """Check that D̄_R is a minimal one-dimensional fundamental domain.

    Covering is tested on the sample grid ``k / denominator`` of every edge
    of P_R; minimality by dropping the interior samples of one segment at
    a time; injectivity of the projection on the non-vertex samples.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :param denominator: Sampling denominator (defaults to the configured value)
    :type denominator: Optional[int]
    :returns: Per-check outcome
    :rtype: OneDimensionalCheck
    """
    n = denominator or settings.edge_sample_denominator
    G = canonical_group(cc)
    polygon = fundamental_domain_2d(cc)
    path = fundamental_domain_1d(cc)
    skeleton = {lerp(a, b, Fraction(k, n)).mod1() for a, b in polygon.edges() for k in range(n + 1)}
    per_segment = _segment_samples(path, polygon, n)
    samples = {x for pts in per_segment.values() for x in pts}
    covering = skeleton <= _orbit_union(G, samples)

    minimal = True
    for index, pts in per_segment.items():
        interior = set(pts[1:-1])
        rest = {x for other, others in per_segment.items() if other != index for x in others}
        remaining = (samples - interior) | (rest & interior)
        if skeleton <= _orbit_union(G, remaining):
            minimal = False
            logger.warning(f"Row {cc.family_row}: segment {index} of the marked path is redundant")

    # marked points of D̄_R may be identified with each other; only the open segments must inject
    excluded = set(polygon.vertices) | {p.point for p in path.points}
    seen: Dict[FrozenSet[Vec2Q], Vec2Q] = {}
    injective = True
    for x in sorted(samples - excluded):
        key = frozenset(orbit(G, x))
        if key in seen and seen[key] != x:
            injective = False
        seen.setdefault(key, x)

    collisions = []
    marked = sorted({p.ref for p in path.points if p.kind == "vertex"})
    for i, a in enumerate(marked):
        for b in marked[i + 1:]:
            if (polygon.vertices[b] - polygon.vertices[a]).is_integral():
                collisions.append((a, b))
    required = not (cc.point_group.kind == "trivial" or cc.parameterized)
    if required and collisions:
        logger.warning(f"Row {cc.family_row}: vertices {collisions} of D̄_R meet on the torus")
    return OneDimensionalCheck(covering, minimal, injective, collisions, required)


# Census


@dataclass
class Census:
    """Orbit counts of the cell structure induced on the torus."""

    i_r: int  #: Number of vertices of P_R
    j_r: int  #: Polygon corners over one torus vertex
    vertex_orbits: int  #: |V/R|
    edge_orbits: int  #: |E/R|
    faces: int  #: |B|, the face barycenters on the torus
    torus_vertices: int  #: |V|
    vertex_classes: List[int]
    edge_classes: List[int]
    relations: List[Tuple[int, int]]
    j_values: List[Fraction]
    area_ratio: Fraction  #: Area(P_R) / Area(Λ_t)
    translations: int  #: |R_t|

    @property
    def faces_identity(self) -> bool:
        """|R_t| = (Area(P_R)/Area(Λ_t)) |B|."""
        return self.translations == self.area_ratio * self.faces

    @property
    def vertices_identity(self) -> bool:
        """|R_t| = (Area(P_R)/Area(Λ_t)) (j_R/i_R) |V|."""
        return self.translations == self.area_ratio * Fraction(self.j_r, self.i_r) * self.torus_vertices


def _classes(G: FiniteTorusGroup, points: Sequence[Vec2Q]) -> List[int]:
    """For each point, the smallest index of a point in the same orbit."""
    orbits = [orbit(G, p) for p in points]
    return [next(k for k in range(len(points)) if points[i].mod1() in orbits[k]) for i in range(len(points))]


def vertex_edge_census(cc: CanonicalClass) -> Census:
    """Count vertices, edges and faces of the induced cell structure.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :returns: Counts, orbit classes and the relations v^i ∼ v^k
    :rtype: Census
    """
    G = canonical_group(cc)
    polygon = fundamental_domain_2d(cc)
    vertices = list(polygon.vertices)
    mids = [lerp(a, b, Fraction(1, 2)) for a, b in polygon.edges()]
    vertex_classes = _classes(G, vertices)
    edge_classes = _classes(G, mids)
    relations = [(i, k) for k in range(len(vertices)) for i in range(k) if vertex_classes[i] == vertex_classes[k]]
    relations.sort()

    face_stab = len(stabilizer(G, polygon.barycenter()))
    j_values = []
    for target in vertices:
        goal = target.mod1()
        hits = sum(1 for v in vertices for g in G if g.apply(v) == goal)
        j_values.append(Fraction(hits, face_stab))
    if len(set(j_values)) != 1 or j_values[0].denominator != 1:
        raise TilingFailure(f"row {cc.family_row}: corner counts {j_values} are not constant")

    torus_vertices = set()
    for v in vertices:
        torus_vertices |= orbit(G, v)
    area_ratio = polygon_area(polygon, G.gram) * abs(cc.sublattice.det())
    return Census(
        i_r=len(vertices),
        j_r=int(j_values[0]),
        vertex_orbits=len(set(vertex_classes)),
        edge_orbits=len(set(edge_classes)),
        faces=len(orbit(G, polygon.barycenter())),
        torus_vertices=len(torus_vertices),
        vertex_classes=vertex_classes,
        edge_classes=edge_classes,
        relations=relations,
        j_values=j_values,
        area_ratio=area_ratio,
        translations=len(G.translations),
    )


def edge_pointwise_fixed(cc: CanonicalClass, k: int) -> bool:
    """Whether the stabilizer of b(e^k) fixes the edge e^k pointwise."""
    G = canonical_group(cc)
    a, b = fundamental_domain_2d(cc).edges()[k]
    stab = stabilizer(G, lerp(a, b, Fraction(1, 2)))
    probes = (lerp(a, b, Fraction(1, 3)), lerp(a, b, Fraction(2, 3)))
    return all(g.fixes(x) for g in stab for x in probes)


def has_half_turn(cc: CanonicalClass, k: int) -> bool:
    """Whether -I occurs in the linearization of the stabilizer of b(e^k)."""
    G = canonical_group(cc)
    a, b = fundamental_domain_2d(cc).edges()[k]
    return any(g.matrix == -IDENTITY for g in stabilizer(G, lerp(a, b, Fraction(1, 2))))
