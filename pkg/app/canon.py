"""Canonical classification of finite torus groups.

This module holds the catalog of canonical family rows (finite subgroups
of Aff(R²/Λ) up to affine conjugacy), builds the explicit group of a row,
and classifies an arbitrary finite group into a row together with the
affine map conjugating it onto the canonical group.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import floor
from typing import Dict, FrozenSet, Iterator, List, Optional, Sequence, Tuple

from app.config import settings
from app.errors import InvalidParams, Unsupported
from app.exactgeom import (
    IDENTITY,
    ORIGIN,
    Gram,
    LatticeShape,
    Mat2,
    Vec2Q,
    ext_gcd,
    gauss_reduce,
    hermite_normal_form,
    lattice_shape,
)
from app.torusgroup import (
    AffineMap,
    AffineTorusMap,
    FiniteTorusGroup,
    LatticeFrame,
    PointGroupLabel,
    close_group,
    conjugate_group,
    matrix_order,
    translation_data,
)

logger = logging.getLogger(__name__)

#: Conjugating map onto a canonical group: ``x -> P x + c``.
Conjugator = AffineMap


class Glide(str, Enum):
    """Translation part of the reflection in the D_1 and D_{1,4} rows."""

    NONE = "None"  #: A c + c = 0
    SHIFT = "ShiftGlide"  #: A c + c = l0


@dataclass(frozen=True)
class FamilyRow:
    """One row of the catalog of finite torus groups.

    ``glide_shift`` is the frame-coordinate translation attached to every
    reflection; ``alias_of`` names the row this one is conjugate to.
    """

    row_id: str
    label: PointGroupLabel
    shape: LatticeShape
    glide: Glide = Glide.NONE
    glide_shift: Vec2Q = ORIGIN
    alias_of: Optional[str] = None

    @property
    def frame(self) -> LatticeFrame:
        return LatticeFrame(self.shape)

    @property
    def point_set(self) -> FrozenSet[Mat2]:
        return self.frame.frame_group(self.label)


_SQ, _TRI = LatticeShape.SQUARE, LatticeShape.TRIANGULAR
_D = PointGroupLabel.dihedral
_DL = PointGroupLabel.dihedral_l
_Z = PointGroupLabel.cyclic
_HALF = Fraction(1, 2)

ROWS: Tuple[FamilyRow, ...] = (
    FamilyRow("Z_2", _Z(2), _SQ),
    FamilyRow("D_{2,2}", _DL(2, 2), _SQ),
    FamilyRow("D_2/sq", _D(2, Fraction(0)), _SQ),
    FamilyRow("Z_4", _Z(4), _SQ),
    FamilyRow("D_4", _D(4, Fraction(0)), _SQ),
    FamilyRow("D_2/tri", _D(2, Fraction(0)), _TRI),
    FamilyRow("D_{2,3}", _DL(2, 3), _TRI, alias_of="D_2/tri"),
    FamilyRow("D_3", _D(3, Fraction(0)), _TRI),
    FamilyRow("Z_6", _Z(6), _TRI),
    FamilyRow("D_6", _D(6, Fraction(0)), _TRI),
    FamilyRow("Z_3", _Z(3), _TRI),
    FamilyRow("D_{3,2}", _DL(3, 2), _TRI),
    FamilyRow("id", PointGroupLabel.trivial(), _SQ),
    FamilyRow("D_1/0", _D(1, Fraction(0)), _SQ),
    FamilyRow("D_{1,4}/0", _DL(1, 4), _SQ),
    FamilyRow("D_1/l0", _D(1, Fraction(0)), _SQ, Glide.SHIFT, Vec2Q(_HALF, Fraction(0))),
    FamilyRow("D_{1,4}/l0", _DL(1, 4), _SQ, Glide.SHIFT, Vec2Q(_HALF, _HALF), alias_of="D_{1,4}/0"),
)

ROWS_BY_ID: Dict[str, FamilyRow] = {row.row_id: row for row in ROWS}


def get_row(row_id: str) -> FamilyRow:
    try:
        return ROWS_BY_ID[row_id]
    except KeyError:
        raise InvalidParams(f"unknown family row {row_id!r}")


def canonical_family(row_id: str) -> str:
    """Row that ``classify`` reports for groups of row ``row_id``."""
    row = get_row(row_id)
    return row.alias_of or row.row_id


@dataclass(frozen=True)
class CanonicalClass:
    """Normal form of a finite torus group.

    ``sublattice`` holds the basis of Λ in frame coordinates (Hermite form).
    """

    family_row: str
    point_group: PointGroupLabel
    lambda_t_shape: LatticeShape
    sublattice: Mat2 = IDENTITY
    glide: Glide = Glide.NONE

    def __post_init__(self) -> None:
        if self.glide != Glide.NONE and not (self.point_group.kind == "dihedral" and self.point_group.n == 1):
            raise InvalidParams(f"glide {self.glide.value} needs a D_1 or D_(1,4) point group")
        if not self.sublattice.is_integral() or self.sublattice.det() == 0:
            raise InvalidParams(f"sublattice {self.sublattice} is not a full integer lattice")

    @classmethod
    def for_row(cls, row_id: str, m1: int = 1, m2: int = 1, sublattice: Optional[Mat2] = None) -> "CanonicalClass":
        """Class of a catalog row with Λ = ⟨(m1,0), (0,m2)⟩ or an explicit basis."""
        row = get_row(row_id)
        return cls(row.row_id, row.label, row.shape, sublattice or Mat2.diag(m1, m2), row.glide)

    @property
    def row(self) -> FamilyRow:
        return get_row(self.family_row)

    @property
    def frame(self) -> LatticeFrame:
        return LatticeFrame(self.lambda_t_shape, self.sublattice)

    @property
    def is_rectangular(self) -> bool:
        return self.sublattice.b == 0 and self.sublattice.c == 0

    @property
    def m1(self) -> int:
        return int(self.sublattice.a)

    @property
    def m2(self) -> int:
        return int(self.sublattice.d)

    @property
    def parameterized(self) -> bool:
        """D_1-type rows admit any preserved sublattice of the frame."""
        return self.point_group.kind == "dihedral" and self.point_group.n == 1

    def describe(self) -> str:
        lattice = f"({self.m1},{self.m2})" if self.is_rectangular else f"{self.sublattice}"
        return f"{self.family_row} [{self.point_group}, {self.lambda_t_shape.value}, Λ={lattice}, glide={self.glide.value}]"


def _preserves(sublattice: Mat2, matrices: Sequence[Mat2]) -> bool:
    inv = sublattice.inverse()
    return all((inv @ q @ sublattice).is_integral() for q in matrices)


@lru_cache(maxsize=256)
def canonical_group(cc: CanonicalClass, cap: Optional[int] = None) -> FiniteTorusGroup:
    """Build the explicit group of a canonical class.

    :param cc: Canonical class
    :type cc: CanonicalClass
    :param cap: Closure cap
    :type cap: Optional[int]
    :returns: Group generated by Λ_t/Λ and the row's point elements, in Λ-coordinates
    :rtype: FiniteTorusGroup
    :raises InvalidParams: If the sublattice is not preserved by the point group
    """
    row = cc.row
    s = cc.sublattice
    s_inv = s.inverse()
    mats = sorted(row.point_set, key=lambda m: (m.a, m.b, m.c, m.d))
    if not _preserves(s, mats):
        raise InvalidParams(f"sublattice {s} is not preserved by {row.label}")
    gens = [AffineTorusMap.pure_translation(s_inv @ e) for e in (Vec2Q(1, 0), Vec2Q(0, 1))]
    for q in mats:
        shift = row.glide_shift if q.det() == -1 else ORIGIN
        gens.append(AffineTorusMap(s_inv @ q @ s, s_inv @ shift))
    gram = cc.frame.lattice_gram
    return close_group(gram, gens, cap)


def instantiate_rows(rows: Optional[Sequence[FamilyRow]] = None, sizes: Sequence[int] = (1, 2)) -> Iterator[CanonicalClass]:
    """Every catalog row with Λ = diag(m1, m2), skipping unpreserved sublattices."""
    for row in rows if rows is not None else ROWS:
        for m1, m2 in product(sizes, repeat=2):
            s = Mat2.diag(m1, m2)
            if _preserves(s, list(row.point_set)):
                yield CanonicalClass.for_row(row.row_id, m1, m2)


def select_rows(selector: Optional[str]) -> List[FamilyRow]:
    """Rows matching a row id or a point-group display name.

    :raises InvalidParams: If nothing matches
    """
    if not selector:
        return list(ROWS)
    matched = [row for row in ROWS if selector in (row.row_id, row.label.display())]
    if not matched:
        raise InvalidParams(f"no family row matches {selector!r}")
    return matched


# Classification


@dataclass(frozen=True)
class _Cocycle:
    """Point group of G in Λ_t-coordinates with translation classes mod Λ_t."""

    basis: Mat2
    gram_t: Gram
    shifts: Dict[Mat2, Vec2Q]

    @property
    def matrices(self) -> List[Mat2]:
        return sorted(self.shifts, key=lambda m: (m.a, m.b, m.c, m.d))


def _cocycle(G: FiniteTorusGroup) -> _Cocycle:
    basis = G.lambda_t_basis
    inv = basis.inverse()
    shifts: Dict[Mat2, Vec2Q] = {}
    for g in G:
        m = inv @ g.matrix @ basis
        shifts.setdefault(m, (inv @ g.translation).mod1())
    return _Cocycle(basis, G.gram.transform(basis), shifts)


def _recentre_candidates(a0: Mat2, c0: Vec2Q) -> List[Vec2Q]:
    """Fixed points of ``x -> a0 x + c0`` modulo Z²."""
    lin = IDENTITY - a0
    inv = lin.inverse()
    base = -(inv @ c0)
    size = int(abs(lin.det()))
    found = {(base + inv @ Vec2Q(i, j)).mod1() for i in range(size) for j in range(size)}
    return sorted(found)


def _split_shift(cocycle: _Cocycle, rotations: List[Mat2]) -> Vec2Q:
    """Origin shift after which every point matrix carries an integral translation.

    :raises Unsupported: If no rotation centre splits the group
    """
    n = len(rotations)
    a0 = next(m for m in rotations if matrix_order(m) == n)
    for u in _recentre_candidates(a0, cocycle.shifts[a0]):
        if all((c + (IDENTITY - m) @ u).is_integral() for m, c in cocycle.shifts.items()):
            return u
    raise Unsupported("group does not split over its translations (nonsymmorphic type)")


@lru_cache(maxsize=8)
def _unimodular_box(bound: int) -> Tuple[Mat2, ...]:
    rng = range(-bound, bound + 1)
    mats = [Mat2.of([[a, b], [c, d]]) for a, b, c, d in product(rng, repeat=4) if abs(a * d - b * c) == 1]
    return tuple(sorted(mats, key=lambda m: (abs(m.a) + abs(m.b) + abs(m.c) + abs(m.d), m.a, m.b, m.c, m.d)))


def _sublattice_in_frame(frame: Mat2, lattice: Mat2) -> Mat2:
    cols = (frame.inverse() @ lattice).columns()
    return hermite_normal_form((int(v.x), int(v.y)) for v in cols)


def _mat_key(m: Mat2) -> Tuple[Fraction, ...]:
    return (m.a, m.b, m.c, m.d)


def _frame_search(cocycle: _Cocycle, row: FamilyRow, lattice: Mat2, bound: int) -> Optional[Tuple[Mat2, Mat2]]:
    """Best ``(F, S)`` with ``F⁻¹ P_t F`` the row's point set, minimizing the sublattice ``S``."""
    target = row.point_set
    mats = cocycle.matrices
    if len(mats) != len(target):
        return None
    _, reduced = gauss_reduce(cocycle.gram_t)
    best: Optional[Tuple[Tuple, Mat2, Mat2]] = None
    for v in _unimodular_box(bound):
        f = reduced @ v
        f_inv = f.inverse()
        if any(f_inv @ m @ f not in target for m in mats):
            continue
        s = _sublattice_in_frame(f, lattice)
        key = (_mat_key(s), _mat_key(f))
        if best is None or key < best[0]:
            best = (key, f, s)
    if best is None:
        return None
    logger.debug(f"Frame for row {row.row_id}: F={best[1]}, S={best[2]}")
    return best[1], best[2]


def _candidate_rows(n: int, reflective: bool, shape: LatticeShape) -> List[str]:
    if n == 2 and reflective:
        if shape == LatticeShape.TRIANGULAR:
            return ["D_2/tri", "D_2/sq", "D_{2,2}"]
        return ["D_2/sq", "D_{2,2}", "D_2/tri"]
    table = {
        (3, False): ["Z_3"], (3, True): ["D_3", "D_{3,2}"],
        (4, False): ["Z_4"], (4, True): ["D_4"],
        (6, False): ["Z_6"], (6, True): ["D_6"],
    }
    return table.get((n, reflective), [])


def _shortest_vectors(gram: Gram, bound: int = 2) -> List[Vec2Q]:
    """All shortest nonzero vectors, sorted lexicographically."""
    _, reduced = gauss_reduce(gram)
    vecs = [reduced @ Vec2Q(i, j) for i, j in product(range(-bound, bound + 1), repeat=2) if (i, j) != (0, 0)]
    least = min(gram.norm(v) for v in vecs)
    return sorted(v for v in vecs if gram.norm(v) == least)


def _complete_basis(w0: Vec2Q) -> Vec2Q:
    """A vector ``w`` with det[w0, w] = 1."""
    g, x, y = ext_gcd(int(w0.x), int(w0.y))
    if g != 1:
        raise InvalidParams(f"{w0} is not primitive")
    return Vec2Q(-y, x)


def _reflection_frame(a: Mat2, gram: Gram) -> Tuple[str, Mat2]:
    """Basis adapted to an order-2 reflection of Λ_t: the D_1 or D_{1,4} dichotomy.

    :returns: Row id (``"D_1/0"`` or ``"D_{1,4}/0"``) and frame matrix
    """
    w0 = _shortest_vectors(gram)[0]
    aw0 = a @ w0
    if aw0 != w0 and aw0 != -w0:
        return "D_{1,4}/0", Mat2.from_columns(w0, aw0)
    eps = 1 if aw0 == w0 else -1
    w = _complete_basis(w0)
    k_star = floor(-gram.inner(w, w0) / gram.norm(w0) + Fraction(1, 2))
    coset = [w + w0.scale(k) for k in (k_star - 1, k_star, k_star + 1)]
    least = min(gram.norm(v) for v in coset)
    for w1 in sorted(v for v in coset if gram.norm(v) == least):
        aw1 = a @ w1
        if aw1 == w1.scale(-eps):
            plus, minus = (w0, w1) if eps == 1 else (w1, w0)
            return "D_1/0", Mat2.from_columns(plus, minus)
        f = Mat2.from_columns(w1, aw1)
        if f.is_unimodular():
            return "D_{1,4}/0", f
    raise Unsupported(f"no adapted basis for reflection {a}")


_SIGNS = tuple(Mat2.of(m) for m in (
    [[1, 0], [0, 1]], [[-1, 0], [0, -1]], [[1, 0], [0, -1]], [[-1, 0], [0, 1]],
    [[0, 1], [1, 0]], [[0, -1], [-1, 0]],
))


def _normalize_glide(row_id: str, c: Vec2Q) -> Tuple[str, Vec2Q]:
    """Frame-coordinate origin shift removing the inessential part of the glide."""
    c = c.mod1()
    if row_id == "D_1/0":
        shift = Vec2Q(Fraction(0), -c.y / 2)
        return ("D_1/l0" if c.x else "D_1/0"), shift
    s = c.x - 1 if c.x + c.y == 1 else c.x
    return "D_{1,4}/0", Vec2Q(-s / 2, s / 2)


def _assemble(basis: Mat2, frame: Mat2, s: Mat2, u_t: Vec2Q, u_f: Vec2Q) -> Conjugator:
    p = (basis @ frame @ s).inverse()
    return AffineMap(p, s.inverse() @ (frame.inverse() @ u_t + u_f))


def classify(G: FiniteTorusGroup, bound: Optional[int] = None) -> Tuple[CanonicalClass, Conjugator]:
    """Classify a finite torus group up to affine conjugacy.

    :param G: Finite torus group
    :type G: FiniteTorusGroup
    :param bound: Entry bound of the unimodular frame search
    :type bound: Optional[int]
    :returns: Canonical class and a conjugator ``η`` with
        ``conjugate_group(G, η) = canonical_group(cc)``
    :rtype: Tuple[CanonicalClass, Conjugator]
    :raises Unsupported: If the group is not conjugate to a catalog row
    """
    search = bound if bound is not None else settings.frame_search_bound
    cocycle = _cocycle(G)
    lattice = cocycle.basis.inverse()
    mats = cocycle.matrices
    rotations = [m for m in mats if m.det() == 1]
    reflections = [m for m in mats if m.det() == -1]
    n = len(rotations)

    u_f = ORIGIN
    if n == 1 and not reflections:
        row_id, frame, s, u_t = _rectangular_frame(G, "id")
    elif n == 2 and not reflections:
        u_t = _split_shift(cocycle, rotations)
        row_id, frame, s, _ = _rectangular_frame(G, "Z_2")
    elif n == 1:
        row_id, frame, s, u_t, u_f = _reflection_class(cocycle, lattice, reflections[0])
    else:
        u_t = _split_shift(cocycle, rotations)
        shape = lattice_shape(cocycle.gram_t)
        found = None
        for candidate in _candidate_rows(n, bool(reflections), shape):
            found = _frame_search(cocycle, get_row(candidate), lattice, search)
            if found is not None:
                row_id = candidate
                break
        if found is None:
            raise Unsupported(f"no catalog row for a point group of {len(mats)} matrices")
        frame, s = found

    row = get_row(row_id)
    cc = CanonicalClass(row.row_id, row.label, row.shape, s, row.glide)
    conj = _assemble(cocycle.basis, frame, s, u_t, u_f)
    image = conjugate_group(G, conj)
    if image.element_set() != canonical_group(cc).element_set():
        raise Unsupported(f"conjugated group does not match canonical row {row_id}")
    logger.info(f"Classified group of order {G.order} as {cc.describe()}")
    return cc, conj


def _rectangular_frame(G: FiniteTorusGroup, row_id: str) -> Tuple[str, Mat2, Mat2, Vec2Q]:
    """Smith-adapted frame with Λ = diag(m1, m2), m2 | m1."""
    data = translation_data(G)
    frame = data.basis.inverse() @ data.adapted_basis
    return row_id, frame, Mat2.diag(data.m1, data.m2), ORIGIN


def _reflection_class(cocycle: _Cocycle, lattice: Mat2, a: Mat2) -> Tuple[str, Mat2, Mat2, Vec2Q, Vec2Q]:
    row_id, frame = _reflection_frame(a, cocycle.gram_t)
    q = frame.inverse() @ a @ frame
    best = None
    for sign in _SIGNS:
        if sign @ q != q @ sign:
            continue
        f = frame @ sign
        s = _sublattice_in_frame(f, lattice)
        key = (_mat_key(s), _mat_key(f))
        if best is None or key < best[0]:
            best = (key, f, s)
    _, frame, s = best
    c = frame.inverse() @ cocycle.shifts[a]
    row_id, u_f = _normalize_glide(row_id, c)
    return row_id, frame, s, ORIGIN, u_f
