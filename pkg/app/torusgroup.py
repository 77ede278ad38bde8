"""Finite groups of affine torus maps.

This module provides affine isomorphisms of the torus R²/Λ written in
lattice coordinates, closure of finite groups from generators, the
translation subgroup and enlarged lattice, point-group labels, orbits,
stabilizers and conjugation by affine maps.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from app.config import settings
from app.errors import CapExceeded, InconsistentGram, InvalidParams, NotFinite, NotLatticeMap
from app.exactgeom import (
    IDENTITY,
    ORIGIN,
    SQUARE_GRAM,
    TRIANGULAR_GRAM,
    Gram,
    LatticeShape,
    Mat2,
    Vec2Q,
    lattice_basis,
    smith_normal_form,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineTorusMap:
    """An element ``[M x + t]`` of Aff(R²/Λ) in lattice coordinates.

    The translation is always stored reduced into [0, 1)².
    """

    matrix: Mat2
    translation: Vec2Q = ORIGIN

    def __post_init__(self) -> None:
        if not self.matrix.is_integral() or abs(self.matrix.det()) != 1:
            raise NotLatticeMap(f"matrix {self.matrix} is not unimodular")
        object.__setattr__(self, "translation", self.translation.mod1())

    @classmethod
    def identity(cls) -> "AffineTorusMap":
        return cls(IDENTITY, ORIGIN)

    @classmethod
    def pure_translation(cls, t: Vec2Q) -> "AffineTorusMap":
        return cls(IDENTITY, t)

    def compose(self, other: "AffineTorusMap") -> "AffineTorusMap":
        """Return ``self ∘ other`` (apply ``other`` first)."""
        return AffineTorusMap(self.matrix @ other.matrix,
                              self.matrix @ other.translation + self.translation)

    def inverse(self) -> "AffineTorusMap":
        inv = self.matrix.inverse()
        return AffineTorusMap(inv, -(inv @ self.translation))

    def apply(self, x: Vec2Q) -> Vec2Q:
        """Image of a torus point, reduced into [0, 1)²."""
        return (self.matrix @ x + self.translation).mod1()

    def fixes(self, x: Vec2Q) -> bool:
        return self.apply(x) == x.mod1()

    def is_translation(self) -> bool:
        return self.matrix == IDENTITY

    def is_isometry(self, gram: Gram) -> bool:
        return gram.preserved_by(self.matrix)

    def sort_key(self) -> Tuple[Fraction, ...]:
        m, t = self.matrix, self.translation
        return (m.a, m.b, m.c, m.d, t.x, t.y)

    def __repr__(self) -> str:
        return f"[{self.matrix} x + {self.translation}]"


@dataclass(frozen=True)
class AffineMap:
    """A plane affine map ``x -> linear x + translation`` with rational entries."""

    linear: Mat2
    translation: Vec2Q = ORIGIN

    def apply(self, x: Vec2Q) -> Vec2Q:
        return self.linear @ x + self.translation

    def compose(self, other: "AffineMap") -> "AffineMap":
        """Return ``self ∘ other``."""
        return AffineMap(self.linear @ other.linear, self.linear @ other.translation + self.translation)

    def inverse(self) -> "AffineMap":
        inv = self.linear.inverse()
        return AffineMap(inv, -(inv @ self.translation))


# Point-group labels


@dataclass(frozen=True)
class PointGroupLabel:
    """Isomorphism type of a point group, with an optional axis decoration.

    ``kind`` is ``"trivial"``, ``"cyclic"`` or ``"dihedral"``. For dihedral
    groups ``axis`` is the angle of a reflection axis in units of π taken
    modulo ``1/n``; ``None`` means the group was labeled without a frame.
    Two labels are equal iff they name the same subgroup of the frame.
    """

    kind: str
    n: int = 1
    axis: Optional[Fraction] = None

    def __post_init__(self) -> None:
        if self.kind not in ("trivial", "cyclic", "dihedral"):
            raise InvalidParams(f"unknown point group kind {self.kind!r}")
        if self.n not in (1, 2, 3, 4, 6):
            raise InvalidParams(f"no crystallographic rotation subgroup of order {self.n}")
        if self.axis is not None:
            period = Fraction(1, self.n)
            object.__setattr__(self, "axis", Fraction(self.axis) % period)

    @classmethod
    def trivial(cls) -> "PointGroupLabel":
        return cls("trivial", 1)

    @classmethod
    def cyclic(cls, n: int) -> "PointGroupLabel":
        return cls("trivial", 1) if n == 1 else cls("cyclic", n)

    @classmethod
    def dihedral(cls, n: int, axis: Optional[Fraction] = None) -> "PointGroupLabel":
        return cls("dihedral", n, axis)

    @classmethod
    def dihedral_l(cls, n: int, l: Fraction) -> "PointGroupLabel":
        """``D_{n,l}``: reflection axis at angle π/(n l)."""
        return cls("dihedral", n, 1 / (n * Fraction(l)))

    @property
    def order(self) -> int:
        return 2 * self.n if self.kind == "dihedral" else self.n

    @property
    def is_cyclic(self) -> bool:
        return self.kind != "dihedral"

    @property
    def decoration(self) -> Optional[Fraction]:
        """The ``l`` of ``D_{n,l}``; ``None`` for undecorated or plain ``D_n``."""
        if self.kind != "dihedral" or not self.axis:
            return None
        t = self.axis
        if t > Fraction(1, 2 * self.n):
            t -= Fraction(1, self.n)
        return 1 / (self.n * t)

    def display(self) -> str:
        if self.kind == "trivial":
            return "id"
        if self.kind == "cyclic":
            return f"Z_{self.n}"
        l = self.decoration
        if l is None:
            return f"D_{self.n}"
        return f"D_{{{self.n},{l}}}"

    def __str__(self) -> str:
        return self.display()

    @classmethod
    def parse(cls, text: str) -> "PointGroupLabel":
        """Parse ``id``, ``Z_n``, ``D_n`` or ``D_{n,l}`` (also ``C(n)``, ``D(n,l)``).

        :raises InvalidParams: If the text is not a label
        """
        s = text.strip().replace(" ", "").replace("−", "-")
        if s in ("id", "<id>", "⟨id⟩", "Trivial", "trivial", "1"):
            return cls.trivial()
        try:
            if s.startswith("Z_") or s.startswith("C("):
                return cls.cyclic(int(s[2:].strip("{}()")))
            if s.startswith("D_") or s.startswith("D("):
                body = s[2:].strip("{}()")
                if "," not in body:
                    return cls.dihedral(int(body), Fraction(0))
                n_text, l_text = body.split(",", 1)
                return cls.dihedral_l(int(n_text), Fraction(l_text))
        except (ValueError, ZeroDivisionError) as e:
            raise InvalidParams(f"cannot parse point group label {text!r}: {e}")
        raise InvalidParams(f"cannot parse point group label {text!r}")


# Frames


@dataclass(frozen=True)
class FrameSymmetry:
    """A frame symmetry: a rotation by ``turn``·π or a reflection in the axis at ``turn``·π."""

    reflection: bool
    turn: Fraction


_FRAME_GENERATORS = {
    LatticeShape.SQUARE: (Mat2.of([[0, -1], [1, 0]]), Mat2.diag(1, -1), 4),
    LatticeShape.TRIANGULAR: (Mat2.of([[0, -1], [1, 1]]), Mat2.of([[1, 1], [0, -1]]), 6),
}


@dataclass(frozen=True)
class LatticeFrame:
    """Canonical frame of a torus group.

    Frame coordinates refer to the standard basis of Λ_t (square, or
    triangular with basis (1,0), (1/2, √3/2)); the columns of ``sublattice``
    are the basis of Λ in frame coordinates, so ``x_frame = sublattice · x``.
    """

    shape: LatticeShape
    sublattice: Mat2 = IDENTITY

    def __post_init__(self) -> None:
        if self.shape not in _FRAME_GENERATORS:
            raise InvalidParams(f"no canonical frame for {self.shape.value} lattices")

    @property
    def gram(self) -> Gram:
        """Metric of the frame basis."""
        return SQUARE_GRAM if self.shape == LatticeShape.SQUARE else TRIANGULAR_GRAM

    @property
    def lattice_gram(self) -> Gram:
        """Metric of the Λ basis, ``Sᵀ G S``."""
        return self.gram.transform(self.sublattice)

    @cached_property
    def _symmetries(self) -> Dict[Mat2, FrameSymmetry]:
        rho, b, count = _FRAME_GENERATORS[self.shape]
        table: Dict[Mat2, FrameSymmetry] = {}
        power = IDENTITY
        for k in range(count):
            table[power] = FrameSymmetry(False, Fraction(2 * k, count))
            table[power @ b] = FrameSymmetry(True, Fraction(k, count))
            power = power @ rho
        return table

    def frame_matrix(self, symmetry: FrameSymmetry) -> Mat2:
        """Frame-coordinate matrix of a rotation or reflection."""
        for m, s in self._symmetries.items():
            if s == symmetry:
                return m
        raise InvalidParams(f"{symmetry} is not a symmetry of the {self.shape.value} frame")

    def frame_group(self, label: PointGroupLabel) -> FrozenSet[Mat2]:
        """Frame-coordinate matrices of the point group named by ``label``.

        :raises InvalidParams: If the frame has no such subgroup
        """
        _, _, count = _FRAME_GENERATORS[self.shape]
        if count % label.n:
            raise InvalidParams(f"{label} is not a subgroup of the {self.shape.value} frame")
        step = Fraction(2, label.n)
        mats = [m for m, s in self._symmetries.items() if not s.reflection and s.turn % step == 0]
        if label.kind == "dihedral":
            axis = label.axis if label.axis is not None else Fraction(0)
            mats += [m for m, s in self._symmetries.items()
                     if s.reflection and s.turn % Fraction(1, label.n) == axis]
        return frozenset(mats)

    def to_frame(self, m: Mat2) -> Mat2:
        return self.sublattice @ m @ self.sublattice.inverse()

    def from_frame(self, m: Mat2) -> Mat2:
        return self.sublattice.inverse() @ m @ self.sublattice

    def point_to_frame(self, x: Vec2Q) -> Vec2Q:
        return self.sublattice @ x

    def point_from_frame(self, x: Vec2Q) -> Vec2Q:
        return self.sublattice.inverse() @ x

    def symmetry(self, m: Mat2) -> FrameSymmetry:
        """Rotation angle or reflection axis of a Λ-coordinate matrix.

        :raises InvalidParams: If the matrix is not a symmetry of the frame
        """
        try:
            return self._symmetries[self.to_frame(m)]
        except KeyError:
            raise InvalidParams(f"matrix {m} is not a symmetry of the {self.shape.value} frame")


def label_matrices(matrices: Iterable[Mat2], frame: Optional[LatticeFrame] = None) -> PointGroupLabel:
    """Label a finite matrix group by order and orientation behaviour.

    :param matrices: All matrices of the group
    :type matrices: Iterable[Mat2]
    :param frame: Canonical frame used to decorate dihedral labels
    :type frame: Optional[LatticeFrame]
    :returns: Trivial, cyclic or (decorated) dihedral label
    :rtype: PointGroupLabel
    """
    mats = set(matrices)
    rotations = [m for m in mats if m.det() == 1]
    reflections = [m for m in mats if m.det() == -1]
    n = len(rotations)
    if not reflections:
        return PointGroupLabel.cyclic(n)
    axis = frame.symmetry(reflections[0]).turn if frame is not None else None
    return PointGroupLabel.dihedral(n, axis)


# Groups


@dataclass(frozen=True)
class TranslationData:
    """Translation part of a torus group.

    ``adapted_basis`` columns ``l1, l2`` span Λ_t with Λ = ⟨m1 l1, m2 l2⟩.
    """

    order: int
    basis: Mat2
    adapted_basis: Mat2
    m1: int
    m2: int


@dataclass(frozen=True)
class FiniteTorusGroup:
    """A finite group of isometric affine torus maps.

    Use :func:`close_group` to build one from generators.
    """

    gram: Gram
    elements: Tuple[AffineTorusMap, ...]
    _index: FrozenSet[AffineTorusMap] = field(default=frozenset(), repr=False, compare=False)

    def __post_init__(self) -> None:
        ordered = tuple(sorted(set(self.elements), key=AffineTorusMap.sort_key))
        object.__setattr__(self, "elements", ordered)
        object.__setattr__(self, "_index", frozenset(ordered))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[AffineTorusMap]:
        return iter(self.elements)

    def __contains__(self, g: object) -> bool:
        return g in self._index

    @property
    def order(self) -> int:
        return len(self.elements)

    def element_set(self) -> FrozenSet[AffineTorusMap]:
        return self._index

    @cached_property
    def translations(self) -> Tuple[AffineTorusMap, ...]:
        """The translation subgroup R_t."""
        return tuple(g for g in self.elements if g.is_translation())

    @cached_property
    def point_matrices(self) -> Tuple[Mat2, ...]:
        seen: Dict[Mat2, None] = {}
        for g in self.elements:
            seen.setdefault(g.matrix, None)
        return tuple(seen)

    @cached_property
    def lambda_t_basis(self) -> Mat2:
        """Hermite basis of Λ_t = Z² + translations, in Λ-coordinates."""
        gens = [Vec2Q(1, 0), Vec2Q(0, 1)] + [g.translation for g in self.translations]
        return lattice_basis(gens)

    def elements_with_matrix(self, m: Mat2) -> List[AffineTorusMap]:
        return [g for g in self.elements if g.matrix == m]

    def is_closed(self) -> bool:
        return all(g.compose(h) in self for g in self.elements for h in self.elements)


def matrix_order(m: Mat2, limit: int = 12) -> Optional[int]:
    """Multiplicative order of ``m``, or ``None`` if it exceeds ``limit``."""
    power = m
    for k in range(1, limit + 1):
        if power == IDENTITY:
            return k
        power = power @ m
    return None


def _check_generator(gram: Gram, g: AffineTorusMap) -> None:
    if not g.is_isometry(gram):
        raise InconsistentGram(f"generator {g} does not preserve the Gram form {gram.rows()}")
    if matrix_order(g.matrix) is None:
        raise NotFinite(f"generator {g} has a linear part of infinite order")


def close_group(gram: Gram, generators: Sequence[AffineTorusMap], cap: Optional[int] = None) -> FiniteTorusGroup:
    """Close a set of isometric generators under composition mod Z².

    :param gram: Gram form of Λ
    :type gram: Gram
    :param generators: Generating affine maps
    :type generators: Sequence[AffineTorusMap]
    :param cap: Maximum group order (defaults to the configured closure cap)
    :type cap: Optional[int]
    :returns: The generated finite group
    :rtype: FiniteTorusGroup
    :raises InconsistentGram: If a generator is not an isometry of ``gram``
    :raises CapExceeded: If the closure grows beyond ``cap``
    """
    limit = cap if cap is not None else settings.closure_cap
    for g in generators:
        _check_generator(gram, g)
    identity = AffineTorusMap.identity()
    seen = {identity}
    queue = deque([identity])
    while queue:
        current = queue.popleft()
        for g in generators:
            product = current.compose(g)
            if product not in seen:
                seen.add(product)
                if len(seen) > limit:
                    raise CapExceeded(f"group closure exceeded cap {limit}")
                queue.append(product)
    logger.debug(f"Closed group of order {len(seen)} from {len(generators)} generators")
    return FiniteTorusGroup(gram, tuple(seen))


def subgroup(G: FiniteTorusGroup, elements: Iterable[AffineTorusMap]) -> FiniteTorusGroup:
    """Subgroup of ``G`` with the given elements (closure is assumed)."""
    return FiniteTorusGroup(G.gram, tuple(elements))


def translation_data(G: FiniteTorusGroup) -> TranslationData:
    """Compute R_t, Λ_t and the invariants (m1, m2) of Λ in Λ_t.

    :param G: Torus group
    :type G: FiniteTorusGroup
    :returns: Order of R_t, Hermite basis of Λ_t, a basis ``l1, l2`` of Λ_t
        with Λ = ⟨m1 l1, m2 l2⟩ and ``m2 | m1``
    :rtype: TranslationData
    """
    basis = G.lambda_t_basis
    in_t = basis.inverse()  # columns: basis of Λ in Λ_t-coordinates
    u, d, _ = smith_normal_form(in_t)
    d1, d2 = int(d.a), int(d.d)
    swap = Mat2.of([[0, 1], [1, 0]])
    adapted = basis @ u.inverse() @ swap
    order = len(G.translations)
    if order != d1 * d2:
        raise InvalidParams(f"R_t order {order} disagrees with index {d1 * d2} of Λ in Λ_t")
    return TranslationData(order=order, basis=basis, adapted_basis=adapted, m1=d2, m2=d1)


def point_group(G: FiniteTorusGroup, frame: Optional[LatticeFrame] = None) -> Tuple[Tuple[Mat2, ...], PointGroupLabel]:
    """The point group R/R_t as its matrix set and label.

    :param G: Torus group
    :type G: FiniteTorusGroup
    :param frame: Canonical frame for decorating dihedral labels
    :type frame: Optional[LatticeFrame]
    :returns: Matrices occurring in ``G`` and their label
    :rtype: Tuple[Tuple[Mat2, ...], PointGroupLabel]
    """
    mats = G.point_matrices
    return mats, label_matrices(mats, frame)


def stabilizer(G: FiniteTorusGroup, x: Vec2Q) -> FiniteTorusGroup:
    """Subgroup of elements fixing the torus point ``[x]``.

    The matrix part is injective on a stabilizer, so its linearization
    label is ``point_group(stabilizer(G, x), frame)[1]``.

    :param G: Torus group
    :type G: FiniteTorusGroup
    :param x: Point in Λ-coordinates
    :type x: Vec2Q
    :returns: The stabilizer subgroup
    :rtype: FiniteTorusGroup
    """
    return subgroup(G, (g for g in G if g.fixes(x)))


def orbit(G: FiniteTorusGroup, x: Vec2Q) -> FrozenSet[Vec2Q]:
    """Orbit of ``[x]`` as reduced representatives in [0, 1)²."""
    return frozenset(g.apply(x) for g in G)


def transporter(G: FiniteTorusGroup, x: Vec2Q, y: Vec2Q) -> List[AffineTorusMap]:
    """All elements carrying ``[x]`` to ``[y]``."""
    target = y.mod1()
    return [g for g in G if g.apply(x) == target]


def lift_fixing(g: AffineTorusMap, x: Vec2Q) -> AffineMap:
    """The affine lift of ``g`` to R² that fixes ``x`` exactly.

    :raises InvalidParams: If ``g`` does not fix ``[x]``
    """
    shift = x - g.matrix @ x
    if not (shift - g.translation).is_integral():
        raise InvalidParams(f"{g} does not fix {x}")
    return AffineMap(g.matrix, shift)


def conjugate_group(G: FiniteTorusGroup, eta: AffineMap, cap: Optional[int] = None) -> FiniteTorusGroup:
    """Conjugate ``G`` by the affine map ``eta``: ``g ↦ η g η⁻¹`` mod Z².

    :param G: Torus group
    :type G: FiniteTorusGroup
    :param eta: Map ``x -> P x + c`` with ``P`` carrying Z² into Z²-commensurable lattices
    :type eta: AffineMap
    :param cap: Closure cap for the image group
    :type cap: Optional[int]
    :returns: Conjugated group with Gram ``P⁻ᵀ g P⁻¹``
    :rtype: FiniteTorusGroup
    :raises NotLatticeMap: If a conjugated matrix is not integral
    """
    p, c = eta.linear, eta.translation
    p_inv = p.inverse()
    images: List[AffineTorusMap] = []
    for g in G:
        m = p @ g.matrix @ p_inv
        if not m.is_integral():
            raise NotLatticeMap(f"conjugating {g.matrix} by {p} gives non-integral {m}")
        images.append(AffineTorusMap(m, p @ g.translation + c - m @ c))
    gram = Gram.from_matrix(p_inv.transpose() @ G.gram.matrix() @ p_inv)
    return close_group(gram, images, cap)
