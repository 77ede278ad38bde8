"""Representation characters of the occurring point groups.

This module provides exact character theory for the trivial, cyclic and
dihedral groups of order dividing 12: irreducible characters with values
in Q(ζ₁₂), multiplicity decomposition, restriction along explicit
subgroup embeddings and transport of representations by conjugation.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from app.errors import ConjugationMismatch, NonIntegralMultiplicity, NotAHomomorphism, Unsupported
from app.torusgroup import AffineTorusMap, FiniteTorusGroup, LatticeFrame, PointGroupLabel, label_matrices

logger = logging.getLogger(__name__)

#: Order of the primitive root of unity generating the coefficient field.
CONDUCTOR = 12


@dataclass(frozen=True)
class Cyclotomic:
    """An element of Q(ζ) for ζ = exp(2πi/12), stored over the basis 1, ζ, ζ², ζ³.

    ζ satisfies ζ⁴ = ζ² - 1.
    """

    coeffs: Tuple[Fraction, Fraction, Fraction, Fraction] = (Fraction(0),) * 4

    @classmethod
    def of(cls, value: int | Fraction) -> "Cyclotomic":
        return cls((Fraction(value), Fraction(0), Fraction(0), Fraction(0)))

    @classmethod
    def root(cls, k: int) -> "Cyclotomic":
        """ζ^k."""
        k %= CONDUCTOR
        if k >= 6:
            return -cls.root(k - 6)
        if k == 4:
            return cls((Fraction(-1), Fraction(0), Fraction(1), Fraction(0)))
        if k == 5:
            return cls((Fraction(0), Fraction(-1), Fraction(0), Fraction(1)))
        coeffs = [Fraction(0)] * 4
        coeffs[k] = Fraction(1)
        return cls(tuple(coeffs))

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(tuple(-a for a in self.coeffs))

    def __mul__(self, other: "Cyclotomic") -> "Cyclotomic":
        prod = [Fraction(0)] * 7
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    prod[i + j] += a * b
        for d in range(6, 3, -1):
            c = prod[d]
            if c:
                prod[d] = Fraction(0)
                prod[d - 2] += c
                prod[d - 4] -= c
        return Cyclotomic(tuple(prod[:4]))

    def scale(self, factor: Fraction) -> "Cyclotomic":
        return Cyclotomic(tuple(a * factor for a in self.coeffs))

    def conjugate(self) -> "Cyclotomic":
        total = Cyclotomic()
        for j, a in enumerate(self.coeffs):
            if a:
                total = total + Cyclotomic.root(-j).scale(a)
        return total

    def is_rational(self) -> bool:
        return not any(self.coeffs[1:])

    def rational(self) -> Fraction:
        if not self.is_rational():
            raise NonIntegralMultiplicity(f"{self} is not rational")
        return self.coeffs[0]

    def __repr__(self) -> str:
        terms = [f"{a}ζ^{j}" if j else f"{a}" for j, a in enumerate(self.coeffs) if a]
        return " + ".join(terms) if terms else "0"


ZERO = Cyclotomic()
ONE = Cyclotomic.of(1)

#: Word ``r^j s^e`` of an element of a cyclic or dihedral group.
Word = Tuple[int, int]


@dataclass
class RealizedGroup:
    """A point group given by explicit elements, a composition law and words ``r^j s^e``.

    ``r`` is the counterclockwise rotation through 2π/n and ``s`` the
    reference reflection, whose axis is the label's axis.
    """

    label: PointGroupLabel
    elements: Tuple[Hashable, ...]
    words: Dict[Hashable, Word]
    compose: Callable[[Hashable, Hashable], Hashable]
    _by_word: Dict[Word, Hashable] = field(default_factory=dict, repr=False)

    def __post_init__(self) -> None:
        self._by_word = {w: e for e, w in self.words.items()}

    @property
    def order(self) -> int:
        return len(self.elements)

    @property
    def identity(self) -> Hashable:
        return self._by_word[(0, 0)]

    def element(self, word: Word) -> Hashable:
        return self._by_word[word]

    def inverse(self, e: Hashable) -> Hashable:
        j, r = self.words[e]
        return e if r else self._by_word[((-j) % self.label.n, 0)]


def _abstract_compose(n: int) -> Callable[[Word, Word], Word]:
    def compose(a: Word, b: Word) -> Word:
        j, e = a
        k, f = b
        return ((j + (-k if e else k)) % n, (e + f) % 2)
    return compose


@lru_cache(maxsize=64)
def realize_label(label: PointGroupLabel) -> RealizedGroup:
    """Abstract realization of a label with elements the words themselves."""
    n = label.n
    words = [(j, 0) for j in range(n)]
    if label.kind == "dihedral":
        words += [(j, 1) for j in range(n)]
    return RealizedGroup(label, tuple(words), {w: w for w in words}, _abstract_compose(n))


def realize_subgroup(H: FiniteTorusGroup, frame: LatticeFrame) -> RealizedGroup:
    """Realization of a torus subgroup on which the linear part is injective.

    :param H: Subgroup, typically a stabilizer
    :type H: FiniteTorusGroup
    :param frame: Canonical frame used to read rotation angles and axes
    :type frame: LatticeFrame
    :returns: Group with words read off the frame
    :rtype: RealizedGroup
    """
    label = label_matrices((g.matrix for g in H), frame)
    n = label.n
    words: Dict[Hashable, Word] = {}
    for g in H:
        sym = frame.symmetry(g.matrix)
        if sym.reflection:
            j = ((sym.turn - label.axis) * n) % n
            words[g] = (int(j), 1)
        else:
            words[g] = (int(sym.turn * n / 2) % n, 0)
    if len(set(words.values())) != len(words):
        raise NotAHomomorphism(f"linear part is not injective on a subgroup of order {H.order}")
    return RealizedGroup(label, H.elements, words, lambda a, b: a.compose(b))


# Characters


@dataclass(frozen=True)
class IrreducibleCharacter:
    name: str
    dim: int
    values: Tuple[Tuple[Word, Cyclotomic], ...]

    def __call__(self, word: Word) -> Cyclotomic:
        return dict(self.values)[word]


@dataclass(frozen=True)
class IrrTable:
    """Irreducible characters of a point group, indexed by words."""

    label: PointGroupLabel
    characters: Tuple[IrreducibleCharacter, ...]
    classes: Tuple[Tuple[Word, ...], ...]

    def __len__(self) -> int:
        return len(self.characters)

    @property
    def dims(self) -> Tuple[int, ...]:
        return tuple(c.dim for c in self.characters)


def _conjugacy_classes(group: RealizedGroup) -> Tuple[Tuple[Word, ...], ...]:
    seen: Dict[Word, int] = {}
    classes: List[List[Word]] = []
    for e in group.elements:
        w = group.words[e]
        if w in seen:
            continue
        cls = sorted({group.words[group.compose(group.compose(g, e), group.inverse(g))] for g in group.elements})
        for member in cls:
            seen[member] = len(classes)
        classes.append(cls)
    return tuple(tuple(c) for c in classes)


@lru_cache(maxsize=64)
def irr_table(label: PointGroupLabel) -> IrrTable:
    """Character table of a trivial, cyclic or dihedral point group.

    Decorated dihedral labels share the table of D_n; only their realization differs.

    :param label: Point-group label
    :type label: PointGroupLabel
    :returns: Irreducible characters as functions of words ``r^j s^e``
    :rtype: IrrTable
    :raises Unsupported: If the group order does not divide 12
    """
    n = label.n
    if CONDUCTOR % n:
        raise Unsupported(f"no character table for {label}")
    step = CONDUCTOR // n
    group = realize_label(label)
    words = [group.words[e] for e in group.elements]
    chars: List[IrreducibleCharacter] = []

    def linear(name: str, fn: Callable[[Word], Cyclotomic]) -> IrreducibleCharacter:
        return IrreducibleCharacter(name, 1, tuple((w, fn(w)) for w in words))

    if label.kind != "dihedral":
        for k in range(n):
            chars.append(linear(f"chi_{k}", lambda w, k=k: Cyclotomic.root(step * w[0] * k)))
    else:
        signs = [(1, 1), (1, -1)] if n % 2 else [(1, 1), (1, -1), (-1, 1), (-1, -1)]
        for er, es in signs:
            chars.append(linear(
                f"eps({er:+d},{es:+d})",
                lambda w, er=er, es=es: Cyclotomic.of(er ** w[0] * es ** w[1]),
            ))
        for h in range(1, (n - 1) // 2 + 1):
            values = []
            for w in words:
                if w[1]:
                    values.append((w, ZERO))
                else:
                    a = step * h * w[0]
                    values.append((w, Cyclotomic.root(a) + Cyclotomic.root(-a)))
            chars.append(IrreducibleCharacter(f"rho_{h}", 2, tuple(values)))
    return IrrTable(label, tuple(chars), _conjugacy_classes(group))


@dataclass(frozen=True)
class RepMultiplicity:
    """A representation of a realized group as multiplicities of its irreducibles."""

    group: RealizedGroup = field(compare=False, hash=False)
    mult: Tuple[int, ...]

    def __post_init__(self) -> None:
        if any(m < 0 for m in self.mult):
            raise NonIntegralMultiplicity(f"negative multiplicity in {self.mult}")
        if len(self.mult) != len(irr_table(self.group.label)):
            raise NonIntegralMultiplicity(f"{len(self.mult)} multiplicities for {self.group.label}")

    @property
    def label(self) -> PointGroupLabel:
        return self.group.label

    @property
    def dimension(self) -> int:
        return sum(m * d for m, d in zip(self.mult, irr_table(self.group.label).dims))

    def __add__(self, other: "RepMultiplicity") -> "RepMultiplicity":
        return RepMultiplicity(self.group, tuple(a + b for a, b in zip(self.mult, other.mult)))


#: Class function on a realized group, keyed by element.
Character = Dict[Hashable, Cyclotomic]


def character_of(rep: RepMultiplicity) -> Character:
    table = irr_table(rep.group.label)
    out: Character = {}
    for e in rep.group.elements:
        w = rep.group.words[e]
        value = ZERO
        for m, chi in zip(rep.mult, table.characters):
            if m:
                value = value + chi(w).scale(Fraction(m))
        out[e] = value
    return out


def inner_product(chi: Character, psi: Character, group: RealizedGroup) -> Cyclotomic:
    """(1/|G|) Σ χ(g) conj(ψ(g))."""
    total = ZERO
    for e in group.elements:
        total = total + chi[e] * psi[e].conjugate()
    return total.scale(Fraction(1, group.order))


def decompose(character: Character, group: RealizedGroup) -> RepMultiplicity:
    """Multiplicities of the irreducibles in a character.

    :param character: Values on every element of ``group``
    :type character: Character
    :param group: Realized group
    :type group: RealizedGroup
    :returns: Multiplicity vector
    :rtype: RepMultiplicity
    :raises NonIntegralMultiplicity: If the function is not a character
    """
    table = irr_table(group.label)
    mult = []
    for chi in table.characters:
        values = {e: chi(group.words[e]) for e in group.elements}
        m = inner_product(character, values, group)
        if not m.is_rational() or m.rational().denominator != 1 or m.rational() < 0:
            raise NonIntegralMultiplicity(f"multiplicity {m} of {chi.name} in {group.label}")
        mult.append(int(m.rational()))
    rep = RepMultiplicity(group, tuple(mult))
    if character_of(rep) != {e: character[e] for e in group.elements}:
        raise NonIntegralMultiplicity(f"function on {group.label} is not a class function")
    return rep


@dataclass
class Embedding:
    """An injective element map from ``sub`` into ``group``."""

    sub: RealizedGroup
    group: RealizedGroup
    mapping: Dict[Hashable, Hashable]

    def check(self) -> None:
        """:raises NotAHomomorphism: If the map does not respect composition"""
        if len(set(self.mapping.values())) != len(self.mapping):
            raise NotAHomomorphism("embedding is not injective")
        for a in self.sub.elements:
            for b in self.sub.elements:
                if self.mapping[self.sub.compose(a, b)] != self.group.compose(self.mapping[a], self.mapping[b]):
                    raise NotAHomomorphism(f"embedding of {self.sub.label} into {self.group.label} is not a homomorphism")


def inclusion(sub: RealizedGroup, group: RealizedGroup) -> Embedding:
    """Identity embedding of a realized subgroup.

    :raises NotAHomomorphism: If some element of ``sub`` is not in ``group``
    """
    members = set(group.elements)
    missing = [e for e in sub.elements if e not in members]
    if missing:
        raise NotAHomomorphism(f"{len(missing)} elements of {sub.label} are not in {group.label}")
    return Embedding(sub, group, {e: e for e in sub.elements})


def restrict(rep: RepMultiplicity, embedding: Embedding) -> RepMultiplicity:
    """Restriction of ``rep`` along an embedding into ``rep.group``.

    :raises NotAHomomorphism: If the embedding is not a homomorphism
    """
    embedding.check()
    chi = character_of(rep)
    restricted = {h: chi[embedding.mapping[h]] for h in embedding.sub.elements}
    return decompose(restricted, embedding.sub)


def conjugate_rep(rep: RepMultiplicity, g: AffineTorusMap, target: RealizedGroup) -> RepMultiplicity:
    """The representation ^gW of ``target`` = g·source·g⁻¹, with character k ↦ χ(g⁻¹kg).

    :raises ConjugationMismatch: If g does not carry the source group onto ``target``
    """
    source = rep.group
    members = set(source.elements)
    if source.order != target.order:
        raise ConjugationMismatch(f"orders {source.order} and {target.order} differ")
    chi = character_of(rep)
    g_inv = g.inverse()
    transported: Character = {}
    for k in target.elements:
        pre = g_inv.compose(k).compose(g)
        if pre not in members:
            raise ConjugationMismatch(f"{g} does not conjugate {source.label} onto {target.label}")
        transported[k] = chi[pre]
    return decompose(transported, target)


def regular_character(group: RealizedGroup) -> Character:
    return {e: Cyclotomic.of(group.order if e == group.identity else 0) for e in group.elements}


def trivial_rep(group: RealizedGroup, rank: int = 1) -> RepMultiplicity:
    mult = [0] * len(irr_table(group.label))
    mult[0] = rank
    return RepMultiplicity(group, tuple(mult))
