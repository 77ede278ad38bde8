"""Bundle classification module.

This module enumerates the invariant tuples (W_{d^i}) of representations
attached to the marked points of the one-dimensional fundamental domain
for an effective torus action, validates tuples condition by condition,
and reports which classification theorem applies to a canonical class.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from typing import Dict, Iterator, List, Optional, Tuple, Union

from app.canon import CanonicalClass, Glide, canonical_family, canonical_group
from app.cells import MarkedPath, fundamental_domain_1d
from app.config import settings
from app.errors import InvalidParams, OneDimensionalOutOfScope, RankCapExceeded
from app.isotropy import cone_stabilizer, edge_interior_stabilizer, face_stabilizer
from app.repchars import (
    Character,
    Embedding,
    RealizedGroup,
    RepMultiplicity,
    character_of,
    conjugate_rep,
    inclusion,
    irr_table,
    realize_subgroup,
    restrict,
)
from app.torusgroup import AffineTorusMap, FiniteTorusGroup, stabilizer, transporter

logger = logging.getLogger(__name__)

FACE = -1

#: Notice attached to requests about positive-dimensional families.
CIRCLE_NOTICE = (
    "actions with a positive-dimensional image reduce to circle actions on the torus; "
    "their bundle classification is not computed here"
)


class TheoremCase(str, Enum):
    A = "A"
    B = "B"
    C = "C"
    ONE_DIMENSIONAL = "OneDimensional-out-of-scope"


@dataclass(eq=False)
class ATuple:
    """Representations W_{d^i} indexed by the face (-1) and the window I_R."""

    entries: Dict[int, RepMultiplicity]

    @property
    def rank(self) -> int:
        return self.entries[FACE].dimension

    def key(self) -> Tuple[Tuple[int, Tuple[int, ...]], ...]:
        return tuple((i, self.entries[i].mult) for i in sorted(self.entries))

    def __add__(self, other: "ATuple") -> "ATuple":
        return ATuple({i: rep + other.entries[i] for i, rep in self.entries.items()})

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ATuple) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())


@dataclass
class BundleContext:
    """Realized stabilizers, restriction embeddings and orbit relations of one class."""

    cc: CanonicalClass
    group: FiniteTorusGroup
    path: MarkedPath
    stabilizers: Dict[int, RealizedGroup]
    #: index -> (cone ⊂ R_{d^i}, cone ⊂ R_{b(f)})
    cones: Dict[int, Tuple[Embedding, Embedding]]
    #: index i -> (edge ⊂ R_{d^i}, edge ⊂ R_{d^(i+1)}) for the segment between them
    edges: Dict[int, Tuple[Embedding, Embedding]]
    #: (j, i, g) with j < i and g·d^j = d^i
    relations: List[Tuple[int, int, AffineTorusMap]] = field(default_factory=list)

    @property
    def order(self) -> Tuple[int, ...]:
        return self.path.window_plus


def bundle_context(cc: CanonicalClass) -> BundleContext:
    """Precompute everything the enumerator needs for ``cc``.

    :param cc: Canonical class of a finite row
    :type cc: CanonicalClass
    :returns: Realized stabilizers and the embeddings between them
    :rtype: BundleContext
    """
    G = canonical_group(cc)
    frame = cc.frame
    path = fundamental_domain_1d(cc)
    stabs: Dict[int, RealizedGroup] = {FACE: realize_subgroup(face_stabilizer(cc, G), frame)}
    for i in path.window:
        stabs[i] = realize_subgroup(stabilizer(G, path.point(i).point), frame)

    cones = {}
    for i in path.window:
        cone = realize_subgroup(cone_stabilizer(cc, i, G), frame)
        cones[i] = (inclusion(cone, stabs[i]), inclusion(cone, stabs[FACE]))

    edges = {}
    for seg in path.segments:
        edge = realize_subgroup(edge_interior_stabilizer(cc, seg.edge, G), frame)
        edges[seg.index] = (inclusion(edge, stabs[seg.index]), inclusion(edge, stabs[seg.index + 1]))

    relations = []
    window = path.window
    for a, j in enumerate(window):
        for i in window[a + 1:]:
            carriers = transporter(G, path.point(j).point, path.point(i).point)
            if carriers:
                relations.append((j, i, carriers[0]))
    orders = {i: g.order for i, g in stabs.items()}
    logger.debug(f"Bundle context for {cc.family_row}: stabilizer orders {orders}, relations {[(j, i) for j, i, _ in relations]}")
    return BundleContext(cc, G, path, stabs, cones, edges, relations)


def _vectors(dims: Tuple[int, ...], rank: int) -> Iterator[Tuple[int, ...]]:
    if not dims:
        if rank == 0:
            yield ()
        return
    for m in range(rank // dims[0] + 1):
        for rest in _vectors(dims[1:], rank - m * dims[0]):
            yield (m,) + rest


def candidate_entries(group: RealizedGroup, rank: int) -> List[RepMultiplicity]:
    """All representations of ``group`` of dimension ``rank``, lexicographic in multiplicities."""
    dims = irr_table(group.label).dims
    return [RepMultiplicity(group, mult) for mult in sorted(_vectors(dims, rank))]


def _check_rank(rank: int, rank_cap: Optional[int] = None) -> None:
    cap = rank_cap if rank_cap is not None else settings.rank_cap
    if rank < 1:
        raise InvalidParams(f"bundle rank must be positive, got {rank}")
    if rank > cap:
        raise RankCapExceeded(f"rank {rank} exceeds the rank cap {cap}")


def enumerate_A(cc: CanonicalClass, rank: int, context: Optional[BundleContext] = None) -> List[ATuple]:
    """Enumerate the invariant tuples of a given rank.

    Entries are assigned face first, then along I_R; each candidate is
    checked against the cone restriction to the face entry, the edge
    restriction to the previous entry and the conjugation relations to
    earlier orbit-related points.

    :param cc: Canonical class of a finite row
    :type cc: CanonicalClass
    :param rank: Bundle rank
    :type rank: int
    :param context: Precomputed context for ``cc``
    :type context: Optional[BundleContext]
    :returns: Tuples in lexicographic order of their multiplicity vectors
    :rtype: List[ATuple]
    :raises RankCapExceeded: If ``rank`` exceeds the configured cap
    """
    _check_rank(rank)
    ctx = context or bundle_context(cc)
    order = ctx.order
    options = {i: candidate_entries(ctx.stabilizers[i], rank) for i in order}
    incoming: Dict[int, List[Tuple[int, AffineTorusMap]]] = {}
    for j, i, g in ctx.relations:
        incoming.setdefault(i, []).append((j, g))

    found: List[ATuple] = []
    chosen: Dict[int, RepMultiplicity] = {}

    def admissible(i: int, rep: RepMultiplicity) -> bool:
        if i == FACE:
            return True
        into_point, into_face = ctx.cones[i]
        if restrict(rep, into_point) != restrict(chosen[FACE], into_face):
            return False
        if i - 1 in ctx.edges:
            left, right = ctx.edges[i - 1]
            if restrict(rep, right) != restrict(chosen[i - 1], left):
                return False
        for j, g in incoming.get(i, []):
            if conjugate_rep(chosen[j], g, ctx.stabilizers[i]) != rep:
                return False
        return True

    def extend(depth: int) -> None:
        if depth == len(order):
            found.append(ATuple(dict(chosen)))
            return
        i = order[depth]
        for rep in options[i]:
            if admissible(i, rep):
                chosen[i] = rep
                extend(depth + 1)
                del chosen[i]

    extend(0)
    logger.info(f"Row {cc.family_row}: {len(found)} invariant tuples of rank {rank}")
    return found


# Validation


@dataclass(frozen=True)
class ConditionResult:
    passed: bool
    detail: str = ""


@dataclass
class TupleValidation:
    """Outcome of each of the five defining conditions for one tuple."""

    conditions: Dict[int, ConditionResult]

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.conditions.values())

    def __bool__(self) -> bool:
        return self.ok

    @property
    def failed(self) -> List[int]:
        return [k for k, c in sorted(self.conditions.items()) if not c.passed]


def _agree(a: Character, b: Character, elements) -> bool:
    return all(a[k] == b[k] for k in elements)


def validate_tuple(cc: CanonicalClass, candidate: ATuple) -> TupleValidation:
    """Check a tuple against every defining condition by direct character evaluation.

    Stabilizers are recomputed from the group and conditions are checked on
    element values, independently of the enumerator's restriction and
    conjugation machinery. Failures are reported, never raised.

    :param cc: Canonical class of a finite row
    :type cc: CanonicalClass
    :param candidate: Tuple to check
    :type candidate: ATuple
    :returns: Pass/fail with a reason per condition
    :rtype: TupleValidation
    """
    G = canonical_group(cc)
    path = fundamental_domain_1d(cc)
    indices = path.window_plus
    results: Dict[int, ConditionResult] = {}

    missing = [i for i in indices if i not in candidate.entries]
    points = {i: (path.point(i).point if i != FACE else path.face.point) for i in indices}
    wrong_group = [
        i for i in indices if i in candidate.entries
        and set(candidate.entries[i].group.elements) != set(stabilizer(G, points[i]).elements)
    ]
    dims = {candidate.entries[i].dimension for i in indices if i in candidate.entries}
    if missing or wrong_group or len(dims) > 1:
        results[1] = ConditionResult(False, f"missing {missing}, wrong stabilizer {wrong_group}, dimensions {sorted(dims)}")
        for k in (2, 3, 4, 5):
            results[k] = ConditionResult(False, "entries are incomplete")
        return TupleValidation(results)
    results[1] = ConditionResult(True)
    # Effective actions have trivial H and χ, so every entry is χ-isotypical.
    results[2] = ConditionResult(True, "trivial character of the kernel")

    chars = {i: character_of(candidate.entries[i]) for i in indices}

    bad = []
    window = path.window
    for a, j in enumerate(window):
        for i in window[a + 1:]:
            for g in transporter(G, points[j], points[i]):
                g_inv = g.inverse()
                if any(chars[i][k] != chars[j][g_inv.compose(k).compose(g)] for k in chars[i]):
                    bad.append((j, i))
                    break
    results[3] = ConditionResult(not bad, f"conjugation fails for {bad}" if bad else "")

    bad = []
    for i in window:
        cone = cone_stabilizer(cc, i, G)
        if not _agree(chars[i], chars[FACE], cone.elements):
            bad.append(i)
    results[4] = ConditionResult(not bad, f"cone restriction differs at {bad}" if bad else "")

    bad = []
    for seg in path.segments:
        edge = edge_interior_stabilizer(cc, seg.edge, G)
        if not _agree(chars[seg.index], chars[seg.index + 1], edge.elements):
            bad.append(seg.index)
    results[5] = ConditionResult(not bad, f"edge restriction differs on segments {bad}" if bad else "")
    return TupleValidation(results)


def all_candidates(cc: CanonicalClass, rank: int, context: Optional[BundleContext] = None) -> Iterator[ATuple]:
    """Every tuple of rank-``rank`` entries, valid or not."""
    ctx = context or bundle_context(cc)
    order = ctx.order
    for combo in product(*(candidate_entries(ctx.stabilizers[i], rank) for i in order)):
        yield ATuple(dict(zip(order, combo)))


# Classification report


@dataclass
class ClassificationReport:
    """Which classification theorem applies to a class and the tuple counts per rank."""

    family_row: str
    theorem_case: TheoremCase
    tuple_count_by_rank: Dict[int, int]
    fiber_size: Union[int, str]
    chern_modulus: Optional[int] = None
    chern_offset: Optional[str] = None
    notice: str = ""


def theorem_case(cc: CanonicalClass) -> TheoremCase:
    """A for cyclic point groups, B for D_1 with a shift glide, C otherwise."""
    label = cc.point_group
    if label.is_cyclic:
        return TheoremCase.A
    shifted = cc.glide == Glide.SHIFT and canonical_family(cc.family_row) == cc.family_row
    if label.kind == "dihedral" and label.n == 1 and shifted:
        return TheoremCase.B
    return TheoremCase.C


def classify_bundles(cc: CanonicalClass, rank_cap: Optional[int] = None, continuous: bool = False) -> ClassificationReport:
    """Classification shape of equivariant bundles for ``cc``, with tuple counts up to ``rank_cap``.

    :param cc: Canonical class of a finite row
    :type cc: CanonicalClass
    :param rank_cap: Largest rank to enumerate (defaults to the configured cap)
    :type rank_cap: Optional[int]
    :param continuous: Whether the question concerns a positive-dimensional family
    :type continuous: bool
    :returns: Theorem case, counts and Chern data
    :rtype: ClassificationReport
    :raises OneDimensionalOutOfScope: If ``continuous`` is set
    :raises RankCapExceeded: If ``rank_cap`` exceeds the configured cap
    """
    if continuous:
        raise OneDimensionalOutOfScope(CIRCLE_NOTICE)
    top = rank_cap if rank_cap is not None else settings.rank_cap
    _check_rank(top)
    ctx = bundle_context(cc)
    counts = {rank: len(enumerate_A(cc, rank, ctx)) for rank in range(1, top + 1)}
    case = theorem_case(cc)
    report = ClassificationReport(cc.family_row, case, counts, fiber_size=1)
    if case == TheoremCase.A:
        report.fiber_size = "Z-indexed by Chern class"
        report.chern_modulus = ctx.group.order
        report.chern_offset = "k0(tuple)"
    elif case == TheoremCase.B:
        report.fiber_size = 2
        report.notice = "each fiber of the forgetful map has two elements with the same Chern class"
    else:
        report.notice = "bundles are determined by their invariant tuple"
    logger.info(f"Row {cc.family_row}: case {case.value}, counts {counts}")
    return report
