"""Tests for cyclotomic arithmetic and representation characters."""
from fractions import Fraction

import pytest

from app.errors import ConjugationMismatch, NonIntegralMultiplicity, NotAHomomorphism
from app.exactgeom import Mat2
from app.repchars import (
    ONE,
    ZERO,
    Cyclotomic,
    Embedding,
    RepMultiplicity,
    character_of,
    conjugate_rep,
    decompose,
    inclusion,
    inner_product,
    irr_table,
    realize_label,
    realize_subgroup,
    regular_character,
    restrict,
    trivial_rep,
)
from app.torusgroup import AffineTorusMap, PointGroupLabel, subgroup

C2 = PointGroupLabel.cyclic(2)
C3 = PointGroupLabel.cyclic(3)
C4 = PointGroupLabel.cyclic(4)
C6 = PointGroupLabel.cyclic(6)
D1 = PointGroupLabel.dihedral(1, Fraction(0))
D3 = PointGroupLabel.dihedral(3, Fraction(0))
D4 = PointGroupLabel.dihedral(4, Fraction(0))
D6 = PointGroupLabel.dihedral(6, Fraction(0))


@pytest.mark.unit
@pytest.mark.bundles
class TestCyclotomic:
    """Tests for exact arithmetic in Q(ζ₁₂)."""

    @pytest.mark.parametrize("k", range(12))
    def test_root_times_inverse(self, k):
        """Test that ζ^k ζ^-k = 1."""
        assert Cyclotomic.root(k) * Cyclotomic.root(-k) == ONE

    @pytest.mark.parametrize("k", range(12))
    def test_conjugate_is_inverse_root(self, k):
        """Test that the conjugate of ζ^k is ζ^-k."""
        assert Cyclotomic.root(k).conjugate() == Cyclotomic.root(-k)

    def test_real_parts(self):
        """Test 2cos(π/3) = 1 and 2cos(2π/3) = -1."""
        assert Cyclotomic.root(2) + Cyclotomic.root(-2) == ONE
        assert Cyclotomic.root(4) + Cyclotomic.root(-4) == Cyclotomic.of(-1)

    def test_sixth_power_is_minus_one(self):
        """Test that ζ^6 = -1."""
        assert Cyclotomic.root(6) == -ONE
        assert Cyclotomic.root(3) * Cyclotomic.root(3) == -ONE

    def test_rational(self):
        """Test rational extraction."""
        assert Cyclotomic.of(3).rational() == 3
        with pytest.raises(NonIntegralMultiplicity):
            Cyclotomic.root(1).rational()


@pytest.mark.unit
@pytest.mark.bundles
class TestIrrTable:
    """Tests for the character tables."""

    @pytest.mark.parametrize("label,dims", [
        (PointGroupLabel.trivial(), (1,)),
        (C4, (1, 1, 1, 1)),
        (D1, (1, 1)),
        (D3, (1, 1, 2)),
        (D4, (1, 1, 1, 1, 2)),
        (D6, (1, 1, 1, 1, 2, 2)),
    ])
    def test_dimensions(self, label, dims):
        """Test the irreducible dimensions."""
        table = irr_table(label)
        assert table.dims == dims
        assert sum(d * d for d in dims) == label.order

    @pytest.mark.parametrize("label", [C6, D4, D6])
    def test_orthonormal(self, label):
        """Test that irreducible characters are orthonormal."""
        group = realize_label(label)
        table = irr_table(label)
        chars = [{w: chi(w) for w in group.elements} for chi in table.characters]
        for a, chi in enumerate(chars):
            for b, psi in enumerate(chars):
                assert inner_product(chi, psi, group) == (ONE if a == b else ZERO)

    def test_dihedral_classes(self):
        """Test that D_3 has three conjugacy classes."""
        assert len(irr_table(D3).classes) == 3


@pytest.mark.unit
@pytest.mark.bundles
class TestDecompose:
    """Tests for multiplicity decomposition."""

    def test_regular_character(self):
        """Test that the regular representation of C4 contains each irreducible once."""
        group = realize_label(C4)
        assert decompose(regular_character(group), group).mult == (1, 1, 1, 1)

    def test_regular_character_dihedral(self):
        """Test that each irreducible of D_3 occurs with its dimension."""
        group = realize_label(D3)
        assert decompose(regular_character(group), group).mult == (1, 1, 2)

    def test_zero_character(self):
        """Test that the zero function decomposes to zero."""
        group = realize_label(C4)
        assert decompose({e: ZERO for e in group.elements}, group).mult == (0, 0, 0, 0)

    def test_non_character(self):
        """Test that a delta function on C2 is not a character."""
        group = realize_label(C2)
        delta = {(0, 0): ONE, (1, 0): ZERO}
        with pytest.raises(NonIntegralMultiplicity):
            decompose(delta, group)

    def test_negative_multiplicity(self):
        """Test that multiplicities are non-negative."""
        with pytest.raises(NonIntegralMultiplicity):
            RepMultiplicity(realize_label(C2), (1, -1))

    def test_wrong_length(self):
        """Test that the vector length must match the table."""
        with pytest.raises(NonIntegralMultiplicity):
            RepMultiplicity(realize_label(C2), (1, 0, 0))

    def test_direct_sum(self):
        """Test dimensions add under direct sum."""
        group = realize_label(D4)
        a = RepMultiplicity(group, (0, 0, 0, 0, 1))
        b = trivial_rep(group)
        assert (a + b).mult == (1, 0, 0, 0, 1)
        assert (a + b).dimension == 3


@pytest.mark.unit
@pytest.mark.bundles
class TestRestrict:
    """Tests for restriction along embeddings."""

    def test_two_dimensional_to_mirror(self):
        """Test that the 2-dimensional irreducible of D_3 restricts to both characters of D_1."""
        rho = RepMultiplicity(realize_label(D3), (0, 0, 1))
        sub = realize_label(D1)
        embedding = Embedding(sub, rho.group, {(0, 0): (0, 0), (0, 1): (0, 1)})
        assert restrict(rho, embedding).mult == (1, 1)

    def test_cyclic_subgroup(self):
        """Test restriction of a faithful C6 character to C3."""
        rep = RepMultiplicity(realize_label(C6), (0, 1, 0, 0, 0, 0))
        sub = realize_label(C3)
        embedding = Embedding(sub, rep.group, {(j, 0): (2 * j, 0) for j in range(3)})
        assert restrict(rep, embedding).mult == (0, 1, 0)

    def test_not_a_homomorphism(self):
        """Test that r -> r from C2 into C4 is refused."""
        rep = trivial_rep(realize_label(C4))
        embedding = Embedding(realize_label(C2), rep.group, {(0, 0): (0, 0), (1, 0): (1, 0)})
        with pytest.raises(NotAHomomorphism):
            restrict(rep, embedding)

    def test_inclusion_needs_members(self):
        """Test that inclusion of a non-subgroup raises."""
        with pytest.raises(NotAHomomorphism):
            inclusion(realize_label(D1), realize_label(C4))


@pytest.mark.unit
@pytest.mark.bundles
class TestConjugateRep:
    """Tests for transport of representations by conjugation."""

    @pytest.fixture
    def rotations(self, d4_group, row_class):
        """Realize the rotation subgroup of the D_4 row.

        :returns: Realized cyclic group of order 4
        """
        H = subgroup(d4_group, (g for g in d4_group if g.matrix.det() == 1))
        return realize_subgroup(H, row_class("D_4").frame)

    def test_mirror_inverts_rotations(self, rotations):
        """Test that conjugating by a mirror exchanges chi_1 and chi_3."""
        rep = RepMultiplicity(rotations, (0, 1, 0, 0))
        mirror = AffineTorusMap(Mat2.diag(1, -1))
        assert conjugate_rep(rep, mirror, rotations).mult == (0, 0, 0, 1)

    def test_identity_keeps_rep(self, rotations):
        """Test that the identity leaves a representation unchanged."""
        rep = RepMultiplicity(rotations, (0, 1, 0, 0))
        assert conjugate_rep(rep, AffineTorusMap.identity(), rotations) == rep

    def test_order_mismatch(self, rotations):
        """Test that groups of different orders are refused."""
        rep = trivial_rep(rotations)
        with pytest.raises(ConjugationMismatch):
            conjugate_rep(rep, AffineTorusMap.identity(), realize_label(C2))

    def test_character_values(self, rotations):
        """Test the character of chi_1 at the quarter turn."""
        rep = RepMultiplicity(rotations, (0, 1, 0, 0))
        quarter = rotations.element((1, 0))
        assert character_of(rep)[quarter] == Cyclotomic.root(3)
