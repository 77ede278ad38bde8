"""Tests for exact rational geometry."""
from fractions import Fraction

import pytest

from app.errors import InconsistentGram, InvalidParams
from app.exactgeom import (
    SQUARE_GRAM,
    TRIANGULAR_GRAM,
    Gram,
    LatticeShape,
    Mat2,
    Polygon,
    Vec2Q,
    ext_gcd,
    gauss_reduce,
    hermite_normal_form,
    intersection_area,
    lattice_shape,
    point_on_segment,
    polygon_area,
    polygon_signed_area,
    polygons_interior_disjoint,
    rat,
    smith_normal_form,
    triangulate,
)


def _square(x: int = 0, y: int = 0) -> Polygon:
    return Polygon.of([Vec2Q.of(x, y), Vec2Q.of(x, y + 1), Vec2Q.of(x + 1, y + 1), Vec2Q.of(x + 1, y)])


def _ell(x: int = 0, y: int = 0) -> Polygon:
    corners = [(0, 0), (0, 2), (1, 2), (1, 1), (2, 1), (2, 0)]
    return Polygon.of(Vec2Q.of(x + a, y + b) for a, b in corners)


@pytest.mark.unit
@pytest.mark.geometry
class TestRationals:
    """Tests for rational coercion and vectors."""

    def test_rat_parses_strings(self):
        """Test that "p/q" strings become fractions."""
        assert rat("3/6") == Fraction(1, 2)
        assert rat(2) == Fraction(2)

    def test_rat_rejects_float(self):
        """Test that floats are refused."""
        with pytest.raises(InvalidParams):
            rat(0.5)

    def test_mod1(self):
        """Test reduction into the unit square."""
        assert Vec2Q.of("3/2", "-1/4").mod1() == Vec2Q.of("1/2", "3/4")


@pytest.mark.unit
@pytest.mark.geometry
class TestMatrices:
    """Tests for 2x2 matrices and Gram forms."""

    def test_inverse_and_det(self):
        """Test inverse of a unimodular matrix."""
        m = Mat2.of([[2, 1], [1, 1]])
        assert m.det() == 1
        assert m.inverse() == Mat2.of([[1, -1], [-1, 2]])
        assert m.is_unimodular()

    def test_gram_not_definite(self):
        """Test that an indefinite form is rejected."""
        with pytest.raises(InconsistentGram):
            Gram.of([[1, 0], [0, -1]])

    def test_gram_not_symmetric(self):
        """Test that a non-symmetric matrix is rejected."""
        with pytest.raises(InconsistentGram):
            Gram.of([[1, 1], [0, 1]])

    def test_gauss_reduce_recovers_square(self):
        """Test that a sheared square form reduces to the identity form."""
        g = SQUARE_GRAM.transform(Mat2.of([[1, 3], [0, 1]]))
        reduced, basis = gauss_reduce(g)
        assert reduced == SQUARE_GRAM
        assert basis.is_unimodular()
        assert g.transform(basis) == reduced

    def test_lattice_shape(self):
        """Test Bravais shape detection."""
        assert lattice_shape(SQUARE_GRAM) == LatticeShape.SQUARE
        assert lattice_shape(TRIANGULAR_GRAM) == LatticeShape.TRIANGULAR
        assert lattice_shape(Gram.of([[2, 0], [0, 3]])) == LatticeShape.RECTANGULAR


@pytest.mark.unit
@pytest.mark.geometry
class TestIntegerLattices:
    """Tests for gcd, Hermite and Smith normal forms."""

    def test_ext_gcd(self):
        """Test Bezout coefficients."""
        g, x, y = ext_gcd(12, 18)
        assert g == 6
        assert 12 * x + 18 * y == 6

    def test_hermite_normal_form(self):
        """Test the checkerboard lattice basis."""
        assert hermite_normal_form([(2, 0), (0, 2), (1, 1)]) == Mat2.of([[2, 1], [0, 1]])

    def test_hermite_needs_full_rank(self):
        """Test that a rank-1 set is rejected."""
        with pytest.raises(InvalidParams):
            hermite_normal_form([(1, 1), (2, 2)])

    def test_smith_normal_form(self):
        """Test diagonal form and divisibility."""
        m = Mat2.of([[2, 4], [6, 8]])
        u, d, v = smith_normal_form(m)
        assert d == Mat2.diag(2, 4)
        assert u @ m @ v == d
        assert u.is_unimodular() and v.is_unimodular()


@pytest.mark.unit
@pytest.mark.geometry
class TestPolygons:
    """Tests for polygons, clipping and areas."""

    def test_polygon_is_clockwise(self):
        """Test that polygons are stored clockwise with the first vertex kept."""
        ccw = [Vec2Q.of(0, 0), Vec2Q.of(1, 0), Vec2Q.of(1, 1), Vec2Q.of(0, 1)]
        assert polygon_signed_area(ccw) == 1
        p = Polygon.of(ccw)
        assert p.vertices[0] == Vec2Q.of(0, 0)
        assert polygon_signed_area(p.vertices) == -1

    def test_area_and_barycenter(self):
        """Test area and barycenter of a triangle."""
        t = Polygon.of([Vec2Q.of(0, 0), Vec2Q.of(1, 0), Vec2Q.of(0, 1)])
        assert polygon_area(t, SQUARE_GRAM) == Fraction(1, 2)
        assert t.barycenter() == Vec2Q.of("1/3", "1/3")

    def test_adjacent_squares_are_disjoint(self):
        """Test that squares sharing an edge have disjoint interiors."""
        assert polygons_interior_disjoint(_square(), _square(1, 0))

    def test_overlapping_squares(self):
        """Test the clipped overlap area."""
        shifted = _square().translate(Vec2Q.of("1/2", 0))
        assert intersection_area(_square(), shifted) == Fraction(1, 2)
        assert not polygons_interior_disjoint(_square(), shifted)

    def test_point_on_segment(self):
        """Test closed segment membership."""
        a, b = Vec2Q.of(0, 0), Vec2Q.of(1, 1)
        assert point_on_segment(Vec2Q.of("1/2", "1/2"), a, b)
        assert not point_on_segment(Vec2Q.of("1/2", 0), a, b)
        assert not point_on_segment(Vec2Q.of(2, 2), a, b)

    def test_triangulate_nonconvex(self):
        """Test that an L-shaped hexagon splits into four triangles of total area 3."""
        pieces = triangulate(_ell())
        assert len(pieces) == 4
        assert sum(polygon_area(t, SQUARE_GRAM) for t in pieces) == 3

    @pytest.mark.parametrize("shift,area", [
        ((0, 0), 3),
        ((1, 0), 1),
        ((1, 1), 0),
    ])
    def test_two_nonconvex_polygons(self, shift, area):
        """Test overlap areas when neither polygon is convex."""
        assert intersection_area(_ell(), _ell(*shift)) == area
        assert polygons_interior_disjoint(_ell(), _ell(*shift)) == (area == 0)
