"""Exact planar geometry in lattice coordinates.

This module provides rational vectors and matrices, Gram forms with
Gauss reduction, integer lattice normal forms, and polygon area and
clipping computations. Every quantity is a ``fractions.Fraction``; no
floating point is used anywhere.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from math import ceil
from typing import Iterable, List, Sequence, Tuple, Union

from app.errors import InconsistentGram, InvalidParams

Rat = Fraction
Number = Union[int, Fraction]


def rat(value: Union[Number, str]) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction.

    :param value: Value to convert
    :type value: Union[int, Fraction, str]
    :returns: The value as a reduced Fraction
    :rtype: Fraction
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise InvalidParams(f"floating point value {value!r} is not exact")
    return Fraction(value)


@dataclass(frozen=True, order=True)
class Vec2Q:
    """A point or vector of the plane in lattice coordinates."""

    x: Fraction
    y: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "x", rat(self.x))
        object.__setattr__(self, "y", rat(self.y))

    @classmethod
    def of(cls, x: Union[Number, str], y: Union[Number, str]) -> "Vec2Q":
        return cls(rat(x), rat(y))

    def __add__(self, other: "Vec2Q") -> "Vec2Q":
        return Vec2Q(self.x + other.x, self.y + other.y)

    def __sub__(self, other: "Vec2Q") -> "Vec2Q":
        return Vec2Q(self.x - other.x, self.y - other.y)

    def __neg__(self) -> "Vec2Q":
        return Vec2Q(-self.x, -self.y)

    def scale(self, factor: Number) -> "Vec2Q":
        return Vec2Q(self.x * factor, self.y * factor)

    def mod1(self) -> "Vec2Q":
        """Reduce both coordinates into [0, 1)."""
        return Vec2Q(self.x - (self.x.numerator // self.x.denominator),
                     self.y - (self.y.numerator // self.y.denominator))

    def is_integral(self) -> bool:
        return self.x.denominator == 1 and self.y.denominator == 1

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0

    def as_tuple(self) -> Tuple[Fraction, Fraction]:
        return (self.x, self.y)

    def __repr__(self) -> str:
        return f"({self.x}, {self.y})"


ORIGIN = Vec2Q(Fraction(0), Fraction(0))


def lerp(a: Vec2Q, b: Vec2Q, t: Number) -> Vec2Q:
    """Point ``a + t (b - a)`` on the segment from ``a`` to ``b``."""
    return a + (b - a).scale(t)


def cross(u: Vec2Q, v: Vec2Q) -> Fraction:
    return u.x * v.y - u.y * v.x


@dataclass(frozen=True)
class Mat2:
    """A rational 2x2 matrix ``[[a, b], [c, d]]`` acting on column vectors."""

    a: Fraction
    b: Fraction
    c: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "c", "d"):
            object.__setattr__(self, name, rat(getattr(self, name)))

    @classmethod
    def of(cls, rows: Sequence[Sequence[Union[Number, str]]]) -> "Mat2":
        """Build a matrix from a row-major nested sequence."""
        (a, b), (c, d) = rows
        return cls(rat(a), rat(b), rat(c), rat(d))

    @classmethod
    def from_columns(cls, u: Vec2Q, v: Vec2Q) -> "Mat2":
        return cls(u.x, v.x, u.y, v.y)

    @classmethod
    def identity(cls) -> "Mat2":
        return cls(Fraction(1), Fraction(0), Fraction(0), Fraction(1))

    @classmethod
    def diag(cls, p: Number, q: Number) -> "Mat2":
        return cls(rat(p), Fraction(0), Fraction(0), rat(q))

    def rows(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.c, self.d))

    def columns(self) -> Tuple[Vec2Q, Vec2Q]:
        return (Vec2Q(self.a, self.c), Vec2Q(self.b, self.d))

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.c

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def inverse(self) -> "Mat2":
        det = self.det()
        if det == 0:
            raise InvalidParams("singular matrix has no inverse")
        return Mat2(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def __neg__(self) -> "Mat2":
        return Mat2(-self.a, -self.b, -self.c, -self.d)

    def __add__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a + other.a, self.b + other.b, self.c + other.c, self.d + other.d)

    def __sub__(self, other: "Mat2") -> "Mat2":
        return Mat2(self.a - other.a, self.b - other.b, self.c - other.c, self.d - other.d)

    def __matmul__(self, other):
        if isinstance(other, Vec2Q):
            return Vec2Q(self.a * other.x + self.b * other.y, self.c * other.x + self.d * other.y)
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def is_integral(self) -> bool:
        return all(x.denominator == 1 for x in (self.a, self.b, self.c, self.d))

    def is_unimodular(self) -> bool:
        return self.is_integral() and abs(self.det()) == 1

    def int_rows(self) -> Tuple[Tuple[int, int], Tuple[int, int]]:
        """Row-major integer entries; the matrix must be integral."""
        if not self.is_integral():
            raise InvalidParams(f"matrix {self} is not integral")
        return ((int(self.a), int(self.b)), (int(self.c), int(self.d)))

    def __repr__(self) -> str:
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = Mat2.identity()


class LatticeShape(str, Enum):
    """Bravais shape of a planar lattice."""

    SQUARE = "Square"
    TRIANGULAR = "Triangular"
    RECTANGULAR = "Rectangular"
    RHOMBIC = "Rhombic"
    OBLIQUE = "Oblique"


@dataclass(frozen=True)
class Gram:
    """Gram form ``[[a, b], [b, d]]`` of a lattice basis.

    :raises InconsistentGram: If the form is not positive definite
    """

    a: Fraction
    b: Fraction
    d: Fraction

    def __post_init__(self) -> None:
        for name in ("a", "b", "d"):
            object.__setattr__(self, name, rat(getattr(self, name)))
        if not (self.a > 0 and self.a * self.d - self.b * self.b > 0):
            raise InconsistentGram(f"Gram form {self.rows()} is not positive definite")

    @classmethod
    def of(cls, rows: Sequence[Sequence[Union[Number, str]]]) -> "Gram":
        (a, b), (b2, d) = rows
        if rat(b) != rat(b2):
            raise InconsistentGram(f"Gram matrix {rows} is not symmetric")
        return cls(rat(a), rat(b), rat(d))

    @classmethod
    def from_matrix(cls, m: Mat2) -> "Gram":
        if m.b != m.c:
            raise InconsistentGram(f"Gram matrix {m} is not symmetric")
        return cls(m.a, m.b, m.d)

    def matrix(self) -> Mat2:
        return Mat2(self.a, self.b, self.b, self.d)

    def rows(self) -> Tuple[Tuple[Fraction, Fraction], Tuple[Fraction, Fraction]]:
        return ((self.a, self.b), (self.b, self.d))

    def det(self) -> Fraction:
        return self.a * self.d - self.b * self.b

    def inner(self, u: Vec2Q, v: Vec2Q) -> Fraction:
        return (self.a * u.x * v.x + self.b * (u.x * v.y + u.y * v.x) + self.d * u.y * v.y)

    def norm(self, v: Vec2Q) -> Fraction:
        """Squared length of ``v``."""
        return self.inner(v, v)

    def transform(self, u: Mat2) -> "Gram":
        """Return ``Uᵀ g U``, the form in the basis given by the columns of ``U``."""
        return Gram.from_matrix(u.transpose() @ self.matrix() @ u)

    def preserved_by(self, m: Mat2) -> bool:
        """Whether ``m`` is an isometry of this form."""
        return m.transpose() @ self.matrix() @ m == self.matrix()

    def scaled(self, factor: Number) -> "Gram":
        return Gram(self.a * factor, self.b * factor, self.d * factor)


SQUARE_GRAM = Gram(Fraction(1), Fraction(0), Fraction(1))
TRIANGULAR_GRAM = Gram(Fraction(1), Fraction(1, 2), Fraction(1))


def gauss_reduce(g: Gram) -> Tuple[Gram, Mat2]:
    """Gauss-reduce a positive definite binary form.

    :param g: Form to reduce
    :type g: Gram
    :returns: Reduced form ``g'`` with ``0 <= 2b' <= a' <= d'`` and a
        unimodular ``U`` with ``Uᵀ g U = g'``
    :rtype: Tuple[Gram, Mat2]
    """
    u = Vec2Q(Fraction(1), Fraction(0))
    v = Vec2Q(Fraction(0), Fraction(1))
    while True:
        a, b = g.norm(u), g.inner(u, v)
        k = ceil(b / a - Fraction(1, 2))
        if k:
            v = v - u.scale(k)
        if g.norm(v) < a:
            u, v = v, u
            continue
        break
    if g.inner(u, v) < 0:
        v = -v
    basis = Mat2.from_columns(u, v)
    return g.transform(basis), basis


def lattice_shape(g: Gram) -> LatticeShape:
    """Classify the Bravais shape of the lattice carrying ``g``.

    :param g: Gram form
    :type g: Gram
    :returns: Shape label
    :rtype: LatticeShape
    """
    r, _ = gauss_reduce(g)
    if r.b == 0 and r.a == r.d:
        return LatticeShape.SQUARE
    if 2 * r.b == r.a and r.a == r.d:
        return LatticeShape.TRIANGULAR
    if r.b == 0:
        return LatticeShape.RECTANGULAR
    if r.a == r.d:
        return LatticeShape.RHOMBIC
    return LatticeShape.OBLIQUE


# Integer lattices


def ext_gcd(a: int, b: int) -> Tuple[int, int, int]:
    """Extended Euclid: ``(g, x, y)`` with ``a x + b y = g >= 0``."""
    old_r, r = a, b
    old_x, x = 1, 0
    old_y, y = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_x, x = x, old_x - q * x
        old_y, y = y, old_y - q * y
    if old_r < 0:
        old_r, old_x, old_y = -old_r, -old_x, -old_y
    return old_r, old_x, old_y


def hermite_normal_form(columns: Iterable[Tuple[int, int]]) -> Mat2:
    """Column Hermite normal form of the lattice spanned by integer vectors.

    :param columns: Integer generators of a full-rank lattice in Z²
    :type columns: Iterable[Tuple[int, int]]
    :returns: Basis matrix ``[[a, b], [0, d]]`` with ``a, d > 0`` and ``0 <= b < a``
    :rtype: Mat2
    :raises InvalidParams: If the vectors do not span a rank-2 lattice
    """
    cols: List[List[int]] = [[int(x), int(y)] for x, y in columns]
    pivot = [0, 0]
    rest: List[List[int]] = []
    for col in cols:
        g, s, t = ext_gcd(pivot[1], col[1])
        if g == 0:
            rest.append(col)
            continue
        p, q = pivot[1] // g, col[1] // g
        new_pivot = [s * pivot[0] + t * col[0], g]
        rest.append([q * pivot[0] - p * col[0], 0])
        pivot = new_pivot
    top = 0
    for col in rest:
        top, _, _ = ext_gcd(top, col[0])
    if pivot[1] == 0 or top == 0:
        raise InvalidParams("generators do not span a rank-2 lattice")
    return Mat2(Fraction(top), Fraction(pivot[0] % top), Fraction(0), Fraction(pivot[1]))


def lattice_basis(vectors: Iterable[Vec2Q]) -> Mat2:
    """Basis (as columns) of the rational lattice spanned by ``vectors``.

    :param vectors: Rational generators spanning a full-rank lattice
    :type vectors: Iterable[Vec2Q]
    :returns: Hermite-form basis matrix with rational entries
    :rtype: Mat2
    """
    vecs = list(vectors)
    denom = 1
    for v in vecs:
        for q in (v.x.denominator, v.y.denominator):
            denom = denom * q // ext_gcd(denom, q)[0]
    h = hermite_normal_form((int(v.x * denom), int(v.y * denom)) for v in vecs)
    return Mat2(h.a / denom, h.b / denom, h.c / denom, h.d / denom)


def smith_normal_form(m: Mat2) -> Tuple[Mat2, Mat2, Mat2]:
    """Smith normal form of a nonsingular integer matrix.

    :param m: Integral matrix with nonzero determinant
    :type m: Mat2
    :returns: ``(U, D, V)`` with ``U m V = D = diag(d1, d2)``, ``0 < d1 | d2``
        and ``U``, ``V`` unimodular
    :rtype: Tuple[Mat2, Mat2, Mat2]
    """
    (a, b), (c, d) = m.int_rows()
    if a * d - b * c == 0:
        raise InvalidParams("Smith normal form needs a nonsingular matrix")
    x = [[a, b], [c, d]]
    u = [[1, 0], [0, 1]]
    v = [[1, 0], [0, 1]]

    def swap_rows() -> None:
        x[0], x[1] = x[1], x[0]
        u[0], u[1] = u[1], u[0]

    def swap_cols() -> None:
        for mat in (x, v):
            for row in mat:
                row[0], row[1] = row[1], row[0]

    def add_row(src: int, dst: int, k: int) -> None:
        for j in range(2):
            x[dst][j] += k * x[src][j]
            u[dst][j] += k * u[src][j]

    def add_col(src: int, dst: int, k: int) -> None:
        for mat in (x, v):
            for row in mat:
                row[dst] += k * row[src]

    while True:
        entries = [(abs(x[i][j]), i, j) for i in range(2) for j in range(2) if x[i][j]]
        _, i, j = min(entries)
        if i:
            swap_rows()
        if j:
            swap_cols()
        p = x[0][0]
        add_row(0, 1, -(x[1][0] // p))
        add_col(0, 1, -(x[0][1] // p))
        if x[1][0] or x[0][1]:
            continue
        if x[1][1] % p:
            add_row(1, 0, 1)
            continue
        break
    if x[0][0] < 0:
        add_row(0, 0, -2)
    if x[1][1] < 0:
        add_row(1, 1, -2)
    return Mat2.of(u), Mat2.diag(x[0][0], x[1][1]), Mat2.of(v)


# Polygons


def polygon_signed_area(vertices: Sequence[Vec2Q]) -> Fraction:
    """Shoelace area; positive for counterclockwise order."""
    total = Fraction(0)
    n = len(vertices)
    for k in range(n):
        total += cross(vertices[k], vertices[(k + 1) % n])
    return total / 2


@dataclass(frozen=True)
class Polygon:
    """A simple polygon with vertices in clockwise order.

    Use :meth:`of` to build one from vertices in either orientation; the
    first vertex is kept in place.
    """

    vertices: Tuple[Vec2Q, ...]

    @classmethod
    def of(cls, points: Iterable[Vec2Q]) -> "Polygon":
        pts = tuple(points)
        if len(pts) < 3:
            raise InvalidParams("a polygon needs at least three vertices")
        if polygon_signed_area(pts) > 0:
            pts = (pts[0],) + tuple(reversed(pts[1:]))
        return cls(pts)

    def __len__(self) -> int:
        return len(self.vertices)

    def edges(self) -> List[Tuple[Vec2Q, Vec2Q]]:
        n = len(self.vertices)
        return [(self.vertices[k], self.vertices[(k + 1) % n]) for k in range(n)]

    def barycenter(self) -> Vec2Q:
        """Average of the vertices."""
        n = len(self.vertices)
        sx = sum((v.x for v in self.vertices), Fraction(0))
        sy = sum((v.y for v in self.vertices), Fraction(0))
        return Vec2Q(sx / n, sy / n)

    def map(self, matrix: Mat2, shift: Vec2Q = ORIGIN) -> "Polygon":
        """Image under ``x -> matrix x + shift``, re-oriented clockwise."""
        return Polygon.of(matrix @ v + shift for v in self.vertices)

    def translate(self, shift: Vec2Q) -> "Polygon":
        return Polygon(tuple(v + shift for v in self.vertices))

    def bounds(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        xs = [v.x for v in self.vertices]
        ys = [v.y for v in self.vertices]
        return min(xs), min(ys), max(xs), max(ys)


def polygon_area(p: Polygon, g: Gram) -> Fraction:
    """Area of ``p`` as a ratio to the area of the unit lattice cell.

    The ratio is independent of the metric; ``g`` is accepted so that
    callers pass the form the coordinates refer to.

    :param p: Polygon in lattice coordinates
    :type p: Polygon
    :param g: Gram form of the lattice
    :type g: Gram
    :returns: Area(p) / Area(unit cell); zero for degenerate polygons
    :rtype: Fraction
    """
    return abs(polygon_signed_area(p.vertices))


def is_convex(vertices: Sequence[Vec2Q]) -> bool:
    """Whether the closed vertex chain turns consistently (collinear allowed)."""
    n = len(vertices)
    sign = 0
    for k in range(n):
        a, b, c = vertices[k], vertices[(k + 1) % n], vertices[(k + 2) % n]
        turn = cross(b - a, c - b)
        if turn == 0:
            continue
        s = 1 if turn > 0 else -1
        if sign and s != sign:
            return False
        sign = s
    return True


def convex_clip(subject: Sequence[Vec2Q], clip: Polygon) -> List[Vec2Q]:
    """Sutherland-Hodgman clipping of ``subject`` by a convex polygon.

    :param subject: Vertex chain of the polygon to clip
    :type subject: Sequence[Vec2Q]
    :param clip: Convex clockwise clipping polygon
    :type clip: Polygon
    :returns: Vertices of the intersection (possibly degenerate or empty)
    :rtype: List[Vec2Q]
    """
    output = list(subject)
    for a, b in clip.edges():
        if not output:
            break
        edge = b - a
        inputs, output = output, []
        prev = inputs[-1]
        for cur in inputs:
            # Interior of a clockwise polygon lies right of each edge.
            s_prev, s_cur = cross(edge, prev - a), cross(edge, cur - a)
            if s_cur <= 0:
                if s_prev > 0:
                    output.append(lerp(prev, cur, s_prev / (s_prev - s_cur)))
                output.append(cur)
            elif s_prev < 0:
                output.append(lerp(prev, cur, s_prev / (s_prev - s_cur)))
            prev = cur
    return output


def _in_triangle(p: Vec2Q, a: Vec2Q, b: Vec2Q, c: Vec2Q) -> bool:
    # closed clockwise triangle
    return cross(b - a, p - a) <= 0 and cross(c - b, p - b) <= 0 and cross(a - c, p - c) <= 0


def triangulate(p: Polygon) -> List[Polygon]:
    """Ear-clipping triangulation of a simple clockwise polygon.

    :param p: Simple polygon
    :type p: Polygon
    :returns: Interior-disjoint triangles covering ``p``
    :rtype: List[Polygon]
    :raises InvalidParams: If no ear is found (the polygon is not simple)
    """
    remaining = list(p.vertices)
    triangles: List[Polygon] = []
    while len(remaining) > 3:
        n = len(remaining)
        for k in range(n):
            a, b, c = remaining[k - 1], remaining[k], remaining[(k + 1) % n]
            turn = cross(b - a, c - b)
            if turn == 0:
                del remaining[k]
                break
            if turn > 0:
                continue
            others = (v for v in remaining if v not in (a, b, c))
            if any(_in_triangle(v, a, b, c) for v in others):
                continue
            triangles.append(Polygon((a, b, c)))
            del remaining[k]
            break
        else:
            raise InvalidParams("polygon has no ear; it is not simple")
    if polygon_signed_area(remaining) != 0:
        triangles.append(Polygon(tuple(remaining)))
    return triangles


def intersection_area(p1: Polygon, p2: Polygon) -> Fraction:
    """Area of ``p1 ∩ p2``.

    One polygon is used as a convex clip; when neither is convex, ``p2``
    is triangulated and the pieces are clipped one by one.
    """
    if is_convex(p2.vertices):
        pieces = [(p1.vertices, p2)]
    elif is_convex(p1.vertices):
        pieces = [(p2.vertices, p1)]
    else:
        pieces = [(p1.vertices, t) for t in triangulate(p2)]
    total = Fraction(0)
    for subject, clip in pieces:
        clipped = convex_clip(subject, clip)
        if len(clipped) >= 3:
            total += abs(polygon_signed_area(clipped))
    return total


def polygons_interior_disjoint(p1: Polygon, p2: Polygon) -> bool:
    """Whether the interiors of two polygons are disjoint.

    :param p1: First polygon
    :type p1: Polygon
    :param p2: Second polygon
    :type p2: Polygon
    :returns: True iff the intersection has zero area
    :rtype: bool
    """
    return intersection_area(p1, p2) == 0


def point_on_segment(p: Vec2Q, a: Vec2Q, b: Vec2Q) -> bool:
    """Whether ``p`` lies on the closed segment ``[a, b]``."""
    if cross(b - a, p - a) != 0:
        return False
    return (min(a.x, b.x) <= p.x <= max(a.x, b.x)) and (min(a.y, b.y) <= p.y <= max(a.y, b.y))
