"""Newton polygons with exact rational vertices.

A polygon here is the lower convex hull of a set of points (n, v) with
integer abscissae and rational (or infinite) ordinates, anchored at (0, 0).
Vertices are stored only where the slope actually changes, so two polygons
are equal iff their vertex tuples are equal.  Ordinates are Fractions
throughout; nothing is ever compared through floats.
"""
from __future__ import annotations

from fractions import Fraction

from .errors import BadParameters, EmptyInput, LengthMismatch, NonConvex

Rational = Fraction


def fraction_str(x) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(s: str) -> Fraction:
    num, den = s.split("/")
    return Fraction(int(num), int(den))


def _cross(o, a, b):
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


class NewtonPolygon:
    """Immutable lower-hull polygon; construct via from_points or from_slopes."""

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        verts = tuple((int(x), Fraction(y)) for x, y in vertices)
        if not verts:
            raise EmptyInput("a polygon needs at least one vertex")
        if verts[0] != (0, Fraction(0)):
            raise BadParameters("polygon must start at (0, 0)")
        for (x1, _), (x2, _) in zip(verts, verts[1:]):
            if x2 <= x1:
                raise BadParameters("vertex abscissae must strictly increase")
        slopes = [
            Fraction(y2 - y1, x2 - x1) for (x1, y1), (x2, y2) in zip(verts, verts[1:])
        ]
        for s1, s2 in zip(slopes, slopes[1:]):
            if s2 <= s1:
                raise NonConvex("slopes must strictly increase between vertices")
        self.vertices = verts

    @staticmethod
    def from_points(points) -> "NewtonPolygon":
        """Lower convex hull of (x, y) points; y = None means +infinity."""
        finite = {}
        for x, y in points:
            if y is None:
                continue
            x = int(x)
            y = Fraction(y)
            if x not in finite or y < finite[x]:
                finite[x] = y
        if not finite:
            raise EmptyInput("no finite points to take a hull of")
        pts = sorted(finite.items())
        hull = []
        for pt in pts:
            while len(hull) >= 2 and _cross(hull[-2], hull[-1], pt) <= 0:
                hull.pop()
            hull.append(pt)
        return NewtonPolygon(hull)

    @staticmethod
    def from_slopes(slopes) -> "NewtonPolygon":
        """Build from a slope multiset: items are slopes or (slope, length) pairs."""
        flat = []
        for item in slopes:
            if isinstance(item, tuple):
                s, n = item
                flat.extend([Fraction(s)] * int(n))
            else:
                flat.append(Fraction(item))
        flat.sort()
        verts = [(0, Fraction(0))]
        for s in flat:
            x, y = verts[-1]
            prev_slope = None
            if len(verts) >= 2:
                x0, y0 = verts[-2]
                prev_slope = Fraction(y - y0, x - x0)
            if prev_slope == s:
                verts[-1] = (x + 1, y + s)
            else:
                verts.append((x + 1, y + s))
        return NewtonPolygon(verts)

    @property
    def length(self) -> int:
        return self.vertices[-1][0]

    def ordinate_at(self, x) -> Fraction:
        x = Fraction(x)
        if x < 0 or x > self.length:
            raise BadParameters(f"abscissa {x} outside [0, {self.length}]")
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            if x1 <= x <= x2:
                return y1 + Fraction(y2 - y1, x2 - x1) * (x - x1)
        return self.vertices[-1][1]

    def slope_multiset(self) -> tuple:
        """Increasing (slope, length) pairs covering [0, length]."""
        out = []
        for (x1, y1), (x2, y2) in zip(self.vertices, self.vertices[1:]):
            out.append((Fraction(y2 - y1, x2 - x1), x2 - x1))
        return tuple(out)

    def slopes_flat(self) -> tuple:
        out = []
        for s, n in self.slope_multiset():
            out.extend([s] * n)
        return tuple(out)

    def lies_above(self, other: "NewtonPolygon") -> bool:
        """Pointwise >= comparison at every integer abscissa; endpoints must agree."""
        if self.length != other.length:
            raise LengthMismatch(
                f"polygon lengths differ: {self.length} vs {other.length}"
            )
        return all(
            self.ordinate_at(n) >= other.ordinate_at(n) for n in range(self.length + 1)
        )

    def scale(self, c: int) -> "NewtonPolygon":
        """Multiply both coordinates by a positive integer."""
        c = int(c)
        if c <= 0:
            raise BadParameters("scale factor must be positive")
        return NewtonPolygon(tuple((c * x, c * y) for x, y in self.vertices))

    def merge(self, other: "NewtonPolygon") -> "NewtonPolygon":
        """Polygon of a product: the union of the two slope multisets."""
        return NewtonPolygon.from_slopes(
            list(self.slope_multiset()) + list(other.slope_multiset())
        )

    def __eq__(self, other):
        if not isinstance(other, NewtonPolygon):
            return NotImplemented
        return self.vertices == other.vertices

    def __hash__(self):
        return hash(self.vertices)

    def __repr__(self):
        pts = ", ".join(f"({x}, {y})" for x, y in self.vertices)
        return f"NewtonPolygon[{pts}]"

    def to_json_dict(self) -> dict:
        return {
            "vertices": [[x, fraction_str(y)] for x, y in self.vertices],
            "slopes": [[fraction_str(s), n] for s, n in self.slope_multiset()],
        }

    def to_csv_rows(self) -> list:
        """One row per integer abscissa: [n, ordinate as num/den]."""
        return [[n, fraction_str(self.ordinate_at(n))] for n in range(self.length + 1)]


def polygon_from_json(data: dict) -> NewtonPolygon:
    return NewtonPolygon([(x, parse_fraction(y)) for x, y in data["vertices"]])
