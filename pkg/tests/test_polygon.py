import random
from fractions import Fraction

import pytest

from lpoly.errors import BadParameters, EmptyInput, LengthMismatch, NonConvex
from lpoly.polygon import NewtonPolygon, fraction_str, parse_fraction, polygon_from_json

F = Fraction


def test_fraction_strings():
    assert fraction_str(F(3, 6)) == "1/2"
    assert fraction_str(2) == "2/1"
    assert parse_fraction("7/4") == F(7, 4)
    assert parse_fraction("-3/1") == -3


def test_from_points_basic():
    poly = NewtonPolygon.from_points([(0, 0), (1, F(1, 2)), (2, 2)])
    assert poly.vertices == ((0, F(0)), (1, F(1, 2)), (2, F(2)))
    assert poly.length == 2


def test_from_points_collinear_merge():
    poly = NewtonPolygon.from_points([(0, 0), (1, 1), (2, 2)])
    assert poly.vertices == ((0, F(0)), (2, F(2)))


def test_from_points_skips_upper_points():
    # the middle point sits above the chord and drops out
    poly = NewtonPolygon.from_points([(0, 0), (1, 5), (2, 1)])
    assert poly.vertices == ((0, F(0)), (2, F(1)))


def test_from_points_infinite_and_duplicates():
    poly = NewtonPolygon.from_points([(0, 0), (1, None), (2, 1), (2, 3)])
    assert poly.vertices == ((0, F(0)), (2, F(1)))
    with pytest.raises(EmptyInput):
        NewtonPolygon.from_points([(0, None)])


def test_must_start_at_origin():
    with pytest.raises(BadParameters):
        NewtonPolygon.from_points([(1, 0), (2, 1)])
    with pytest.raises(BadParameters):
        NewtonPolygon([(0, 1), (2, 2)])


def test_convexity_enforced():
    with pytest.raises(NonConvex):
        NewtonPolygon([(0, 0), (1, 1), (2, F(3, 2))])


def test_from_slopes():
    poly = NewtonPolygon.from_slopes([(F(1, 2), 2), (F(3, 2), 1)])
    assert poly.vertices == ((0, F(0)), (2, F(1)), (3, F(5, 2)))
    assert poly.slope_multiset() == ((F(1, 2), 2), (F(3, 2), 1))
    # flat and unsorted input is fine
    same = NewtonPolygon.from_slopes([F(3, 2), F(1, 2), F(1, 2)])
    assert same == poly


def test_single_vertex_polygon():
    poly = NewtonPolygon.from_slopes([])
    assert poly.vertices == ((0, F(0)),)
    assert poly.slope_multiset() == ()
    assert poly.ordinate_at(0) == 0


def test_ordinate_at():
    poly = NewtonPolygon.from_slopes([(F(1, 3), 3), (F(2), 1)])
    assert poly.ordinate_at(0) == 0
    assert poly.ordinate_at(2) == F(2, 3)
    assert poly.ordinate_at(F(7, 2)) == 1 + F(1, 2) * 2
    with pytest.raises(BadParameters):
        poly.ordinate_at(5)


def test_lies_above():
    low = NewtonPolygon.from_slopes([(F(0), 1), (F(1), 1)])
    high = NewtonPolygon.from_slopes([(F(1, 2), 2)])
    assert high.lies_above(low)
    assert not low.lies_above(high)
    assert low.lies_above(low)
    with pytest.raises(LengthMismatch):
        low.lies_above(NewtonPolygon.from_slopes([(F(1), 3)]))


def test_scale():
    poly = NewtonPolygon.from_slopes([(F(1, 2), 1), (F(3, 4), 2)])
    doubled = poly.scale(2)
    assert doubled.vertices == tuple((2 * x, 2 * y) for x, y in poly.vertices)
    assert doubled.slope_multiset() == ((F(1, 2), 2), (F(3, 4), 4))
    with pytest.raises(BadParameters):
        poly.scale(0)


def test_merge():
    a = NewtonPolygon.from_slopes([(F(1, 3), 1)])
    b = NewtonPolygon.from_slopes([(F(2, 3), 2)])
    merged = a.merge(b)
    assert merged.slope_multiset() == ((F(1, 3), 1), (F(2, 3), 2))


def test_slope_round_trip_seeded():
    rng = random.Random(5)
    for _ in range(25):
        slopes = sorted(
            F(rng.randrange(0, 40), rng.randrange(1, 9)) for _ in range(rng.randrange(1, 8))
        )
        poly = NewtonPolygon.from_slopes(slopes)
        assert list(poly.slopes_flat()) == slopes
        assert NewtonPolygon.from_slopes(poly.slope_multiset()) == poly


def test_hull_below_all_points_seeded():
    rng = random.Random(9)
    for _ in range(25):
        pts = [(0, F(0))]
        for x in range(1, rng.randrange(3, 10)):
            pts.append((x, F(rng.randrange(0, 30), rng.randrange(1, 7))))
        poly = NewtonPolygon.from_points(pts)
        for x, y in pts:
            assert poly.ordinate_at(x) <= y
        assert poly.vertices[-1][0] == max(x for x, _ in pts)


def test_json_round_trip():
    poly = NewtonPolygon.from_slopes([(F(2, 5), 3), (F(7, 5), 1)])
    data = poly.to_json_dict()
    assert data["slopes"] == [["2/5", 3], ["7/5", 1]]
    assert polygon_from_json(data) == poly


def test_csv_rows():
    poly = NewtonPolygon.from_slopes([(F(1, 2), 2)])
    assert poly.to_csv_rows() == [[0, "0/1"], [1, "1/2"], [2, "1/1"]]
