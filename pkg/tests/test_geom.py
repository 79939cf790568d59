"""Exact planar geometry: predicates, angle accounting, ear clipping."""

from fractions import Fraction as F

import pytest

from flatlab import geom
from flatlab.errors import ConfigError, SelfIntersectingBoundary, ZeroEdge
from flatlab.geom import Angle


def test_vector_basics():
    assert geom.vadd((1, 2), (3, 4)) == (4, 6)
    assert geom.cross((1, 0), (0, 1)) == 1
    assert geom.dot((1, 2), (3, 4)) == 11
    assert geom.rot90ccw((1, 0)) == (0, 1)
    assert geom.rot90cw((1, 0)) == (0, -1)


def test_orient_and_segments():
    assert geom.orient((0, 0), (1, 0), (0, 1)) == 1
    assert geom.orient((0, 0), (1, 0), (2, 0)) == 0
    assert geom.segments_intersect((0, 0), (2, 2), (0, 2), (2, 0))
    assert not geom.segments_intersect((0, 0), (1, 0), (0, 1), (1, 1))
    # touching at an endpoint counts for the closed test
    assert geom.segments_intersect((0, 0), (1, 0), (1, 0), (1, 1))


def test_angle_between_quarters():
    a = Angle.between((1, 0), (0, 1))
    assert a.pi_multiple() is None
    assert a.radians() == pytest.approx(1.5707963267948966)
    two = a + a
    assert two.pi_multiple() == 1
    four = two + two
    assert four.pi_multiple() == 2


def test_angle_exact_fractions():
    u = (F(3), F(1, 7))
    full = Angle.between(u, (-u[0], -u[1])) + Angle.between((-u[0], -u[1]), u)
    assert full.pi_multiple() == 2


def test_angle_compare():
    a = Angle.between((1, 0), (1, 1))
    b = Angle.between((1, 0), (0, 1))
    assert a.compare(b) == -1
    assert b.compare(a) == 1
    assert a.compare(a) == 0


def test_angle_zero_vector_rejected():
    with pytest.raises(ValueError):
        Angle.between((0, 0), (1, 0))


def test_sector_contains_half_open():
    u, r = (1, 0), (0, 1)
    assert geom.sector_contains(u, r, (1, 0))
    assert geom.sector_contains(u, r, (2, 1))
    assert not geom.sector_contains(u, r, (0, 1))
    assert not geom.sector_contains(u, r, (-1, 1))
    assert not geom.sector_contains(u, r, (1, 0), include_start=False)


def test_polygon_area2():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    assert geom.polygon_area2(square) == 2
    assert geom.polygon_area2(list(reversed(square))) == -2


def test_validate_simple_polygon_errors():
    with pytest.raises(ConfigError):
        geom.validate_simple_polygon([(0, 0), (1, 0)])
    with pytest.raises(ZeroEdge):
        geom.validate_simple_polygon([(0, 0), (0, 0), (1, 1)])
    with pytest.raises(SelfIntersectingBoundary):
        geom.validate_simple_polygon([(0, 0), (2, 0), (0, 2), (2, 2)])
    with pytest.raises(ConfigError):
        geom.validate_simple_polygon([(0, 0), (0, 1), (1, 1), (1, 0)])


def test_triangulate_square():
    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    tris = geom.triangulate_polygon(square)
    assert len(tris) == 2
    area = sum(
        geom.polygon_area2([square[i], square[j], square[k]]) for i, j, k in tris
    )
    assert area == geom.polygon_area2(square)


def test_triangulate_reflex_polygon():
    lshape = [(0, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2)]
    tris = geom.triangulate_polygon(lshape)
    assert len(tris) == 4
    area = sum(
        geom.polygon_area2([lshape[i], lshape[j], lshape[k]]) for i, j, k in tris
    )
    assert area == geom.polygon_area2(lshape)
    for i, j, k in tris:
        assert geom.orient(lshape[i], lshape[j], lshape[k]) == 1


def test_triangulate_keeps_flat_vertices():
    # vertex 1 sits on the segment from 0 to 2 with a straight angle
    poly = [(0, 0), (F(1, 2), 0), (1, 0), (1, 1), (0, 1)]
    tris = geom.triangulate_polygon(poly)
    assert len(tris) == 3
    used = {v for t in tris for v in t}
    assert used == {0, 1, 2, 3, 4}


def test_triangulate_random_fans():
    # star-shaped polygons around the origin triangulate without ears failing
    import random

    rng = random.Random(7)
    for _ in range(25):
        m = rng.randrange(4, 10)
        pts = []
        for k in range(m):
            num = rng.randrange(1, 2**20)
            r = F(num, 2**20) + F(1, 2)
            # rational points on a coarse angular grid, strictly increasing angle
            pts.append((r * _cosq(k, m), r * _sinq(k, m)))
        tris = geom.triangulate_polygon(pts)
        assert len(tris) == m - 2
        total = sum(
            geom.polygon_area2([pts[i], pts[j], pts[k]]) for i, j, k in tris
        )
        assert total == geom.polygon_area2(pts)


def _cosq(k: int, m: int) -> F:
    # rational stand-ins for cos(2*pi*k/m) built from a fixed Pythagorean fan
    table = [(F(1), F(0)), (F(3, 5), F(4, 5)), (F(-5, 13), F(12, 13)),
             (F(-1), F(0)), (F(-3, 5), F(-4, 5)), (F(5, 13), F(-12, 13))]
    c, s = table[(k * len(table)) // m % len(table)]
    return c


def _sinq(k: int, m: int) -> F:
    table = [(F(1), F(0)), (F(3, 5), F(4, 5)), (F(-5, 13), F(12, 13)),
             (F(-1), F(0)), (F(-3, 5), F(-4, 5)), (F(5, 13), F(-12, 13))]
    c, s = table[(k * len(table)) // m % len(table)]
    return s
