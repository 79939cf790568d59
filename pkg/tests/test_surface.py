"""Surface construction: strata, cone angles, group action, serialization."""

import json
from fractions import Fraction as F

import pytest

from flatlab import (
    ConfigError,
    InvalidStratum,
    NonClosingPolygon,
    NonPositiveDeterminant,
    Stratum,
    TranslationSurface,
    ZeroEdge,
    build_from_polygon,
    build_surface,
)


def square_torus():
    return build_from_polygon([(1, 0), (0, 1)], [1, 0])


def reversal_surface(vectors):
    n = len(vectors)
    return build_from_polygon(vectors, list(range(n - 1, -1, -1)))


H2_VECTORS = [(F(1), F(0)), (F(1, 2), F(1, 2)), (F(-1, 3), F(2, 3)), (F(-1), F(1, 5))]


def l_shaped_surface():
    verts = [(0, 0), (1, 0), (2, 0), (2, 1), (1, 1), (1, 2), (0, 2), (0, 1)]
    pairing = [((0, 0), (0, 5)), ((0, 1), (0, 3)), ((0, 2), (0, 7)), ((0, 4), (0, 6))]
    return build_surface([verts], pairing)


class TestStratum:
    def test_canonical_order_and_genus(self):
        s = Stratum([1, 3, 0])
        assert s.degrees == (3, 1, 0)
        assert s.genus == 3
        assert Stratum([0]).genus == 1
        assert Stratum([2]).genus == 2

    def test_odd_total_rejected(self):
        with pytest.raises(InvalidStratum):
            Stratum([3])
        with pytest.raises(InvalidStratum):
            Stratum([2, 1])

    def test_parse(self):
        assert Stratum.parse("1,1") == Stratum([1, 1])
        assert Stratum.parse("{2,2}") == Stratum([2, 2])
        assert Stratum.parse([4]) == Stratum([4])

    def test_marked_points_stripped(self):
        assert Stratum([2, 0, 0]).without_marked_points == Stratum([2])
        assert Stratum([0, 0]).without_marked_points == Stratum([0])


class TestBuildFromPolygon:
    def test_square_torus(self):
        t = square_torus()
        assert t.stratum() == Stratum([0])
        assert t.genus == 1
        assert t.area == 1
        assert t.cone_angles() == (2,)
        assert t.backend == "exact"

    def test_reversal_h2(self):
        s = reversal_surface(H2_VECTORS)
        assert s.stratum() == Stratum([2])
        assert s.genus == 2
        assert s.cone_angles() == (6,)

    def test_six_vector_reversal_h4(self):
        vectors = [(F(2), F(1, 3)), (F(1), F(1)), (F(1, 2), F(1, 7)),
                   (F(1, 3), F(3, 4)), (F(1, 5), F(1, 2)), (F(1, 7), F(2, 5))]
        s = reversal_surface(vectors)
        assert s.stratum() == Stratum([4])
        assert s.genus == 3

    def test_nonclosing_degenerate(self):
        with pytest.raises(NonClosingPolygon):
            build_from_polygon([(1, 0), (-1, 0)], [0, 1])

    def test_identity_pairing_rejected(self):
        with pytest.raises(NonClosingPolygon):
            build_from_polygon([(1, 0), (0, 1)], [0, 1])

    def test_zero_edge(self):
        with pytest.raises(ZeroEdge):
            build_from_polygon([(0, 0), (1, 0)], [1, 0])

    def test_too_few_vectors(self):
        with pytest.raises(ConfigError):
            build_from_polygon([(1, 0)], [0])

    def test_bad_permutation(self):
        with pytest.raises(ConfigError):
            build_from_polygon([(1, 0), (0, 1)], [0, 0])

    def test_lower_upper_swap_accepted(self):
        # giving the lines in the other order builds the same surface
        a = build_from_polygon([(1, 0), (0, 1)], [1, 0])
        b = build_from_polygon([(0, 1), (1, 0)], [1, 0])
        assert a.stratum() == b.stratum()
        assert a.area == b.area


class TestBuildSurface:
    def test_l_shaped_h2(self):
        s = l_shaped_surface()
        assert s.stratum() == Stratum([2])
        assert s.genus == 2
        assert s.area == 3
        assert s.cone_angles() == (6,)

    def test_marked_points_on_torus(self):
        verts = [(0, 0), (F(1, 2), 0), (1, 0), (1, 1), (F(1, 2), 1), (0, 1)]
        pairing = [((0, 0), (0, 4)), ((0, 1), (0, 3)), ((0, 2), (0, 5))]
        s = build_surface([verts], pairing)
        assert s.stratum() == Stratum([0, 0])
        assert s.genus == 1
        assert s.cone_angles() == (2, 2)

    def test_two_polygon_torus(self):
        # two unit squares side by side glued into a flat torus of area 2
        sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
        pairing = [
            ((0, 0), (0, 2)), ((1, 0), (1, 2)),
            ((0, 1), (1, 3)), ((1, 1), (0, 3)),
        ]
        s = build_surface([sq, sq], pairing)
        assert s.stratum() == Stratum([0, 0])
        assert s.area == 2

    def test_mismatched_vectors_rejected(self):
        sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
        bad = [((0, 0), (0, 1)), ((0, 2), (0, 3))]
        with pytest.raises(ConfigError):
            build_surface([sq], bad)

    def test_incomplete_pairing_rejected(self):
        sq = [(0, 0), (1, 0), (1, 1), (0, 1)]
        with pytest.raises(ConfigError):
            build_surface([sq], [((0, 0), (0, 2))])


class TestGl2Action:
    def test_shear_preserves_stratum_and_area(self):
        s = reversal_surface(H2_VECTORS)
        sheared = s.apply_gl2(((1, F(1, 3)), (0, 1)))
        assert sheared.backend == "exact"
        assert sheared.stratum() == s.stratum()
        assert sheared.area == s.area

    def test_determinant_scales_area(self):
        t = square_torus()
        big = t.apply_gl2(((2, 0), (0, 3)))
        assert big.area == 6

    def test_nonpositive_determinant_rejected(self):
        t = square_torus()
        with pytest.raises(NonPositiveDeterminant):
            t.apply_gl2(((1, 0), (0, -1)))
        with pytest.raises(NonPositiveDeterminant):
            t.apply_gl2(((1, 1), (1, 1)))

    def test_float_matrix_coerces_backend(self):
        t = square_torus()
        rotated = t.apply_gl2(((0.6, -0.8), (0.8, 0.6)))
        assert rotated.backend == "float"
        assert rotated.area == pytest.approx(1.0)
        assert rotated.stratum() == Stratum([0])


class TestNormalizeArea:
    def test_exact_keeps_coordinates(self):
        s = l_shaped_surface()
        n = s.normalize_area()
        assert n.normalized_area == 1
        assert n.polygons == s.polygons
        assert n.unit_area == 3

    def test_float_rescales(self):
        t = square_torus().apply_gl2(((2.0, 0.0), (0.0, 1.0)))
        n = t.normalize_area()
        assert float(n.normalized_area) == pytest.approx(1.0, abs=1e-12)


class TestSerialization:
    def test_round_trip_exact(self):
        s = reversal_surface(H2_VECTORS).normalize_area()
        blob = json.dumps(s.to_json_dict())
        s2 = TranslationSurface.from_json_dict(json.loads(blob))
        assert s2.polygons == s.polygons
        assert s2.pairing == s.pairing
        assert s2.stratum() == s.stratum()
        assert s2.unit_area == s.unit_area

    def test_round_trip_float(self):
        t = square_torus().apply_gl2(((1.5, 0.25), (0.0, 1.0)))
        blob = json.dumps(t.to_json_dict())
        t2 = TranslationSurface.from_json_dict(json.loads(blob))
        assert t2.backend == "float"
        assert t2.stratum() == Stratum([0])

    def test_corrupted_area_rejected(self):
        d = square_torus().to_json_dict()
        d["area"] = "7/2"
        with pytest.raises(ConfigError):
            TranslationSurface.from_json_dict(d)

    def test_corrupted_stratum_rejected(self):
        d = square_torus().to_json_dict()
        d["stratum"] = [2]
        with pytest.raises(ConfigError):
            TranslationSurface.from_json_dict(d)

    def test_missing_fields_rejected(self):
        with pytest.raises(ConfigError):
            TranslationSurface.from_json_dict({"polygons": []})


class TestTriangulationInvariants:
    def test_euler_characteristic_consistency(self):
        for surf in (square_torus(), reversal_surface(H2_VECTORS), l_shaped_surface()):
            tri = surf.triangulation
            v = tri.num_vertices
            f = len(tri.tris)
            e = 3 * f // 2
            assert v - e + f == 2 - 2 * surf.genus

    def test_triangle_areas_sum(self):
        s = l_shaped_surface()
        assert s.triangulation.area2() == 6
