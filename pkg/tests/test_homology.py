"""Return-cycle homology: crossing counts, coordinates, ergodic sums, duals."""

import dataclasses
from fractions import Fraction as F

import pytest

from flatlab.errors import (
    InconsistentInvariants,
    SeparatrixHit,
    SingularIntersectionForm,
)
from flatlab.homology import (
    CycleSpace,
    asymptotic_cycle,
    cycle_space,
    dual_of_re_omega,
    ergodic_cycle,
    first_return_cycles,
    orbit_visits,
    pairing_matrix,
    representative_points,
    standard_symplectic,
)
from flatlab.iet import Iet, intersection_matrix, rauzy_step, rauzy_type
from flatlab.sampling import masur_heights, sample_random, suspension_surface
from flatlab.surface import build_from_polygon
from flatlab.transversal import Transversal, first_return_iet


def sheared_torus():
    return build_from_polygon([(1, 0), (F(2, 7), 1)], [1, 0])


@pytest.fixture(scope="module")
def torus_space():
    iet, handle = first_return_iet(sheared_torus())
    return cycle_space(iet), handle


@pytest.fixture(scope="module")
def genus_two_space():
    bot = (3, 2, 1, 0)
    lengths = (F(12, 37), F(9, 31), F(11, 41), F(10, 43))
    surf = suspension_surface(bot, lengths, masur_heights(bot))
    iet, handle = first_return_iet(surf)
    return cycle_space(iet), handle


class TestPairingMatrix:
    def test_torus_crossings(self, torus_space):
        space, _ = torus_space
        assert space.pairing == ((0, -1), (1, 0))

    def test_marking_independence(self, torus_space):
        space, _ = torus_space
        for attempt in range(5):
            pts = representative_points(space.iet, attempt)
            assert pairing_matrix(space.iet, pts) == [[0, -1], [1, 0]]

    def test_marking_independence_genus_two(self, genus_two_space):
        space, _ = genus_two_space
        base = [list(r) for r in space.pairing]
        for attempt in range(4):
            pts = representative_points(space.iet, attempt)
            assert pairing_matrix(space.iet, pts) == base

    def test_collision_rejected(self, torus_space):
        space, _ = torus_space
        delta = space.iet.translations()
        # second point placed exactly on the image of the first
        pts = (F(1, 7), F(1, 7) + delta[0])
        with pytest.raises(InconsistentInvariants):
            pairing_matrix(space.iet, pts)

    def test_matches_combinatorial_matrix(self):
        iet = Iet((F(1, 3), F(1, 4), F(5, 12)), (0, 1, 2), (2, 1, 0))
        assert pairing_matrix(iet) == intersection_matrix(iet.top, iet.bot)


class TestCycleSpace:
    def test_torus_coordinates(self, torus_space):
        space, _ = torus_space
        assert space.rank == 2
        assert space.genus == 1
        assert space.kernel == ()
        assert space.coords == ((0, 1), (1, 0))
        assert first_return_cycles(space) == [(0, 1), (1, 0)]

    def test_coordinates_reproduce_pairing(self, genus_two_space):
        space, _ = genus_two_space
        cols = [[row[j] for row in space.coords] for j in range(space.n)]
        for i in range(space.n):
            for j in range(space.n):
                assert space.pair(cols[i], cols[j]) == space.pairing[i][j]

    def test_genus_two_full_rank(self, genus_two_space):
        space, handle = genus_two_space
        assert handle.surface.stratum().degrees == (2,)
        assert space.n == 4
        assert space.rank == 4
        assert space.kernel == ()

    def test_marked_stratum_kernel_is_trivial_class(self):
        surf = sample_random((1, 1), seed=20240817)
        iet, handle = first_return_iet(surf)
        space = cycle_space(iet)
        assert space.n == 5
        assert space.rank == 4
        assert len(space.kernel) == 1
        delta = iet.translations()
        for vec in space.kernel:
            assert space.cycle_class(vec) == (0, 0, 0, 0)
            assert sum(c * d for c, d in zip(vec, delta)) == 0
            assert sum(c * h for c, h in zip(vec, handle.heights)) == 0

    def test_lifts_pair_standard(self, genus_two_space):
        space, _ = genus_two_space
        j_std = standard_symplectic(space.rank)
        q = space.pairing
        for a in range(space.rank):
            for b in range(space.rank):
                va, vb = space.lifts[a], space.lifts[b]
                got = sum(va[i] * q[i][k] * vb[k]
                          for i in range(space.n) for k in range(space.n))
                assert got == j_std[a][b]

    def test_float_backend_same_pairing(self):
        surf = sample_random((2,), seed=7, backend="float")
        iet, _ = first_return_iet(surf)
        space = cycle_space(iet)
        assert space.rank == 4
        assert space.pairing == tuple(
            tuple(r) for r in intersection_matrix(iet.top, iet.bot)
        )


class TestErgodicCycle:
    def test_periodic_orbit_visits(self, torus_space):
        space, _ = torus_space
        visits, end = orbit_visits(space.iet, F(1, 3), 10)
        assert visits == [4, 6]
        assert end == F(1, 3)

    def test_single_step_is_column(self, torus_space):
        space, _ = torus_space
        x0 = F(1, 3)
        lab = space.iet.interval_of(x0)
        col = tuple(row[lab] for row in space.coords)
        assert ergodic_cycle(space, x0, 1) == col

    def test_additivity(self, genus_two_space):
        space, _ = genus_two_space
        iet = space.iet
        x0 = iet.total * F(3, 11)
        n_steps, m_steps = 7, 9
        _, mid = orbit_visits(iet, x0, n_steps)
        whole = ergodic_cycle(space, x0, n_steps + m_steps)
        first = ergodic_cycle(space, x0, n_steps)
        second = ergodic_cycle(space, mid, m_steps)
        assert whole == tuple(a + b for a, b in zip(first, second))

    def test_separatrix_hit_at_start(self, torus_space):
        space, _ = torus_space
        with pytest.raises(SeparatrixHit):
            orbit_visits(space.iet, F(2, 7), 3)

    def test_separatrix_hit_downstream(self, torus_space):
        space, _ = torus_space
        # 4/7 maps onto the discontinuity after one step
        assert space.iet(F(4, 7)) == F(2, 7)
        with pytest.raises(SeparatrixHit):
            orbit_visits(space.iet, F(4, 7), 3)


class TestAsymptoticCycle:
    def test_periodic_orbit_is_exactly_dual(self, torus_space):
        space, _ = torus_space
        dual = dual_of_re_omega(space)
        assert dual == [F(3, 7), F(2, 7)]
        got = asymptotic_cycle(space, 10, x0=F(1, 3))
        assert got == [float(c) for c in dual]

    def test_start_point_free(self, torus_space):
        # both orbits close up, so the normalized cycle is exact for each
        space, _ = torus_space
        a = asymptotic_cycle(space, 10, x0=F(1, 3))
        b = asymptotic_cycle(space, 10, x0=F(1, 5))
        assert a == b


class TestDualOfReOmega:
    def test_defining_property(self, genus_two_space):
        space, _ = genus_two_space
        dual = dual_of_re_omega(space)
        delta = space.iet.translations()
        cols = [[row[j] for row in space.coords] for j in range(space.n)]
        for k in range(space.n):
            assert space.pair(cols[k], dual) == -delta[k]

    def test_kernel_ambiguity_cancels(self):
        surf = sample_random((1, 1), seed=20240817)
        iet, _ = first_return_iet(surf)
        space = cycle_space(iet)
        dual = dual_of_re_omega(space)
        delta = iet.translations()
        cols = [[row[j] for row in space.coords] for j in range(space.n)]
        for k in range(space.n):
            assert space.pair(cols[k], dual) == -delta[k]

    def test_inconsistent_pairing_raises(self, torus_space):
        space, _ = torus_space
        broken = dataclasses.replace(
            space, pairing=((0, 0), (0, 0))
        )
        with pytest.raises(SingularIntersectionForm):
            dual_of_re_omega(broken)


class TestInductionGeometry:
    def test_rauzy_step_is_shorter_transversal(self, torus_space):
        space, handle = torus_space
        iet = space.iet
        assert rauzy_type(iet) == "top"
        stepped, amat = rauzy_step(iet)
        tr = handle.transversal
        sub = Transversal(anchor_class=tr.anchor_class, corner=tr.corner,
                          length=stepped.total)
        got, sub_handle = first_return_iet(handle.surface, sub)
        assert got == stepped
        n = iet.n
        d_old, d_new = iet.translations(), got.translations()
        h_old, h_new = handle.heights, sub_handle.heights
        for k in range(n):
            assert sum(amat[j][k] * d_old[j] for j in range(n)) == d_new[k]
            assert sum(amat[j][k] * h_old[j] for j in range(n)) == h_new[k]

    def test_rauzy_step_genus_two(self, genus_two_space):
        space, handle = genus_two_space
        iet = space.iet
        stepped, amat = rauzy_step(iet)
        tr = handle.transversal
        sub = Transversal(anchor_class=tr.anchor_class, corner=tr.corner,
                          length=stepped.total)
        got, sub_handle = first_return_iet(handle.surface, sub)
        assert got == stepped
        n = iet.n
        d_old, d_new = iet.translations(), got.translations()
        h_old, h_new = handle.heights, sub_handle.heights
        for k in range(n):
            assert sum(amat[j][k] * d_old[j] for j in range(n)) == d_new[k]
            assert sum(amat[j][k] * h_old[j] for j in range(n)) == h_new[k]
