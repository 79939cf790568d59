"""Cocycle exponent estimates, deviation flags, and the kernel twins."""

import math
import os
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest

from flatlab._kernels import backend_name, pykernels
from flatlab.errors import NonConvergence, TieBreak, WrongDimension
from flatlab.homology import cycle_space, ergodic_cycle
from flatlab.iet import Iet, accelerated_orbit
from flatlab.intlinalg import identity_int, mat_mul
from flatlab.lyapunov import (
    CONVENTIONS,
    cocycle_exponents,
    deviation_csv_rows,
    deviation_experiment,
    lagrangian_check,
)
from flatlab.sampling import sample_random
from flatlab.surface import build_from_polygon
from flatlab.transversal import first_return_iet


def golden_torus():
    return build_from_polygon([(1.0, 0.0), (0.618034, 1.0)], [1, 0])


class TestCocycleExponents:
    def test_torus_single_pair(self):
        est = cocycle_exponents(golden_torus(), steps=5_000)
        assert est.values[0] == 1.0
        assert est.values[1] == pytest.approx(-1.0, abs=1e-4)
        assert est.n == 2

    def test_genus_two_second_exponent(self):
        est = cocycle_exponents((2,), steps=60_000, seed=11)
        assert est.values[0] == 1.0
        assert est.values[1] == pytest.approx(1 / 3, abs=0.02)
        assert est.steps >= 60_000
        assert est.teich_time > 0

    def test_spectrum_symmetric(self):
        est = cocycle_exponents((2,), steps=60_000, seed=11)
        assert est.values[1] + est.values[2] == pytest.approx(0.0, abs=0.01)
        assert est.values[3] == pytest.approx(-1.0, abs=0.01)

    def test_marked_point_gives_zero_exponent(self):
        # H(1,1) exchanges carry one homologically trivial direction
        est = cocycle_exponents((1, 1), steps=60_000, seed=7)
        assert est.values[2] == pytest.approx(0.0, abs=0.01)
        assert est.values[1] == pytest.approx(0.5, abs=0.03)

    def test_quartic_ordering(self):
        est = cocycle_exponents((1, 1, 1, 1), steps=80_000, seed=2)
        v = est.values
        assert 1.0 == v[0] > v[1] > v[2] > 0.05
        assert v[1] == pytest.approx(0.5517, abs=0.03)
        assert v[2] == pytest.approx(0.3411, abs=0.03)
        # symplectic duality of the full spectrum
        for i in range(len(v)):
            assert v[i] + v[len(v) - 1 - i] == pytest.approx(0.0, abs=0.05)

    def test_conventions_agree(self):
        vals = {}
        for conv in CONVENTIONS:
            est = cocycle_exponents((2,), steps=40_000, seed=4, convention=conv)
            vals[conv] = est.values
        for a, b in zip(vals["transpose"], vals["inverse"]):
            assert a == pytest.approx(b, abs=0.02)

    def test_ortho_cadence_invariance(self):
        # QR cascades telescope, so the cadence only moves roundoff
        got = [
            cocycle_exponents((2,), steps=30_000, seed=6, ortho_every=k).values[1]
            for k in (1, 5, 20)
        ]
        assert max(got) - min(got) < 1e-9

    def test_cross_seed_stability(self):
        vals = [
            cocycle_exponents((2,), steps=50_000, seed=s).values[1]
            for s in (1, 2, 3)
        ]
        assert max(vals) - min(vals) < 0.025

    def test_tie_raises(self):
        square = Iet((0.25, 0.25), (0, 1), (1, 0))
        with pytest.raises(TieBreak):
            cocycle_exponents(square, steps=100)

    def test_unreachable_precision_raises(self):
        with pytest.raises(NonConvergence):
            cocycle_exponents((2,), steps=2_000, seed=3, target_stderr=1e-9)

    def test_bad_convention_rejected(self):
        with pytest.raises(ValueError):
            cocycle_exponents((2,), steps=100, seed=1, convention="sideways")

    def test_time_normalization_keeps_ratios(self):
        per_step = cocycle_exponents((2,), steps=40_000, seed=9)
        per_time = cocycle_exponents((2,), steps=40_000, seed=9,
                                     time_normalized=True)
        # same run, so the total log growth agrees under either clock
        assert per_time.raw[0] * per_time.teich_time == pytest.approx(
            per_step.raw[0] * per_step.steps, rel=1e-9
        )
        assert per_time.values[1] == pytest.approx(per_step.values[1], abs=1e-9)


@pytest.fixture(scope="module")
def deep_h2_report():
    surf = sample_random((2,), seed=5, backend="exact", denominator_bits=2400)
    return deviation_experiment(surf)


class TestDeviationExperiment:
    def test_towers_are_ergodic_cycles(self):
        surf = sample_random((2,), seed=3, backend="exact", denominator_bits=60)
        iet, _ = first_return_iet(surf)
        space = cycle_space(iet)
        coords = [[int(c) for c in row] for row in space.coords]
        acc = identity_int(iet.n)
        cur = iet
        for rec in accelerated_orbit(iet, 8):
            acc = mat_mul(acc, rec["matrix"])
            cur = rec["iet"]
        classes = mat_mul(coords, acc)
        starts = cur.domain_starts()
        for j in range(iet.n):
            x0 = starts[j] + cur.lengths[j] / 2
            height = sum(acc[i][j] for i in range(iet.n))
            cyc = ergodic_cycle(space, x0, height)
            assert list(cyc) == [classes[i][j] for i in range(len(coords))]

    def test_level_one_slope_matches_exponent(self, deep_h2_report):
        rep = deep_h2_report
        assert rep.genus == 2
        assert rep.levels[0].octaves > 1000
        assert rep.levels[0].slope == pytest.approx(1 / 3, abs=0.04)

    def test_top_level_bounded(self, deep_h2_report):
        rep = deep_h2_report
        assert rep.bounded_at_top
        assert rep.levels[1].slope < 0.05

    def test_flag_is_lagrangian(self, deep_h2_report):
        assert lagrangian_check(deep_h2_report.flag_basis)

    def test_report_shape(self, deep_h2_report):
        rep = deep_h2_report
        assert list(rep.checkpoints) == sorted(rep.checkpoints)
        assert rep.steps == rep.checkpoints[-1]
        assert len(rep.cycles) == len(rep.checkpoints)
        assert all(len(row) == 4 for row in rep.cycles)
        assert len(rep.distances) == rep.genus
        assert len(rep.distances[0]) == len(rep.checkpoints)
        assert len(rep.flag_basis) == rep.genus

    def test_quartic_flag_hierarchy(self):
        surf = sample_random((1, 1, 1, 1), seed=3, backend="exact",
                             denominator_bits=1200)
        rep = deviation_experiment(surf)
        assert rep.genus == 3
        assert rep.levels[0].slope == pytest.approx(0.5517, abs=0.06)
        assert rep.levels[1].slope == pytest.approx(0.3411, abs=0.06)
        assert rep.levels[2].slope < 0.05
        assert rep.bounded_at_top
        assert lagrangian_check(rep.flag_basis)

    def test_float_surface_supported(self):
        surf = sample_random((2,), seed=9, backend="float")
        rep = deviation_experiment(surf)
        # float lengths carry ~53 bits of arithmetic, enough for ~25 octaves
        assert rep.levels[0].octaves >= 15
        assert rep.bounded_at_top

    def test_deep_torus_flag_is_one_line(self):
        # golden-ratio approximant: hundreds of octaves of bounded deviation
        a, b = 1, 1
        for _ in range(600):
            a, b = b, a + b
        torus = build_from_polygon([(1, 0), (F(a, b), 1)], [1, 0])
        rep = deviation_experiment(torus)
        assert rep.genus == 1
        assert len(rep.flag_basis) == 1
        assert rep.levels[0].octaves > 100
        assert rep.levels[0].slope < 0.05
        assert rep.bounded_at_top

    def test_small_budget_rejected(self):
        with pytest.raises(ValueError):
            deviation_experiment(golden_torus(), n_max=10)

    def test_csv_rows(self, deep_h2_report):
        rows = deviation_csv_rows(deep_h2_report)
        assert rows[0][0] == "N"
        assert rows[0][-1] == "dist_L2"
        assert len(rows) == len(deep_h2_report.checkpoints) + 1
        assert rows[1][0] == deep_h2_report.checkpoints[0]


class TestLagrangianCheck:
    def test_torus_line_vacuous(self):
        assert lagrangian_check([(3.0, 4.0)])

    def test_standard_lagrangian_plane(self):
        assert lagrangian_check([(1, 0, 0, 0), (0, 0, 1, 0)])

    def test_symplectic_pair_rejected(self):
        assert not lagrangian_check([(1, 0, 0, 0), (0, 1, 0, 0)])

    def test_custom_form(self):
        form = [[0, 0, 1, 0], [0, 0, 0, 1], [-1, 0, 0, 0], [0, -1, 0, 0]]
        assert lagrangian_check([(1, 0, 0, 0), (0, 1, 0, 0)], form=form)
        assert not lagrangian_check([(1, 0, 0, 0), (0, 0, 1, 0)], form=form)

    def test_wrong_dimension(self):
        with pytest.raises(WrongDimension):
            lagrangian_check([])
        with pytest.raises(WrongDimension):
            lagrangian_check([(1.0, 0.0, 0.0)])
        with pytest.raises(WrongDimension):
            lagrangian_check([(1.0, 0.0, 0.0, 0.0)])
        with pytest.raises(WrongDimension):
            lagrangian_check([(0.0, 0.0)])


class TestKernelTwins:
    def setup_method(self):
        surf = sample_random((1, 1), seed=13, backend="float")
        iet, _ = first_return_iet(surf)
        self.lam = np.array([float(x) for x in iet.lengths])
        self.lam /= self.lam.sum()
        self.top = np.array(iet.top, dtype=np.int64)
        self.bot = np.array(iet.bot, dtype=np.int64)

    @pytest.mark.skipif(backend_name() != "cython",
                        reason="compiled kernel unavailable")
    def test_zorich_chunk_twins_agree(self):
        from flatlab._kernels import _speedups

        for inverse in (0, 1):
            out = {}
            for name, mod in (("pure", pykernels), ("fast", _speedups)):
                lam = self.lam.copy()
                frame = np.eye(len(lam))
                accel, rauzy, teich, tie = mod.zorich_chunk(
                    lam, self.top.copy(), self.bot.copy(), frame, 40, inverse
                )
                out[name] = (accel, rauzy, teich, tie, lam.copy(), frame)
            assert out["pure"][0] == out["fast"][0]
            assert out["pure"][1] == out["fast"][1]
            assert out["pure"][2] == pytest.approx(out["fast"][2], rel=1e-12)
            assert out["pure"][3] == out["fast"][3]
            np.testing.assert_allclose(out["pure"][4], out["fast"][4], rtol=1e-12)
            np.testing.assert_allclose(out["pure"][5], out["fast"][5], rtol=1e-12)

    @pytest.mark.skipif(backend_name() != "cython",
                        reason="compiled kernel unavailable")
    def test_orbit_visits_twins_agree(self):
        from flatlab._kernels import _speedups

        iet, _ = first_return_iet(sample_random((2,), seed=21, backend="float"))
        starts = iet.domain_starts()
        order = list(iet.top)
        breaks = np.array([float(starts[lab]) for lab in order])
        trans = iet.translations()
        deltas = np.array([float(trans[lab]) for lab in order])
        x0 = float(iet.total) * 0.437
        out = {}
        for name, mod in (("pure", pykernels), ("fast", _speedups)):
            visits = np.zeros(5_000, dtype=np.int8)
            x_end = mod.iet_orbit_visits(breaks.copy(), deltas.copy(), x0,
                                         5_000, visits)
            out[name] = (x_end, visits)
        assert out["pure"][0] == pytest.approx(out["fast"][0], rel=1e-12)
        assert np.array_equal(out["pure"][1], out["fast"][1])

    def test_forced_pure_backend(self):
        env = dict(os.environ, FLATLAB_FORCE_PURE="1")
        code = ("from flatlab._kernels import backend_name; "
                "print(backend_name())")
        got = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert got.stdout.strip() == "pure-python"

    def test_exponents_match_across_backends(self):
        here = cocycle_exponents((2,), steps=20_000, seed=17).values[1]
        env = dict(os.environ, FLATLAB_FORCE_PURE="1")
        code = (
            "from flatlab.lyapunov import cocycle_exponents; "
            "print(repr(cocycle_exponents((2,), steps=20_000, seed=17).values[1]))"
        )
        got = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        assert float(got.stdout.strip()) == pytest.approx(here, abs=1e-9)
