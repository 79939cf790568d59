"""Lyapunov exponents of the renormalization cocycle and deviation spectra.

Exponent estimates push an orthonormal frame through the accelerated
induction cocycle, reorthonormalizing every few steps and accumulating the
log growth of the frame directions.  The deviation experiment measures the
same spectrum from the other side: it collects homology classes of long
closed-up flow orbit segments, fits a greedy flag of subspaces, and
regresses the growth of the distances to each flag level, which
cross-validates the exponent estimates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import numpy as np

from . import _kernels, intlinalg
from .errors import NonConvergence, TieBreak, WrongDimension
from .homology import CycleSpace, cycle_space, dual_of_re_omega, orbit_visits
from .iet import Iet, accelerated_orbit
from .sampling import sample_random
from .surface import Stratum, TranslationSurface
from .transversal import InducedReturn, first_return_iet

CONVENTIONS = ("transpose", "inverse")


@dataclass(frozen=True)
class ExponentEstimate:
    """Estimated spectrum of the accelerated cocycle.

    values are normalized so the top entry is 1 and sorted weakly
    decreasing; raw holds the unnormalized per-step (or per-unit-time) log
    rates in the same order; stderr are batch-means errors on the
    normalized entries.
    """

    values: Tuple[float, ...]
    stderr: Tuple[float, ...]
    raw: Tuple[float, ...]
    steps: int
    teich_time: float
    convention: str

    @property
    def n(self) -> int:
        return len(self.values)


def _iet_of(source, seed=None) -> Iet:
    if isinstance(source, Iet):
        return source
    if isinstance(source, InducedReturn):
        return source.iet
    if isinstance(source, TranslationSurface):
        return first_return_iet(source)[0]
    if isinstance(source, Stratum):
        source = source.degrees
    if isinstance(source, (tuple, list)):
        surf = sample_random(tuple(source), seed=seed, backend="float")
        return first_return_iet(surf)[0]
    raise TypeError("expected an exchange, induced return, surface, or stratum")


def cocycle_exponents(source, steps: int = 100_000, seed=None, *,
                      convention: str = "transpose", ortho_every: int = 5,
                      batches: int = 20, target_stderr: Optional[float] = None,
                      time_normalized: bool = False) -> ExponentEstimate:
    """Benettin-style spectrum estimate over the accelerated induction orbit.

    steps counts accelerated (run-collapsed) induction steps.  The frame is
    pushed by the transported-cycle matrices ("transpose") or their
    inverses ("inverse"); the two spectra agree up to reflection, so the
    normalized values should match.  Raises TieBreak on rational length
    relations and NonConvergence when a requested precision is not met.
    """
    if convention not in CONVENTIONS:
        raise ValueError("convention must be one of %r" % (CONVENTIONS,))
    if ortho_every < 1:
        raise ValueError("ortho_every must be positive")
    iet = _iet_of(source, seed)
    n = iet.n
    lam = np.array([float(x) for x in iet.lengths], dtype=np.float64)
    lam /= lam.sum()
    top = np.array(iet.top, dtype=np.int64)
    bot = np.array(iet.bot, dtype=np.int64)
    frame = np.eye(n)
    inverse = 1 if convention == "inverse" else 0

    logs = np.zeros(n)
    teich = 0.0
    done = 0
    # batch boundaries for the error bars
    marks: List[Tuple[int, np.ndarray]] = [(0, logs.copy())]
    next_mark = max(1, steps // max(batches, 1))

    while done < steps:
        todo = min(ortho_every, steps - done)
        accel, _rauzy, dt, tie = _kernels.zorich_chunk(
            lam, top, bot, frame, todo, inverse
        )
        teich += dt
        done += accel
        if tie:
            raise TieBreak("length tie after %d accelerated steps" % done)
        q_mat, r_mat = np.linalg.qr(frame)
        diag = np.abs(np.diag(r_mat))
        if not np.all(diag > 0):
            raise NonConvergence("frame collapsed during orthonormalization")
        logs += np.log(diag)
        frame = q_mat
        if done >= next_mark:
            marks.append((done, logs.copy()))
            next_mark += max(1, steps // max(batches, 1))
    if marks[-1][0] != done:
        marks.append((done, logs.copy()))

    denom = teich if time_normalized else float(done)
    if denom <= 0:
        raise NonConvergence("no usable induction steps")
    raw = logs / denom
    order = np.argsort(-raw, kind="stable")
    raw_sorted = raw[order]
    if raw_sorted[0] <= 0:
        raise NonConvergence("top exponent estimate is not positive")
    values = raw_sorted / raw_sorted[0]

    ratios = []
    for (s0, l0), (s1, l1) in zip(marks, marks[1:]):
        if s1 == s0:
            continue
        rates = (l1 - l0)[order] / (s1 - s0)
        if rates[0] > 0:
            ratios.append(rates / rates[0])
    if len(ratios) >= 2:
        arr = np.array(ratios)
        stderr = arr.std(axis=0, ddof=1) / math.sqrt(len(ratios))
    else:
        stderr = np.full(n, float("nan"))

    if target_stderr is not None and n > 1:
        if not (stderr[1] <= target_stderr):
            raise NonConvergence(
                "stderr %.2g above requested %.2g after %d steps"
                % (stderr[1], target_stderr, done)
            )

    return ExponentEstimate(
        values=tuple(float(v) for v in values),
        stderr=tuple(float(s) for s in stderr),
        raw=tuple(float(v) for v in raw_sorted),
        steps=done,
        teich_time=teich,
        convention=convention,
    )


@dataclass(frozen=True)
class LevelFit:
    """Growth fit of the distances to one flag level."""

    dim: int
    slope: float
    octaves: int
    max_distance: float


@dataclass(frozen=True)
class DeviationReport:
    """Flag fitted to homology checkpoints of one flow orbit."""

    genus: int
    steps: int
    checkpoints: Tuple[int, ...]
    cycles: Tuple[Tuple[int, ...], ...]
    flag_basis: Tuple[Tuple[float, ...], ...]
    distances: Tuple[Tuple[float, ...], ...]
    levels: Tuple[LevelFit, ...]
    bounded_at_top: bool


def _checkpoint_cycles(space: CycleSpace, x0, n_list: Sequence[int]):
    """Cycle coordinates at the requested orbit lengths, exact integers."""
    iet = space.iet
    n = iet.n
    coords = np.array([[int(c) for c in row] for row in space.coords],
                      dtype=np.int64)
    label_visits = np.zeros(n, dtype=np.int64)
    out = []
    if iet.backend == "float":
        starts = iet.domain_starts()
        order = list(iet.top)
        breaks = np.array([float(starts[lab]) for lab in order])
        trans = iet.translations()
        deltas = np.array([float(trans[lab]) for lab in order])
        labels = np.array(order, dtype=np.int64)
        x = float(x0)
        prev = 0
        for target in n_list:
            chunk = target - prev
            visits = np.zeros(chunk, dtype=np.int8)
            x = _kernels.iet_orbit_visits(breaks, deltas, x, chunk, visits)
            pos_counts = np.bincount(visits, minlength=n)
            np.add.at(label_visits, labels, pos_counts)
            prev = target
            out.append(coords @ label_visits)
    else:
        x = x0
        prev = 0
        for target in n_list:
            chunk_counts, x = orbit_visits(iet, x, target - prev)
            label_visits += np.array(chunk_counts, dtype=np.int64)
            prev = target
            out.append(coords @ label_visits)
    return out


def _exact_lengths(iet: Iet) -> Iet:
    """The same exchange with lengths as exact rationals.

    Float lengths are binary rationals already, so the conversion is exact
    and the result is the identical exchange, now safe for arbitrarily deep
    induction.
    """
    if iet.backend == "exact":
        return iet
    return Iet(tuple(Fraction(float(v)) for v in iet.lengths),
               iet.top, iet.bot)


def _log2_int(x: int) -> float:
    """log2 of a positive integer of any size."""
    shift = max(0, x.bit_length() - 53)
    return shift + math.log2(float(x >> shift))


def _tower_checkpoints(space: CycleSpace, n_max: Optional[int],
                       max_accel: int, min_numerator: int = 1024):
    """Orbit cycles read off the renormalization towers, exact integers.

    After k accelerated induction steps the orbit segment that climbs one
    full tower is a closed-up vertical flow orbit whose length is the tower
    height (a column sum of the accumulated matrix) and whose homology
    class is the matching column of coords @ matrix.  Heights grow
    geometrically, so checkpoints up to n_max cost only O(log n_max)
    induction steps, all in exact arithmetic.

    The walk stops once every tower overshoots n_max, when the exchange's
    arithmetic is nearly spent (smallest length numerator over the common
    denominator below min_numerator, past which the matrices stop sampling
    the generic induction statistics), or on a length tie.
    """
    iet0 = _exact_lengths(space.iet)
    n = iet0.n
    coords = [[int(c) for c in row] for row in space.coords]
    acc = intlinalg.identity_int(n)
    seen = set()
    pts: List[Tuple[int, Tuple[int, ...]]] = []
    try:
        for rec in accelerated_orbit(iet0, max_accel):
            acc = intlinalg.mat_mul(acc, rec["matrix"])
            heights = [sum(acc[i][j] for i in range(n)) for j in range(n)]
            classes = intlinalg.mat_mul(coords, acc)
            for j in range(n):
                if n_max is None or heights[j] <= n_max:
                    key = (heights[j],) + tuple(row[j] for row in classes)
                    if key not in seen:
                        seen.add(key)
                        pts.append((key[0], key[1:]))
            lengths = rec["iet"].lengths
            denom = 1
            for v in lengths:
                denom = denom // math.gcd(denom, v.denominator) * v.denominator
            smallest = min(v.numerator * (denom // v.denominator)
                           for v in lengths)
            if smallest < min_numerator:
                break
            if n_max is not None and min(heights) > n_max:
                break
    except TieBreak:
        pass
    pts.sort()
    return pts


def _gram_det(vecs: Sequence[Sequence[int]]) -> int:
    g = [[sum(a * b for a, b in zip(u, w)) for w in vecs] for u in vecs]
    return intlinalg.det_int(g)


def _adjugate_int(mat: Sequence[Sequence[int]]) -> List[List[int]]:
    size = len(mat)
    if size == 1:
        return [[1]]
    out = [[0] * size for _ in range(size)]
    for i in range(size):
        for j in range(size):
            minor = [[mat[r][c] for c in range(size) if c != j]
                     for r in range(size) if r != i]
            sign = -1 if (i + j) % 2 else 1
            out[j][i] = sign * intlinalg.det_int(minor)
    return out


def _residual_num(basis: Sequence[Sequence[int]], det_g: int,
                  adj_g: Sequence[Sequence[int]], row: Sequence[int]) -> int:
    """det of the Gram matrix of basis + [row], via the bordered formula.

    Equals dist(row, span basis)^2 * det_g, all in exact integers.
    """
    a = [sum(b * r for b, r in zip(vec, row)) for vec in basis]
    c = sum(r * r for r in row)
    mixed = 0
    for i in range(len(a)):
        for j in range(len(a)):
            mixed += a[i] * adj_g[i][j] * a[j]
    return c * det_g - mixed


def deviation_experiment(source, n_max: Optional[int] = None, *,
                         min_octave: int = 8, bounded_cap: float = 0.05,
                         max_accel: int = 100_000) -> DeviationReport:
    """Fit the deviation flag to homology classes of long orbit segments.

    Checkpoints are exact cycles of closed-up vertical flow segments, one
    per renormalization tower, so their lengths are log-spaced up to n_max
    at logarithmic cost; n_max = None walks to the arithmetic depth of the
    surface.  Level 1 of the flag is the asymptotic cycle direction, and
    each further level adds the principal direction of the remaining
    residuals, realized by the checkpoint with the largest residual so the
    flag stays exact.  Distances come from integer Gram determinants, which
    keeps them meaningful far below float cancellation.  Per-level slopes
    regress the per-octave upper envelope of the distances, a limsup proxy;
    the top level reports whether the orbit stays within bounded distance
    of the flag.
    """
    if n_max is not None and n_max < 10 ** 5:
        raise ValueError("n_max below 1e5 cannot support a deviation fit")
    if isinstance(source, CycleSpace):
        space = source
    elif isinstance(source, InducedReturn):
        space = cycle_space(source.iet)
    elif isinstance(source, Iet):
        space = cycle_space(source)
    elif isinstance(source, TranslationSurface):
        space = cycle_space(first_return_iet(source)[0])
    else:
        raise TypeError("expected an exchange, induced return, surface, or cycle space")
    if space.iet.backend == "float":
        space = cycle_space(_exact_lengths(space.iet))
    genus = space.genus

    pts = _tower_checkpoints(space, None if n_max is None else int(n_max),
                             max_accel)
    if not pts:
        raise NonConvergence("no tower fits under the requested length cap")
    ns = [p[0] for p in pts]
    cycles = [p[1] for p in pts]

    # level-1 direction: the exact asymptotic cycle, denominators cleared
    dual = dual_of_re_omega(space)
    denom = 1
    for v in dual:
        f = Fraction(v)
        denom = denom // math.gcd(denom, f.denominator) * f.denominator
    d0 = [int(Fraction(v) * denom) for v in dual]
    if not any(d0):
        raise NonConvergence("asymptotic direction vanishes")

    # greedy flag over the integers: each level adopts the checkpoint with
    # the largest residual, which realizes the principal residual direction
    basis_int: List[List[int]] = [d0]
    for _level in range(1, genus):
        gram = [[sum(a * b for a, b in zip(u, w)) for w in basis_int]
                for u in basis_int]
        det_g = intlinalg.det_int(gram)
        adj_g = _adjugate_int(gram)
        best, best_det = None, 0
        for row in cycles:
            cand = _residual_num(basis_int, det_g, adj_g, row)
            if cand > best_det:
                best, best_det = list(row), cand
        if best is None:
            raise NonConvergence("residuals collapsed before filling the flag")
        basis_int.append(best)

    distances: List[List[float]] = []
    log_dists: List[List[float]] = []
    levels: List[LevelFit] = []
    log_ns = [_log2_int(v) for v in ns]
    for level in range(1, genus + 1):
        sub = basis_int[:level]
        gram = [[sum(a * b for a, b in zip(u, w)) for w in sub] for u in sub]
        base_det = intlinalg.det_int(gram)
        adj_g = _adjugate_int(gram)
        log_base = _log2_int(base_det)
        dist_log: List[float] = []
        dist_val: List[float] = []
        for row in cycles:
            num = _residual_num(sub, base_det, adj_g, row)
            if num <= 0:
                dist_log.append(float("-inf"))
                dist_val.append(0.0)
            else:
                ld = 0.5 * (_log2_int(num) - log_base)
                dist_log.append(ld)
                dist_val.append(2.0 ** ld if ld < 1000 else float("inf"))
        distances.append(dist_val)
        log_dists.append(dist_log)
        env: dict = {}
        for ln, ld in zip(log_ns, dist_log):
            octave = int(ln)
            if math.isfinite(ld) and ld > env.get(octave, float("-inf")):
                env[octave] = ld
        fit_pts = [(o, ld) for o, ld in sorted(env.items()) if o >= min_octave]
        if len(fit_pts) >= 3:
            xs = np.array([p[0] for p in fit_pts])
            ys = np.array([p[1] for p in fit_pts])
            slope = float(np.polyfit(xs, ys, 1)[0])
            fit = LevelFit(dim=level, slope=slope, octaves=len(fit_pts),
                           max_distance=max(dist_val))
        else:
            fit = LevelFit(dim=level, slope=float("nan"), octaves=len(fit_pts),
                           max_distance=max(dist_val) if dist_val else 0.0)
        levels.append(fit)

    top = levels[-1]
    bounded = (not math.isnan(top.slope) and top.slope <= bounded_cap) or (
        math.isnan(top.slope) and top.octaves < 3
    )

    # float flag basis for reporting: exact Gram-Schmidt scaled into floats
    flag_floats: List[Tuple[float, ...]] = []
    exact_basis: List[List[Fraction]] = []
    for vec in basis_int:
        res = [Fraction(v) for v in vec]
        for prev in exact_basis:
            dot = sum(a * b for a, b in zip(res, prev))
            nrm = sum(a * a for a in prev)
            res = [a - dot / nrm * b for a, b in zip(res, prev)]
        exact_basis.append(res)
        top_mag = max(abs(v) for v in res)
        if top_mag == 0:
            raise NonConvergence("flag basis degenerated")
        scaled = np.array([float(v / top_mag) for v in res])
        flag_floats.append(tuple(scaled / np.linalg.norm(scaled)))

    return DeviationReport(
        genus=genus,
        steps=int(ns[-1]),
        checkpoints=tuple(ns),
        cycles=tuple(tuple(int(c) for c in row) for row in cycles),
        flag_basis=tuple(flag_floats),
        distances=tuple(tuple(row) for row in distances),
        levels=tuple(levels),
        bounded_at_top=bounded,
    )


def deviation_csv_rows(report: DeviationReport) -> List[List]:
    """Tabular form of a deviation report: one row per checkpoint."""
    dim = len(report.cycles[0]) if report.cycles else 0
    header = ["N"] + ["c%d" % k for k in range(dim)] + [
        "dist_L%d" % fit.dim for fit in report.levels
    ]
    rows: List[List] = [header]
    for i, n_val in enumerate(report.checkpoints):
        row: List = [n_val]
        row.extend(report.cycles[i])
        row.extend(report.distances[level][i]
                   for level in range(len(report.levels)))
        rows.append(row)
    return rows


def lagrangian_check(basis: Sequence[Sequence[float]],
                     form: Optional[Sequence[Sequence]] = None,
                     tol: float = 1e-3) -> bool:
    """Whether g given 2g-vectors pairwise annihilate the symplectic form.

    Vectors are normalized before testing; the form defaults to the
    standard block pairing.  Raises WrongDimension unless exactly g
    nonzero vectors of length 2g are supplied.
    """
    vecs = [np.array(v, dtype=np.float64) for v in basis]
    if not vecs:
        raise WrongDimension("empty basis")
    dim = len(vecs[0])
    if dim % 2 != 0 or any(len(v) != dim for v in vecs):
        raise WrongDimension("vectors must share an even dimension")
    if len(vecs) != dim // 2:
        raise WrongDimension(
            "expected %d vectors for dimension %d" % (dim // 2, dim)
        )
    if form is None:
        j_mat = np.zeros((dim, dim))
        for r in range(0, dim, 2):
            j_mat[r][r + 1] = 1.0
            j_mat[r + 1][r] = -1.0
    else:
        j_mat = np.array(form, dtype=np.float64)
    normed = []
    for v in vecs:
        nrm = np.linalg.norm(v)
        if nrm == 0:
            raise WrongDimension("zero vector cannot span a flag level")
        normed.append(v / nrm)
    for i in range(len(normed)):
        for j in range(i + 1, len(normed)):
            if abs(float(normed[i] @ j_mat @ normed[j])) > tol:
                return False
    return True
