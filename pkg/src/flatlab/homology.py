"""Integer homology carried by the cycles of a first-return map.

Each interval of a first-return map supports a loop: flow up from a marked
point of the interval to its image, then close back along the cross section.
Signed crossing counts of those loops recover the intersection form, integer
coordinates on first homology, ergodic sums of cycles along orbits, and the
class dual to the horizontal period form, all from interval data alone.

Conventions.  Crossing signs use the right-handed orientation of the plane
charts.  The loop for interval j is oriented upward along the flow; its
horizontal period is therefore minus the translation of interval j.  The
dual class pairs as pairing(basis_cycle, dual) == horizontal period, which
makes the normalized ergodic cycle converge to the dual exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple, Union

from . import geom
from .errors import (
    InconsistentInvariants,
    SeparatrixHit,
    SingularIntersectionForm,
)
from .iet import Iet, intersection_matrix
from .intlinalg import (
    int_inverse,
    kernel_basis,
    mat_mul,
    mat_transpose,
    mat_vec,
    smith_normal_form,
    solve_rational,
    symplectic_basis,
)
from .transversal import InducedReturn


def standard_symplectic(rank: int) -> List[List[int]]:
    """Block-diagonal form with pairing(e_{2r}, e_{2r+1}) = 1."""
    j = [[0] * rank for _ in range(rank)]
    for r in range(0, rank, 2):
        j[r][r + 1] = 1
        j[r + 1][r] = -1
    return j


def representative_points(iet: Iet, attempt: int = 0) -> Tuple:
    """One interior point of each interval, deterministic per attempt.

    Attempt a places the point of interval j at weight (j+1+a)/(n+1+a)
    across the interval, so different attempts shift every point and
    different labels never share a weight.
    """
    n = iet.n
    starts = iet.domain_starts()
    out = []
    for j in range(n):
        w = Fraction(j + 1 + attempt, n + 1 + attempt)
        lam = iet.lengths[j]
        if isinstance(lam, float):
            out.append(starts[j] + lam * float(w))
        else:
            out.append(starts[j] + lam * w)
    return tuple(out)


def _distinct(values: Sequence, tol) -> bool:
    vals = sorted(values)
    return all(geom.sign(vals[k + 1] - vals[k], tol) != 0 for k in range(len(vals) - 1))


def pairing_matrix(iet: Iet, points: Optional[Sequence] = None) -> List[List[int]]:
    """Signed crossing counts of the return loops through the given points.

    The loops are pushed to pairwise distinct depths below the cross
    section in label order before counting, which makes the matrix
    antisymmetric by construction.  The count is independent of the marked
    points as long as no point coincides with the image of another.
    """
    n = iet.n
    tol = 0.0
    if iet.backend == "float":
        from .surface import FLOAT_TOL

        tol = FLOAT_TOL
    if points is None:
        points = representative_points(iet)
    delta = iet.translations()
    images = [points[j] + delta[j] for j in range(n)]
    if not _distinct(list(points) + list(images), tol):
        raise InconsistentInvariants("marked points collide with their images")

    def inside(x, a, b) -> bool:
        lo, hi = (a, b) if geom.sign(b - a, tol) > 0 else (b, a)
        return geom.sign(x - lo, tol) > 0 and geom.sign(hi - x, tol) > 0

    q_mat = [[0] * n for _ in range(n)]
    for i in range(n):
        s_i = -geom.sign(delta[i], tol)
        for j in range(i + 1, n):
            s_j = -geom.sign(delta[j], tol)
            term = 0
            # loop i is shallower than loop j: the hook of j up through
            # point j crosses the horizontal run of i, while the tower of
            # i crosses the deeper horizontal run of j on its final
            # approach into the image of point i.
            if s_i and inside(points[j], points[i], images[i]):
                term += s_i
            if s_j and inside(images[i], points[j], images[j]):
                term -= s_j
            q_mat[i][j] = term
            q_mat[j][i] = -term
    return q_mat


@dataclass(frozen=True)
class CycleSpace:
    """Return cycles of an interval exchange with symplectic coordinates.

    pairing is the n by n crossing matrix of the loops, coords the 2g by n
    integer matrix sending loop-weight vectors to coordinates in a basis
    whose intersection matrix is the standard symplectic form, kernel a
    basis of the weight vectors representing the trivial class.
    """

    iet: Iet
    points: Tuple
    pairing: Tuple[Tuple[int, ...], ...]
    coords: Tuple[Tuple[int, ...], ...]
    kernel: Tuple[Tuple[int, ...], ...]
    lifts: Tuple[Tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return self.iet.n

    @property
    def rank(self) -> int:
        return len(self.coords)

    @property
    def genus(self) -> int:
        return self.rank // 2

    def standard_form(self) -> List[List[int]]:
        return standard_symplectic(self.rank)

    def cycle_class(self, weights: Sequence) -> Tuple:
        """Class coordinates of the weighted sum of return loops."""
        return tuple(sum(row[j] * weights[j] for j in range(self.n))
                     for row in self.coords)

    def pair(self, x: Sequence, y: Sequence):
        """Intersection number of two classes given in coordinates."""
        rank = self.rank
        total = 0
        for r in range(0, rank, 2):
            total += x[r] * y[r + 1] - x[r + 1] * y[r]
        return total


def cycle_space(iet: Iet, points: Optional[Sequence] = None,
                attempts: int = 10) -> CycleSpace:
    """Build return-cycle coordinates, validating every reduction step."""
    n = iet.n
    if points is None:
        last_err = None
        for a in range(attempts):
            pts = representative_points(iet, a)
            try:
                q_mat = pairing_matrix(iet, pts)
            except InconsistentInvariants as err:
                last_err = err
                continue
            points = pts
            break
        else:
            raise InconsistentInvariants(
                "no coincidence-free marking found"
            ) from last_err
    else:
        points = tuple(points)
        q_mat = pairing_matrix(iet, points)

    omega = intersection_matrix(iet.top, iet.bot)
    if q_mat != omega:
        raise InconsistentInvariants(
            "crossing counts disagree with the combinatorial pairing"
        )

    ker = kernel_basis(q_mat)
    rank = n - len(ker)
    if rank % 2 != 0:
        raise InconsistentInvariants("odd-rank intersection pairing")

    _d, _u, v = smith_normal_form(q_mat)
    v_inv = int_inverse(v)
    # columns of v past the rank span the kernel, so the leading rows of
    # its inverse are coordinates on the quotient lattice
    gram_full = mat_mul(mat_transpose(v), mat_mul(q_mat, v))
    for i in range(n):
        for j in range(n):
            if (i >= rank or j >= rank) and gram_full[i][j] != 0:
                raise InconsistentInvariants("kernel columns pair nontrivially")
    gram = [row[:rank] for row in gram_full[:rank]]
    w = symplectic_basis(gram)
    w_inv = int_inverse(w)
    coords = mat_mul(w_inv, [row[:n] for row in v_inv[:rank]])

    j_std = standard_symplectic(rank)
    back = mat_mul(mat_transpose(coords), mat_mul(j_std, coords))
    if back != [list(r) for r in q_mat]:
        raise InconsistentInvariants("coordinates do not reproduce the pairing")

    lifts = []
    for k in range(rank):
        col = [w[l][k] for l in range(rank)] + [0] * (n - rank)
        lifts.append(tuple(mat_vec(v, col)))

    return CycleSpace(
        iet=iet,
        points=tuple(points),
        pairing=tuple(tuple(r) for r in q_mat),
        coords=tuple(tuple(r) for r in coords),
        kernel=tuple(tuple(r) for r in ker),
        lifts=tuple(lifts),
    )


def _space_of(source) -> CycleSpace:
    if isinstance(source, CycleSpace):
        return source
    if isinstance(source, InducedReturn):
        return cycle_space(source.iet)
    if isinstance(source, Iet):
        return cycle_space(source)
    raise TypeError("expected an interval exchange, induced return, or cycle space")


def first_return_cycles(source) -> List[Tuple]:
    """Class coordinates of the n return loops, one per interval."""
    space = _space_of(source)
    return [tuple(row[j] for row in space.coords) for j in range(space.n)]


def orbit_visits(iet: Iet, x0, steps: int) -> Tuple[List[int], object]:
    """Interval visit counts over an orbit segment, plus the end point.

    Raises SeparatrixHit when the orbit lands exactly on a discontinuity;
    the flow above such a point runs into a cone.
    """
    breaks = set(iet.domain_starts()[j] for j in range(1, iet.n))
    visits = [0] * iet.n
    x = x0
    for _ in range(steps):
        if x in breaks:
            raise SeparatrixHit("orbit reached an interval endpoint")
        visits[iet.interval_of(x)] += 1
        x = iet(x)
    return visits, x


def ergodic_cycle(source, x0, steps: int) -> Tuple:
    """Sum of the return-loop classes along an orbit of given length."""
    space = _space_of(source)
    visits, _end = orbit_visits(space.iet, x0, steps)
    return space.cycle_class(visits)


def asymptotic_cycle(source, steps: int, x0=None) -> List[float]:
    """Normalized ergodic cycle: section length times class over step count."""
    space = _space_of(source)
    iet = space.iet
    if x0 is None:
        w = Fraction(610, 987)
        x0 = iet.total * (float(w) if iet.backend == "float" else w)
    raw = ergodic_cycle(space, x0, steps)
    scale = iet.total / steps
    return [float(c * scale) for c in raw]


def dual_of_re_omega(source, cycles: Optional[CycleSpace] = None) -> List:
    """Class pairing with every return loop as its horizontal period.

    The horizontal period of loop j is minus the translation of interval
    j, and the pairing is taken with the loop first.  Exact backends get
    Fraction coordinates, the float backend floats.
    """
    space = cycles if cycles is not None else _space_of(source)
    iet = space.iet
    delta = iet.translations()
    rhs = [-d for d in delta]
    sol = solve_rational([list(r) for r in space.pairing], rhs)
    if sol is None:
        raise SingularIntersectionForm(
            "horizontal periods are inconsistent with the pairing"
        )
    out = space.cycle_class(sol)
    if iet.backend == "float":
        return [float(c) for c in out]
    return list(out)
