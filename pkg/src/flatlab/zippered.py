"""Rectangle decompositions over an interval exchange.

A certified first return packs the surface into one rectangle per
interval: the suspension heights tau are differences of consecutive
break-point depths, the rectangle heights follow from the pairing
matrix, and the renormalization flow acts by one induction step plus an
exact diagonal rescale whose log is the flow time.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from . import geom
from .errors import (
    ConfigError,
    DegenerateBase,
    InconsistentInvariants,
    WrongDimension,
)
from .iet import Iet, intersection_matrix, log_of, rauzy_step, rauzy_type
from .rational import exact_div


@dataclass(frozen=True)
class ZipperedRectangles:
    """Exchange data plus suspension heights, one rectangle per label."""

    iet: Iet
    tau: Tuple
    heights: Tuple

    @property
    def n(self) -> int:
        return self.iet.n

    @property
    def area(self):
        return sum(l * h for l, h in zip(self.iet.lengths, self.heights))


def rectangle_heights(iet: Iet, tau) -> Tuple:
    """Heights forced by the pairing: h = M tau."""
    m = intersection_matrix(iet.top, iet.bot)
    return tuple(
        sum(m[j][k] * tau[k] for k in range(iet.n)) for j in range(iet.n)
    )


def make_zippered(iet: Iet, tau) -> ZipperedRectangles:
    """Validated rectangle data over an exchange."""
    tau = tuple(tau)
    if len(tau) != iet.n:
        raise WrongDimension("need one suspension height per label")
    heights = rectangle_heights(iet, tau)
    for h in heights:
        if not h > 0:
            raise ConfigError("suspension heights force a non-positive rectangle")
    return ZipperedRectangles(iet=iet, tau=tau, heights=heights)


def to_zippered_rectangles(handle) -> ZipperedRectangles:
    """Rectangle decomposition carried by a certified first return.

    Suspension heights are differences of consecutive break-point depths
    along the top, closed off by minus the depth of the endpoint's
    upward separatrix. Both the rectangle heights and the bottom partial
    sums are checked against the independently traced flow data.
    """
    iet = handle.iet
    tol = handle.surface.tol
    n = iet.n
    a = [handle.q * 0] + list(handle.down_depths) + [-handle.right_depth]
    tau = tuple(a[k + 1] - a[k] for k in range(n))
    z = make_zippered(iet, tau)
    for h_traced, h_forced in zip(handle.heights, z.heights):
        if geom.sign(h_traced - h_forced, tol) != 0:
            raise InconsistentInvariants(
                "return times disagree with the pairing heights"
            )
    partial = handle.q * 0
    for k, lab in enumerate(iet.bot[:-1]):
        partial = partial + tau[lab]
        if geom.sign(partial + handle.up_crossings[k][1], tol) != 0:
            raise InconsistentInvariants(
                "bottom partial sums disagree with the upward depths"
            )
    if geom.sign(z.area - handle.surface.area, tol) != 0:
        raise InconsistentInvariants("rectangles do not fill the area")
    return z


def from_zippered_rectangles(z: ZipperedRectangles, backend: str = "exact"):
    """Suspension surface presenting the rectangle data."""
    from .sampling import suspension_surface

    return suspension_surface(z.iet.bot, z.iet.lengths, z.tau, backend=backend)


def teich_return_time(iet: Iet) -> float:
    """Flow time of one renormalization step at unit base length.

    The step contracts the base to 1 - min of the two rightmost lengths;
    the flow time is minus its log.
    """
    total = iet.total
    if geom.sign(total - 1, 1e-9 if iet.backend == "float" else 0) != 0:
        raise DegenerateBase("renormalization flow needs unit base length")
    rauzy_type(iet)  # raises TieBreak on equal rightmost lengths
    m = min(iet.lengths[iet.top[-1]], iet.lengths[iet.bot[-1]])
    return -log_of(1 - m)


def teich_step(z: ZipperedRectangles) -> Tuple[float, ZipperedRectangles]:
    """One renormalization step on rectangle data.

    Applies induction to (lengths, tau) jointly, then the exact diagonal
    rescale that restores unit base length. Returns the flow time and the
    renormalized rectangles; rectangle heights are transported and
    checked against the pairing of the new exchange.
    """
    t0 = teich_return_time(z.iet)
    kind = rauzy_type(z.iet)
    if kind == "top":
        winner, loser = z.iet.top[-1], z.iet.bot[-1]
    else:
        winner, loser = z.iet.bot[-1], z.iet.top[-1]
    nxt, _mat = rauzy_step(z.iet)
    tau2 = list(z.tau)
    tau2[winner] = tau2[winner] - tau2[loser]
    scale = 1 - min(z.iet.lengths[z.iet.top[-1]], z.iet.lengths[z.iet.bot[-1]])
    lengths3 = tuple(exact_div(l, scale) for l in nxt.lengths)
    tau3 = tuple(t * scale for t in tau2)
    iet3 = Iet(lengths3, nxt.top, nxt.bot)
    z3 = make_zippered(iet3, tau3)
    carried = list(z.heights)
    carried[loser] = carried[loser] + carried[winner]
    for h_carried, h_forced in zip(carried, z3.heights):
        if geom.sign(h_carried * scale - h_forced,
                     1e-9 if iet3.backend == "float" else 0) != 0:
            raise InconsistentInvariants(
                "transported heights disagree with the new pairing"
            )
    return t0, z3


def unit_base(z: ZipperedRectangles) -> ZipperedRectangles:
    """Horizontally rescale so the base has unit length, keeping the area."""
    total = z.iet.total
    lengths = tuple(exact_div(l, total) for l in z.iet.lengths)
    tau = tuple(t * total for t in z.tau)
    return make_zippered(Iet(lengths, z.iet.top, z.iet.bot), tau)
