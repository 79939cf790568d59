"""First returns of the vertical flow to a horizontal segment.

The transversal is a horizontal segment [0, q) leaving a cone point to the
right. Tracing the downward separatrices to their first hit of the segment
gives the break points of the return map; midpoint orbits give the interval
translations; tracing the upward separatrices gives the image break points.
The computed exchange is certified against three independent requirements:
the image intervals must tile [0, q) exactly, the image break points must
coincide with the upward separatrix hits, and the return times must fill
the total area.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

from . import geom
from .errors import (
    DegenerateBase,
    FlowBudgetExceeded,
    InconsistentInvariants,
    NonGenericSurface,
    NonIrreducible,
    TransversalMissesFlow,
)
from .iet import Iet
from .rational import exact_div
from .triangulation import RayTracer

RIGHT = (1, 0)
UP = (0, 1)
DOWN = (0, -1)


@dataclass(frozen=True)
class Transversal:
    """A horizontal segment [0, q) leaving a cone point to the right."""

    anchor_class: int
    corner: Tuple[int, int]
    length: object


@dataclass
class XPiece:
    """One chart-sized piece of the developed transversal segment."""

    tri: int
    y: object
    x0: object
    x1: object
    param0: object

    @property
    def length(self):
        return self.x1 - self.x0


@dataclass
class InducedReturn:
    """Everything the first-return computation certifies, kept for reuse."""

    surface: object
    transversal: Transversal
    iet: Iet
    pieces: List[XPiece]
    breakpoints: List
    down_depths: List
    midpoints: List
    deltas: List
    heights: List
    image_starts: List
    up_crossings: List[Tuple]
    right_depth: object

    @property
    def q(self):
        return self.transversal.length


class _SegmentIndex:
    """Crossing queries of vertical flow pieces against the developed segment."""

    def __init__(self, tol):
        self.tol = tol
        self.by_tri: Dict[int, List[XPiece]] = {}
        self.pieces: List[XPiece] = []

    def add(self, piece: XPiece) -> None:
        self.pieces.append(piece)
        self.by_tri.setdefault(piece.tri, []).append(piece)

    def add_shadow(self, piece: XPiece) -> None:
        """Register a piece for crossing queries without listing it.

        A piece running along a glued edge is one curve visible from two
        charts; flow pieces entering through that edge live in the other
        chart and would miss it otherwise.
        """
        self.by_tri.setdefault(piece.tri, []).append(piece)

    def crossings(self, rec) -> List[Tuple]:
        """(flow time, segment parameter) for one traced flow piece.

        Half-open on both curves: a segment parameter counts at the piece
        that starts there, a flow time at the flow piece that starts there,
        so junction hits register exactly once. The launch point itself
        (flow time zero) never counts.
        """
        t, p_in, p_out, s_in, s_out = rec
        tol = self.tol
        out = []
        cx = p_in[0]
        going_up = p_out[1] > p_in[1]
        for xp in self.by_tri.get(t, ()):
            if geom.sign(cx - xp.x0, tol) < 0:
                continue
            if geom.sign(cx - xp.x1, tol) >= 0:
                continue
            if going_up:
                s = s_in + (xp.y - p_in[1])
            else:
                s = s_in + (p_in[1] - xp.y)
            if geom.sign(s - s_in, tol) < 0 or geom.sign(s - s_out, tol) >= 0:
                continue
            if geom.sign(s, tol) <= 0:
                continue
            out.append((s, xp.param0 + (cx - xp.x0)))
        out.sort(key=lambda pair: pair[0])
        return out


def _separatrix_corners(tri, w) -> List[Tuple[int, Tuple[int, int]]]:
    """All (class, corner) whose sector emits a separatrix in direction w."""
    out = []
    for ci in range(tri.num_vertices):
        for corner in tri.sector_of_direction(ci, w):
            out.append((ci, corner))
    return out


def _trace_ray(tri, corner, length2_target, budget):
    """Develop the horizontal ray from a corner apex.

    Returns (pieces, reached) where reached is False when a cone point or
    the budget cut the trace before the target length was reached.
    """
    apex = tri.corner_point(*corner)
    tracer = RayTracer(tri, corner[0], apex, RIGHT, budget)
    pieces: List[XPiece] = []
    while True:
        if length2_target is not None and tracer.travel * tracer.travel >= length2_target:
            return pieces, True
        rec = tracer.step()
        if rec is None:
            return pieces, False
        t, p_in, p_out, s_in, _s_out = rec
        pieces.append(XPiece(tri=t, y=p_in[1], x0=p_in[0], x1=p_out[0], param0=s_in))


def _edge_twin(tri, xp: XPiece, tol) -> Optional[XPiece]:
    """The same piece seen from the neighboring chart, when it runs along
    a glued edge of its own chart."""
    pts = tri.tris[xp.tri]
    for e in range(3):
        a = pts[e]
        b = pts[(e + 1) % 3]
        if geom.sign(a[1] - xp.y, tol) != 0 or geom.sign(b[1] - xp.y, tol) != 0:
            continue
        t2, _ = tri.glue[(xp.tri, e)]
        sx, sy = tri.shift[(xp.tri, e)]
        return XPiece(tri=t2, y=xp.y + sy, x0=xp.x0 + sx, x1=xp.x1 + sx,
                      param0=xp.param0)
    return None


def _index_of(tri, pieces: Sequence[XPiece], tol) -> _SegmentIndex:
    index = _SegmentIndex(tol)
    for xp in pieces:
        index.add(xp)
        twin = _edge_twin(tri, xp, tol)
        if twin is not None:
            index.add_shadow(twin)
    return index


def _admissible_minima(tri, index, corner, bound, budget):
    """Running-minimum crossing parameters of one upward separatrix.

    A crossing is admissible as a right endpoint exactly when every earlier
    crossing of the same separatrix lies further right, which is the
    running-minimum property. Tracing stops at the first minimum whose
    square drops below ``bound``: later minima are smaller still and only
    the first one is wanted as a fallback candidate.
    """
    apex = tri.corner_point(*corner)
    tracer = RayTracer(tri, corner[0], apex, UP, budget)
    minima = []
    current = None
    while True:
        rec = tracer.step()
        if rec is None:
            return minima
        for s, param in index.crossings(rec):
            if current is None or param < current:
                minima.append((param, s))
                current = param
                if param * param < bound:
                    return minima


def canonical_transversal(surface, budget: int = 20000) -> Transversal:
    """Deterministic transversal choice for the vertical flow.

    Anchors are tried in order: corners whose sector contains the rightward
    direction, grouped by cone class index. For each anchor the admissible
    endpoints are the running-minimum crossings of the upward separatrices
    with the anchored ray; the shortest one of at least unit-area scale
    wins, with the largest shorter one as fallback.
    """
    tri = surface.triangulation
    bound = surface.unit_area
    anchors = _separatrix_corners(tri, RIGHT)
    if not anchors:
        raise DegenerateBase("no corner sector faces right")
    ups = _separatrix_corners(tri, UP)
    for ci, corner in anchors:
        pieces, _reached = _trace_ray(tri, corner, 9 * max(bound, surface.area), budget)
        if not pieces:
            continue
        index = _index_of(tri, pieces, surface.tol)
        above = []
        below = []
        for _ci, sep in ups:
            for param, _depth in _admissible_minima(tri, index, sep, bound, budget):
                if param * param >= bound:
                    above.append(param)
                else:
                    below.append(param)
        if above:
            q = min(above)
        elif below:
            # no admissible endpoint reaches unit-area scale; fall back to
            # the largest admissible one so the base stays as long as it can
            q = max(below)
        else:
            continue
        return Transversal(anchor_class=ci, corner=corner, length=q)
    raise DegenerateBase("no anchor admits an admissible endpoint")


def _trace_ray_to(tri, corner, q, budget) -> List[XPiece]:
    """Develop the transversal ray until its parameter passes q.

    The endpoint q itself must be covered by some piece so that crossings
    there can be recognized, hence the trace runs strictly past q (the
    half-open pieces leave a junction point to the following chart).
    """
    apex = tri.corner_point(*corner)
    tracer = RayTracer(tri, corner[0], apex, RIGHT, budget)
    pieces: List[XPiece] = []
    while tracer.travel <= q and tracer.stopped is None:
        rec = tracer.step()
        if rec is None:
            if tracer.stopped == ("budget",):
                raise FlowBudgetExceeded("transversal ray exceeded its budget")
            raise TransversalMissesFlow(
                "segment runs into a cone point before its stated length"
            )
        t, p_in, p_out, s_in, _s_out = rec
        pieces.append(XPiece(tri=t, y=p_in[1], x0=p_in[0], x1=p_out[0], param0=s_in))
    if tracer.travel < q:
        raise TransversalMissesFlow(
            "segment runs into a cone point before its stated length"
        )
    return pieces


def _locate_param(pieces: Sequence[XPiece], m, tol):
    """Chart point of segment parameter m: (piece position, point)."""
    for k, xp in enumerate(pieces):
        if geom.sign(m - xp.param0, tol) >= 0 and geom.sign(m - (xp.param0 + xp.length), tol) < 0:
            return k, (xp.x0 + (m - xp.param0), xp.y)
    raise InconsistentInvariants("segment parameter %r not on the segment" % (m,))


def _launch_up(tri, pieces, k, point):
    """Chart to flow up from at a point on piece k, handling junctions."""
    try:
        tri.exit_from(pieces[k].tri, point, UP)
        return pieces[k].tri, point
    except InconsistentInvariants:
        # the point sits on the entry edge with the flow pointing back:
        # launch from the preceding chart instead
        if k == 0:
            raise
        prev = pieces[k - 1]
        return prev.tri, (prev.x1, prev.y)


def _first_hit(tri, index, launch_t, launch_p, w, q, budget, want_at_q: bool,
               tol):
    """First crossing of the flow from a point with the segment [0, q).

    Returns (parameter, flow time, at_q_flow_time); at_q_flow_time is the
    flow time of a crossing at parameter exactly q when want_at_q is set.
    Cone hits raise NonGenericSurface, exhausted budgets FlowBudgetExceeded.
    """
    tracer = RayTracer(tri, launch_t, launch_p, w, budget)
    at_q = None
    while True:
        rec = tracer.step()
        if rec is None:
            if tracer.stopped == ("budget",):
                raise FlowBudgetExceeded("separatrix trace exceeded its budget")
            raise NonGenericSurface(
                "vertical leaf hits a cone point before returning to the base"
            )
        for s, param in index.crossings(rec):
            if geom.sign(param - q, tol) < 0:
                return param, s, at_q
            if want_at_q and at_q is None and geom.sign(param - q, tol) == 0:
                at_q = s


def first_return_iet(surface, transversal: Optional[Transversal] = None,
                     budget: int = 20000):
    """First-return exchange of the upward flow on a horizontal segment.

    Returns (iet, handle). The handle keeps the certified geometric data:
    break points with their separatrix depths on both sides, midpoint
    orbits, and the developed segment pieces.
    """
    if transversal is None:
        transversal = canonical_transversal(surface, budget=budget)
    tri = surface.triangulation
    tol = surface.tol
    q = transversal.length
    if not q > 0:
        raise TransversalMissesFlow("transversal must have positive length")
    if transversal.corner not in tri.sector_of_direction(
        transversal.anchor_class, RIGHT
    ):
        raise TransversalMissesFlow("anchor sector does not face right")

    raw_pieces = _trace_ray_to(tri, transversal.corner, q, budget)
    index = _index_of(tri, raw_pieces, tol)

    downs = _separatrix_corners(tri, DOWN)
    ups = _separatrix_corners(tri, UP)
    st = surface.stratum()
    n = 2 * st.genus + len(st.degrees) - 1
    if len(downs) != n - 1 or len(ups) != n - 1:
        raise InconsistentInvariants(
            "separatrix count disagrees with the stratum"
        )

    # break points: first hits of the downward separatrices
    hits = []
    for _ci, sep in downs:
        apex = tri.corner_point(*sep)
        param, depth, _ = _first_hit(tri, index, sep[0], apex, DOWN, q,
                                     budget, False, tol)
        hits.append((param, depth))
    hits.sort(key=lambda pair: pair[0])
    for (pa, _), (pb, _) in zip(hits, hits[1:]):
        if geom.sign(pb - pa, tol) == 0:
            raise NonGenericSurface("two break points coincide")
    if hits and geom.sign(hits[0][0], tol) == 0:
        raise NonGenericSurface("break point at the segment origin")
    breakpoints = [param for param, _ in hits]
    down_depths = [depth for _, depth in hits]

    # interval data from midpoint orbits
    cuts = [q * 0] + breakpoints + [q]
    lengths = [cuts[j + 1] - cuts[j] for j in range(n)]
    midpoints = []
    deltas = []
    heights = []
    image_starts = []
    for j in range(n):
        m = exact_div(cuts[j] + cuts[j + 1], 2)
        k, point = _locate_param(raw_pieces, m, tol)
        launch_t, launch_p = _launch_up(tri, raw_pieces, k, point)
        param, depth, _ = _first_hit(tri, index, launch_t, launch_p, UP, q,
                                     budget, False, tol)
        midpoints.append(m)
        deltas.append(param - m)
        heights.append(depth)
        image_starts.append(cuts[j] + (param - m))

    # certification 1: the image intervals tile [0, q) exactly
    order = sorted(range(n), key=lambda j: image_starts[j])
    edge = q * 0
    for j in order:
        if geom.sign(image_starts[j] - edge, tol) != 0:
            raise NonGenericSurface(
                "return images fail to tile the base: endpoint is inadmissible"
            )
        edge = edge + lengths[j]
    if geom.sign(edge - q, tol) != 0:
        raise NonGenericSurface("return images overshoot the base")

    # certification 2: image break points are the upward separatrix hits
    up_crossings = []
    right_depth = None
    for _ci, sep in ups:
        apex = tri.corner_point(*sep)
        param, depth, at_q = _first_hit(tri, index, sep[0], apex, UP, q,
                                        budget, True, tol)
        up_crossings.append((param, depth))
        if at_q is not None:
            if right_depth is not None:
                raise NonGenericSurface("two separatrices pass the endpoint")
            right_depth = at_q
    up_crossings.sort(key=lambda pair: pair[0])
    expected = sorted(image_starts[j] for j in order[1:])
    for (param, _), target in zip(up_crossings, expected):
        if geom.sign(param - target, tol) != 0:
            raise NonGenericSurface(
                "image break points disagree with the upward separatrices"
            )
    if right_depth is None:
        raise NonGenericSurface("endpoint does not lie on an upward separatrix")

    # certification 3: return times sweep each point of the surface once
    total = sum(l * h for l, h in zip(lengths, heights))
    if geom.sign(total - surface.area, tol) != 0:
        raise InconsistentInvariants("return times do not fill the area")

    bot = tuple(order)
    try:
        ret = Iet(tuple(lengths), tuple(range(n)), bot)
    except NonIrreducible as exc:
        raise NonGenericSurface("return map decomposes: " + str(exc))

    trimmed = []
    for xp in raw_pieces:
        if geom.sign(xp.param0 - q, tol) >= 0:
            break
        x1 = xp.x1
        if geom.sign(xp.param0 + xp.length - q, tol) > 0:
            x1 = xp.x0 + (q - xp.param0)
        trimmed.append(XPiece(tri=xp.tri, y=xp.y, x0=xp.x0, x1=x1,
                              param0=xp.param0))

    handle = InducedReturn(
        surface=surface,
        transversal=transversal,
        iet=ret,
        pieces=trimmed,
        breakpoints=breakpoints,
        down_depths=down_depths,
        midpoints=midpoints,
        deltas=deltas,
        heights=heights,
        image_starts=image_starts,
        up_crossings=up_crossings,
        right_depth=right_depth,
    )
    return ret, handle
