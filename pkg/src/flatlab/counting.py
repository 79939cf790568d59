"""Saddle connections, cylinders, and quadratic growth constants.

Enumeration unfolds the triangulation into the plane around one cone
point at a time: a wedge (apex at the unfolded cone point, two boundary
rays) looks into a triangle through one of its edges, and the triangle's
far corner either lands inside the wedge (it is a cone point image:
record the segment and split the wedge there, which blocks everything
hidden behind it) or narrows the wedge to one side. All predicates run
on integer coordinates over a common denominator, so parallelism,
collinearity, and the length cutoff are decided exactly. A segment is
emitted only when the unfolding certifies that its interior crosses
plain edges, which is the exact tracing that the no-interior-cone-point
invariant asks for.

Lengths are measured in the surface's declared area unit: a cutoff of L
means raw length at most L * sqrt(unit_area), so unit-area statistics
come out of sampled surfaces without rescaling their coordinates.

Each connection carries the coordinates of its homology class rel cone
points, written against a fixed basis of loops through the triangles
(fundamental cycles of the dual graph). Two connections are homologous
exactly when these integer tuples agree, which is what the grouping
operation keys on.
"""

from __future__ import annotations

import heapq
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple
from weakref import WeakKeyDictionary

from .errors import (
    BackendMismatch,
    BudgetExceeded,
    ConfigError,
    InconsistentInvariants,
)
from .geom import Angle, cross, dot, norm2, vneg, vsub
from .sampling import sample_random
from .surface import Stratum, TranslationSurface
from .triangulation import trace_until_corner

DEFAULT_BUDGET = 200_000_000
STRIP_BUDGET = 500_000

_TAIL, _HEAD = 0, 1


@dataclass(frozen=True)
class SaddleConnection:
    """Oriented geodesic segment between cone points, no cone point inside.

    holonomy is the exact displacement in raw coordinates; start and end
    are cone point ids (triangulation vertex classes); homology is the
    integer coordinate tuple of the class rel cone points; anchor and
    end_anchor are the chart corners whose angular sectors hold the
    outgoing and incoming-backward rays. length is in area-unit
    normalized units.
    """

    holonomy: Tuple
    start: int
    end: int
    homology: Tuple[int, ...]
    anchor: Tuple[int, int]
    end_anchor: Tuple[int, int]
    length: float
    scaled: Tuple[int, int] = field(repr=False)


@dataclass(frozen=True)
class Cylinder:
    """Maximal flat cylinder, bounded by saddle connections parallel to it.

    holonomy is the exact core holonomy (canonical sign: upper half
    plane); floor and ceiling are the two boundary chains, each listed in
    core direction; core_length and width are in normalized units.
    """

    holonomy: Tuple
    core_length: float
    width: float
    floor: Tuple[SaddleConnection, ...]
    ceiling: Tuple[SaddleConnection, ...]
    width2: Fraction = field(repr=False)

    @property
    def direction(self) -> Tuple[float, float]:
        x, y = float(self.holonomy[0]), float(self.holonomy[1])
        h = math.hypot(x, y)
        return (x / h, y / h)

    @property
    def boundary(self) -> Tuple[SaddleConnection, ...]:
        return self.floor + self.ceiling


@dataclass(frozen=True)
class ConfigurationCount:
    """How many parallel families of a given multiplicity fit under L."""

    multiplicity: int
    count: int
    ratio: float


@dataclass(frozen=True)
class SiegelVeechEstimate:
    """Monte Carlo estimate of a quadratic growth constant."""

    stratum: Tuple[int, ...]
    multiplicity: int
    length_cap: float
    samples: int
    value: float
    stderr: float
    counts: Tuple[int, ...]


class _Geometry:
    """Integer-scaled unfolding data for one exact surface.

    Corners and directed edges share flat indices 3*t + c so the scan
    loop can run on plain list lookups and machine int arithmetic.
    """

    def __init__(self, surface: TranslationSurface):
        if surface.backend != "exact":
            raise BackendMismatch("counting requires the exact backend")
        tri = surface.triangulation
        self.tri = tri
        self.unit_area = Fraction(surface.unit_area)
        den = 1
        for pts in tri.tris:
            for x, y in pts:
                for v in (Fraction(x), Fraction(y)):
                    den = den // math.gcd(den, v.denominator) * v.denominator
        self.den = den
        self.pts: List[Tuple[Tuple[int, int], ...]] = [
            tuple((int(Fraction(x) * den), int(Fraction(y) * den)) for x, y in pts)
            for pts in tri.tris
        ]
        n = 3 * len(tri.tris)
        self.px = [0] * n
        self.py = [0] * n
        for t, pts in enumerate(self.pts):
            for c in range(3):
                self.px[3 * t + c] = pts[c][0]
                self.py[3 * t + c] = pts[c][1]
        self.glue_idx = [0] * n
        self.sx = [0] * n
        self.sy = [0] * n
        for (t, e), (t2, e2) in tri.glue.items():
            i = 3 * t + e
            self.glue_idx[i] = 3 * t2 + e2
            dx, dy = tri.shift[(t, e)]
            self.sx[i] = int(Fraction(dx) * den)
            self.sy[i] = int(Fraction(dy) * den)
        self._build_rows()

    def corner(self, t: int, c: int) -> Tuple[int, int]:
        return self.pts[t][c]

    def out_ray(self, t: int, c: int) -> Tuple[int, int]:
        return vsub(self.pts[t][(c + 1) % 3], self.pts[t][c])

    def in_ray(self, t: int, c: int) -> Tuple[int, int]:
        return vsub(self.pts[t][(c + 2) % 3], self.pts[t][c])

    def sector_corners(self, vclass: int, w) -> List[Tuple[int, int]]:
        """Corners of the class whose half-open sector [out, in) holds w."""
        wx, wy = w
        found = []
        for t, c in self.tri.vertex_corners[vclass]:
            ux, uy = self.out_ray(t, c)
            cu = ux * wy - uy * wx
            if cu < 0 or (cu == 0 and ux * wx + uy * wy <= 0):
                continue
            rx, ry = self.in_ray(t, c)
            if wx * ry - wy * rx <= 0:
                continue
            found.append((t, c))
        return found

    def _build_rows(self) -> None:
        """Pairing rows: one integer tuple per directed edge.

        Traversing directed edge (t, e) adds its row to the homology
        coordinates; the rows pair each class against the fundamental
        cycles of the dual graph (one per non-tree glued edge pair), and
        that pairing is unimodular, so equal tuples mean equal classes.
        """
        tri = self.tri
        faces = len(tri.tris)
        arcs: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for key, partner in tri.glue.items():
            if key < partner:
                arcs[key] = partner
        parent: Dict[int, Tuple[Tuple[int, int], int]] = {0: (None, 0)}
        order = [0]
        tree: set = set()
        k = 0
        while k < len(order):
            t = order[k]
            k += 1
            for e in range(3):
                t2 = tri.glue[(t, e)][0]
                if t2 not in parent:
                    rep = (t, e) if (t, e) in arcs else tri.glue[(t, e)]
                    parent[t2] = (rep, 1 if rep == (t, e) else -1)
                    tree.add(rep)
                    order.append(t2)
        chords = [rep for rep in arcs if rep not in tree]
        rank = len(chords)
        if rank != 2 * tri.genus() + tri.num_vertices - 1:
            raise InconsistentInvariants("dual cycle rank disagrees with stratum")
        self.rank = rank
        mu: Dict[Tuple[int, int], List[int]] = {rep: [0] * rank for rep in arcs}

        def path_up(t: int) -> List[Tuple[Tuple[int, int], int]]:
            out = []
            while parent[t][0] is not None:
                rep, d = parent[t]
                out.append((rep, d))
                t = rep[0] if d == 1 else tri.glue[rep][0]
            return out

        for i, rep in enumerate(chords):
            mu[rep][i] += 1
            ta, tb = rep[0], tri.glue[rep][0]
            up_a, up_b = path_up(ta), path_up(tb)
            while up_a and up_b and up_a[-1] == up_b[-1]:
                up_a.pop()
                up_b.pop()
            # cycle runs ta -> tb across the chord, then tb back to ta
            for arc, d in up_b:
                mu[arc][i] -= d
            for arc, d in reversed(up_a):
                mu[arc][i] += d
        self.rows: Dict[Tuple[int, int], Tuple[int, ...]] = {}
        for rep, vec in mu.items():
            self.rows[rep] = tuple(vec)
            self.rows[tri.glue[rep]] = tuple(-v for v in vec)
        self.rows_flat = [self.rows[(t, e)] for t in range(len(tri.tris))
                          for e in range(3)]
        self.zero_row = (0,) * rank


_GEOMETRY_CACHE: "WeakKeyDictionary[TranslationSurface, _Geometry]" = WeakKeyDictionary()


def _geometry(surface: TranslationSurface) -> _Geometry:
    geo = _GEOMETRY_CACHE.get(surface)
    if geo is None:
        geo = _Geometry(surface)
        _GEOMETRY_CACHE[surface] = geo
    return geo


def _threshold(geo: _Geometry, length_cap) -> int:
    cap = Fraction(length_cap)
    if cap <= 0:
        raise ConfigError("length cutoff must be positive")
    t = cap * cap * geo.unit_area * geo.den * geo.den
    return t.numerator // t.denominator


def _vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _row_add(pv, row):
    return tuple(a + b for a, b in zip(pv, row))


def _row_sub(pv, row):
    return tuple(a - b for a, b in zip(pv, row))


def _scan(geo: _Geometry, cap: int, budget: int):
    """All saddle connection germs of scaled squared length at most cap.

    Returns (source index, end index, holonomy, homology row) tuples with
    corner indices flattened as 3*t + c and holonomies in scaled ints.

    Every state carries the homology coordinates of the partial path,
    written against the fixed dual cycle basis. The path is slid onto the
    edge graph corner by corner: at each window crossing it detours
    through one endpoint of the entry edge (head for the near side exit,
    tail for the far side), and only those along-edge detours contribute
    rows. The wprev flag remembers which endpoint the previous crossing
    chose so the telescoping stays consistent.
    """
    px, py = geo.px, geo.py
    glue_i, sx, sy = geo.glue_idx, geo.sx, geo.sy
    rows = geo.rows_flat
    out = []
    emit = out.append
    work = 0
    for i0 in range(len(px)):
        t0, c0 = divmod(i0, 3)
        b0 = 3 * t0
        i1 = b0 + (c0 + 1) % 3
        i2 = b0 + (c0 + 2) % 3
        ox, oy = px[i0], py[i0]
        ux, uy = px[i1] - ox, py[i1] - oy
        vx, vy = px[i2] - ox, py[i2] - oy
        pv0 = rows[i0]
        if ux * ux + uy * uy <= cap:
            emit((i0, i1, (ux, uy), pv0))
        # the out-edge endpoint is a cone point, so the out ray starts
        # blocked when the search crosses the opposite edge
        stack = [(glue_i[i1], -ox - sx[i1], -oy - sy[i1],
                  ux, uy, vx, vy, False, 1, pv0)]
        pop = stack.pop
        push = stack.append
        while stack:
            work += 1
            if work > budget:
                raise BudgetExceeded(
                    "wedge search passed %d states; raise the budget" % budget
                )
            ia, sgx, sgy, wux, wuy, wvx, wvy, incl, wprev, pv = pop()
            t, e_in = divmod(ia, 3)
            b = 3 * t
            ib = b + (e_in + 1) % 3
            iq = b + (e_in + 2) % 3
            pax = px[ia] + sgx
            pay = py[ia] + sgy
            pbx = px[ib] + sgx
            pby = py[ib] + sgy
            if (pax * pax + pay * pay > cap and pbx * pbx + pby * pby > cap):
                abx = pbx - pax
                aby = pby - pay
                tt = -(pax * abx + pay * aby)
                if tt <= 0:
                    continue
                nab = abx * abx + aby * aby
                if tt >= nab:
                    continue
                cc = pax * pby - pay * pbx
                if cc * cc > cap * nab:
                    continue
            qx = px[iq] + sgx
            qy = py[iq] + sgy
            su = wux * qy - wuy * qx
            sv = qx * wvy - qy * wvx
            if su > 0 and sv > 0:
                if qx * qx + qy * qy <= cap:
                    fin = pv if wprev == 1 else _row_add(pv, rows[ia])
                    emit((i0, iq, (qx, qy), _row_add(fin, rows[ib])))
                # near side keeps the blocked flag, far side starts blocked
                pv1 = pv if wprev == 1 else _row_add(pv, rows[ia])
                push((glue_i[ib], sgx - sx[ib], sgy - sy[ib],
                      wux, wuy, qx, qy, incl, 1, pv1))
                pv2 = pv if wprev == 0 else _row_sub(pv, rows[ia])
                push((glue_i[iq], sgx - sx[iq], sgy - sy[iq],
                      qx, qy, wvx, wvy, False, 0, pv2))
            elif su == 0:
                if incl and qx * qx + qy * qy <= cap:
                    fin = pv if wprev == 1 else _row_add(pv, rows[ia])
                    emit((i0, iq, (qx, qy), _row_add(fin, rows[ib])))
                if wux * wvy - wuy * wvx > 0:
                    pv2 = pv if wprev == 0 else _row_sub(pv, rows[ia])
                    push((glue_i[iq], sgx - sx[iq], sgy - sy[iq],
                          wux, wuy, wvx, wvy, False, 0, pv2))
            elif sv == 0:
                pv1 = pv if wprev == 1 else _row_add(pv, rows[ia])
                push((glue_i[ib], sgx - sx[ib], sgy - sy[ib],
                      wux, wuy, wvx, wvy, incl, 1, pv1))
            elif su < 0:
                pv2 = pv if wprev == 0 else _row_sub(pv, rows[ia])
                push((glue_i[iq], sgx - sx[iq], sgy - sy[iq],
                      wux, wuy, wvx, wvy, incl, 0, pv2))
            else:
                pv1 = pv if wprev == 1 else _row_add(pv, rows[ia])
                push((glue_i[ib], sgx - sx[ib], sgy - sy[ib],
                      wux, wuy, wvx, wvy, incl, 1, pv1))
    return out


def _canonical_end(geo: _Geometry, end_corner, hol):
    """Corner whose half-open sector holds the incoming-backward ray."""
    back = vneg(hol)
    t, c = end_corner
    if cross(geo.in_ray(t, c), back) == 0 and dot(geo.in_ray(t, c), back) > 0:
        return geo.tri.next_corner_ccw(t, c)
    return (t, c)


def saddle_connections(surface: TranslationSurface, length_cap, *,
                       budget: int = DEFAULT_BUDGET,
                       verify: bool = False) -> List[SaddleConnection]:
    """Every oriented saddle connection of normalized length at most L.

    Both orientations of each segment are listed; rigid twins sharing
    endpoints and holonomy stay distinct entries. With verify set, each
    segment is retraced across the surface charts as an extra check.
    """
    geo = _geometry(surface)
    cap = _threshold(geo, length_cap)
    conns = []
    seen = set()
    for i0, iend, hol, row in _scan(geo, cap, budget):
        key = (i0, hol)
        if key in seen:
            raise InconsistentInvariants("duplicate connection germ")
        seen.add(key)
        anchor = divmod(i0, 3)
        end_corner = divmod(iend, 3)
        conns.append(SaddleConnection(
            holonomy=(Fraction(hol[0], geo.den), Fraction(hol[1], geo.den)),
            start=geo.tri.corner_class[anchor],
            end=geo.tri.corner_class[end_corner],
            homology=row,
            anchor=anchor,
            end_anchor=_canonical_end(geo, end_corner, hol),
            length=math.sqrt(norm2(hol) / float(geo.unit_area)) / geo.den,
            scaled=hol,
        ))
    conns.sort(key=lambda c: (norm2(c.scaled), c.scaled, c.anchor))
    if verify:
        for conn in conns:
            retrace_connection(surface, conn)
    return conns


def retrace_connection(surface: TranslationSurface, conn: SaddleConnection) -> None:
    """Re-trace one connection chart by chart and check it is genuine."""
    tri = surface.triangulation
    t, c = conn.anchor
    corner, travel, _pieces = trace_until_corner(tri, t, tri.corner_point(t, c),
                                                 conn.holonomy)
    if travel != 1:
        raise InconsistentInvariants(
            "segment hit a cone point at parameter %s" % (travel,)
        )
    if tri.corner_class[corner] != conn.end:
        raise InconsistentInvariants("segment ended at the wrong cone point")


def homologous_groups(surface: TranslationSurface, length_cap, *,
                      budget: int = DEFAULT_BUDGET) -> List[List[SaddleConnection]]:
    """Connections grouped by equal holonomy and equal homology class."""
    conns = saddle_connections(surface, length_cap, budget=budget)
    groups: Dict[Tuple, List[SaddleConnection]] = {}
    for conn in conns:
        groups.setdefault((conn.scaled, conn.homology), []).append(conn)
    return [groups[key] for key in sorted(groups)]


# --- cylinders ---


def _primitive(v: Tuple[int, int]) -> Tuple[int, int]:
    g = math.gcd(abs(v[0]), abs(v[1]))
    return (v[0] // g, v[1] // g)


def _canonical_positive(v: Tuple[int, int]) -> bool:
    return v[1] > 0 or (v[1] == 0 and v[0] > 0)


_PI = Angle(1, (1, 0))


def _ccw_angle(geo: _Geometry, corner_a, ray_a, corner_b, ray_b,
               stop_at_pi: bool = False) -> Optional[Angle]:
    """Cone angle swept ccw from ray_a at corner_a to ray_b at corner_b.

    Rays must sit in their corner's half-open sector. With stop_at_pi,
    returns None as soon as the sweep exceeds a straight angle.
    """
    tri = geo.tri
    if corner_a == corner_b:
        off_a = Angle.between(geo.out_ray(*corner_a), ray_a)
        off_b = Angle.between(geo.out_ray(*corner_b), ray_b)
        if off_a.compare(off_b) <= 0:
            ang = Angle.between(ray_a, ray_b)
            if stop_at_pi and ang.compare(_PI) > 0:
                return None
            return ang
        # otherwise the sweep wraps all the way around the cone point
    total = Angle.between(ray_a, geo.in_ray(*corner_a))
    cur = tri.next_corner_ccw(*corner_a)
    guard = 0
    while cur != corner_b:
        total = total + Angle.between(geo.out_ray(*cur), geo.in_ray(*cur))
        if stop_at_pi and total.compare(_PI) > 0:
            return None
        cur = tri.next_corner_ccw(*cur)
        guard += 1
        if guard > 3 * len(tri.tris) + 3:
            raise InconsistentInvariants("sector walk failed to close")
    total = total + Angle.between(geo.out_ray(*corner_b), ray_b)
    if stop_at_pi and total.compare(_PI) > 0:
        return None
    return total


def _pi_next(geo: _Geometry, index, arrival, prim, side: int):
    """Connection continuing a boundary walk straight through a cone point.

    side +1 keeps the cylinder on the left of travel along prim, side -1
    on the right. Only corners that actually carry a connection in this
    exact direction get the exact angle test, and at most one of them can
    make the side angle flat.
    """
    back = vneg(prim)
    vclass = geo.tri.corner_class[arrival]
    for cand in geo.sector_corners(vclass, prim):
        nxt = index.get((cand, prim))
        if nxt is None:
            continue
        if side > 0:
            ang = _ccw_angle(geo, cand, prim, arrival, back, stop_at_pi=True)
        else:
            ang = _ccw_angle(geo, arrival, back, cand, prim, stop_at_pi=True)
        if ang is not None and ang.pi_multiple() == 1:
            return nxt
    return None


def _chain(geo: _Geometry, index, seed: SaddleConnection, side: int, cap: int):
    """Follow flat-side continuations until the seed recurs, or give up."""
    prim = _primitive(seed.scaled)
    elements = [seed]
    tx, ty = seed.scaled
    while True:
        nxt = _pi_next(geo, index, elements[-1].end_anchor, prim, side)
        if nxt is None:
            return None
        if nxt is seed:
            if tx * tx + ty * ty > cap:
                return None
            return elements
        tx += nxt.scaled[0]
        ty += nxt.scaled[1]
        if tx * tx + ty * ty > cap:
            return None
        elements.append(nxt)
        if len(elements) > len(index) + 1:
            raise InconsistentInvariants("boundary walk failed to close")


def _conn_key(conn: SaddleConnection):
    return (conn.anchor, conn.scaled)


def _cyclic_key(elements: Sequence[SaddleConnection]):
    keys = [_conn_key(c) for c in elements]
    best = min(range(len(keys)), key=lambda i: keys[i:] + keys[:i])
    return tuple(keys[best:] + keys[:best]), best


def _boundary_records(geo: _Geometry, conns, cap: int):
    """One record per (boundary chain, flat side); two records per cylinder."""
    index: Dict[Tuple, SaddleConnection] = {}
    for conn in conns:
        key = (conn.anchor, _primitive(conn.scaled))
        if key not in index:
            index[key] = conn
    records: Dict[Tuple, Tuple[List[SaddleConnection], int]] = {}
    done = set()
    for conn in conns:
        if not _canonical_positive(conn.scaled):
            continue
        for side in (1, -1):
            if (id(conn), side) in done:
                continue
            elements = _chain(geo, index, conn, side, cap)
            if elements is None:
                continue
            for el in elements:
                done.add((id(el), side))
            key, rot = _cyclic_key(elements)
            if (key, side) not in records:
                records[(key, side)] = (elements[rot:] + elements[:rot], side)
    return records, index


def _strip_search(geo: _Geometry, chain: List[SaddleConnection], side: int,
                  budget: int):
    """Perpendicular reach from a boundary chain to the facing boundary.

    Explores the flat half-neighborhood of the chain and returns the
    least perpendicular offset at which a cone point image appears,
    together with that image and its chart corner.
    """
    tri = geo.tri
    prim = _primitive(chain[0].scaled)
    total = (0, 0)
    for conn in chain:
        total = _vadd(total, conn.scaled)
    span = dot(total, prim)

    def perp(q):
        return cross(prim, q) if side > 0 else cross(q, prim)

    # collect the flat side's angular pieces at the seed cone point; the
    # left side sweeps ccw from the outgoing ray to the incoming-backward
    # ray, the right side from incoming-backward to outgoing
    seeds = []
    start = chain[0].anchor
    arrival = chain[-1].end_anchor
    if side > 0:
        cur, u = start, prim
        target, end_ray = arrival, vneg(prim)
    else:
        cur, u = arrival, vneg(prim)
        target, end_ray = start, prim
    incl = False
    acc = Angle.zero()
    guard = 0
    while True:
        in_ray = geo.in_ray(*cur)
        if cur == target:
            to_end = Angle.between(u, end_ray)
            to_in = Angle.between(u, in_ray)
            if to_end.compare(to_in) <= 0:
                seeds.append((cur, u, end_ray, incl))
                acc = acc + to_end
                break
        seeds.append((cur, u, in_ray, incl))
        acc = acc + Angle.between(u, in_ray)
        cur = tri.next_corner_ccw(*cur)
        u = geo.out_ray(*cur)
        incl = True
        guard += 1
        if guard > 3 * len(tri.tris) + 3:
            raise InconsistentInvariants("flat side sweep failed to close")
    if acc.pi_multiple() != 1:
        raise InconsistentInvariants("flat side does not sum to a straight angle")

    px, py = geo.px, geo.py
    glue_i, ssx, ssy = geo.glue_idx, geo.sx, geo.sy
    heap = []
    count = 0
    best = None
    best_rec = None

    def push(state, key):
        nonlocal count
        count += 1
        heapq.heappush(heap, (key, count, state))

    def seg_min_perp(ia, ib, sgx, sgy):
        p1 = perp((px[ia] + sgx, py[ia] + sgy))
        p2 = perp((px[ib] + sgx, py[ib] + sgy))
        return p1 if p1 < p2 else p2

    for corner, wu, wv, incl in seeds:
        t0, c0 = corner
        i0 = 3 * t0 + c0
        i1 = 3 * t0 + (c0 + 1) % 3
        out0 = geo.out_ray(t0, c0)
        if incl and cross(wu, out0) == 0 and dot(wu, out0) > 0:
            p = perp(out0)
            if p > 0 and (best is None or p < best):
                best, best_rec = p, ((t0, (c0 + 1) % 3), out0)
            incl = False
        if cross(wu, wv) <= 0 and not incl:
            continue
        push((glue_i[i1], -px[i0] - ssx[i1], -py[i0] - ssy[i1], wu, wv, incl), 0)

    work = 0
    while heap:
        key, _n, state = heapq.heappop(heap)
        if best is not None and key >= best:
            break
        work += 1
        if work > budget:
            raise BudgetExceeded("cylinder width search passed %d states" % budget)
        ia, sgx, sgy, wu, wv, incl = state
        t, e_in = divmod(ia, 3)
        b = 3 * t
        ib = b + (e_in + 1) % 3
        iq = b + (e_in + 2) % 3
        pa = (px[ia] + sgx, py[ia] + sgy)
        pb = (px[ib] + sgx, py[ib] + sgy)
        if best is not None and min(perp(pa), perp(pb)) >= best:
            continue
        ru, rv = dot(wu, prim), dot(wv, prim)
        ra, rb = dot(pa, prim), dot(pb, prim)
        if ru >= 0 and rv >= 0 and min(ra, rb) > span:
            continue
        if ru <= 0 and rv <= 0 and max(ra, rb) < 0:
            continue
        q = (px[iq] + sgx, py[iq] + sgy)
        su = cross(wu, q)
        sv = cross(q, wv)
        if su > 0 and sv > 0:
            p = perp(q)
            if p > 0 and (best is None or p < best):
                best, best_rec = p, (divmod(iq, 3), q)
            children = ((ib, wu, q, incl), (iq, q, wv, False))
        elif su == 0:
            if incl:
                p = perp(q)
                if p > 0 and (best is None or p < best):
                    best, best_rec = p, (divmod(iq, 3), q)
            children = ((iq, wu, wv, False),)
        elif sv == 0:
            children = ((ib, wu, wv, incl),)
        elif su < 0:
            children = ((iq, wu, wv, incl),)
        else:
            children = ((ib, wu, wv, incl),)
        for ic, cu, cv, cincl in children:
            if cross(cu, cv) <= 0 and not cincl:
                continue
            j = glue_i[ic]
            nsgx, nsgy = sgx - ssx[ic], sgy - ssy[ic]
            jt = 3 * (j // 3)
            jb = jt + ((j % 3) + 1) % 3
            push((j, nsgx, nsgy, cu, cv, cincl),
                 seg_min_perp(j, jb, nsgx, nsgy))
    if best is None:
        raise BudgetExceeded("no facing boundary found within the budget")
    return best, best_rec


def _facing_chain(geo: _Geometry, index, rec, prim, side: int):
    """Boundary chain through the image found by the width search."""
    corner, q = rec
    back_corner = _canonical_end(geo, corner, q)
    u_star = vneg(q)
    vclass = geo.tri.corner_class[back_corner]
    found = None
    for cand in geo.sector_corners(vclass, prim):
        if side > 0:
            ang = _ccw_angle(geo, back_corner, u_star, cand, prim, stop_at_pi=True)
        else:
            ang = _ccw_angle(geo, cand, prim, back_corner, u_star, stop_at_pi=True)
        if ang is not None and ang.compare(_PI) < 0:
            if found is not None:
                raise InconsistentInvariants("facing boundary is ambiguous")
            found = cand
    if found is None:
        raise InconsistentInvariants("no facing boundary ray")
    seed = index.get((found, prim))
    if seed is None:
        raise InconsistentInvariants("facing boundary has no traced connection")
    return seed


def cylinders(surface: TranslationSurface, length_cap, *,
              budget: int = DEFAULT_BUDGET,
              strip_budget: int = STRIP_BUDGET) -> List[Cylinder]:
    """Maximal cylinders with core length at most L, widths included."""
    geo = _geometry(surface)
    cap = _threshold(geo, length_cap)
    conns = saddle_connections(surface, length_cap, budget=budget)
    records, index = _boundary_records(geo, conns, cap)
    ceilings: Dict[Tuple, List[SaddleConnection]] = {}
    floors = []
    for (key, side), (elements, _s) in records.items():
        if side == 1:
            floors.append(elements)
        else:
            ceilings[key] = elements
    out = []
    for elements in floors:
        prim = _primitive(elements[0].scaled)
        best, rec = _strip_search(geo, elements, 1, strip_budget)
        seed = _facing_chain(geo, index, rec, prim, 1)
        facing = _chain(geo, index, seed, -1, cap)
        if facing is None:
            raise InconsistentInvariants("facing boundary fails to close")
        fkey, rot = _cyclic_key(facing)
        if fkey not in ceilings:
            raise InconsistentInvariants("boundary records do not pair up")
        ceiling = ceilings.pop(fkey)
        total = (0, 0)
        for conn in elements:
            total = _vadd(total, conn.scaled)
        width2 = Fraction(best * best,
                          norm2(prim) * geo.den * geo.den) / geo.unit_area
        core2 = Fraction(norm2(total), geo.den * geo.den) / geo.unit_area
        out.append(Cylinder(
            holonomy=(Fraction(total[0], geo.den), Fraction(total[1], geo.den)),
            core_length=math.sqrt(float(core2)),
            width=math.sqrt(float(width2)),
            floor=tuple(elements),
            ceiling=tuple(ceiling),
            width2=width2,
        ))
    if ceilings:
        raise InconsistentInvariants("boundary records do not pair up")
    out.sort(key=lambda cyl: (cyl.core_length, cyl.holonomy))
    return out


def _family_sizes(surface: TranslationSurface, length_cap, *,
                  budget: int) -> Dict[Tuple[int, int], int]:
    """Cylinder count per exact core holonomy (no widths computed)."""
    geo = _geometry(surface)
    cap = _threshold(geo, length_cap)
    conns = saddle_connections(surface, length_cap, budget=budget)
    records, _index = _boundary_records(geo, conns, cap)
    per_hol: Dict[Tuple[int, int], int] = {}
    for (_key, _side), (elements, _s) in records.items():
        total = (0, 0)
        for conn in elements:
            total = _vadd(total, conn.scaled)
        per_hol[total] = per_hol.get(total, 0) + 1
    for hol, n in per_hol.items():
        if n % 2 != 0:
            raise InconsistentInvariants("unpaired cylinder boundary at %s" % (hol,))
        per_hol[hol] = n // 2
    return per_hol


def configuration_counts(surface: TranslationSurface, length_cap, *,
                         budget: int = DEFAULT_BUDGET) -> List[ConfigurationCount]:
    """Families of parallel equal-holonomy cylinders, binned by size."""
    per_hol = _family_sizes(surface, length_cap, budget=budget)
    genus = surface.genus
    bins: Dict[int, int] = {}
    for hol, k in per_hol.items():
        bins[k] = bins.get(k, 0) + 1
        if k > genus:
            warnings.warn(
                "family of %d parallel cylinders exceeds the genus bound %d"
                % (k, genus), RuntimeWarning, stacklevel=2)
    area = math.pi * float(length_cap) ** 2
    return [ConfigurationCount(k, bins[k], bins[k] / area) for k in sorted(bins)]


def siegel_veech_transform(f, surface: TranslationSurface, *, support_radius,
                           configuration: str = "cylinders",
                           multiplicity: Optional[int] = None,
                           budget: int = DEFAULT_BUDGET) -> float:
    """Sum f over the holonomy set of the chosen configuration type.

    Holonomies are handed to f in normalized (unit-area) coordinates.
    Closed configurations contribute one vector per geometric object
    (sign identified); saddle connections contribute both orientations.
    """
    if support_radius is None or float(support_radius) <= 0:
        raise ConfigError("the support radius must be positive")
    geo = _geometry(surface)
    scale = 1.0 / (geo.den * math.sqrt(float(geo.unit_area)))
    vectors: List[Tuple[int, int]] = []
    if configuration == "saddle_connections":
        for conn in saddle_connections(surface, support_radius, budget=budget):
            vectors.append(conn.scaled)
    elif configuration == "cylinders":
        for hol, k in _family_sizes(surface, support_radius, budget=budget).items():
            vectors.extend([hol] * k)
    elif configuration == "families":
        if multiplicity is None or multiplicity < 1:
            raise ConfigError("family transform needs a positive multiplicity")
        for hol, k in _family_sizes(surface, support_radius, budget=budget).items():
            if k == multiplicity:
                vectors.append(hol)
    else:
        raise ConfigError("unknown configuration type %r" % (configuration,))
    return float(sum(f((x * scale, y * scale)) for x, y in vectors))


def siegel_veech_estimate(stratum, multiplicity: int, length_cap, samples: int,
                          seed: int, *, denominator_bits: int = 30,
                          budget: int = DEFAULT_BUDGET) -> SiegelVeechEstimate:
    """Monte Carlo growth constant for families of a given multiplicity.

    Averages the count of multiplicity-k families under the length cap
    over random unit-area surfaces of the stratum, with the batch
    standard error of the mean.
    """
    st = stratum if isinstance(stratum, Stratum) else Stratum.parse(stratum)
    if samples < 1:
        raise ConfigError("need at least one sample")
    if multiplicity < 1:
        raise ConfigError("multiplicity must be positive")
    counts = []
    for i in range(samples):
        surf = sample_random(st, seed=seed + 7919 * i,
                             denominator_bits=denominator_bits)
        per_hol = _family_sizes(surf, length_cap, budget=budget)
        counts.append(sum(1 for k in per_hol.values() if k == multiplicity))
    area = math.pi * float(length_cap) ** 2
    ratios = [c / area for c in counts]
    mean = sum(ratios) / samples
    if samples > 1:
        var = sum((r - mean) ** 2 for r in ratios) / (samples - 1)
        err = math.sqrt(var / samples)
    else:
        err = float("nan")
    return SiegelVeechEstimate(
        stratum=st.degrees,
        multiplicity=multiplicity,
        length_cap=float(length_cap),
        samples=samples,
        value=mean,
        stderr=err,
        counts=tuple(counts),
    )
