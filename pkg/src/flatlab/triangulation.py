"""Triangle complexes glued by translations, with exact straight-line tracing.

Each triangle lives in its own coordinate chart as a ccw triple of points.
Directed edge e of triangle t runs from corner e to corner (e + 1) % 3.
``glue`` pairs directed edges; ``shift[t, e]`` is the translation taking
chart t onto the neighbor chart across edge e. Because all gluings are
translations a direction vector never changes while a trace moves between
charts, which keeps the tracing code free of rotations.
"""

from __future__ import annotations

from typing import Dict, List, Optional, Tuple

from . import geom
from .errors import (
    ConfigError,
    FlowBudgetExceeded,
    InconsistentInvariants,
    NonClosingPolygon,
)
from .geom import Angle, cross, dot, sign, vadd, vsub
from .rational import exact_div

Corner = Tuple[int, int]  # (triangle, corner index 0..2)
Edge = Tuple[int, int]    # (triangle, edge index 0..2)


class Triangulation:
    """A closed translation surface cut into ccw triangles."""

    def __init__(self, tris, glue, tol=0):
        self.tris: List[Tuple] = [tuple(t) for t in tris]
        self.glue: Dict[Edge, Edge] = dict(glue)
        self.tol = tol
        self.shift: Dict[Edge, Tuple] = {}
        self._validate()
        self._build_vertex_classes()

    # --- construction checks ---

    def _validate(self) -> None:
        for t, pts in enumerate(self.tris):
            if len(pts) != 3:
                raise ConfigError("triangles need exactly 3 corners")
            if sign(geom.polygon_area2(pts), self.tol) <= 0:
                raise ConfigError(f"triangle {t} is not ccw or is degenerate")
        seen = set()
        for (t, e), (t2, e2) in self.glue.items():
            if self.glue.get((t2, e2)) != (t, e) or (t, e) == (t2, e2):
                raise ConfigError("edge gluing must be a fixed-point-free involution")
            v = self.edge_vector(t, e)
            w = self.edge_vector(t2, e2)
            if v != geom.vneg(w) and not (
                self.tol and geom.same_point(v, geom.vneg(w), self.tol)
            ):
                raise NonClosingPolygon("glued edges must carry opposite vectors")
            self.shift[(t, e)] = vsub(self.corner_point(t2, (e2 + 1) % 3),
                                      self.corner_point(t, e))
            seen.add((t, e))
        if len(seen) != 3 * len(self.tris):
            raise ConfigError("every directed edge must be glued")
        # connectedness
        if self.tris:
            stack, comp = [0], {0}
            while stack:
                t = stack.pop()
                for e in range(3):
                    t2 = self.glue[(t, e)][0]
                    if t2 not in comp:
                        comp.add(t2)
                        stack.append(t2)
            if len(comp) != len(self.tris):
                raise ConfigError("surface is not connected")

    # --- basic accessors ---

    def corner_point(self, t: int, c: int):
        return self.tris[t][c]

    def edge_vector(self, t: int, e: int):
        return vsub(self.tris[t][(e + 1) % 3], self.tris[t][e])

    def corner_ray_out(self, t: int, c: int):
        """Boundary ray of the corner sector swept first (ccw start)."""
        return self.edge_vector(t, c)

    def corner_ray_in(self, t: int, c: int):
        """Boundary ray of the corner sector swept last (ccw end)."""
        return vsub(self.tris[t][(c - 1) % 3], self.tris[t][c])

    def corner_angle(self, t: int, c: int) -> Angle:
        return Angle.between(self.corner_ray_out(t, c),
                             self.corner_ray_in(t, c), self.tol)

    def next_corner_ccw(self, t: int, c: int) -> Corner:
        """The next corner counterclockwise around the same surface vertex."""
        t2, e2 = self.glue[(t, (c - 1) % 3)]
        return (t2, e2)

    def prev_corner_ccw(self, t: int, c: int) -> Corner:
        t2, e2 = self.glue[(t, c)]
        return (t2, (e2 + 1) % 3)

    # --- vertex classes and cone angles ---

    def _build_vertex_classes(self) -> None:
        corner_class: Dict[Corner, int] = {}
        classes: List[List[Corner]] = []
        for t in range(len(self.tris)):
            for c in range(3):
                if (t, c) in corner_class:
                    continue
                cid = len(classes)
                walk = []
                cur = (t, c)
                while cur not in corner_class:
                    corner_class[cur] = cid
                    walk.append(cur)
                    cur = self.next_corner_ccw(*cur)
                if cur != (t, c):
                    raise InconsistentInvariants("corner walk did not close up")
                classes.append(walk)
        self.corner_class = corner_class
        self.vertex_corners = classes
        degrees = []
        for walk in classes:
            total = Angle.zero(self.tol)
            for t, c in walk:
                total = total + self.corner_angle(t, c)
            k = total.pi_multiple()
            if k is None or k % 2 != 0 or k <= 0:
                raise InconsistentInvariants(
                    "cone angle is not a positive multiple of 2*pi"
                )
            degrees.append(k // 2 - 1)
        self.vertex_degrees = degrees

    @property
    def num_vertices(self) -> int:
        return len(self.vertex_corners)

    def genus(self) -> int:
        f = len(self.tris)
        euler = self.num_vertices - (3 * f) // 2 + f
        if euler % 2 != 0:
            raise InconsistentInvariants("odd Euler characteristic")
        g = (2 - euler) // 2
        if sum(self.vertex_degrees) != 2 * g - 2:
            raise InconsistentInvariants("degree sum disagrees with genus")
        return g

    def area2(self):
        """Twice the total area."""
        total = 0
        for pts in self.tris:
            total = total + geom.polygon_area2(pts)
        return total

    # --- sector bookkeeping ---

    def sector_of_direction(self, vclass: int, w, start: Optional[Corner] = None):
        """All corners of a vertex class whose sector [out, in) contains w."""
        out = []
        for t, c in self.vertex_corners[vclass]:
            if geom.sector_contains(self.corner_ray_out(t, c),
                                    self.corner_ray_in(t, c),
                                    w, self.tol, include_start=True):
                out.append((t, c))
        return out

    # --- tracing ---

    def exit_from(self, t: int, p, w):
        """First exit of the ray p + s*w, s > 0, from triangle t.

        Returns (s, kind, idx): kind "corner" when the ray leaves exactly
        through corner idx, else "edge" with idx the crossed edge. p must lie
        in the closed triangle with the forward ray entering its interior.
        """
        tol = self.tol
        best = None
        for e in range(3):
            a = self.tris[t][e]
            b = self.tris[t][(e + 1) % 3]
            ab = vsub(b, a)
            denom = cross(w, ab)
            if sign(denom, tol) == 0:
                continue
            s = exact_div(cross(vsub(a, p), ab), denom)
            if sign(s, tol) <= 0:
                continue
            hit = vadd(p, (w[0] * s, w[1] * s))
            u = dot(vsub(hit, a), ab)
            total = dot(ab, ab)
            if sign(u, tol) < 0 or sign(u - total, tol) > 0:
                continue
            if best is None or s < best[0]:
                if sign(u, tol) == 0:
                    best = (s, "corner", e)
                elif sign(u - total, tol) == 0:
                    best = (s, "corner", (e + 1) % 3)
                else:
                    best = (s, "edge", e)
        if best is None:
            raise InconsistentInvariants("ray failed to leave the triangle")
        return best

    def cross_edge(self, t: int, e: int, p):
        """Carry a point on edge (t, e) into the neighboring chart."""
        t2, e2 = self.glue[(t, e)]
        return t2, vadd(p, self.shift[(t, e)])


class RayTracer:
    """Walks a straight line through a Triangulation chart by chart.

    The tracer yields one record per visited triangle and stops on a cone
    point hit or when the crossing budget runs out. Positions are kept in the
    current chart; ``travel`` is the accumulated ray parameter (length in
    units of |w|).
    """

    def __init__(self, tri: Triangulation, t: int, p, w, budget: int = 20000):
        self.tri = tri
        self.t = t
        self.p = p
        self.w = w
        self.budget = budget
        self.travel = 0
        self.stopped = None  # None | ("corner", (t, c)) | ("budget",)

    def step(self):
        """Advance through one triangle.

        Returns (t, p_in, p_out, s_in, s_out) for the traversed piece, or
        None when the trace has stopped. After a corner hit ``stopped`` holds
        the cone corner reached.
        """
        if self.stopped is not None:
            return None
        if self.budget <= 0:
            self.stopped = ("budget",)
            return None
        self.budget -= 1
        s, kind, idx = self.tri.exit_from(self.t, self.p, self.w)
        p_out = vadd(self.p, (self.w[0] * s, self.w[1] * s))
        rec = (self.t, self.p, p_out, self.travel, self.travel + s)
        if kind == "corner":
            self.stopped = ("corner", (self.t, idx))
            self.travel = self.travel + s
            self.p = p_out
            return rec
        t2, p2 = self.tri.cross_edge(self.t, idx, p_out)
        self.t, self.p = t2, p2
        self.travel = self.travel + s
        return rec


def trace_until_corner(tri: Triangulation, t: int, p, w, budget: int = 20000):
    """Trace to the first cone point on the ray; returns (corner, travel, pieces)."""
    tracer = RayTracer(tri, t, p, w, budget)
    pieces = []
    while tracer.stopped is None:
        rec = tracer.step()
        if rec is not None:
            pieces.append(rec)
    if tracer.stopped[0] != "corner":
        raise FlowBudgetExceeded("no cone point within budget")
    return tracer.stopped[1], tracer.travel, pieces
