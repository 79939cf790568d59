"""Planar geometry over exact or float coordinates.

Vectors are plain (x, y) tuples. Nothing in this module divides, so Fraction
or int inputs give exact outputs; float callers pass a tolerance to the sign
sensitive predicates and get the same code paths.
"""

from __future__ import annotations

import math
from typing import Sequence, Tuple

Vec = Tuple  # (x, y), entries int | Fraction | float


def vadd(u, v):
    return (u[0] + v[0], u[1] + v[1])


def vsub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def vneg(u):
    return (-u[0], -u[1])


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def norm2(u):
    return u[0] * u[0] + u[1] * u[1]


def rot90ccw(u):
    return (-u[1], u[0])


def rot90cw(u):
    return (u[1], -u[0])


def sign(x, tol=0) -> int:
    if x > tol:
        return 1
    if x < -tol:
        return -1
    return 0


def orient(a, b, c, tol=0) -> int:
    """Sign of the turn a -> b -> c (+1 left, -1 right, 0 collinear)."""
    return sign(cross(vsub(b, a), vsub(c, a)), tol)


def same_direction(u, v, tol=0) -> bool:
    return sign(cross(u, v), tol) == 0 and sign(dot(u, v), tol) > 0


def sector_contains(u, r, w, tol=0, include_start=True) -> bool:
    """Whether direction w lies in the corner sector swept ccw from u to r.

    The sector must span less than a half turn (cross(u, r) > 0), which holds
    for every triangle corner. The start ray u is included when asked, the
    end ray r never is.
    """
    if same_direction(u, w, tol):
        return include_start
    return sign(cross(u, w), tol) > 0 and sign(cross(w, r), tol) > 0


def point_on_segment(p, a, b, tol=0) -> bool:
    """Closed segment test."""
    if orient(a, b, p, tol) != 0:
        return False
    return sign(dot(vsub(p, a), vsub(b, a)), tol) >= 0 and \
        sign(dot(vsub(p, b), vsub(a, b)), tol) >= 0


def point_in_triangle(p, a, b, c, tol=0, closed=True) -> bool:
    """Membership in a ccw triangle, closed or open."""
    s1 = orient(a, b, p, tol)
    s2 = orient(b, c, p, tol)
    s3 = orient(c, a, p, tol)
    if closed:
        return s1 >= 0 and s2 >= 0 and s3 >= 0
    return s1 > 0 and s2 > 0 and s3 > 0


def segments_intersect(a, b, c, d, tol=0) -> bool:
    """Whether closed segments [a,b] and [c,d] share any point."""
    o1 = orient(a, b, c, tol)
    o2 = orient(a, b, d, tol)
    o3 = orient(c, d, a, tol)
    o4 = orient(c, d, b, tol)
    if o1 != o2 and o3 != o4:
        return True
    if o1 == 0 and point_on_segment(c, a, b, tol):
        return True
    if o2 == 0 and point_on_segment(d, a, b, tol):
        return True
    if o3 == 0 and point_on_segment(a, c, d, tol):
        return True
    if o4 == 0 and point_on_segment(b, c, d, tol):
        return True
    return False


class Angle:
    """A rotation amount tracked exactly as half_turns * pi + arg(z).

    z = (c, s) is an unnormalized direction pair with arg(z) kept in [0, pi),
    so integer and Fraction inputs never leave exact arithmetic. Comparisons
    and multiples-of-pi tests are decided by signs alone.
    """

    __slots__ = ("half_turns", "z", "tol")

    def __init__(self, half_turns: int, z, tol=0):
        c, s = z
        if isinstance(c, float) or isinstance(s, float):
            # keep float magnitudes tame over long accumulations
            h = math.hypot(c, s)
            if h > 0:
                c, s = c / h, s / h
        if sign(s, tol) < 0 or (sign(s, tol) == 0 and sign(c, tol) < 0):
            half_turns += 1
            c, s = -c, -s
        self.half_turns = half_turns
        self.z = (c, s)
        self.tol = tol

    @classmethod
    def zero(cls, tol=0) -> "Angle":
        return cls(0, (1, 0), tol)

    @classmethod
    def between(cls, u, v, tol=0) -> "Angle":
        """Counterclockwise rotation taking direction u to v, in [0, 2*pi)."""
        if sign(norm2(u), tol) == 0 or sign(norm2(v), tol) == 0:
            raise ValueError("directions must be nonzero")
        return cls(0, (dot(u, v), cross(u, v)), tol)

    def __add__(self, other: "Angle") -> "Angle":
        c1, s1 = self.z
        c2, s2 = other.z
        tol = self.tol if self.tol else other.tol
        return Angle(
            self.half_turns + other.half_turns,
            (c1 * c2 - s1 * s2, c1 * s2 + s1 * c2),
            tol,
        )

    def compare(self, other: "Angle") -> int:
        """-1, 0, +1 as self is smaller than, equal to, larger than other."""
        if self.half_turns != other.half_turns:
            return -1 if self.half_turns < other.half_turns else 1
        tol = self.tol if self.tol else other.tol
        # both args lie in [0, pi); a ccw turn from self.z to other.z means
        # self is the smaller angle
        return -sign(cross(self.z, other.z), tol)

    def pi_multiple(self):
        """k if the angle equals k * pi exactly, else None."""
        c, s = self.z
        tol = self.tol
        if sign(s, tol) == 0 and sign(c, tol) > 0:
            return self.half_turns
        return None

    def __repr__(self):
        c, s = self.z
        approx = self.half_turns * math.pi + math.atan2(float(s), float(c))
        return f"Angle({approx:.6f} rad)"

    def radians(self) -> float:
        c, s = self.z
        return self.half_turns * math.pi + math.atan2(float(s), float(c))


def polygon_area2(points: Sequence[Vec]):
    """Twice the signed area of a polygon given by its vertex cycle."""
    total = 0
    n = len(points)
    for i in range(n):
        total += cross(points[i], points[(i + 1) % n])
    return total


def validate_simple_polygon(points: Sequence[Vec], tol=0) -> None:
    """Raise if the vertex cycle is not a simple, positively oriented polygon."""
    from .errors import ConfigError, SelfIntersectingBoundary, ZeroEdge

    n = len(points)
    if n < 3:
        raise ConfigError(f"polygon needs at least 3 vertices, got {n}")
    edges = [(points[i], points[(i + 1) % n]) for i in range(n)]
    for a, b in edges:
        if sign(norm2(vsub(b, a)), tol) == 0:
            raise ZeroEdge(f"zero-length edge at {a}")
    for i in range(n):
        a, b = edges[i]
        for j in range(i + 1, n):
            c, d = edges[j]
            adjacent = (j == i + 1) or (i == 0 and j == n - 1)
            if adjacent:
                # consecutive edges share exactly their common endpoint
                shared = b if j == i + 1 else a
                other1 = a if j == i + 1 else b
                other2 = d if j == i + 1 else c
                if point_on_segment(other2, a, b, tol) and not same_point(other2, shared, tol):
                    raise SelfIntersectingBoundary("adjacent edges overlap")
                if point_on_segment(other1, c, d, tol) and not same_point(other1, shared, tol):
                    raise SelfIntersectingBoundary("adjacent edges overlap")
            elif segments_intersect(a, b, c, d, tol):
                raise SelfIntersectingBoundary(
                    f"edges {i} and {j} intersect"
                )
    if sign(polygon_area2(points), tol) <= 0:
        raise ConfigError("polygon must be counterclockwise with positive area")


def same_point(p, q, tol=0) -> bool:
    return sign(p[0] - q[0], tol) == 0 and sign(p[1] - q[1], tol) == 0


def triangulate_polygon(points: Sequence[Vec], tol=0):
    """Ear-clip a simple ccw polygon into triangles of vertex indices.

    Vertices with straight (pi) interior angles are kept as triangle corners,
    never dropped onto edges, so the result always glues corner to corner.
    """
    n = len(points)
    if n == 3:
        return [(0, 1, 2)]
    remaining = list(range(n))
    triangles = []
    while len(remaining) > 3:
        found = False
        m = len(remaining)
        for k in range(m):
            i_prev = remaining[(k - 1) % m]
            i_cur = remaining[k]
            i_next = remaining[(k + 1) % m]
            a, b, c = points[i_prev], points[i_cur], points[i_next]
            if orient(a, b, c, tol) <= 0:
                continue
            ok = True
            for other in remaining:
                if other in (i_prev, i_cur, i_next):
                    continue
                if point_in_triangle(points[other], a, b, c, tol, closed=True):
                    ok = False
                    break
            if ok:
                triangles.append((i_prev, i_cur, i_next))
                remaining.pop(k)
                found = True
                break
        if not found:
            raise ValueError("no ear found; polygon is not simple")
    triangles.append(tuple(remaining))
    return triangles
