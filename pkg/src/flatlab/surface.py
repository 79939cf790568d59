"""Translation surfaces built from euclidean polygons glued by translations.

A surface is a list of simple ccw polygons plus a pairing of boundary edges;
paired edges must carry opposite vectors. Two coordinate backends share all
code paths: "exact" (int/Fraction coordinates, zero tolerance) and "float"
(tolerance 1e-9). Lengths and the count cutoffs elsewhere in the package are
measured in units where the area equals ``area / unit_area``; after
``normalize_area`` that ratio is exactly 1.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Optional, Sequence, Tuple

from . import geom
from .errors import (
    ConfigError,
    InvalidStratum,
    NonClosingPolygon,
    NonPositiveDeterminant,
    ZeroEdge,
)
from .rational import exact_div, format_number, parse_number, to_fraction
from .triangulation import Triangulation

SCHEMA_VERSION = 1

FLOAT_TOL = 1e-9


class Stratum:
    """Multiset of cone point degrees; degree d means cone angle 2*pi*(d+1).

    Degree 0 entries are marked regular points. The total degree must be
    even and equals 2g - 2 for the genus g.
    """

    def __init__(self, degrees: Sequence[int]):
        ds = tuple(sorted((int(d) for d in degrees), reverse=True))
        if not ds:
            raise InvalidStratum("a stratum needs at least one point")
        if any(d < 0 for d in ds):
            raise InvalidStratum("cone degrees must be nonnegative")
        if sum(ds) % 2 != 0:
            raise InvalidStratum("total cone degree must be even")
        self.degrees = ds

    @property
    def genus(self) -> int:
        return (sum(self.degrees) + 2) // 2

    @property
    def without_marked_points(self) -> "Stratum":
        kept = tuple(d for d in self.degrees if d > 0)
        return Stratum(kept if kept else (0,))

    def __eq__(self, other) -> bool:
        return isinstance(other, Stratum) and self.degrees == other.degrees

    def __hash__(self) -> int:
        return hash(self.degrees)

    def __repr__(self) -> str:
        return f"Stratum({','.join(map(str, self.degrees))})"

    def __str__(self) -> str:
        return ",".join(map(str, self.degrees))

    @staticmethod
    def parse(text) -> "Stratum":
        if isinstance(text, Stratum):
            return text
        if isinstance(text, (list, tuple)):
            return Stratum(text)
        parts = [p for p in str(text).replace("{", "").replace("}", "").split(",") if p.strip()]
        if not parts:
            raise InvalidStratum(f"cannot parse stratum from {text!r}")
        return Stratum([int(p) for p in parts])


def _infer_backend(polygons) -> str:
    for poly in polygons:
        for x, y in poly:
            if isinstance(x, float) or isinstance(y, float):
                return "float"
    return "exact"


class TranslationSurface:
    """Immutable polygon-union presentation of a translation surface."""

    def __init__(self, polygons, pairing, backend: Optional[str] = None,
                 unit_area=None):
        self.polygons: Tuple[Tuple, ...] = tuple(
            tuple((x, y) for x, y in poly) for poly in polygons
        )
        if backend is None:
            backend = _infer_backend(self.polygons)
        if backend not in ("exact", "float"):
            raise ConfigError(f"unknown backend {backend!r}")
        self.backend = backend
        self.tol = FLOAT_TOL if backend == "float" else 0
        if backend == "exact":
            self.polygons = tuple(
                tuple((to_fraction(x), to_fraction(y)) for x, y in poly)
                for poly in self.polygons
            )
        else:
            self.polygons = tuple(
                tuple((float(x), float(y)) for x, y in poly)
                for poly in self.polygons
            )
        self.pairing: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for (a, b) in _pairing_items(pairing):
            self.pairing[a] = b
            self.pairing[b] = a
        self._validate_pairing()
        if unit_area is None:
            unit_area = Fraction(1) if backend == "exact" else 1.0
        self.unit_area = to_fraction(unit_area) if backend == "exact" else float(unit_area)

    # --- validation ---

    def _validate_pairing(self) -> None:
        edges = {(p, e) for p in range(len(self.polygons))
                 for e in range(len(self.polygons[p]))}
        if set(self.pairing) != edges:
            raise ConfigError("pairing must cover every polygon edge exactly once")
        for a, b in self.pairing.items():
            if a == b:
                raise ConfigError("an edge cannot be glued to itself")
            if self.pairing[b] != a:
                raise ConfigError("pairing is not an involution")
        for poly in self.polygons:
            geom.validate_simple_polygon(poly, self.tol)

    # --- derived structure ---

    @cached_property
    def triangulation(self) -> Triangulation:
        tris: List[Tuple] = []
        glue: Dict[Tuple[int, int], Tuple[int, int]] = {}
        boundary: Dict[Tuple[int, int], Tuple[int, int]] = {}
        for p, poly in enumerate(self.polygons):
            n = len(poly)
            base = len(tris)
            triples = geom.triangulate_polygon(poly, self.tol)
            local: Dict[Tuple[int, int], Tuple[int, int]] = {}
            for k, (i, j, l) in enumerate(triples):
                tris.append((poly[i], poly[j], poly[l]))
                for e, (a, b) in enumerate(((i, j), (j, l), (l, i))):
                    if (b - a) % n == 1:
                        boundary[(p, a)] = (base + k, e)
                    else:
                        local[(a, b)] = (base + k, e)
            for (a, b), te in local.items():
                if (b, a) in local:
                    glue[te] = local[(b, a)]
        for (p, e), te in boundary.items():
            p2, e2 = self.pairing[(p, e)]
            glue[te] = boundary[(p2, e2)]
        return Triangulation(tris, glue, self.tol)

    def edge_vector(self, p: int, e: int):
        poly = self.polygons[p]
        return geom.vsub(poly[(e + 1) % len(poly)], poly[e])

    @cached_property
    def area(self):
        """Raw area in coordinate units."""
        total = 0
        for poly in self.polygons:
            total = total + geom.polygon_area2(poly)
        return exact_div(total, 2)

    @property
    def normalized_area(self):
        return exact_div(self.area, self.unit_area)

    def stratum(self) -> Stratum:
        return Stratum(self.triangulation.vertex_degrees)

    @property
    def genus(self) -> int:
        return self.triangulation.genus()

    def cone_angles(self) -> Tuple[int, ...]:
        """Cone angles as multiples of pi, one per vertex, matching stratum order."""
        return tuple(2 * (d + 1) for d in
                     sorted(self.triangulation.vertex_degrees, reverse=True))

    # --- group action and normalization ---

    def apply_gl2(self, matrix) -> "TranslationSurface":
        (a, b), (c, d) = matrix
        det = a * d - b * c
        if geom.sign(det, self.tol if isinstance(det, float) else 0) <= 0:
            raise NonPositiveDeterminant("matrix determinant must be positive")
        entries_exact = all(not isinstance(x, float) for x in (a, b, c, d))
        backend = self.backend if entries_exact else "float"
        if backend == "exact":
            a, b, c, d = (to_fraction(x) for x in (a, b, c, d))
        polys = tuple(
            tuple((a * x + b * y, c * x + d * y) for x, y in poly)
            for poly in self.polygons
        )
        return TranslationSurface(polys, _pairing_pairs(self.pairing),
                                  backend=backend, unit_area=self.unit_area)

    def normalize_area(self) -> "TranslationSurface":
        """Return a surface whose normalized area is 1.

        The exact backend keeps the coordinates and sets the area unit; the
        float backend rescales coordinates to make the raw area 1.
        """
        if self.backend == "exact":
            if self.area <= 0:
                raise ConfigError("cannot normalize a surface of nonpositive area")
            return TranslationSurface(self.polygons, _pairing_pairs(self.pairing),
                                      backend="exact", unit_area=self.area)
        import math
        s = 1.0 / math.sqrt(float(self.area))
        polys = tuple(tuple((x * s, y * s) for x, y in poly)
                      for poly in self.polygons)
        return TranslationSurface(polys, _pairing_pairs(self.pairing),
                                  backend="float", unit_area=1.0)

    # --- serialization ---

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "backend": self.backend,
            "polygons": [
                [[format_number(x), format_number(y)] for x, y in poly]
                for poly in self.polygons
            ],
            "pairing": [[list(a), list(b)] for a, b in _pairing_pairs(self.pairing)],
            "stratum": list(self.stratum().degrees),
            "area": format_number(self.area),
            "unit_area": format_number(self.unit_area),
        }

    @staticmethod
    def from_json_dict(data: dict) -> "TranslationSurface":
        if not isinstance(data, dict) or "polygons" not in data or "pairing" not in data:
            raise ConfigError("surface record must have polygons and pairing")
        backend = data.get("backend", "exact")
        try:
            polys = [
                [(parse_number(x, backend), parse_number(y, backend)) for x, y in poly]
                for poly in data["polygons"]
            ]
            pairing = [(tuple(a), tuple(b)) for a, b in data["pairing"]]
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed surface record: {exc}") from None
        unit_area = data.get("unit_area")
        if unit_area is not None:
            unit_area = parse_number(unit_area, backend)
        surf = TranslationSurface(polys, pairing, backend=backend,
                                  unit_area=unit_area)
        surf.triangulation
        if "area" in data:
            stored = parse_number(data["area"], backend)
            ok = (stored == surf.area) if backend == "exact" else \
                abs(float(stored) - float(surf.area)) <= FLOAT_TOL
            if not ok:
                raise ConfigError("stored area disagrees with the polygons")
        if "stratum" in data:
            if Stratum(data["stratum"]) != surf.stratum():
                raise ConfigError("stored stratum disagrees with the polygons")
        return surf


def _pairing_items(pairing):
    """Normalize a pairing given as dict or iterable of pairs."""
    if isinstance(pairing, dict):
        seen = set()
        for a, b in pairing.items():
            key = (tuple(a), tuple(b))
            if (key[1], key[0]) not in seen:
                seen.add(key)
        return [(a, b) for a, b in seen]
    return [(tuple(a), tuple(b)) for a, b in pairing]


def _pairing_pairs(pairing: dict):
    out = []
    seen = set()
    for a, b in pairing.items():
        if b not in seen:
            out.append((a, b))
            seen.add(a)
    return out


def build_surface(polygons, pairing, backend: Optional[str] = None) -> TranslationSurface:
    """Glue a list of ccw polygons (vertex lists) along paired edges."""
    surf = TranslationSurface(polygons, pairing, backend=backend)
    surf.triangulation  # force full validation now
    return surf


def build_from_polygon(vectors, pairing, backend: Optional[str] = None,
                       _swapped: bool = False) -> TranslationSurface:
    """Build a surface from one polygon bounded by two broken lines.

    ``vectors`` lists the edge vectors of the first broken line in order; the
    second line uses the same vectors in the order given by the permutation
    ``pairing`` (0-based). Matching sides of the two lines are glued. The
    classic torus is ``build_from_polygon([(1,0),(0,1)], [1,0])``.
    """
    vectors = [tuple(v) for v in vectors]
    n = len(vectors)
    if n < 2:
        raise ConfigError("need at least two edge vectors")
    perm = [int(p) for p in pairing]
    if sorted(perm) != list(range(n)):
        raise ConfigError("pairing must be a permutation of 0..n-1")
    if backend is None:
        backend = _infer_backend([vectors])
    tol = FLOAT_TOL if backend == "float" else 0
    for v in vectors:
        if geom.sign(geom.norm2(v), tol) == 0:
            raise ZeroEdge("zero edge vector")

    zero = (vectors[0][0] * 0, vectors[0][1] * 0)
    lower = [zero]
    for v in vectors:
        lower.append(geom.vadd(lower[-1], v))
    upper = [zero]
    for k in range(n):
        upper.append(geom.vadd(upper[-1], vectors[perm[k]]))
    if backend == "exact":
        if lower[-1] != upper[-1]:
            raise NonClosingPolygon("the two broken lines end at different points")
    elif not geom.same_point(lower[-1], upper[-1], tol):
        raise NonClosingPolygon("the two broken lines end at different points")

    cycle = lower + upper[-2:0:-1]
    for i in range(len(cycle)):
        for j in range(i + 1, len(cycle)):
            if geom.same_point(cycle[i], cycle[j], tol):
                raise NonClosingPolygon(
                    "the two broken lines touch away from their endpoints"
                )
    area2 = geom.polygon_area2(cycle)
    if geom.sign(area2, tol) == 0:
        raise NonClosingPolygon("the two broken lines bound no area")
    if geom.sign(area2, tol) < 0:
        if _swapped:
            raise NonClosingPolygon("the two broken lines bound no area")
        inv = [0] * n
        for k, p in enumerate(perm):
            inv[p] = k
        return build_from_polygon([vectors[p] for p in perm], inv,
                                  backend=backend, _swapped=True)

    inv = [0] * n
    for k, p in enumerate(perm):
        inv[p] = k
    pairs = [((0, j), (0, 2 * n - 1 - inv[j])) for j in range(n)]
    return build_surface([cycle], pairs, backend=backend)
