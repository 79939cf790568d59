"""Random flat surfaces built as suspension polygons over interval exchanges.

A bottom order against the identity top order determines the combinatorics;
lengths and signed heights for each label give the two broken lines of a
polygon whose gluing is the suspension. Heights must keep every proper
partial sum of the top line positive and of the bottom line negative, so
the polygon is embedded and the vertical flow is transverse to the base.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    ConfigError,
    NonClosingPolygon,
    SamplingExhausted,
    SelfIntersectingBoundary,
)
from .surface import Stratum, TranslationSurface, build_from_polygon

# Representative bottom orders per stratum, found once by random search over
# irreducible permutations (scripts/derive_representatives.py) and frozen.
# The reversal entries realize the component containing a hyperelliptic
# involution; extra entries widen coverage for strata with several
# connected components.
REPRESENTATIVES: Dict[Tuple[int, ...], List[Tuple[int, ...]]] = {
    (0,): [
        (1, 0),
    ],
    (2,): [
        (3, 2, 1, 0),
        (1, 3, 2, 0),
        (2, 1, 3, 0),
        (3, 1, 0, 2),
        (1, 3, 0, 2),
    ],
    (1, 1): [
        (4, 3, 2, 1, 0),
        (4, 0, 3, 2, 1),
        (1, 3, 0, 4, 2),
        (3, 2, 1, 4, 0),
        (4, 1, 0, 3, 2),
    ],
    (4,): [
        (5, 4, 3, 2, 1, 0),
        (4, 0, 5, 3, 2, 1),
        (2, 0, 5, 3, 1, 4),
        (1, 5, 4, 0, 3, 2),
        (4, 3, 1, 5, 0, 2),
    ],
    (2, 2): [
        (6, 5, 4, 3, 2, 1, 0),
        (2, 4, 1, 5, 3, 6, 0),
        (2, 4, 6, 3, 0, 5, 1),
        (6, 2, 0, 3, 5, 1, 4),
        (6, 0, 3, 2, 5, 4, 1),
    ],
    (3, 1): [
        (2, 5, 0, 4, 3, 6, 1),
        (2, 5, 3, 1, 6, 4, 0),
        (1, 3, 2, 6, 0, 5, 4),
        (6, 3, 2, 1, 4, 0, 5),
        (5, 2, 1, 6, 4, 3, 0),
    ],
    (6,): [
        (7, 6, 5, 4, 3, 2, 1, 0),
        (2, 7, 5, 3, 1, 4, 6, 0),
        (4, 2, 7, 3, 1, 6, 5, 0),
        (1, 7, 0, 6, 5, 2, 4, 3),
        (5, 7, 6, 1, 0, 4, 3, 2),
    ],
    (2, 1, 1): [
        (2, 5, 0, 4, 7, 3, 1, 6),
        (5, 7, 4, 6, 0, 3, 2, 1),
        (4, 1, 7, 2, 5, 0, 3, 6),
        (2, 7, 1, 5, 4, 0, 3, 6),
        (7, 3, 0, 4, 2, 6, 1, 5),
    ],
    (1, 1, 1, 1): [
        (3, 7, 1, 5, 0, 8, 6, 4, 2),
        (4, 3, 7, 1, 6, 0, 8, 2, 5),
        (1, 6, 0, 7, 4, 3, 8, 2, 5),
        (8, 3, 1, 0, 4, 7, 2, 6, 5),
        (4, 7, 2, 6, 5, 3, 1, 8, 0),
    ],
    (3, 3): [
        (8, 7, 6, 5, 4, 3, 2, 1, 0),
        (5, 3, 7, 2, 1, 4, 6, 8, 0),
        (2, 8, 3, 7, 4, 1, 5, 0, 6),
        (3, 8, 7, 2, 4, 1, 0, 6, 5),
        (8, 4, 6, 3, 1, 0, 7, 5, 2),
    ],
}

_SEARCH_CACHE: Dict[Tuple[int, ...], Tuple[int, ...]] = {}


def is_irreducible_order(bot: Sequence[int]) -> bool:
    """Whether no proper prefix of the two orders uses the same label set."""
    seen = set()
    for k, lab in enumerate(bot[:-1]):
        seen.add(lab)
        if seen == set(range(k + 1)):
            return False
    return True


def masur_heights(bot: Sequence[int]) -> Tuple[int, ...]:
    """Deterministic valid suspension heights read off the permutation.

    Height of label j is its bottom position minus its top position; for
    every irreducible order the partial-sum constraints then hold strictly.
    """
    n = len(bot)
    pos_bot = [0] * n
    for k, lab in enumerate(bot):
        pos_bot[lab] = k
    return tuple(pos_bot[lab] - lab for lab in range(n))


def valid_suspension_heights(bot: Sequence[int], heights: Sequence) -> bool:
    n = len(bot)
    s = 0
    for lab in range(n - 1):
        s = s + heights[lab]
        if not s > 0:
            return False
    s = 0
    for lab in bot[:-1]:
        s = s + heights[lab]
        if not s < 0:
            return False
    return True


def suspension_embeds(bot: Sequence[int], lengths: Sequence, heights: Sequence) -> bool:
    """Whether the two broken lines stay strictly on opposite sides.

    The lines share both endpoints, so staying on the correct side of the
    chord between those endpoints (not of the horizontal axis: the total
    height need not vanish) is what keeps the polygon embedded.
    """
    n = len(bot)
    chord = (sum(lengths), sum(heights))
    x = y = 0
    for lab in range(n - 1):
        x = x + lengths[lab]
        y = y + heights[lab]
        if not chord[0] * y - chord[1] * x > 0:
            return False
    x = y = 0
    for lab in bot[:-1]:
        x = x + lengths[lab]
        y = y + heights[lab]
        if not chord[0] * y - chord[1] * x < 0:
            return False
    return True


def suspension_surface(bot: Sequence[int], lengths: Sequence, heights: Sequence,
                       backend: str = "exact") -> TranslationSurface:
    """Surface of the suspension polygon for the given exchange data.

    The top order is the identity. The polygon's upper line lists the edge
    vectors (length, height) by label, the lower line lists them in the
    bottom order; gluing matching sides yields the surface.
    """
    bot = tuple(int(b) for b in bot)
    n = len(bot)
    if sorted(bot) != list(range(n)):
        raise ConfigError("bottom order must be a permutation of 0..n-1")
    if not is_irreducible_order(bot):
        raise ConfigError("reducible order: the polygon would disconnect")
    if len(lengths) != n or len(heights) != n:
        raise ConfigError("need one length and one height per label")
    if not valid_suspension_heights(bot, heights):
        raise ConfigError("heights violate the suspension partial-sum constraints")
    vectors = [(lengths[lab], heights[lab]) for lab in bot]
    pos_bot = [0] * n
    for k, lab in enumerate(bot):
        pos_bot[lab] = k
    perm = [pos_bot[lab] for lab in range(n)]
    return build_from_polygon(vectors, perm, backend=backend)


def _reversal(n: int) -> Tuple[int, ...]:
    return tuple(reversed(range(n)))


def _interval_count(stratum: Stratum) -> int:
    return 2 * stratum.genus + len(stratum.degrees) - 1


def _probe_stratum(bot: Sequence[int], rng: random.Random) -> Optional[Stratum]:
    """Stratum of a generic suspension over bot, or None if degenerate."""
    n = len(bot)
    heights = masur_heights(bot)
    for _ in range(6):
        lengths = tuple(Fraction(rng.randrange(1, 1 << 20), 1 << 20) for _ in range(n))
        if not suspension_embeds(bot, lengths, heights):
            continue
        try:
            surf = suspension_surface(bot, lengths, heights, backend="exact")
        except (NonClosingPolygon, SelfIntersectingBoundary):
            continue
        return surf.stratum()
    return None


def find_representative(stratum: Stratum, rng: Optional[random.Random] = None,
                        tries: int = 4000) -> Tuple[int, ...]:
    """A bottom order whose suspensions lie in the requested stratum.

    Table lookup first, then seeded random search over irreducible orders.
    """
    key = stratum.degrees
    if key in REPRESENTATIVES:
        return REPRESENTATIVES[key][0]
    if key in _SEARCH_CACHE:
        return _SEARCH_CACHE[key]
    if rng is None:
        rng = random.Random(20210 + sum(key))
    n = _interval_count(stratum)
    if n < 2:
        raise ConfigError("stratum %s leaves no room for an exchange" % (stratum,))
    for _ in range(tries):
        bot = list(range(n))
        rng.shuffle(bot)
        if not is_irreducible_order(bot):
            continue
        if _probe_stratum(bot, rng) == stratum:
            found = tuple(bot)
            _SEARCH_CACHE[key] = found
            return found
    raise SamplingExhausted(
        "no suspension representative found for stratum %s" % (stratum,)
    )


def sample_random(stratum, seed: int, backend: str = "exact",
                  denominator_bits: int = 30, budget: int = 3000,
                  representative: Optional[Sequence[int]] = None) -> TranslationSurface:
    """Draw a random unit-area surface in the given stratum.

    Lengths are dyadic in (0, 1], heights dyadic in [-1, 1]; draws failing
    the suspension constraints are rejected and redrawn. The result is
    verified to lie in the requested stratum and normalized to unit area.
    """
    st = stratum if isinstance(stratum, Stratum) else Stratum.parse(stratum)
    rng = random.Random(seed)
    if representative is not None:
        reps = [tuple(int(b) for b in representative)]
    else:
        reps = REPRESENTATIVES.get(st.degrees)
        if reps is None:
            reps = [find_representative(st)]
    scale = 1 << denominator_bits
    n = _interval_count(st)
    for _attempt in range(budget):
        bot = reps[rng.randrange(len(reps))]
        lengths = tuple(Fraction(rng.randrange(1, scale + 1), scale)
                        for _ in range(n))
        heights = tuple(Fraction(rng.randrange(-scale, scale + 1), scale)
                        for _ in range(n))
        if not valid_suspension_heights(bot, heights):
            continue
        if not suspension_embeds(bot, lengths, heights):
            continue
        try:
            surf = suspension_surface(bot, lengths, heights, backend="exact")
        except (NonClosingPolygon, SelfIntersectingBoundary):
            continue
        if surf.stratum() != st:
            continue
        if backend == "float":
            surf = surf.apply_gl2([[1.0, 0.0], [0.0, 1.0]])
        return surf.normalize_area()
    raise SamplingExhausted(
        "gave up after %d draws for stratum %s" % (budget, st)
    )
