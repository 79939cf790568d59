"""Interval exchange transformations and their renormalization steps.

An exchange is stored as lengths indexed by label together with the label
order across the domain (top) and across the image (bot). Intervals are
closed on the left and open on the right, so every point of the domain has
a unique interval. Lengths may be exact (int, Fraction) or float; exact
inputs are never coerced.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Sequence, Tuple

from . import intlinalg
from .errors import NonIrreducible, TieBreak


def _is_exact(value) -> bool:
    return isinstance(value, (int, Fraction))


@dataclass(frozen=True)
class Iet:
    """Interval exchange with labelled lengths and two label orders."""

    lengths: Tuple
    top: Tuple[int, ...]
    bot: Tuple[int, ...]

    def __post_init__(self):
        lengths = tuple(self.lengths)
        top = tuple(self.top)
        bot = tuple(self.bot)
        object.__setattr__(self, "lengths", lengths)
        object.__setattr__(self, "top", top)
        object.__setattr__(self, "bot", bot)
        n = len(lengths)
        if n == 0:
            raise NonIrreducible("an exchange needs at least one interval")
        expected = list(range(n))
        if sorted(top) != expected or sorted(bot) != expected:
            raise NonIrreducible(
                "top and bot must each order the labels 0..%d once" % (n - 1)
            )
        for lab, val in enumerate(lengths):
            if not val > 0:
                raise NonIrreducible("length of interval %d must be positive" % lab)
        for k in range(1, n):
            if set(top[:k]) == set(bot[:k]):
                raise NonIrreducible(
                    "labels %s split off: the exchange decomposes at position %d"
                    % (sorted(top[:k]), k)
                )

    @property
    def n(self) -> int:
        return len(self.lengths)

    @property
    def total(self):
        return sum(self.lengths)

    @property
    def backend(self) -> str:
        return "exact" if all(_is_exact(v) for v in self.lengths) else "float"

    def domain_starts(self) -> Dict[int, object]:
        out = {}
        s = 0
        for lab in self.top:
            out[lab] = s
            s = s + self.lengths[lab]
        return out

    def image_starts(self) -> Dict[int, object]:
        out = {}
        s = 0
        for lab in self.bot:
            out[lab] = s
            s = s + self.lengths[lab]
        return out

    def translations(self) -> Tuple:
        """Per-label displacement: the image start minus the domain start."""
        dom = self.domain_starts()
        img = self.image_starts()
        return tuple(img[lab] - dom[lab] for lab in range(self.n))

    def domain_breaks(self) -> List:
        """Interior discontinuity points, left to right (n - 1 of them)."""
        out = []
        s = 0
        for lab in self.top[:-1]:
            s = s + self.lengths[lab]
            out.append(s)
        return out

    def image_breaks(self) -> List:
        out = []
        s = 0
        for lab in self.bot[:-1]:
            s = s + self.lengths[lab]
            out.append(s)
        return out

    def interval_of(self, x) -> int:
        """Label of the interval containing x (left closed, right open)."""
        if not (0 <= x < self.total):
            raise ValueError("point %r outside the domain" % (x,))
        s = 0
        for lab in self.top:
            s = s + self.lengths[lab]
            if x < s:
                return lab
        return self.top[-1]

    def __call__(self, x):
        return x + self.translations()[self.interval_of(x)]


def rauzy_type(t: Iet) -> str:
    """Which side wins the next induction step: "top" or "bot"."""
    a = t.lengths[t.top[-1]]
    b = t.lengths[t.bot[-1]]
    if a == b:
        raise TieBreak(
            "rightmost intervals %d and %d have equal length" % (t.top[-1], t.bot[-1])
        )
    return "top" if a > b else "bot"


def rauzy_step(t: Iet) -> Tuple[Iet, List[List[int]]]:
    """One induction step: cut the shorter rightmost interval off the longer.

    Returns the induced exchange together with the unimodular matrix A
    satisfying lengths_old = A @ lengths_new. Transport of cycle
    coordinates goes the other way: c_new = A^T @ c_old.
    """
    kind = rauzy_type(t)
    if kind == "top":
        winner, loser = t.top[-1], t.bot[-1]
        pos = t.bot.index(winner)
        new_top = t.top
        new_bot = t.bot[: pos + 1] + (loser,) + t.bot[pos + 1 : -1]
    else:
        winner, loser = t.bot[-1], t.top[-1]
        pos = t.top.index(winner)
        new_bot = t.bot
        new_top = t.top[: pos + 1] + (loser,) + t.top[pos + 1 : -1]
    new_lengths = list(t.lengths)
    new_lengths[winner] = new_lengths[winner] - new_lengths[loser]
    a = intlinalg.identity_int(t.n)
    a[winner][loser] += 1
    return Iet(tuple(new_lengths), new_top, new_bot), a


def zorich_run(t: Iet) -> Tuple[Iet, List[List[int]], str, int]:
    """Maximal run of same-side induction steps.

    Returns (induced exchange, accumulated matrix, winning side, run length).
    A tie encountered by the lookahead ends the run cleanly; the tie then
    surfaces on the next call.
    """
    kind = rauzy_type(t)
    b = intlinalg.identity_int(t.n)
    cur = t
    count = 0
    while True:
        winner = cur.top[-1] if kind == "top" else cur.bot[-1]
        loser = cur.bot[-1] if kind == "top" else cur.top[-1]
        cur, _a = rauzy_step(cur)
        # same winner throughout the run, so the product of the elementary
        # matrices is identity plus accumulated (winner, loser) bumps
        b[winner][loser] += 1
        count += 1
        try:
            nxt = rauzy_type(cur)
        except TieBreak:
            break
        if nxt != kind:
            break
    return cur, b, kind, count


def zorich_step(t: Iet) -> Tuple[Iet, List[List[int]]]:
    """Accelerated induction: collapse a maximal same-side run into one step."""
    cur, b, _kind, _count = zorich_run(t)
    return cur, b


def intersection_matrix(top: Sequence[int], bot: Sequence[int]) -> List[List[int]]:
    """Antisymmetric pairing of the exchange combinatorics.

    Entry (j, k) is +1 when label k sits before j on top but after j on
    the bottom, -1 in the mirrored case, 0 otherwise. Suspension heights
    tau turn into rectangle heights via h = M tau, and translations obey
    delta = -M lengths.
    """
    n = len(top)
    pos_top = [0] * n
    pos_bot = [0] * n
    for k, lab in enumerate(top):
        pos_top[lab] = k
    for k, lab in enumerate(bot):
        pos_bot[lab] = k
    m = [[0] * n for _ in range(n)]
    for j in range(n):
        for k in range(n):
            if pos_top[k] < pos_top[j] and pos_bot[k] > pos_bot[j]:
                m[j][k] = 1
            elif pos_top[k] > pos_top[j] and pos_bot[k] < pos_bot[j]:
                m[j][k] = -1
    return m


def log_of(value) -> float:
    """Natural log of an exact or float length, safe for huge integers."""
    if isinstance(value, Fraction):
        return math.log(value.numerator) - math.log(value.denominator)
    if isinstance(value, int):
        return math.log(value)
    return math.log(value)


def accelerated_orbit(t: Iet, steps: int, renormalize: bool = True) -> Iterator[dict]:
    """Iterate accelerated induction, reporting one record per step.

    Each record carries the step index, the winning side, the elapsed
    flow time t0 (log of the domain contraction), the run length, the
    accumulated matrix and the induced exchange. Float lengths are
    rescaled to unit total after every step when renormalize is set;
    exact lengths are always kept exact.
    """
    cur = t
    exact = t.backend == "exact"
    for step in range(steps):
        before = cur.total
        nxt, b, kind, count = zorich_run(cur)
        after = nxt.total
        t0 = log_of(before) - log_of(after)
        if not exact and renormalize:
            scale = 1.0 / after
            nxt = Iet(tuple(v * scale for v in nxt.lengths), nxt.top, nxt.bot)
        cur = nxt
        yield {
            "step": step,
            "type": kind,
            "t0": t0,
            "run": count,
            "matrix": b,
            "iet": cur,
        }
