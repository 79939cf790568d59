"""Pure-Python twins of the compiled kernels.

Both implementations expose the same two entry points and are selected at
import time by flatlab._kernels. Keep the semantics in lockstep with
_speedups.pyx; the equivalence test drives both on identical inputs.
"""

from __future__ import annotations

import math

import numpy as np


def iet_orbit_visits(breaks, deltas, x0: float, n_steps: int, visits) -> float:
    """Iterate a float interval exchange, recording the visited interval.

    breaks holds the left endpoints of the n subintervals in increasing
    order (breaks[0] == 0); deltas the per-interval translations. visits is
    an int8 output array of length n_steps. Returns the final point.
    """
    n = len(breaks)
    x = float(x0)
    for k in range(n_steps):
        j = n - 1
        while j > 0 and x < breaks[j]:
            j -= 1
        visits[k] = j
        x += deltas[j]
    return x


def zorich_chunk(lam, top, bot, frame, max_accel: int, inverse: int = 0):
    """Run up to max_accel accelerated renormalization steps in place.

    lam: float64[n] subinterval lengths, renormalized to sum 1 after every
    accelerated step. top/bot: int64[n] orders, updated in place. frame:
    float64[n, n] cocycle frame; each elementary induction step adds the
    winner row into the loser row (inverse=0, the transported-cycle
    convention) or subtracts the loser row from the winner row (inverse=1,
    the inverse matrices). Returns (accel_done, rauzy_done, teich_time,
    tie) where tie reports an exact length tie (the caller raises); on tie
    the state is left as it was before the offending step.
    """
    n = len(lam)
    accel = 0
    rauzy = 0
    teich = 0.0
    while accel < max_accel:
        wt = top[n - 1]
        wb = bot[n - 1]
        if lam[wt] == lam[wb]:
            return accel, rauzy, teich, True
        cur_type = 0 if lam[wt] > lam[wb] else 1
        while True:
            wt = top[n - 1]
            wb = bot[n - 1]
            if lam[wt] == lam[wb]:
                return accel, rauzy, teich, True
            step_type = 0 if lam[wt] > lam[wb] else 1
            if step_type != cur_type:
                break
            if cur_type == 0:
                winner, loser = wt, wb
            else:
                winner, loser = wb, wt
            lam[winner] -= lam[loser]
            if inverse:
                frame[winner, :] -= frame[loser, :]
            else:
                frame[loser, :] += frame[winner, :]
            if cur_type == 0:
                p = 0
                while bot[p] != winner:
                    p += 1
                i = n - 1
                while i > p + 1:
                    bot[i] = bot[i - 1]
                    i -= 1
                bot[p + 1] = loser
            else:
                p = 0
                while top[p] != winner:
                    p += 1
                i = n - 1
                while i > p + 1:
                    top[i] = top[i - 1]
                    i -= 1
                top[p + 1] = loser
            rauzy += 1
        total = 0.0
        for j in range(n):
            total += lam[j]
        teich += -math.log(total)
        for j in range(n):
            lam[j] /= total
        accel += 1
    return accel, rauzy, teich, False
