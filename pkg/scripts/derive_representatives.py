#!/usr/bin/env python3
"""Offline search for suspension representatives, one table entry per stratum.

Run from the repository root:

    python3 scripts/derive_representatives.py

For each target stratum this samples irreducible bottom orders, builds a
generic suspension, computes the stratum geometrically, and keeps a handful
of distinct hits. The output is pasted into flatlab.sampling.REPRESENTATIVES.
"""

import random
import sys

sys.path.insert(0, "src")

from flatlab.sampling import (  # noqa: E402
    _probe_stratum,
    _reversal,
    is_irreducible_order,
)
from flatlab.surface import Stratum  # noqa: E402

TARGETS = [
    (0,),
    (2,),
    (1, 1),
    (4,),
    (2, 2),
    (3, 1),
    (6,),
    (2, 1, 1),
    (1, 1, 1, 1),
    (3, 3),
]

PER_STRATUM = 5


def main():
    rng = random.Random(424242)
    found = {t: [] for t in TARGETS}
    # seed with the reversal family, whose strata are known and re-verified
    for n in range(2, 10):
        bot = _reversal(n)
        st = _probe_stratum(bot, rng)
        if st is not None and st.degrees in found:
            found[st.degrees].append(bot)
    sizes = {t: 2 * Stratum(t).genus + len(t) - 1 for t in TARGETS}
    by_size = {}
    for t, n in sizes.items():
        by_size.setdefault(n, []).append(t)
    for n, targets in sorted(by_size.items()):
        budget = 30000
        for _ in range(budget):
            if all(len(found[t]) >= PER_STRATUM for t in targets):
                break
            bot = list(range(n))
            rng.shuffle(bot)
            bot = tuple(bot)
            if not is_irreducible_order(bot):
                continue
            st = _probe_stratum(bot, rng)
            if st is None:
                continue
            key = st.degrees
            if key in found and sizes.get(key) == n:
                if len(found[key]) < PER_STRATUM and bot not in found[key]:
                    found[key].append(bot)
    print("REPRESENTATIVES = {")
    for t in TARGETS:
        reps = found[t]
        print("    %r: [" % (t,))
        for bot in reps:
            print("        %r," % (bot,))
        print("    ],")
    print("}")
    missing = [t for t in TARGETS if not found[t]]
    if missing:
        print("# MISSING:", missing, file=sys.stderr)


if __name__ == "__main__":
    main()
