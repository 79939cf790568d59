"""Kernel selection: compiled extension when available, pure Python otherwise.

Set FLATLAB_FORCE_PURE=1 to ignore the extension (used by the equivalence
tests and the benchmark).
"""

import os

from . import pykernels

_impl = pykernels
HAVE_EXTENSION = False

if os.environ.get("FLATLAB_FORCE_PURE") != "1":
    try:
        from . import _speedups as _ext

        _impl = _ext
        HAVE_EXTENSION = True
    except ImportError:
        pass

iet_orbit_visits = _impl.iet_orbit_visits
zorich_chunk = _impl.zorich_chunk


def backend_name() -> str:
    return "cython" if HAVE_EXTENSION else "pure-python"
