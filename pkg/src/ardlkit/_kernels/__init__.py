"""Backend dispatch for the Monte Carlo hot loops.

The ``ARDLKIT_BACKEND`` environment variable selects the implementation:

* ``auto`` (default): numba if it imports, else the pure-NumPy fallback
* ``numba``: require the compiled kernels
* ``numpy``: force the pure-NumPy fallback

Both backends share signatures and arithmetic; ``benchmarks/bench_kernels.py``
compares them.
"""

from __future__ import annotations

import os

from ..errors import ConfigError

CASE_NONE = 0
CASE_CONST = 1
CASE_CONST_TREND = 2

_requested = os.environ.get("ARDLKIT_BACKEND", "auto").strip().lower()
if _requested not in ("auto", "numba", "numpy"):
    raise ConfigError(
        f"ARDLKIT_BACKEND must be 'auto', 'numba', or 'numpy', got {_requested!r}"
    )

if _requested == "numpy":
    from . import numpy_backend as _impl

    _name = "numpy"
else:
    try:
        from . import numba_backend as _impl

        _name = "numba"
    except Exception:
        if _requested == "numba":
            raise
        from . import numpy_backend as _impl

        _name = "numpy"

df_stats = _impl.df_stats
bounds_fstats = _impl.bounds_fstats


def active_backend() -> str:
    """Name of the kernel backend selected at import time."""
    return _name
