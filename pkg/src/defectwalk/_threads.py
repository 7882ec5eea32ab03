"""Optional thread-count override for parameter sweeps.

DEFECTWALK_THREADS is the only environment variable the package consults.
Unset or 1 means sequential evaluation; values above 1 enable a thread pool
for embarrassingly parallel grids.  Results are ordered by grid index, so
the outcome is identical either way.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor

ENV_VAR = "DEFECTWALK_THREADS"


def thread_count() -> int:
    raw = os.environ.get(ENV_VAR)
    if raw is None:
        return 1
    try:
        n = int(raw)
    except ValueError:
        return 1
    return max(1, n)


def grid_map(fn, items):
    """Map fn over items, in a pool when the override asks for one."""
    items = list(items)
    n = thread_count()
    if n <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as pool:
        return list(pool.map(fn, items))
