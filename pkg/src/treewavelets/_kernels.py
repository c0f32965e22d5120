"""Random-walk inner loops.

Compiled with numba when it is importable; otherwise the pure-Python twins
below are used. Both paths seed an MT19937 stream per call, so repeated calls
with the same seed reproduce the same walk within a given environment.
"""

from __future__ import annotations

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAVE_NUMBA = False


def _aldous_broder_py(indptr: np.ndarray, indices: np.ndarray, n: int, seed: int) -> np.ndarray:
    rand = np.random.RandomState(seed).random_sample
    visited = np.zeros(n, dtype=np.bool_)
    parent = np.full(n, -1, dtype=np.int64)
    cur = 0
    visited[0] = True
    count = 1
    while count < n:
        lo = indptr[cur]
        deg = indptr[cur + 1] - lo
        nxt = indices[lo + int(rand() * deg)]
        if not visited[nxt]:
            visited[nxt] = True
            parent[nxt] = cur
            count += 1
        cur = nxt
    return parent


def _hitting_steps_py(
    indptr: np.ndarray, indices: np.ndarray, start: int, target: int, seed: int, max_steps: int
) -> int:
    rand = np.random.RandomState(seed).random_sample
    cur = start
    steps = 0
    while cur != target:
        if steps >= max_steps:
            return -1
        lo = indptr[cur]
        deg = indptr[cur + 1] - lo
        cur = indices[lo + int(rand() * deg)]
        steps += 1
    return steps


if HAVE_NUMBA:

    @njit(cache=True)
    def aldous_broder_parents(indptr, indices, n, seed):  # pragma: no cover - jitted
        np.random.seed(seed)
        visited = np.zeros(n, dtype=np.bool_)
        parent = np.full(n, -1, dtype=np.int64)
        cur = 0
        visited[0] = True
        count = 1
        while count < n:
            lo = indptr[cur]
            deg = indptr[cur + 1] - lo
            nxt = indices[lo + int(np.random.random() * deg)]
            if not visited[nxt]:
                visited[nxt] = True
                parent[nxt] = cur
                count += 1
            cur = nxt
        return parent

    @njit(cache=True)
    def hitting_steps(indptr, indices, start, target, seed, max_steps):  # pragma: no cover
        np.random.seed(seed)
        cur = start
        steps = 0
        while cur != target:
            if steps >= max_steps:
                return -1
            lo = indptr[cur]
            deg = indptr[cur + 1] - lo
            cur = indices[lo + int(np.random.random() * deg)]
            steps += 1
        return steps

else:  # pragma: no cover - exercised only without numba
    aldous_broder_parents = _aldous_broder_py
    hitting_steps = _hitting_steps_py
