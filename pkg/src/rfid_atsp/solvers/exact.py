"""Held-Karp dynamic program over subsets of non-depot cities."""

from __future__ import annotations

import numpy as np

from ..core import Budget, Instance, PreconditionError, SolveReport, Stopwatch, Tour, tour_cost

MAX_EXACT_CITIES = 18
_INF = np.int64(2**60)


def held_karp(costs, depot: int = 0) -> tuple[int, list[int]]:
    """Optimal depot-rooted tour for a square integer cost matrix.

    ``dp[mask, j]`` is the cheapest path leaving the depot, visiting exactly
    the non-depot cities in ``mask`` and ending at ``j``. Layers are filled by
    subset size, one vectorised min per (layer, last city). Ties resolve to
    the lowest city index.
    """
    C = np.asarray(costs, dtype=np.int64)
    n = C.shape[0]
    if n == 1:
        return 0, [depot]
    others = [c for c in range(n) if c != depot]
    m = len(others)
    sub = C[np.ix_(others, others)]
    full = 1 << m
    dp = np.full((full, m), _INF, dtype=np.int64)
    parent = np.full((full, m), -1, dtype=np.int8)
    for j in range(m):
        dp[1 << j, j] = C[depot, others[j]]

    masks = np.arange(full, dtype=np.int64)
    popcount = np.zeros(full, dtype=np.int64)
    for b in range(m):
        popcount += (masks >> b) & 1
    for size in range(2, m + 1):
        layer = masks[popcount == size]
        for j in range(m):
            ending = layer[(layer >> j) & 1 == 1]
            prev = ending ^ (1 << j)
            cand = dp[prev] + sub[:, j]
            best = cand.argmin(axis=1)
            dp[ending, j] = cand[np.arange(len(ending)), best]
            parent[ending, j] = best

    closing = dp[full - 1] + C[others, depot]
    last = int(closing.argmin())
    total = int(closing[last])
    path = []
    mask = full - 1
    while last >= 0:
        path.append(others[last])
        prev_last = int(parent[mask, last])
        mask ^= 1 << last
        last = prev_last
    order = [depot] + path[::-1]
    return total, order


def solve_exact(instance: Instance, budget: Budget | None = None) -> SolveReport:
    """Provably optimal tour; deterministic and seed-independent.

    The budget is accepted for interface symmetry and ignored.
    """
    if instance.n > MAX_EXACT_CITIES:
        raise PreconditionError(
            f"instance too large for exact solver: n={instance.n} > {MAX_EXACT_CITIES}"
        )
    watch = Stopwatch()
    total, order = held_karp(instance.costs, instance.depot)
    assert tour_cost(instance.costs, order) == total
    return SolveReport("exact", instance.name, None, 1, watch.millis(), Tour(tuple(order), total))
