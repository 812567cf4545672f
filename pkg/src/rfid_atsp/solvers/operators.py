"""Permutation operators on depot-rooted tours.

Position 0 always holds the depot and is never touched. The neighbourhood
moves (swap and single-city insertion) come with O(1) cost deltas that stay
exact under asymmetric costs.
"""

from __future__ import annotations

from ..core import ValidationError


def _check_parents(parent_a, parent_b):
    if len(parent_a) != len(parent_b):
        raise ValidationError(f"parent length mismatch: {len(parent_a)} vs {len(parent_b)}")
    if parent_a and parent_a[0] != parent_b[0]:
        raise ValidationError("parents must start at the same depot")


def crossover_uniform_order(parent_a, parent_b, source, mask=None) -> list[int]:
    """Uniform-order crossover.

    Positions 1..n-1 selected by ``mask`` keep parent_a's city; the others
    are filled with the remaining cities in parent_b's relative order. When
    ``mask`` is None it is drawn as ``n - 1`` fair coin flips, one
    ``getrandbits`` call, bit ``p - 1`` deciding position ``p``.
    """
    _check_parents(parent_a, parent_b)
    n = len(parent_a)
    if n <= 2:
        return list(parent_a)
    if mask is None:
        bits = source.getrandbits(n - 1)
        mask = [False] + [bool(bits >> (p - 1) & 1) for p in range(1, n)]
    child = list(parent_a)
    kept = {parent_a[p] for p in range(1, n) if mask[p]}
    fill = iter([c for c in parent_b[1:] if c not in kept])
    for p in range(1, n):
        if not mask[p]:
            child[p] = next(fill)
    return child


def crossover_swap(parent_a, parent_b, source, flips=None) -> list[int]:
    """Swap crossover: stochastic alignment of the child towards parent_b.

    Starting from a copy of parent_a, each position p in 1..n-1 is aligned
    with probability 1/2 by swapping parent_b[p] into place. ``flips``
    overrides the coin flips (same bit layout as the uniform-order mask).
    """
    _check_parents(parent_a, parent_b)
    n = len(parent_a)
    child = list(parent_a)
    if n <= 2:
        return child
    if flips is None:
        bits = source.getrandbits(n - 1)
        flips = [False] + [bool(bits >> (p - 1) & 1) for p in range(1, n)]
    where = {c: p for p, c in enumerate(child)}
    for p in range(1, n):
        if not flips[p]:
            continue
        target = parent_b[p]
        q = where[target]
        if q == p:
            continue
        here = child[p]
        child[p], child[q] = target, here
        where[target], where[here] = p, q
    return child


def swap_mutation(order, rng) -> None:
    """Swap two distinct non-depot positions in place."""
    n = len(order)
    if n < 3:
        return
    i = 1 + int(rng.random() * (n - 1))
    j = 1 + int(rng.random() * (n - 2))
    if j >= i:
        j += 1
    order[i], order[j] = order[j], order[i]


def swap_delta(c, order, i, j) -> int:
    """Cost change from exchanging the cities at positions ``i`` and ``j``."""
    if i > j:
        i, j = j, i
    n = len(order)
    x, y = order[i], order[j]
    p = order[i - 1]
    q = order[(j + 1) % n]
    if j == i + 1:
        return c[p][y] + c[y][x] + c[x][q] - c[p][x] - c[x][y] - c[y][q]
    a, b = order[i + 1], order[j - 1]
    return (c[p][y] + c[y][a] + c[b][x] + c[x][q]) - (c[p][x] + c[x][a] + c[b][y] + c[y][q])


def insertion_delta(c, order, i, j) -> int:
    """Cost change from ``order.insert(j, order.pop(i))``."""
    n = len(order)
    x = order[i]
    p = order[i - 1]
    q = order[(i + 1) % n]
    removed = c[p][q] - c[p][x] - c[x][q]
    # neighbours of slot j in the list with x removed
    u = order[j - 1] if j - 1 < i else order[j]
    k = j % (n - 1)
    v = order[k] if k < i else order[k + 1]
    return removed + c[u][x] + c[x][v] - c[u][v]


def apply_insertion(order, i, j) -> None:
    order.insert(j, order.pop(i))


def apply_swap(order, i, j) -> None:
    order[i], order[j] = order[j], order[i]


def random_move(n, rng, move_mix):
    """Draw ``(is_insertion, i, j)`` with i != j in 1..n-1; requires n >= 3."""
    insertion = rng.random() < move_mix
    i = 1 + int(rng.random() * (n - 1))
    j = 1 + int(rng.random() * (n - 2))
    if j >= i:
        j += 1
    return insertion, i, j
