"""Constructive and sampling baselines."""

from __future__ import annotations

from ..core import Budget, Instance, RandomSource, SolveReport, Stopwatch, Tour, tour_cost


def nearest_neighbor_order(costs, start: int, cities) -> list[int]:
    """Greedy path from ``start`` through ``cities`` (which excludes ``start``).

    Always moves to the cheapest unvisited city, ties to the lowest index.
    """
    path = []
    remaining = sorted(cities)
    current = start
    while remaining:
        row = costs[current]
        nxt = min(remaining, key=lambda c: (row[c], c))
        remaining.remove(nxt)
        path.append(nxt)
        current = nxt
    return path


def solve_nearest_neighbor(instance: Instance) -> SolveReport:
    watch = Stopwatch()
    depot = instance.depot
    order = [depot] + nearest_neighbor_order(
        instance.costs, depot, [c for c in range(instance.n) if c != depot]
    )
    cost = tour_cost(instance.costs, order)
    return SolveReport("nn", instance.name, None, 1, watch.millis(), Tour(tuple(order), cost))


def solve_random_walk(instance: Instance, budget: Budget, source: RandomSource) -> SolveReport:
    """Best of uniformly sampled depot-rooted permutations, one evaluation each."""
    watch = Stopwatch()
    counter = budget.counter()
    costs = instance.matrix()
    rest = [c for c in range(instance.n) if c != instance.depot]
    best_order, best_cost = None, None
    history = []
    while not counter.exhausted:
        source.shuffle(rest)
        order = [instance.depot] + rest
        cost = tour_cost(costs, order)
        counter.used += 1
        if best_cost is None or cost < best_cost:
            best_order, best_cost = order, cost
            history.append(cost)
    return SolveReport(
        "random_walk", instance.name, source.seed_value, counter.used, watch.millis(),
        Tour(tuple(best_order), best_cost), history,
    )
