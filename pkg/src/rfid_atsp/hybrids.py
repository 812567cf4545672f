"""Cluster-first route-second heuristic and the GA/SA hybrids built on it."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .core import (
    Budget,
    EvaluationCounter,
    Instance,
    PreconditionError,
    RandomSource,
    SolveReport,
    Stopwatch,
    Tour,
    ValidationError,
    round_half_away,
    tour_cost,
)
from .solvers.baselines import nearest_neighbor_order
from .solvers.ga import GaParams, evolve
from .solvers.operators import apply_insertion, apply_swap, insertion_delta, swap_delta, swap_mutation
from .solvers.sa import SaParams, anneal_chain, calibrate_temperature


@dataclass(frozen=True)
class KMeansParams:
    # None means round(sqrt(n / 2)) clamped to [1, number of points]
    k: Optional[int] = None
    max_iterations: int = 100

    def resolve_k(self, n_points: int, n_cities: Optional[int] = None) -> int:
        if self.k is not None:
            if not 1 <= self.k <= n_points:
                raise ValidationError(f"k must lie in [1, {n_points}], got {self.k}")
            return self.k
        base = n_points if n_cities is None else n_cities
        return min(max(1, round_half_away(math.sqrt(base / 2))), n_points)


@dataclass
class Clustering:
    assignments: list[int]
    centroids: list[tuple[float, float]]
    wcss: float
    # WCSS after every centroid update, in iteration order
    wcss_history: list[float] = field(default_factory=list)
    iterations: int = 0


def _sqdist(p, q) -> float:
    return (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2


def _nearest(points, centroids) -> list[int]:
    out = []
    for p in points:
        best, best_d = 0, _sqdist(p, centroids[0])
        for c in range(1, len(centroids)):
            d = _sqdist(p, centroids[c])
            if d < best_d:
                best, best_d = c, d
        out.append(best)
    return out


def _means(points, assignments, centroids):
    k = len(centroids)
    sx, sy, cnt = [0.0] * k, [0.0] * k, [0] * k
    for (x, y), c in zip(points, assignments):
        sx[c] += x
        sy[c] += y
        cnt[c] += 1
    return [(sx[c] / cnt[c], sy[c] / cnt[c]) if cnt[c] else centroids[c] for c in range(k)]


def _repair_empty(points, assignments, centroids) -> None:
    """Reseed each empty cluster with the point farthest from its own centroid.

    Only points whose cluster has more than one member are eligible, so the
    repair never empties another cluster.
    """
    k = len(centroids)
    sizes = [0] * k
    for c in assignments:
        sizes[c] += 1
    for empty in range(k):
        if sizes[empty]:
            continue
        far, far_d = None, -1.0
        for i, p in enumerate(points):
            c = assignments[i]
            if sizes[c] < 2:
                continue
            d = _sqdist(p, centroids[c])
            if d > far_d:
                far, far_d = i, d
        sizes[assignments[far]] -= 1
        assignments[far] = empty
        sizes[empty] = 1
        centroids[empty] = points[far]


def wcss_of(points, assignments, centroids) -> float:
    return sum(_sqdist(p, centroids[c]) for p, c in zip(points, assignments))


def kmeans(coords, params: KMeansParams, source) -> Clustering:
    """Lloyd's iteration seeded with k distinct points drawn uniformly.

    Assignment uses squared Euclidean distance with ties to the lowest
    cluster id. Stops at an assignment fixpoint or after ``max_iterations``
    centroid updates.
    """
    points = [(float(x), float(y)) for x, y in coords]
    if not points:
        raise ValidationError("kmeans needs at least one point")
    if params.k is not None and params.k > len(points):
        raise ValidationError(f"k={params.k} exceeds the number of points ({len(points)})")
    if params.max_iterations < 1:
        raise ValidationError("max_iterations must be >= 1")
    k = params.resolve_k(len(points))
    centroids = [points[i] for i in source.sample(range(len(points)), k)]
    assignments = _nearest(points, centroids)
    _repair_empty(points, assignments, centroids)
    history = []
    iterations = 0
    for _ in range(params.max_iterations):
        iterations += 1
        centroids = _means(points, assignments, centroids)
        history.append(wcss_of(points, assignments, centroids))
        updated = _nearest(points, centroids)
        _repair_empty(points, updated, centroids)
        if updated == assignments:
            break
        assignments = updated
    centroids = _means(points, assignments, centroids)
    return Clustering(assignments, centroids, wcss_of(points, assignments, centroids), history, iterations)


def local_search(costs, order, cost, counter: EvaluationCounter):
    """First-improvement descent over swap then insertion moves until no
    move improves. Every examined move counts as one evaluation; the search
    ignores the counter's limit.
    """
    n = len(order)
    if n < 3:
        return order, cost
    improved = True
    while improved:
        improved = False
        for i in range(1, n - 1):
            for j in range(i + 1, n):
                counter.used += 1
                d = swap_delta(costs, order, i, j)
                if d < 0:
                    apply_swap(order, i, j)
                    cost += d
                    improved = True
        for i in range(1, n):
            for j in range(1, n):
                if i == j:
                    continue
                counter.used += 1
                d = insertion_delta(costs, order, i, j)
                if d < 0:
                    apply_insertion(order, i, j)
                    cost += d
                    improved = True
    return order, cost


def _require_coords(instance: Instance) -> None:
    if instance.coords is None:
        raise PreconditionError("cluster heuristic requires coordinates")


def cluster_tour(instance: Instance, params: KMeansParams, source, counter: EvaluationCounter):
    """Build and polish the cluster-first route-second tour.

    Returns ``(order, cost, clustering)``; ``clustering`` is None when there
    are fewer than two cities.
    """
    _require_coords(instance)
    n, depot = instance.n, instance.depot
    costs = instance.matrix()
    if n == 1:
        counter.used += 1
        return [depot], 0, None
    cities = [c for c in range(n) if c != depot]
    km = KMeansParams(params.resolve_k(len(cities), n), params.max_iterations)
    clustering = kmeans([instance.coords[c] for c in cities], km, source.derive_child("kmeans"))

    dx, dy = instance.coords[depot]

    def angle(cid):
        cx, cy = clustering.centroids[cid]
        a = math.atan2(cy - dy, cx - dx)
        return a + 2 * math.pi if a < 0 else a

    groups = [[] for _ in clustering.centroids]
    for city, cid in zip(cities, clustering.assignments):
        groups[cid].append(city)
    order = [depot]
    for cid in sorted(range(len(groups)), key=lambda c: (angle(c), c)):
        order.extend(nearest_neighbor_order(costs, order[-1], groups[cid]))
    cost = tour_cost(costs, order)
    counter.used += 1
    order, cost = local_search(costs, order, cost, counter)
    return order, cost, clustering


def solve_cluster_heuristic(instance: Instance, params: KMeansParams, source: RandomSource) -> SolveReport:
    """K-means cluster heuristic: cluster, sweep clusters by centroid angle
    around the depot, route each cluster greedily, then descend locally.
    """
    watch = Stopwatch()
    counter = EvaluationCounter()
    order, cost, _ = cluster_tour(instance, params, source, counter)
    return SolveReport("kmeans", instance.name, source.seed_value, counter.used, watch.millis(),
                       Tour(tuple(order), cost))


class _MemeticRefiner:
    """Runs one SA epoch on the best ``count`` offspring of each generation.

    The temperature is calibrated on first use and cooled once per
    generation, so it is shared across the whole run.
    """

    def __init__(self, costs, sa: SaParams, count: int, counter, rng, n: int):
        self.costs = costs
        self.sa = sa
        self.count = count
        self.counter = counter
        self.rng = rng
        self.steps = sa.epoch(n)
        self.temperature = None

    def __call__(self, kids, kid_fit):
        ranked = sorted(range(len(kids)), key=lambda i: (kid_fit[i], i))[: self.count]
        if self.temperature is None:
            self.temperature = calibrate_temperature(self.costs, kids[ranked[0]], self.sa, self.counter, self.rng)
        for i in ranked:
            if self.counter.exhausted:
                break
            _, best_order, best_cost = anneal_chain(
                self.costs, kids[i], kid_fit[i], self.temperature, self.steps,
                self.counter, self.rng, self.sa.move_mix,
            )
            kids[i], kid_fit[i] = best_order, best_cost
        self.temperature *= self.sa.cooling_ratio


def _memetic(instance, ga: GaParams, sa: SaParams, counter, rng, initial_population=None):
    refiner = None
    if ga.elite_count > 0:
        refiner = _MemeticRefiner(instance.matrix(), sa, ga.elite_count, counter, rng, instance.n)
    return evolve(instance, ga, counter, rng, initial_population, refiner)


def _check(ga: GaParams, sa: Optional[SaParams], budget: Budget):
    ga.validate()
    if sa is not None:
        sa.validate()
    if ga.population_size > budget.max_evaluations:
        raise ValidationError("population_size exceeds the evaluation budget")


def solve_ga_sa(instance: Instance, ga: GaParams, sa: SaParams, budget: Budget, source: RandomSource) -> SolveReport:
    _check(ga, sa, budget)
    watch = Stopwatch()
    counter = budget.counter()
    order, cost, history = _memetic(instance, ga, sa, counter, source)
    return SolveReport("ga_sa", instance.name, source.seed_value, counter.used, watch.millis(),
                       Tour(tuple(order), cost), history)


def seeded_population(seed_order, size: int, rng) -> list[list[int]]:
    """The seed tour plus ``size - 1`` copies perturbed by 1-3 random swaps."""
    population = [list(seed_order)]
    for _ in range(size - 1):
        child = list(seed_order)
        for _ in range(rng.randint(1, 3)):
            swap_mutation(child, rng)
        population.append(child)
    return population


def _cluster_seeded(instance, km, ga, sa, budget, source, algorithm):
    _require_coords(instance)
    _check(ga, sa, budget)
    watch = Stopwatch()
    counter = budget.counter()
    seed_order, seed_cost, _ = cluster_tour(instance, km, source, counter)
    population = seeded_population(seed_order, ga.population_size, source)
    if sa is None:
        order, cost, history = evolve(instance, ga, counter, source, population)
    else:
        order, cost, history = _memetic(instance, ga, sa, counter, source, population)
    assert cost <= seed_cost
    return SolveReport(algorithm, instance.name, source.seed_value, counter.used, watch.millis(),
                       Tour(tuple(order), cost), history)


def solve_k_ga(instance: Instance, km: KMeansParams, ga: GaParams, budget: Budget,
               source: RandomSource) -> SolveReport:
    """GA whose initial population is seeded from the cluster heuristic tour."""
    return _cluster_seeded(instance, km, ga, None, budget, source, "k_ga")


def solve_k_ga_sa(instance: Instance, km: KMeansParams, ga: GaParams, sa: SaParams, budget: Budget,
                  source: RandomSource) -> SolveReport:
    return _cluster_seeded(instance, km, ga, sa, budget, source, "k_ga_sa")
