"""Generational GA with tournament selection, elitism and a dual crossover."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

from ..core import (
    Budget,
    EvaluationCounter,
    Instance,
    RandomSource,
    SolveReport,
    Stopwatch,
    Tour,
    ValidationError,
    random_order,
    tour_cost,
)
from .operators import crossover_swap, crossover_uniform_order, swap_mutation


@dataclass(frozen=True)
class GaParams:
    population_size: int = 100
    tournament_size: int = 3
    elite_count: int = 2
    crossover_rate: float = 0.9
    mutation_rate: float = 0.8
    # probability of uniform-order crossover, otherwise swap crossover
    operator_mix: float = 0.5

    def validate(self) -> None:
        if self.population_size < 2:
            raise ValidationError("population_size must be >= 2")
        if self.tournament_size < 1:
            raise ValidationError("tournament_size must be >= 1")
        if not 0 <= self.elite_count < self.population_size:
            raise ValidationError("elite_count must lie in [0, population_size)")
        for name in ("crossover_rate", "mutation_rate", "operator_mix"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"{name} must lie in [0, 1], got {value}")


# refine(offspring_orders, offspring_costs) may rewrite both lists in place
Refiner = Callable[[list, list], None]


def evolve(instance: Instance, params: GaParams, counter: EvaluationCounter, rng,
           initial_population: Optional[list] = None, refine: Optional[Refiner] = None):
    """Run the generational loop until ``counter`` is exhausted.

    Returns ``(best_order, best_cost, history)`` where ``history`` holds the
    best cost present in the population after each generation (the initial
    population included), which elitism keeps non-increasing.
    """
    params.validate()
    costs = instance.matrix()
    n = instance.n
    size = params.population_size
    if initial_population is None:
        initial_population = [random_order(n, instance.depot, rng) for _ in range(size)]

    pop, fit = [], []
    for order in initial_population:
        if counter.exhausted and pop:
            break
        pop.append(list(order))
        fit.append(tour_cost(costs, order))
        counter.used += 1

    best_idx = min(range(len(pop)), key=lambda i: (fit[i], i))
    best_order, best_cost = list(pop[best_idx]), fit[best_idx]
    history = [best_cost]
    if n <= 2:
        return best_order, best_cost, history

    rand = rng.random
    k = params.tournament_size
    elite = params.elite_count
    cx_rate, mut_rate, mix = params.crossover_rate, params.mutation_rate, params.operator_mix
    limit = counter.limit

    def tournament(m):
        winner = int(rand() * m)
        for _ in range(k - 1):
            other = int(rand() * m)
            if fit[other] < fit[winner] or (fit[other] == fit[winner] and other < winner):
                winner = other
        return winner

    while not counter.exhausted:
        m = len(pop)
        ranked = sorted(range(m), key=lambda i: (fit[i], i))
        next_pop = [pop[i] for i in ranked[:elite]]
        next_fit = [fit[i] for i in ranked[:elite]]
        kids, kid_fit = [], []
        while len(next_pop) + len(kids) < size and counter.used < limit:
            a = pop[tournament(m)]
            b = pop[tournament(m)]
            if rand() < cx_rate:
                if rand() < mix:
                    child = crossover_uniform_order(a, b, rng)
                else:
                    child = crossover_swap(a, b, rng)
            else:
                child = list(a)
            if rand() < mut_rate:
                swap_mutation(child, rng)
            kids.append(child)
            kid_fit.append(tour_cost(costs, child))
            counter.used += 1
        if refine is not None and kids:
            refine(kids, kid_fit)
        pop = next_pop + kids
        fit = next_fit + kid_fit
        gen_best = min(range(len(pop)), key=lambda i: (fit[i], i))
        if fit[gen_best] < best_cost:
            best_order, best_cost = list(pop[gen_best]), fit[gen_best]
        history.append(fit[gen_best])
    return best_order, best_cost, history


def solve_ga(instance: Instance, params: GaParams, budget: Budget, source: RandomSource) -> SolveReport:
    params.validate()
    if params.population_size > budget.max_evaluations:
        raise ValidationError("population_size exceeds the evaluation budget")
    watch = Stopwatch()
    counter = budget.counter()
    order, cost, history = evolve(instance, params, counter, source)
    return SolveReport("ga", instance.name, source.seed_value, counter.used, watch.millis(),
                       Tour(tuple(order), cost), history)
