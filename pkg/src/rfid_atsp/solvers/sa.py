"""Simulated annealing over swap and insertion moves."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from ..core import (
    Budget,
    EvaluationCounter,
    Instance,
    RandomSource,
    SolveReport,
    Stopwatch,
    Tour,
    ValidationError,
    check_permutation,
    random_order,
    tour_cost,
)
from .operators import apply_insertion, apply_swap, insertion_delta, random_move, swap_delta

CALIBRATION_SAMPLES = 100


@dataclass(frozen=True)
class SaParams:
    initial_acceptance: float = 0.8
    cooling_ratio: float = 0.95
    # proposals per temperature; None means 100 * n
    epoch_length: Optional[int] = None
    min_temperature_ratio: float = 1e-4
    # probability of an insertion move, otherwise a swap move
    move_mix: float = 0.5

    def validate(self) -> None:
        if not 0.0 < self.cooling_ratio < 1.0:
            raise ValidationError("cooling_ratio must lie in (0, 1)")
        if not 0.0 < self.initial_acceptance < 1.0:
            raise ValidationError("initial_acceptance must lie in (0, 1)")
        if self.epoch_length is not None and self.epoch_length < 1:
            raise ValidationError("epoch_length must be >= 1")
        if not 0.0 <= self.move_mix <= 1.0:
            raise ValidationError("move_mix must lie in [0, 1]")
        if self.min_temperature_ratio < 0:
            raise ValidationError("min_temperature_ratio must be >= 0")

    def epoch(self, n: int) -> int:
        return self.epoch_length if self.epoch_length is not None else 100 * n


def calibrate_temperature(costs, order, params: SaParams, counter: EvaluationCounter, rng) -> float:
    """Temperature at which the mean sampled uphill move is accepted with
    probability ``initial_acceptance``.

    Each sampled neighbour costs one evaluation. Falls back to 1.0 when no
    uphill move is seen.
    """
    n = len(order)
    uphill = []
    for _ in range(CALIBRATION_SAMPLES):
        if counter.exhausted:
            break
        insertion, i, j = random_move(n, rng, params.move_mix)
        d = insertion_delta(costs, order, i, j) if insertion else swap_delta(costs, order, i, j)
        counter.used += 1
        if d > 0:
            uphill.append(d)
    if not uphill:
        return 1.0
    return (sum(uphill) / len(uphill)) / -math.log(params.initial_acceptance)


def anneal_chain(costs, order, cost, temperature, steps, counter, rng, move_mix, accepted=None):
    """Metropolis chain at fixed ``temperature``, mutating ``order`` in place.

    Stops after ``steps`` proposals or when the counter's evaluation limit is
    hit. With ``temperature <= 0`` only non-worsening moves are accepted.
    When ``accepted`` is a list, every accepted delta is appended to it.
    Returns ``(cost, best_order, best_cost)``.
    """
    n = len(order)
    best_order, best_cost = list(order), cost
    if n < 3:
        return cost, best_order, best_cost
    rand = rng.random
    limit = counter.limit if counter.limit is not None else float("inf")
    used = counter.used
    m1, m2 = n - 1, n - 2
    for _ in range(steps):
        if used >= limit:
            break
        used += 1
        insertion = rand() < move_mix
        i = 1 + int(rand() * m1)
        j = 1 + int(rand() * m2)
        if j >= i:
            j += 1
        d = insertion_delta(costs, order, i, j) if insertion else swap_delta(costs, order, i, j)
        if d <= 0 or (temperature > 0 and rand() < math.exp(-d / temperature)):
            if insertion:
                apply_insertion(order, i, j)
            else:
                apply_swap(order, i, j)
            cost += d
            if accepted is not None:
                accepted.append(d)
            if cost < best_cost:
                best_cost = cost
                best_order = list(order)
    counter.used = used
    return cost, best_order, best_cost


def anneal(instance: Instance, params: SaParams, counter: EvaluationCounter, rng, initial=None):
    """Full annealing run; returns ``(best_order, best_cost, history)``.

    ``history`` records best-so-far cost after each epoch.
    """
    params.validate()
    costs = instance.matrix()
    n = instance.n
    if initial is None:
        order = random_order(n, instance.depot, rng)
    else:
        order = list(initial.order if isinstance(initial, Tour) else initial)
        check_permutation(order, n)
    cost = tour_cost(costs, order)
    counter.used += 1
    best_order, best_cost = list(order), cost
    history = [best_cost]
    if n < 3:
        return best_order, best_cost, history

    t0 = calibrate_temperature(costs, order, params, counter, rng)
    t_min = t0 * params.min_temperature_ratio
    temperature = t0
    steps = params.epoch(n)
    while not counter.exhausted and temperature >= t_min:
        cost, chain_best, chain_cost = anneal_chain(
            costs, order, cost, temperature, steps, counter, rng, params.move_mix
        )
        if chain_cost < best_cost:
            best_order, best_cost = chain_best, chain_cost
        history.append(best_cost)
        temperature *= params.cooling_ratio
    return best_order, best_cost, history


def solve_sa(instance: Instance, params: SaParams, budget: Budget, source: RandomSource,
             initial: Optional[Tour] = None) -> SolveReport:
    params.validate()
    watch = Stopwatch()
    counter = budget.counter()
    order, cost, history = anneal(instance, params, counter, source, initial)
    return SolveReport("sa", instance.name, source.seed_value, counter.used, watch.millis(),
                       Tour(tuple(order), cost), history)
