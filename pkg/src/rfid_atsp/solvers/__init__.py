"""Exact oracle, GA, SA and simple baselines."""

from .baselines import nearest_neighbor_order, solve_nearest_neighbor, solve_random_walk
from .exact import MAX_EXACT_CITIES, held_karp, solve_exact
from .ga import GaParams, evolve, solve_ga
from .operators import crossover_swap, crossover_uniform_order
from .sa import SaParams, anneal, anneal_chain, calibrate_temperature, solve_sa

__all__ = [
    "GaParams",
    "MAX_EXACT_CITIES",
    "SaParams",
    "anneal",
    "anneal_chain",
    "calibrate_temperature",
    "crossover_swap",
    "crossover_uniform_order",
    "evolve",
    "held_karp",
    "nearest_neighbor_order",
    "solve_exact",
    "solve_ga",
    "solve_nearest_neighbor",
    "solve_random_walk",
    "solve_sa",
]
