import itertools
import random

import pytest

from rfid_atsp.core import Instance, tour_cost
from rfid_atsp.instance_io import GeneratorConfig, generate_instance

TRIANGLE = [[0, 1, 5], [5, 0, 1], [1, 5, 0]]


def brute_force(instance):
    """Cheapest depot-rooted tour by enumerating all (n-1)! orders."""
    depot = instance.depot
    rest = [c for c in range(instance.n) if c != depot]
    best = None
    for perm in itertools.permutations(rest):
        order = (depot,) + perm
        cost = tour_cost(instance.costs, order)
        if best is None or cost < best[0]:
            best = (cost, order)
    return best


def random_matrix_instance(n, seed, high=100):
    rng = random.Random(seed)
    costs = [[0 if i == j else rng.randint(0, high) for j in range(n)] for i in range(n)]
    return Instance.build(f"m{n}_{seed}", costs)


def geo_instance(n, seed, alpha=0.3):
    return generate_instance(GeneratorConfig(n=n, seed=seed, asymmetry_alpha=alpha))


def is_tour(order, n, depot=0):
    return order[0] == depot and sorted(order) == list(range(n))


@pytest.fixture
def triangle():
    return Instance.build("tri", TRIANGLE)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
