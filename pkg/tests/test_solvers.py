import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfid_atsp.core import (
    Budget,
    EvaluationCounter,
    Instance,
    PreconditionError,
    RandomSource,
    Tour,
    ValidationError,
    evaluate_tour,
    tour_cost,
)
from rfid_atsp.solvers import (
    GaParams,
    SaParams,
    anneal_chain,
    crossover_swap,
    crossover_uniform_order,
    solve_exact,
    solve_ga,
    solve_nearest_neighbor,
    solve_random_walk,
    solve_sa,
)
from rfid_atsp.solvers.operators import (
    apply_insertion,
    apply_swap,
    insertion_delta,
    swap_delta,
    swap_mutation,
)

from .conftest import brute_force, geo_instance, is_tour, random_matrix_instance

PAIR = Instance.build("pair", [[0, 7], [3, 0]])


# ---- exact -------------------------------------------------------------------

def test_exact_single_city():
    r = solve_exact(Instance.build("one", [[0]]))
    assert r.best.order == (0,) and r.cost == 0


def test_exact_triangle(triangle):
    r = solve_exact(triangle)
    assert r.cost == 3 and r.best.order == (0, 1, 2)


@pytest.mark.parametrize("seed", range(40))
def test_exact_matches_enumeration(seed):
    n = 2 + seed % 8
    inst = random_matrix_instance(n, seed) if seed % 2 else geo_instance(n, seed)
    r = solve_exact(inst)
    assert r.cost == brute_force(inst)[0]
    assert evaluate_tour(inst, r.best.order) == r.cost


def test_exact_respects_depot():
    inst = Instance.build("d", [[0, 1, 9, 9], [9, 0, 1, 9], [9, 9, 0, 1], [1, 9, 9, 0]], depot=2)
    r = solve_exact(inst)
    assert r.best.order == (2, 3, 0, 1) and r.cost == 4


def test_exact_size_cap():
    with pytest.raises(PreconditionError, match="instance too large for exact solver"):
        solve_exact(geo_instance(19, 1))


# ---- nearest neighbour ---------------------------------------------------------

def test_nn_pair():
    assert solve_nearest_neighbor(PAIR).best.order == (0, 1)


def test_nn_triangle(triangle):
    r = solve_nearest_neighbor(triangle)
    assert r.best.order == (0, 1, 2) and r.cost == 3


def test_nn_tie_goes_to_lowest_index():
    inst = Instance.build("tie", [[0, 4, 4], [1, 0, 1], [1, 1, 0]])
    assert solve_nearest_neighbor(inst).best.order == (0, 1, 2)


# ---- random walk ---------------------------------------------------------------

def test_random_walk_pair():
    assert solve_random_walk(PAIR, Budget(50), RandomSource(1)).best.order == (0, 1)


def test_random_walk_single_evaluation():
    r = solve_random_walk(geo_instance(6, 1), Budget(1), RandomSource(1))
    assert r.evaluations_used == 1


@pytest.mark.parametrize("seed", range(5))
def test_random_walk_bounded_by_optimum(seed):
    inst = geo_instance(6, seed)
    r = solve_random_walk(inst, Budget(10_000), RandomSource(seed))
    opt = solve_exact(inst).cost
    assert r.cost >= opt
    # 10k uniform draws over 120 tours essentially always hit the optimum
    assert r.cost == opt


# ---- crossover -----------------------------------------------------------------

def test_uox_mask_all_ones_and_zeros():
    a, b = [0, 1, 2, 3, 4], [0, 4, 2, 1, 3]
    assert crossover_uniform_order(a, b, None, mask=[False] + [True] * 4) == a
    assert crossover_uniform_order(a, b, None, mask=[False] * 5) == b


def test_uox_hand_trace():
    child = crossover_uniform_order([0, 1, 2, 3], [0, 3, 2, 1], None, mask=[False, True, False, False])
    assert child == [0, 1, 3, 2]


def test_swap_crossover_identical_parents():
    a = [0, 3, 1, 2, 4]
    for seed in range(20):
        assert crossover_swap(a, list(a), RandomSource(seed)) == a


def test_swap_crossover_no_flips():
    assert crossover_swap([0, 1, 2, 3], [0, 3, 2, 1], None, flips=[False] * 4) == [0, 1, 2, 3]


def test_swap_crossover_hand_trace():
    child = crossover_swap([0, 1, 2, 3], [0, 2, 1, 3], None, flips=[False, True, False, False])
    assert child == [0, 2, 1, 3]


def test_crossover_all_flips_reproduces_parent_b():
    a, b = [0, 5, 4, 3, 2, 1], [0, 2, 4, 1, 5, 3]
    assert crossover_swap(a, b, None, flips=[False] + [True] * 5) == b


def test_crossover_length_mismatch():
    with pytest.raises(ValidationError):
        crossover_uniform_order([0, 1, 2], [0, 1], RandomSource(1))
    with pytest.raises(ValidationError):
        crossover_swap([0, 1, 2], [0, 1], RandomSource(1))


def test_crossovers_yield_permutations_10000_pairs():
    rng = RandomSource(2024)
    for _ in range(10_000):
        n = rng.randint(4, 12)
        a = [0] + rng.sample(range(1, n), n - 1)
        b = [0] + rng.sample(range(1, n), n - 1)
        assert is_tour(crossover_uniform_order(a, b, rng), n)
        assert is_tour(crossover_swap(a, b, rng), n)


# ---- move deltas (full recomputation is the oracle) ----------------------------

@settings(max_examples=300, deadline=None)
@given(st.integers(3, 10), st.integers(0, 10**6), st.data())
def test_move_deltas_match_recomputation(n, seed, data):
    inst = random_matrix_instance(n, seed)
    costs = inst.matrix()
    order = [0] + random.Random(seed).sample(range(1, n), n - 1)
    i = data.draw(st.integers(1, n - 1))
    j = data.draw(st.integers(1, n - 1).filter(lambda v: v != i))
    before = tour_cost(costs, order)

    swapped = list(order)
    apply_swap(swapped, i, j)
    assert swap_delta(costs, order, i, j) == tour_cost(costs, swapped) - before

    moved = list(order)
    apply_insertion(moved, i, j)
    assert is_tour(moved, n)
    assert insertion_delta(costs, order, i, j) == tour_cost(costs, moved) - before


def test_swap_mutation_keeps_depot():
    rng = RandomSource(3)
    for _ in range(500):
        order = [0, 1, 2, 3, 4]
        swap_mutation(order, rng)
        assert is_tour(order, 5) and order != [0, 1, 2, 3, 4]


# ---- GA ------------------------------------------------------------------------

def test_ga_pair():
    r = solve_ga(PAIR, GaParams(), Budget(500), RandomSource(1))
    assert r.best.order == (0, 1) and r.cost == 10


@pytest.mark.parametrize("bad", [
    GaParams(population_size=1), GaParams(elite_count=100), GaParams(mutation_rate=1.5),
    GaParams(tournament_size=0), GaParams(operator_mix=-0.1),
])
def test_ga_invalid_params(bad):
    with pytest.raises(ValidationError):
        solve_ga(geo_instance(5, 1), bad, Budget(1000), RandomSource(1))


def test_ga_population_larger_than_budget():
    with pytest.raises(ValidationError):
        solve_ga(geo_instance(5, 1), GaParams(population_size=50), Budget(10), RandomSource(1))


@pytest.mark.parametrize("elite", [1, 2, 29])
def test_ga_generation_best_non_increasing(elite):
    params = GaParams(population_size=30, elite_count=elite)
    r = solve_ga(geo_instance(11, 5), params, Budget(6000), RandomSource(9))
    assert len(r.history) > 10
    assert all(b <= a for a, b in zip(r.history, r.history[1:]))
    assert r.cost == min(r.history)


def test_ga_budget_and_determinism():
    inst = geo_instance(10, 2)
    a = solve_ga(inst, GaParams(), Budget(3333), RandomSource(4))
    b = solve_ga(inst, GaParams(), Budget(3333), RandomSource(4))
    assert a.evaluations_used <= 3333 + GaParams().population_size
    assert a.to_dict(include_timing=False) == b.to_dict(include_timing=False)


# ---- SA ------------------------------------------------------------------------

def test_sa_pair():
    assert solve_sa(PAIR, SaParams(), Budget(100), RandomSource(1)).best.order == (0, 1)


@pytest.mark.parametrize("bad", [
    SaParams(cooling_ratio=1.0), SaParams(initial_acceptance=0.0), SaParams(epoch_length=0),
])
def test_sa_invalid_params(bad):
    with pytest.raises(ValidationError):
        solve_sa(geo_instance(5, 1), bad, Budget(100), RandomSource(1))


@pytest.mark.parametrize("seed", range(5))
def test_sa_never_worse_than_initial(seed):
    inst = geo_instance(12, seed)
    start = solve_nearest_neighbor(inst).best
    r = solve_sa(inst, SaParams(), Budget(3000), RandomSource(seed), initial=start)
    assert r.cost <= start.cost


def test_sa_best_ever_non_increasing_and_budget():
    r = solve_sa(geo_instance(12, 3), SaParams(epoch_length=50), Budget(5000), RandomSource(2))
    assert all(b <= a for a, b in zip(r.history, r.history[1:]))
    assert r.evaluations_used <= 5000


def test_sa_stops_at_min_temperature():
    params = SaParams(epoch_length=10, cooling_ratio=0.5, min_temperature_ratio=0.01)
    r = solve_sa(geo_instance(8, 1), params, Budget(10**6), RandomSource(1))
    # 1 initial + 100 calibration + 7 epochs of 10 (T0 .. T0/64)
    assert r.evaluations_used == 1 + 100 + 7 * 10


def test_zero_temperature_is_strict_descent():
    inst = geo_instance(12, 8)
    costs = inst.matrix()
    order = [0] + random.Random(1).sample(range(1, 12), 11)
    start = tour_cost(costs, order)
    accepted = []
    cost, _, best = anneal_chain(costs, order, start, 0.0, 3000, EvaluationCounter(), RandomSource(5), 0.5,
                                 accepted)
    assert accepted and all(d <= 0 for d in accepted)
    assert cost == tour_cost(costs, order) == best <= start


def test_hot_chain_accepts_uphill():
    inst = geo_instance(12, 8)
    costs = inst.matrix()
    order = [0] + list(range(1, 12))
    accepted = []
    anneal_chain(costs, order, tour_cost(costs, order), 1e6, 500, EvaluationCounter(), RandomSource(5), 0.5,
                 accepted)
    assert any(d > 0 for d in accepted)


def test_sa_initial_tour_validated():
    with pytest.raises(ValidationError):
        solve_sa(geo_instance(5, 1), SaParams(), Budget(100), RandomSource(1), initial=Tour((0, 1, 1, 2, 3), 0))


def test_sa_deterministic():
    inst = geo_instance(9, 4)
    a = solve_sa(inst, SaParams(), Budget(4000), RandomSource(8))
    b = solve_sa(inst, SaParams(), Budget(4000), RandomSource(8))
    assert a.to_dict(include_timing=False) == b.to_dict(include_timing=False)


# ---- shared invariants -----------------------------------------------------------

@pytest.mark.parametrize("seed", range(8))
def test_heuristics_valid_and_bounded_by_exact(seed):
    n = 5 + seed
    inst = geo_instance(n, 100 + seed)
    opt = solve_exact(inst).cost
    reports = [
        solve_nearest_neighbor(inst),
        solve_random_walk(inst, Budget(2000), RandomSource(seed)),
        solve_ga(inst, GaParams(), Budget(3000), RandomSource(seed)),
        solve_sa(inst, SaParams(), Budget(3000), RandomSource(seed)),
    ]
    for r in reports:
        assert is_tour(r.best.order, n)
        assert evaluate_tour(inst, r.best.order) == r.cost >= opt
