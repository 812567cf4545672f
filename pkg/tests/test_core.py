import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rfid_atsp.core import (
    Budget,
    EvaluationCounter,
    Instance,
    RandomSource,
    ValidationError,
    derive_child,
    evaluate_tour,
    make_tour,
    round_half_away,
    validate_instance,
)

from .conftest import TRIANGLE


def test_single_city_costs_zero():
    inst = Instance.build("one", [[0]])
    assert evaluate_tour(inst, [0]) == 0


def test_triangle_tours_match_enumeration(triangle):
    # both directed 3-city tours, summed arc by arc
    expected = {}
    for perm in itertools.permutations([1, 2]):
        order = (0,) + perm
        expected[order] = sum(TRIANGLE[order[k]][order[(k + 1) % 3]] for k in range(3))
    assert expected == {(0, 1, 2): 3, (0, 2, 1): 15}
    assert evaluate_tour(triangle, [0, 1, 2]) == 3
    assert evaluate_tour(triangle, [0, 2, 1]) == 15


def test_evaluate_counts(triangle):
    counter = EvaluationCounter()
    evaluate_tour(triangle, [0, 1, 2], counter)
    evaluate_tour(triangle, [0, 2, 1], counter)
    assert counter.used == 2


@pytest.mark.parametrize("order, fragment", [
    ([0, 1, 1], "duplicated city 1"),
    ([0, 1], "missing city 2"),
    ([0, 1, 2, 2], "duplicated city 2"),
])
def test_non_permutation_names_city(triangle, order, fragment):
    with pytest.raises(ValidationError, match=fragment):
        evaluate_tour(triangle, order)


def test_validate_instance_ok():
    assert validate_instance(Instance.build("two", [[0, 3], [4, 0]])) == []


def test_validate_instance_reports_nonzero_diagonal():
    inst = Instance("bad", ((0, 1), (1, 7)))
    assert "nonzero diagonal at 1" in validate_instance(inst)


def test_validate_instance_reports_coord_mismatch():
    costs = tuple(tuple(0 if i == j else 1 for j in range(4)) for i in range(4))
    inst = Instance("bad", costs, coords=((0, 0), (1, 1), (2, 2)))
    assert "coords length mismatch" in validate_instance(inst)


def test_validate_instance_reports_everything():
    inst = Instance("bad", ((0, -1), (2, 3), (1,)), depot=5)
    problems = validate_instance(inst)
    assert "cost matrix is not square" in problems
    assert "negative cost at 0,1" in problems
    assert "nonzero diagonal at 1" in problems
    assert any("depot 5" in p for p in problems)


def test_build_rejects_invalid():
    with pytest.raises(ValidationError):
        Instance.build("bad", [[0, -2], [1, 0]])


def test_make_tour_requires_depot_first(triangle):
    with pytest.raises(ValidationError):
        make_tour(triangle, [1, 0, 2])
    assert make_tour(triangle, [0, 1, 2]).cost == 3


def test_derive_child_deterministic():
    a = derive_child(RandomSource(1), "ga").draws(64)
    b = derive_child(RandomSource(1), "ga").draws(64)
    assert a == b


@pytest.mark.parametrize("left, right", [((1, "ga"), (1, "sa")), ((1, "x"), (2, "x"))])
def test_derive_child_streams_differ(left, right):
    a = RandomSource(left[0]).derive_child(left[1]).draws(64)
    b = RandomSource(right[0]).derive_child(right[1]).draws(64)
    assert a != b


def test_child_independent_of_parent_draws():
    parent = RandomSource(9)
    first = parent.derive_child("c").draws(8)
    parent.draws(100)
    assert parent.derive_child("c").draws(8) == first


def test_same_seed_same_stream():
    assert RandomSource(123).draws(10) == RandomSource(123).draws(10)


def test_budget_validation():
    with pytest.raises(ValidationError):
        Budget(0)
    assert Budget(5).counter().remaining == 5


@pytest.mark.parametrize("x, expected", [(0.5, 1), (1.5, 2), (2.5, 3), (2.4999, 2), (-0.5, -1), (0.0, 0)])
def test_round_half_away(x, expected):
    assert round_half_away(x) == expected


def _matrix_strategy(symmetric):
    @st.composite
    def build(draw):
        n = draw(st.integers(2, 7))
        vals = draw(st.lists(st.integers(0, 50), min_size=n * n, max_size=n * n))
        costs = [[0 if i == j else vals[i * n + j] for j in range(n)] for i in range(n)]
        if symmetric:
            for i in range(n):
                for j in range(i):
                    costs[i][j] = costs[j][i]
        perm = draw(st.permutations(list(range(1, n))))
        return Instance.build("h", costs), [0] + list(perm)
    return build()


@settings(max_examples=150, deadline=None)
@given(_matrix_strategy(symmetric=False), st.integers(0, 20))
def test_rotation_reanchored_is_invariant(case, shift):
    inst, order = case
    k = shift % len(order)
    rotated = order[k:] + order[:k]
    d = rotated.index(0)
    reanchored = rotated[d:] + rotated[:d]
    assert evaluate_tour(inst, reanchored) == evaluate_tour(inst, order)


@settings(max_examples=150, deadline=None)
@given(_matrix_strategy(symmetric=True))
def test_symmetric_reversal_preserves_cost(case):
    inst, order = case
    reversed_order = [0] + order[1:][::-1]
    assert evaluate_tour(inst, reversed_order) == evaluate_tour(inst, order)


def test_asymmetric_reversal_differs_at_least_once():
    rng = RandomSource(5)
    differs = 0
    for t in range(100):
        n = 5
        costs = [[0 if i == j else rng.randint(0, 50) for j in range(n)] for i in range(n)]
        inst = Instance.build("a", costs)
        order = [0, 1, 2, 3, 4]
        differs += evaluate_tour(inst, order) != evaluate_tour(inst, [0, 4, 3, 2, 1])
    assert differs >= 1


@settings(max_examples=100, deadline=None)
@given(_matrix_strategy(symmetric=False))
def test_cost_nonnegative_and_zero_iff_free_arcs(case):
    inst, order = case
    cost = evaluate_tour(inst, order)
    arcs = [inst.costs[order[k]][order[(k + 1) % len(order)]] for k in range(len(order))]
    assert cost >= 0
    assert (cost == 0) == all(a == 0 for a in arcs)
