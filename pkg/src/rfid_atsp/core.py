"""Domain types shared by every solver: instances, tours, budgets and seeded randomness."""

from __future__ import annotations

import hashlib
import math
import random
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Optional, Sequence

ALGORITHMS = (
    "kmeans",
    "ga",
    "sa",
    "ga_sa",
    "k_ga",
    "k_ga_sa",
    "nn",
    "random_walk",
    "exact",
)


class AtspError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(AtspError, ValueError):
    """Malformed input data: instances, tours, parameters, files."""


class PreconditionError(AtspError):
    """A solver was asked to do something outside its documented range."""


@dataclass(frozen=True)
class Instance:
    """Single-depot ATSP instance with an integer cost matrix.

    ``costs[i][j]`` is the cost of travelling from city ``i`` to city ``j`` and
    need not equal ``costs[j][i]``. ``coords`` is optional and only required by
    the clustering solvers.
    """

    name: str
    costs: tuple[tuple[int, ...], ...]
    coords: Optional[tuple[tuple[float, float], ...]] = None
    depot: int = 0

    @classmethod
    def build(cls, name, costs, coords=None, depot=0, validate=True) -> "Instance":
        inst = cls(
            name=str(name),
            costs=tuple(tuple(int(c) for c in row) for row in costs),
            coords=None if coords is None else tuple((float(x), float(y)) for x, y in coords),
            depot=int(depot),
        )
        if validate:
            problems = validate_instance(inst)
            if problems:
                raise ValidationError("invalid instance: " + "; ".join(problems))
        return inst

    @property
    def n(self) -> int:
        return len(self.costs)

    def matrix(self) -> list[list[int]]:
        """Mutable list-of-lists copy, the fastest layout for pure-Python indexing."""
        return [list(row) for row in self.costs]


def validate_instance(instance: Instance) -> list[str]:
    """Return every violated instance invariant; an empty list means valid."""
    problems = []
    n = len(instance.costs)
    if n < 1:
        problems.append("instance has no cities")
    square = all(len(row) == n for row in instance.costs)
    if not square:
        problems.append("cost matrix is not square")
    for i, row in enumerate(instance.costs):
        for j, c in enumerate(row):
            if c < 0:
                problems.append(f"negative cost at {i},{j}")
        if i < len(row) and row[i] != 0:
            problems.append(f"nonzero diagonal at {i}")
    if not 0 <= instance.depot < max(n, 1) or n == 0:
        problems.append(f"depot {instance.depot} out of range")
    if instance.coords is not None and len(instance.coords) != n:
        problems.append("coords length mismatch")
    return problems


@dataclass(frozen=True)
class Tour:
    order: tuple[int, ...]
    cost: int

    def __len__(self) -> int:
        return len(self.order)


class EvaluationCounter:
    """Counts tour-cost evaluations against an optional cap."""

    __slots__ = ("used", "limit")

    def __init__(self, limit: Optional[int] = None, used: int = 0):
        self.used = used
        self.limit = limit

    @property
    def remaining(self) -> float:
        return float("inf") if self.limit is None else self.limit - self.used

    @property
    def exhausted(self) -> bool:
        return self.limit is not None and self.used >= self.limit


def check_permutation(order: Sequence[int], n: int) -> None:
    if len(order) == n and sorted(order) == list(range(n)):
        return
    counts = Counter(order)
    dupes = sorted(c for c, k in counts.items() if k > 1)
    missing = sorted(set(range(n)) - set(counts))
    extra = sorted(c for c in counts if not (isinstance(c, int) and 0 <= c < n))
    parts = []
    if dupes:
        parts.append(f"duplicated city {', '.join(map(str, dupes))}")
    if missing:
        parts.append(f"missing city {', '.join(map(str, missing))}")
    if extra:
        parts.append(f"unknown city {', '.join(map(str, extra))}")
    raise ValidationError("tour is not a permutation: " + "; ".join(parts or ["wrong length"]))


def tour_cost(costs, order) -> int:
    """Closed-walk cost without validation; ``costs`` is any 2-d indexable."""
    total = costs[order[-1]][order[0]]
    prev = order[0]
    for city in order[1:]:
        total += costs[prev][city]
        prev = city
    return total


def evaluate_tour(instance: Instance, order: Sequence[int], counter: Optional[EvaluationCounter] = None) -> int:
    """Cost of the closed walk ``order[0] -> ... -> order[-1] -> order[0]``.

    Raises ValidationError when ``order`` is not a permutation of the cities.
    """
    check_permutation(order, instance.n)
    if counter is not None:
        counter.used += 1
    return tour_cost(instance.costs, order)


def make_tour(instance: Instance, order: Sequence[int]) -> Tour:
    order = tuple(int(c) for c in order)
    if order and order[0] != instance.depot:
        raise ValidationError(f"tour must start at depot {instance.depot}, got {order[0]}")
    return Tour(order, evaluate_tour(instance, order))


class RandomSource(random.Random):
    """Seeded Mersenne Twister stream (CPython's ``random.Random``).

    Seeding with an int is stable across CPython versions, which gives a
    documented reference stream. Child streams are keyed on
    ``sha256(f"{seed}/{label}")`` so they do not depend on how many draws the
    parent has made.
    """

    def __init__(self, seed: int = 0):
        self.seed_value = int(seed) & 0xFFFFFFFFFFFFFFFF
        super().__init__(self.seed_value)

    def derive_child(self, label: str) -> "RandomSource":
        digest = hashlib.sha256(f"{self.seed_value}/{label}".encode()).digest()
        return RandomSource(int.from_bytes(digest[:8], "little"))

    def draws(self, count: int) -> list[int]:
        return [self.getrandbits(64) for _ in range(count)]


def derive_child(source: RandomSource, label: str) -> RandomSource:
    return source.derive_child(label)


@dataclass(frozen=True)
class Budget:
    max_evaluations: int
    max_millis: Optional[float] = None

    def __post_init__(self):
        if self.max_evaluations <= 0:
            raise ValidationError("max_evaluations must be positive")
        if self.max_millis is not None and self.max_millis <= 0:
            raise ValidationError("max_millis must be positive")

    def counter(self) -> "BudgetCounter":
        return BudgetCounter(self)


class BudgetCounter(EvaluationCounter):
    """Evaluation counter that also honours the optional wall-clock cap."""

    __slots__ = ("deadline",)

    def __init__(self, budget: Budget):
        super().__init__(budget.max_evaluations)
        self.deadline = None
        if budget.max_millis is not None:
            self.deadline = time.perf_counter() + budget.max_millis / 1000.0

    @property
    def exhausted(self) -> bool:
        if self.used >= self.limit:
            return True
        return self.deadline is not None and time.perf_counter() >= self.deadline


@dataclass
class SolveReport:
    algorithm: str
    instance_name: str
    seed: Optional[int]
    evaluations_used: int
    elapsed_millis: float
    best: Tour
    # per-generation (GA family) or per-epoch (SA) best-so-far costs
    history: list[int] = field(default_factory=list)

    @property
    def cost(self) -> int:
        return self.best.cost

    def to_dict(self, include_timing: bool = True) -> dict:
        d = {
            "algorithm": self.algorithm,
            "instance_name": self.instance_name,
            "seed": self.seed,
            "evaluations_used": self.evaluations_used,
            "best": {"order": list(self.best.order), "cost": self.best.cost},
            "history": list(self.history),
        }
        if include_timing:
            d["elapsed_millis"] = self.elapsed_millis
        return d


class Stopwatch:
    def __init__(self):
        self.start = time.perf_counter()

    def millis(self) -> float:
        return (time.perf_counter() - self.start) * 1000.0


def random_order(n: int, depot: int, rng: random.Random) -> list[int]:
    """Uniform random permutation rooted at ``depot``."""
    rest = [c for c in range(n) if c != depot]
    rng.shuffle(rest)
    return [depot] + rest


def round_half_away(x: float) -> int:
    """Round to nearest integer, halves away from zero (not banker's rounding)."""
    if x < 0:
        return -round_half_away(-x)
    whole = math.floor(x)
    return whole + 1 if x - whole >= 0.5 else whole
