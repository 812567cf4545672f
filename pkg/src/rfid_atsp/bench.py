"""Pilot benchmark: six algorithms on a batch of random instances, improvement
percentages between fixed algorithm pairs, and a checker for
hand-entered result tables.
"""

from __future__ import annotations

import csv
import io
import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from importlib import resources
from typing import Optional

from .core import Budget, RandomSource, ValidationError
from .hybrids import KMeansParams, solve_cluster_heuristic, solve_ga_sa, solve_k_ga, solve_k_ga_sa
from .instance_io import GeneratorConfig, generate_instance
from .solvers import GaParams, SaParams, solve_exact, solve_ga, solve_sa

# raw-cost column order of the pilot table
PILOT_ALGORITHMS = ("kmeans", "ga", "sa", "ga_sa", "k_ga_sa", "k_ga")


@dataclass(frozen=True)
class ImprovementPair:
    label: str
    algorithm: str
    baseline: str


IMPROVEMENT_PAIRS = (
    ImprovementPair("ga_over_sa", "ga", "sa"),
    ImprovementPair("ga_over_ga_sa", "ga", "ga_sa"),
    ImprovementPair("ga_sa_over_sa", "ga_sa", "sa"),
    ImprovementPair("kmeans_over_ga", "kmeans", "ga"),
    ImprovementPair("kmeans_over_ga_sa", "kmeans", "ga_sa"),
    ImprovementPair("k_ga_over_kmeans", "k_ga", "kmeans"),
    ImprovementPair("k_ga_over_k_ga_sa", "k_ga", "k_ga_sa"),
    ImprovementPair("k_ga_sa_over_kmeans", "k_ga_sa", "kmeans"),
)


def improvement(cost_a, cost_b) -> float:
    """Percent by which ``cost_a`` undercuts the baseline ``cost_b``."""
    if cost_b <= 0:
        raise ValueError(f"baseline cost must be positive, got {cost_b}")
    return 100.0 * (cost_b - cost_a) / cost_b


@dataclass
class PilotRow:
    index: int
    costs: dict
    optimum: Optional[int] = None
    improvements: dict = field(init=False)

    def __post_init__(self):
        missing = [a for a in PILOT_ALGORITHMS if a not in self.costs]
        if missing:
            raise ValidationError(f"row {self.index}: missing costs for {', '.join(missing)}")
        self.costs = {a: int(self.costs[a]) for a in PILOT_ALGORITHMS}
        self.improvements = {
            p.label: improvement(self.costs[p.algorithm], self.costs[p.baseline]) for p in IMPROVEMENT_PAIRS
        }

    def gaps(self) -> Optional[dict]:
        """Percent above the exact optimum per algorithm, when known."""
        if self.optimum is None:
            return None
        if self.optimum == 0:
            return {a: 0.0 if c == 0 else float("inf") for a, c in self.costs.items()}
        return {a: 100.0 * (c - self.optimum) / self.optimum for a, c in self.costs.items()}


@dataclass(frozen=True)
class PilotConfig:
    cities: int = 14
    instances: int = 14
    seed: int = 0
    budget: int = 50_000
    exact: bool = False
    ga: GaParams = GaParams()
    sa: SaParams = SaParams()
    km: KMeansParams = KMeansParams()
    jobs: int = 1


def pilot_instance(config: PilotConfig, index: int):
    instance_seed = config.seed + index
    gen = GeneratorConfig(n=config.cities, seed=instance_seed)
    return generate_instance(gen, RandomSource(instance_seed))


def cell_source(base_seed: int, index: int, algorithm: str) -> RandomSource:
    return RandomSource(base_seed).derive_child(f"instance{index}/{algorithm}")


def run_algorithm(algorithm, instance, config: PilotConfig, source):
    budget = Budget(config.budget)
    if algorithm == "kmeans":
        return solve_cluster_heuristic(instance, config.km, source)
    if algorithm == "ga":
        return solve_ga(instance, config.ga, budget, source)
    if algorithm == "sa":
        return solve_sa(instance, config.sa, budget, source)
    if algorithm == "ga_sa":
        return solve_ga_sa(instance, config.ga, config.sa, budget, source)
    if algorithm == "k_ga":
        return solve_k_ga(instance, config.km, config.ga, budget, source)
    if algorithm == "k_ga_sa":
        return solve_k_ga_sa(instance, config.km, config.ga, config.sa, budget, source)
    raise ValidationError(f"unknown pilot algorithm {algorithm!r}")


def _run_cell(args):
    config, index, algorithm = args
    instance = pilot_instance(config, index)
    try:
        if algorithm == "exact":
            return solve_exact(instance).cost
        return run_algorithm(algorithm, instance, config, cell_source(config.seed, index, algorithm)).cost
    except Exception as exc:
        raise type(exc)(f"instance {index} ({instance.name}), {algorithm}: {exc}") from exc


def run_pilot(config: PilotConfig = PilotConfig()) -> list[PilotRow]:
    """Run every (instance, algorithm) cell; output does not depend on ``jobs``."""
    if config.cities < 1 or config.instances < 1:
        raise ValidationError("cities and instances must be >= 1")
    algorithms = PILOT_ALGORITHMS + (("exact",) if config.exact else ())
    cells = [(config, i, a) for i in range(1, config.instances + 1) for a in algorithms]
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_cell, cells))
    else:
        results = [_run_cell(cell) for cell in cells]
    by_cell = {(i, a): r for (_, i, a), r in zip(cells, results)}
    rows = []
    for i in range(1, config.instances + 1):
        costs = {a: by_cell[i, a] for a in PILOT_ALGORITHMS}
        rows.append(PilotRow(i, costs, by_cell.get((i, "exact"))))
    return rows


# ---- report rendering -------------------------------------------------------

def _columns(rows) -> list[str]:
    cols = ["index", *PILOT_ALGORITHMS, *(p.label for p in IMPROVEMENT_PAIRS)]
    if any(r.optimum is not None for r in rows):
        cols += ["optimum", *(f"gap_{a}" for a in PILOT_ALGORITHMS)]
    return cols


def _cells(row: PilotRow, with_optimum: bool) -> list[str]:
    out = [str(row.index), *(str(row.costs[a]) for a in PILOT_ALGORITHMS)]
    out += [f"{row.improvements[p.label]:.5f}" for p in IMPROVEMENT_PAIRS]
    if with_optimum:
        gaps = row.gaps()
        out.append("" if row.optimum is None else str(row.optimum))
        out += ["" if gaps is None else f"{gaps[a]:.5f}" for a in PILOT_ALGORITHMS]
    return out


def format_report(rows, fmt: str = "csv") -> str:
    if not rows:
        raise ValidationError("no rows to report")
    cols = _columns(rows)
    with_optimum = "optimum" in cols
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow(_cells(row, with_optimum))
        return buf.getvalue()
    if fmt == "markdown":
        lines = ["| " + " | ".join(cols) + " |", "|" + "---|" * len(cols)]
        lines += ["| " + " | ".join(_cells(r, with_optimum)) + " |" for r in rows]
        return "\n".join(lines) + "\n"
    if fmt == "json":
        records = []
        for r in rows:
            rec = {
                "index": r.index,
                "costs": dict(r.costs),
                "improvements": {k: round(v, 5) for k, v in r.improvements.items()},
                "optimum": r.optimum,
            }
            gaps = r.gaps()
            if gaps is not None:
                rec["gaps"] = {k: round(v, 5) for k, v in gaps.items()}
            records.append(rec)
        return json.dumps(records, indent=2) + "\n"
    raise ValidationError(f"unknown report format {fmt!r}")


def emit_report(rows, fmt: str = "csv", destination=None) -> str:
    text = format_report(rows, fmt)
    if destination is not None:
        try:
            with open(destination, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {os.fspath(destination)}: {exc}") from exc
    return text


def parse_report(text: str) -> list[PilotRow]:
    """Rebuild rows from CSV emitted by :func:`emit_report`.

    Percentages and gaps are recomputed from the raw costs, so emitting the
    parsed rows reproduces the input byte for byte.
    """
    reader = csv.DictReader(io.StringIO(text))
    rows = []
    for rec in reader:
        try:
            optimum = rec.get("optimum") or None
            rows.append(PilotRow(
                int(rec["index"]),
                {a: int(rec[a]) for a in PILOT_ALGORITHMS},
                None if optimum is None else int(optimum),
            ))
        except (KeyError, ValueError) as exc:
            raise ValidationError(f"line {reader.line_num}: malformed report row: {exc}") from None
    return rows


# ---- table check -------------------------------------------------------------

@dataclass(frozen=True)
class CellCheck:
    row: int
    label: str
    printed: float
    recomputed: float
    cost_a: int = 0
    cost_b: int = 0

    @property
    def diff(self) -> float:
        return abs(self.printed - self.recomputed)

    def implied_costs(self) -> tuple[float, float]:
        """Algorithm cost (baseline held) and baseline cost (algorithm held)
        that would make the printed percentage exact."""
        ratio = 1.0 - self.printed / 100.0
        return self.cost_b * ratio, (self.cost_a / ratio if ratio else float("inf"))


@dataclass
class TableCheck:
    cells: list
    tolerance: float

    @property
    def matches(self) -> list:
        return [c for c in self.cells if c.diff <= self.tolerance]

    @property
    def mismatches(self) -> list:
        return [c for c in self.cells if c.diff > self.tolerance]

    @property
    def match_ratio(self) -> float:
        return len(self.matches) / len(self.cells) if self.cells else 1.0

    def cell(self, row: int, label: str) -> CellCheck:
        for c in self.cells:
            if c.row == row and c.label == label:
                return c
        raise KeyError((row, label))

    def summary(self) -> str:
        lines = [
            f"{len(self.matches)}/{len(self.cells)} cells match within {self.tolerance} "
            f"({100 * self.match_ratio:.1f}%)"
        ]
        for c in self.mismatches:
            a_fit, b_fit = c.implied_costs()
            lines.append(
                f"  MISMATCH row {c.row} {c.label}: printed {c.printed} recomputed {c.recomputed:.6f} "
                f"(diff {c.diff:.6f}; printed value implies {c.cost_a}->{a_fit:.1f} or {c.cost_b}->{b_fit:.1f})"
            )
        return "\n".join(lines)


def load_table_fixture(path=None):
    """Read a pilot-table CSV; returns ``[(index, raw_costs, printed), ...]``.

    With no path the packaged reference table is used.
    """
    if path is None:
        text = resources.files("rfid_atsp").joinpath("fixtures/pilot_table.csv").read_text(encoding="utf-8")
    else:
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise OSError(f"cannot read fixture {os.fspath(path)}: {exc}") from exc
    entries = []
    reader = csv.DictReader(io.StringIO(text))
    for rec in reader:
        try:
            raw = {a: int(rec[a]) for a in PILOT_ALGORITHMS}
            printed = {p.label: float(rec[p.label]) for p in IMPROVEMENT_PAIRS}
            entries.append((int(rec["index"]), raw, printed))
        except (KeyError, ValueError, TypeError) as exc:
            raise ValidationError(f"line {reader.line_num}: malformed fixture row: {exc}") from None
    return entries


def verify_table(entries, tolerance: float = 0.01) -> TableCheck:
    """Recompute every improvement cell from its row's raw costs and compare
    with the printed value. Discrepancies are reported, never raised.
    """
    cells = []
    for index, raw, printed in entries:
        row = PilotRow(index, raw)
        for p in IMPROVEMENT_PAIRS:
            cells.append(CellCheck(index, p.label, printed[p.label], row.improvements[p.label],
                                   row.costs[p.algorithm], row.costs[p.baseline]))
    return TableCheck(cells, tolerance)
