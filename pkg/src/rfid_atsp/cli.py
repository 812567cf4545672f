"""Command-line entry point: ``rfid-atsp <subcommand> ...``.

Exit codes: 0 success, 1 validation error, 2 I/O error, 3 solver precondition error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bench import PilotConfig, emit_report, load_table_fixture, run_pilot, verify_table
from .core import Budget, PreconditionError, RandomSource, ValidationError
from .hybrids import KMeansParams, solve_cluster_heuristic, solve_ga_sa, solve_k_ga, solve_k_ga_sa
from .instance_io import GeneratorConfig, generate_instance, read_instance, write_instance
from .rfid_ingest import build_instance_from_events, read_event_log
from .solvers import (
    GaParams,
    SaParams,
    solve_exact,
    solve_ga,
    solve_nearest_neighbor,
    solve_random_walk,
    solve_sa,
)

EXIT_OK, EXIT_VALIDATION, EXIT_IO, EXIT_PRECONDITION = 0, 1, 2, 3

SOLVE_ALGOS = ("exact", "nn", "random-walk", "ga", "sa", "ga-sa", "kmeans", "k-ga", "k-ga-sa")


def _ga_params(args) -> GaParams:
    defaults = GaParams()
    return GaParams(
        population_size=args.pop if args.pop is not None else defaults.population_size,
        tournament_size=args.tournament if args.tournament is not None else defaults.tournament_size,
        elite_count=args.elite if args.elite is not None else defaults.elite_count,
        crossover_rate=args.crossover if args.crossover is not None else defaults.crossover_rate,
        mutation_rate=args.mutation if args.mutation is not None else defaults.mutation_rate,
        operator_mix=args.operator_mix if args.operator_mix is not None else defaults.operator_mix,
    )


def _sa_params(args) -> SaParams:
    defaults = SaParams()
    return SaParams(
        initial_acceptance=args.acceptance if args.acceptance is not None else defaults.initial_acceptance,
        cooling_ratio=args.beta if args.beta is not None else defaults.cooling_ratio,
        epoch_length=args.epoch,
        move_mix=args.move_mix if args.move_mix is not None else defaults.move_mix,
    )


def _add_params(p):
    g = p.add_argument_group("solver parameters")
    g.add_argument("--pop", type=int, help="GA population size")
    g.add_argument("--tournament", type=int, help="GA tournament size")
    g.add_argument("--elite", type=int, help="GA elite count")
    g.add_argument("--crossover", type=float, help="GA crossover rate")
    g.add_argument("--mutation", type=float, help="GA per-offspring swap mutation rate")
    g.add_argument("--operator-mix", type=float, help="probability of uniform-order crossover")
    g.add_argument("--beta", type=float, help="SA cooling ratio")
    g.add_argument("--acceptance", type=float, help="SA initial uphill acceptance probability")
    g.add_argument("--epoch", type=int, help="SA proposals per temperature (default 100*n)")
    g.add_argument("--move-mix", type=float, help="SA probability of an insertion move")
    g.add_argument("--k", type=int, help="k-means cluster count (default round(sqrt(n/2)))")


def cmd_generate(args):
    config = GeneratorConfig(n=args.cities, seed=args.seed, coord_box=args.coord_box,
                             asymmetry_alpha=args.asymmetry)
    write_instance(generate_instance(config, RandomSource(args.seed)), args.out)


def cmd_ingest(args):
    events = read_event_log(args.events)
    instance = build_instance_from_events(events, args.depot, args.asymmetry, RandomSource(args.seed),
                                          name=args.name)
    write_instance(instance, args.out)


def cmd_solve(args):
    instance = read_instance(args.instance)
    source = RandomSource(args.seed)
    budget = Budget(args.budget)
    ga, sa, km = _ga_params(args), _sa_params(args), KMeansParams(k=args.k)
    algo = args.algo
    if algo == "exact":
        report = solve_exact(instance, budget)
    elif algo == "nn":
        report = solve_nearest_neighbor(instance)
    elif algo == "random-walk":
        report = solve_random_walk(instance, budget, source)
    elif algo == "ga":
        report = solve_ga(instance, ga, budget, source)
    elif algo == "sa":
        report = solve_sa(instance, sa, budget, source)
    elif algo == "ga-sa":
        report = solve_ga_sa(instance, ga, sa, budget, source)
    elif algo == "kmeans":
        report = solve_cluster_heuristic(instance, km, source)
    elif algo == "k-ga":
        report = solve_k_ga(instance, km, ga, budget, source)
    else:
        report = solve_k_ga_sa(instance, km, ga, sa, budget, source)
    payload = report.to_dict()
    payload["budget"] = args.budget
    text = json.dumps(payload, indent=2) + "\n"
    if args.out:
        try:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write report to {args.out}: {exc}") from exc
    else:
        sys.stdout.write(text)


def cmd_bench(args):
    config = PilotConfig(
        cities=args.cities, instances=args.instances, seed=args.seed, budget=args.budget,
        exact=args.exact == "on", ga=_ga_params(args), sa=_sa_params(args), km=KMeansParams(k=args.k),
        jobs=args.jobs,
    )
    rows = run_pilot(config)
    text = emit_report(rows, args.format, args.out)
    if not args.out:
        sys.stdout.write(text)


def cmd_verify_table(args):
    check = verify_table(load_table_fixture(args.fixture), args.tolerance)
    print(check.summary())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rfid-atsp", description="ATSP solver workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a random instance file")
    p.add_argument("--cities", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coord-box", type=float, default=1000.0)
    p.add_argument("--asymmetry", type=float, default=0.3)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("ingest", help="build an instance from an RFID read-event CSV")
    p.add_argument("--events", required=True)
    p.add_argument("--depot", required=True, help="reader_id of the depot site")
    p.add_argument("--asymmetry", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--name", default="rfid")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_ingest)

    p = sub.add_parser("solve", help="solve one instance file")
    p.add_argument("--instance", required=True)
    p.add_argument("--algo", choices=SOLVE_ALGOS, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=50_000)
    p.add_argument("--out", help="JSON report path (stdout if omitted)")
    _add_params(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("bench", help="run the pilot comparison")
    p.add_argument("--cities", type=int, default=14)
    p.add_argument("--instances", type=int, default=14)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=50_000)
    p.add_argument("--exact", choices=("on", "off"), default="off")
    p.add_argument("--format", choices=("csv", "markdown", "json"), default="csv")
    p.add_argument("--jobs", type=int, default=1, help="worker processes; output is unaffected")
    p.add_argument("--out")
    _add_params(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("verify-table", help="recheck a pilot table's percentages against its raw costs")
    p.add_argument("--fixture", help="table CSV (default: packaged transcription)")
    p.add_argument("--tolerance", type=float, default=0.01)
    p.set_defaults(func=cmd_verify_table)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except PreconditionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (ValidationError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
