"""``sandkit`` command line.

Exit codes: 0 success, 1 infeasibility verdict, 2 usage or input error,
3 branch-and-bound budget exhausted.
"""

from __future__ import annotations

import argparse
import logging
import sys
from collections.abc import Sequence
from pathlib import Path

from sandkit.config import settings
from sandkit.domain.errors import BudgetExceededError, InfeasibleError, SandkitError
from sandkit.domain.models import CapacityPlan, Instance
from sandkit.generators.expander import gen_expander
from sandkit.generators.kneser import gen_kneser
from sandkit.generators.random_instances import gen_random
from sandkit.generators.sat import (
    gen_sat,
    normalize_formula,
    sat_certificate,
    satisfying_assignment,
)
from sandkit.services.gap_report import expander_rows, kneser_rows, rows_to_csv
from sandkit.services.solver_service import (
    Algorithm,
    LatencyAlgorithm,
    SolverService,
    format_latency,
)
from sandkit.storage.dimacs import parse_dimacs
from sandkit.storage.text_format import (
    parse_instance,
    parse_plan,
    parse_walk,
    serialize_instance,
    serialize_plan,
    serialize_walk,
)

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INFEASIBLE = 1
EXIT_USAGE = 2
EXIT_BUDGET = 3


def _load_instance(path: str) -> Instance:
    return parse_instance(Path(path).read_bytes())


def _load_plan(path: str) -> CapacityPlan:
    return parse_plan(Path(path).read_bytes())


def _emit_generated(instance: Instance, plan: CapacityPlan | None, output: str | None) -> None:
    if output is None:
        sys.stdout.write(serialize_instance(instance))
        return
    Path(output).write_text(serialize_instance(instance), encoding="utf-8")
    if plan is not None:
        Path(f"{output}.plan").write_text(serialize_plan(plan), encoding="utf-8")
    print(f"wrote {output}" + (f" and {output}.plan" if plan is not None else ""))


def cmd_solve(args: argparse.Namespace) -> int:
    instance = _load_instance(args.instance)
    service = SolverService(budget=args.budget)
    outcome = service.solve(instance, Algorithm(args.alg), seed=args.seed)
    for line in outcome.details:
        print(line)
    print(outcome.summary)
    if args.output:
        Path(args.output).write_text(serialize_plan(outcome.plan), encoding="utf-8")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    feasible, message = SolverService.check(_load_instance(args.instance), _load_plan(args.plan))
    print(message)
    return EXIT_OK if feasible else EXIT_INFEASIBLE


def cmd_diagnose(args: argparse.Namespace) -> int:
    _, text = SolverService.diagnose(_load_instance(args.instance), _load_plan(args.plan))
    sys.stdout.write(text)
    return EXIT_OK


def cmd_gen_sat(args: argparse.Namespace) -> int:
    variable_count, clauses = parse_dimacs(Path(args.cnf).read_bytes())
    formula, flipped = normalize_formula(clauses, variable_count)
    if flipped:
        print(f"# flipped variables {' '.join(str(v) for v in sorted(flipped))}")
    instance, reduction = gen_sat(formula, args.M, disjoint=args.disjoint)
    plan = None
    if args.certificate:
        assignment = satisfying_assignment(formula)
        if assignment is None:
            print("formula is unsatisfiable; no certificate written")
        else:
            plan = sat_certificate(formula, assignment, reduction)[1]
    _emit_generated(instance, plan, args.output)
    return EXIT_OK


def cmd_gen_kneser(args: argparse.Namespace) -> int:
    instance, plan = gen_kneser(args.s, unordered=args.unordered)
    _emit_generated(instance, plan, args.output)
    return EXIT_OK


def cmd_gen_expander(args: argparse.Namespace) -> int:
    instance, plan = gen_expander(args.n, args.d, args.b, args.colors, args.seed)
    _emit_generated(instance, plan, args.output)
    return EXIT_OK


def cmd_gen_random(args: argparse.Namespace) -> int:
    instance = gen_random(
        args.n, args.k, args.color_size, args.seed, weight_range=(args.wmin, args.wmax)
    )
    _emit_generated(instance, None, args.output)
    return EXIT_OK


def cmd_latency_solve(args: argparse.Namespace) -> int:
    walk = SolverService.latency(_load_instance(args.instance), LatencyAlgorithm(args.alg))
    print(format_latency(walk))
    if args.output:
        Path(args.output).write_text(serialize_walk(walk.vertices), encoding="utf-8")
    return EXIT_OK


def cmd_latency_eval(args: argparse.Namespace) -> int:
    vertices = parse_walk(Path(args.walk).read_bytes())
    walk = SolverService.evaluate_walk(_load_instance(args.instance), vertices)
    print(format_latency(walk))
    return EXIT_OK


def cmd_gap_report(args: argparse.Namespace) -> int:
    if args.family == "kneser":
        rows = kneser_rows(args.s, with_lp=args.lp)
    else:
        rows = expander_rows(
            args.n, args.d, args.b, args.colors, args.seed, range(args.frt_seeds)
        )
    text = rows_to_csv(rows)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sandkit", description="f-SAND solver toolkit")
    commands = parser.add_subparsers(dest="command", required=True)

    solve = commands.add_parser("solve", help="solve an instance")
    solve.add_argument("--alg", choices=[a.value for a in Algorithm], required=True)
    solve.add_argument("-i", "--instance", required=True)
    solve.add_argument("-o", "--output", help="plan file to write")
    solve.add_argument("--budget", type=int, default=None, help="branch-and-bound node budget")
    solve.add_argument("--seed", type=int, default=0)
    solve.set_defaults(handler=cmd_solve)

    check = commands.add_parser("check", help="check a plan for feasibility")
    check.add_argument("-i", "--instance", required=True)
    check.add_argument("-p", "--plan", required=True)
    check.set_defaults(handler=cmd_check)

    diagnose = commands.add_parser("diagnose", help="split diagnostics of a two-color plan")
    diagnose.add_argument("-i", "--instance", required=True)
    diagnose.add_argument("-p", "--plan", required=True)
    diagnose.set_defaults(handler=cmd_diagnose)

    gen = commands.add_parser("gen", help="generate instance families")
    families = gen.add_subparsers(dest="family", required=True)

    sat = families.add_parser("sat", help="SAT reduction from a DIMACS file")
    sat.add_argument("--cnf", required=True)
    sat.add_argument("--M", type=int, default=None)
    sat.add_argument("--disjoint", action="store_true")
    sat.add_argument("--certificate", action="store_true", help="also write a completeness plan")
    sat.add_argument("-o", "--output")
    sat.set_defaults(handler=cmd_gen_sat)

    kneser = families.add_parser("kneser", help="odd graph with its fractional solution")
    kneser.add_argument("--s", type=int, required=True)
    kneser.add_argument("--unordered", action="store_true")
    kneser.add_argument("-o", "--output")
    kneser.set_defaults(handler=cmd_gen_kneser)

    expander = families.add_parser("expander", help="random regular graph plus root")
    expander.add_argument("--n", type=int, required=True)
    expander.add_argument("--d", type=int, required=True)
    expander.add_argument("--b", type=int, required=True)
    expander.add_argument("--colors", type=int, required=True)
    expander.add_argument("--seed", type=int, required=True)
    expander.add_argument("-o", "--output")
    expander.set_defaults(handler=cmd_gen_expander)

    rand = families.add_parser("random", help="random connected instance")
    rand.add_argument("--n", type=int, required=True)
    rand.add_argument("--k", type=int, required=True)
    rand.add_argument("--color-size", type=int, required=True)
    rand.add_argument("--seed", type=int, required=True)
    rand.add_argument("--wmin", type=int, default=1)
    rand.add_argument("--wmax", type=int, default=10)
    rand.add_argument("-o", "--output")
    rand.set_defaults(handler=cmd_gen_random)

    latency = commands.add_parser("latency", help="latency objective")
    modes = latency.add_subparsers(dest="mode", required=True)
    lsolve = modes.add_parser("solve")
    lsolve.add_argument("--alg", choices=[a.value for a in LatencyAlgorithm], default="greedy")
    lsolve.add_argument("-i", "--instance", required=True)
    lsolve.add_argument("-o", "--output", help="walk file to write")
    lsolve.set_defaults(handler=cmd_latency_solve)
    leval = modes.add_parser("eval")
    leval.add_argument("-i", "--instance", required=True)
    leval.add_argument("--walk", required=True)
    leval.set_defaults(handler=cmd_latency_eval)

    gap = commands.add_parser("gap-report", help="integrality-gap sweeps as CSV")
    gap.add_argument("--family", choices=["kneser", "expander"], required=True)
    gap.add_argument("--s", type=int, nargs="+", default=[2, 3])
    gap.add_argument("--lp", action="store_true", help="also solve the LP (kneser)")
    gap.add_argument("--n", type=int, default=16)
    gap.add_argument("--d", type=int, default=6)
    gap.add_argument("--b", type=int, default=4)
    gap.add_argument("--colors", type=int, default=50)
    gap.add_argument("--seed", type=int, default=0)
    gap.add_argument("--frt-seeds", type=int, default=16)
    gap.add_argument("-o", "--output")
    gap.set_defaults(handler=cmd_gap_report)
    return parser


def run(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE

    try:
        return int(args.handler(args))
    except BudgetExceededError as exc:
        print(f"budget exhausted: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except SandkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"error: cannot access {exc.filename}: {exc.strerror}", file=sys.stderr)
        return EXIT_USAGE


def main() -> None:
    logging.basicConfig(level=settings.log_level)
    sys.exit(run())


if __name__ == "__main__":
    main()
