"""Command-line surface for the voyage speed-optimization toolkit.

Subcommands: validate scenario files, compile them to problem files, solve
with the exhaustive or annealing backend, run the simulated quantum solvers,
replan after an RTA change, and dump arrival-time landscapes.

Exit codes are stable across commands: 0 success, 2 domain/validation error,
3 I/O error. Every randomized command takes an explicit --seed (default 0);
no entropy is drawn from the environment. Reports go to standard output and
are byte-identical across repeated runs with identical inputs; wall time goes
to standard error; traces always go to files.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .polynomial import (
    PseudoBooleanPolynomial,
    VariableMap,
    build_linear_qubo,
    build_quadratic_hobo,
    export_ising,
    export_problem,
    import_problem,
    quadratize,
    to_ising,
)
from .quantum import (
    AdiabaticConfig,
    adiabatic_evolve,
    build_diagonal,
    ground_overlap,
    qaoa_optimize,
    qaoa_state,
    sample,
)
from .scenario import (
    CostBreakdown,
    DecodedPlan,
    EncodingConfig,
    RouteScenario,
    decode,
    load_scenario,
    replan,
    scenario_cost,
)
from .solvers import (
    AnnealConfig,
    brute_force,
    landscape,
    resolve_temperatures,
    simulated_annealing,
    write_landscape_csv,
)

_CONSISTENCY_TOL = 1e-9


@dataclass
class RunReport:
    """Everything a solve-style command reports about one run.

    The decoded plan and cost breakdown are recomputed from the reported
    bitstring, so the report is self-consistent by construction. wall_time
    is excluded from the rendered report (it goes to stderr) to keep repeated
    runs byte-identical.
    """

    command: str
    scenario_digest: str
    solver: str
    solver_config: dict
    best_bitstring: str
    best_value: float
    minimizer_count: int | None = None
    plan: DecodedPlan | None = None
    cost: CostBreakdown | None = None
    extras: dict | None = None
    wall_time: float = 0.0

    def to_dict(self) -> dict:
        plan = None
        if self.plan is not None:
            plan = {
                "sectors": [
                    {
                        "inverse_speed": self.plan.inverse_speeds[i],
                        "ground_speed": self.plan.ground_speeds[i],
                        "water_speed": self.plan.water_speeds[i],
                        "time": self.plan.times[i],
                        "infeasible": i in self.plan.infeasible_sectors,
                    }
                    for i in range(len(self.plan.inverse_speeds))
                ],
                "arrival_time": self.plan.arrival_time,
            }
        cost = None
        if self.cost is not None:
            cost = {
                "fuel_per_sector": list(self.cost.fuel_per_sector),
                "fuel_total": self.cost.fuel_total,
                "delay_cost": self.cost.delay_cost,
                "total": self.cost.total,
            }
        return {
            "command": self.command,
            "scenario_digest": self.scenario_digest,
            "solver": self.solver,
            "solver_config": self.solver_config,
            "best_bitstring": self.best_bitstring,
            "best_value": self.best_value,
            "minimizer_count": self.minimizer_count,
            "plan": plan,
            "cost": cost,
            "extras": self.extras or {},
        }

    def to_text(self) -> str:
        lines = [
            f"command: {self.command}",
            f"input digest: {self.scenario_digest}",
            f"solver: {self.solver}",
            "config: " + " ".join(f"{k}={v!r}" for k, v in sorted(self.solver_config.items())),
            f"best value: {self.best_value!r}",
            f"best bitstring: {self.best_bitstring}",
        ]
        if self.minimizer_count is not None:
            lines.append(f"minimizers: {self.minimizer_count}")
        if self.plan is not None:
            lines.append("plan:")
            for i in range(len(self.plan.inverse_speeds)):
                u = self.plan.inverse_speeds[i]
                t = self.plan.times[i]
                if i in self.plan.infeasible_sectors:
                    lines.append(f"  sector {i}: inverse_speed={u!r} time={t!r} infeasible (zero transit time)")
                else:
                    w = self.plan.ground_speeds[i]
                    v = self.plan.water_speeds[i]
                    lines.append(
                        f"  sector {i}: inverse_speed={u!r} ground_speed={w!r} water_speed={v!r} time={t!r}"
                    )
            lines.append(f"arrival time: {self.plan.arrival_time!r}")
        if self.cost is not None:
            lines.append("cost:")
            for i, fuel in enumerate(self.cost.fuel_per_sector):
                lines.append(f"  sector {i} fuel: {fuel!r}")
            lines.append(f"  fuel total: {self.cost.fuel_total!r}")
            lines.append(f"  delay: {self.cost.delay_cost!r}")
            lines.append(f"  total: {self.cost.total!r}")
        if self.extras:
            lines.append("extras:")
            for key, value in sorted(self.extras.items()):
                lines.append(f"  {key}: {value!r}")
        return "\n".join(lines) + "\n"

    def render(self, fmt: str) -> str:
        if fmt == "json":
            return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"
        return self.to_text()


def _digest(path: str | Path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()[:16]


def _bitstring(bits) -> str:
    return "".join(str(b) for b in bits)


def _echo(args: argparse.Namespace) -> str:
    return args.command_echo


def _finish_report(args, digest: str, solver: str, config: dict, bits,
                   best_value: float, scenario: RouteScenario | None,
                   enc: EncodingConfig | None, minimizer_count: int | None = None,
                   extras: dict | None = None) -> RunReport:
    plan = cost = None
    if scenario is not None:
        plan = decode(bits, scenario, enc)
        cost = scenario_cost(plan, scenario)
        if abs(cost.total - best_value) > _CONSISTENCY_TOL * max(1.0, abs(cost.total)):
            raise RuntimeError(
                f"internal report inconsistency: recomputed cost {cost.total} "
                f"vs solver value {best_value}"
            )
    return RunReport(
        command=_echo(args),
        scenario_digest=digest,
        solver=solver,
        solver_config=config,
        best_bitstring=_bitstring(bits),
        best_value=best_value,
        minimizer_count=minimizer_count,
        plan=plan,
        cost=cost,
        extras=extras,
    )


def _write_trace(path: str | Path, header: str, rows) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header + "\n")
        for row in rows:
            fh.write(",".join(repr(x) for x in row) + "\n")


# ---------------------------------------------------------------------------
# Subcommands
# ---------------------------------------------------------------------------

def cmd_validate(args) -> int:
    scenario, enc = load_scenario(args.scenario)
    print(f"scenario OK: {scenario.num_sectors} sector(s), "
          f"rta {scenario.rta!r}, alpha {scenario.alpha!r}, "
          f"{scenario.num_sectors * enc.bits} variables")
    return 0


def cmd_build(args) -> int:
    scenario, enc = load_scenario(args.scenario)
    if args.mode == "linear":
        pbp, varmap = build_linear_qubo(scenario, enc)
    else:
        if args.penalty is None:
            raise ValueError("quadratic mode requires --penalty")
        pbp, varmap = build_quadratic_hobo(scenario, enc, penalty_weight=args.penalty)
    if args.quadratize:
        pbp, varmap = quadratize(pbp, varmap=varmap)
    if args.ising:
        model = to_ising(pbp)
        export_ising(model, varmap, args.out)
        print(f"wrote {args.out}: {model.num_spins} spins, "
              f"{sum(1 for x in model.h if x != 0.0)} fields, {len(model.J)} couplings")
    else:
        export_problem(pbp, varmap, args.out)
        print(f"wrote {args.out}: {pbp.num_vars} variables, "
              f"{len(pbp.terms)} terms, degree {pbp.degree}")
    return 0


def _load_solve_input(path) -> tuple[PseudoBooleanPolynomial, VariableMap,
                                     RouteScenario | None, EncodingConfig | None]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if isinstance(doc, dict) and "sectors" in doc:
        scenario, enc = load_scenario(path)
        pbp, varmap = build_linear_qubo(scenario, enc)
        return pbp, varmap, scenario, enc
    if isinstance(doc, dict) and "num_vars" in doc:
        pbp, varmap = import_problem(path)
        return pbp, varmap, None, None
    raise ValueError("input is neither a scenario file nor a problem file")


def _run_solver(args, pbp: PseudoBooleanPolynomial):
    if args.solver == "brute":
        result = brute_force(pbp, workers=args.threads)
        config = {"workers": args.threads}
    else:
        cfg = AnnealConfig(sweeps=args.sweeps, t_start=args.t_start, t_end=args.t_end,
                           restarts=args.restarts, seed=args.seed)
        result = simulated_annealing(pbp, cfg)
        t_start, t_end = resolve_temperatures(pbp, cfg)
        config = {"sweeps": args.sweeps, "restarts": args.restarts, "seed": args.seed,
                  "t_start": t_start, "t_end": t_end}
    return result, config


def cmd_solve(args) -> int:
    pbp, _, scenario, enc = _load_solve_input(args.input)
    result, config = _run_solver(args, pbp)
    report = _finish_report(
        args, _digest(args.input), args.solver, config,
        result.minimizers[0], result.best_value, scenario, enc,
        minimizer_count=len(result.minimizers),
        extras={"evaluations": result.evaluations, "variables": pbp.num_vars},
    )
    sys.stdout.write(report.render(args.format))
    return 0


def cmd_replan(args) -> int:
    scenario, enc = load_scenario(args.scenario)
    residual = replan(scenario, args.completed, args.elapsed, args.rta)
    pbp, _ = build_linear_qubo(residual, enc)
    result, config = _run_solver(args, pbp)
    report = _finish_report(
        args, _digest(args.scenario), args.solver, config,
        result.minimizers[0], result.best_value, residual, enc,
        minimizer_count=len(result.minimizers),
        extras={
            "completed_sectors": args.completed,
            "elapsed": args.elapsed,
            "new_rta": args.rta,
            "residual_rta": residual.rta,
            "remaining_sectors": residual.num_sectors,
        },
    )
    sys.stdout.write(report.render(args.format))
    return 0


def cmd_qaoa(args) -> int:
    scenario, enc = load_scenario(args.scenario)
    pbp, _ = build_linear_qubo(scenario, enc)
    ham = build_diagonal(pbp).rescaled()
    trace_rows: list = []
    params, expectation = qaoa_optimize(ham, p=args.p, restarts=args.restarts,
                                        seed=args.seed, trace=trace_rows)
    state = qaoa_state(ham, params)
    counts = sample(state, args.shots, seed=args.seed)
    modal_bits, modal_count = max(
        counts.items(), key=lambda kv: (kv[1], -sum(b << q for q, b in enumerate(kv[0])))
    )
    _write_trace(args.trace, "iteration,expectation", trace_rows)
    plan = decode(modal_bits, scenario, enc)
    cost = scenario_cost(plan, scenario)
    report = RunReport(
        command=_echo(args),
        scenario_digest=_digest(args.scenario),
        solver="qaoa",
        solver_config={"p": args.p, "restarts": args.restarts,
                       "shots": args.shots, "seed": args.seed},
        best_bitstring=_bitstring(modal_bits),
        best_value=cost.total,
        plan=plan,
        cost=cost,
        extras={
            "expectation_rescaled": expectation,
            "modal_count": modal_count,
            "modal_frequency": modal_count / args.shots,
            "betas": list(params.betas),
            "gammas": list(params.gammas),
            "trace_file": str(args.trace),
        },
    )
    sys.stdout.write(report.render(args.format))
    return 0


def cmd_adiabatic(args) -> int:
    if args.trace_every < 1:
        raise ValueError("--trace-every must be >= 1")
    scenario, enc = load_scenario(args.scenario)
    pbp, _ = build_linear_qubo(scenario, enc)
    ham = build_diagonal(pbp)
    oracle = brute_force(pbp)
    codes = [sum(b << q for q, b in enumerate(bits)) for bits in oracle.minimizers]
    trace_rows: list = []
    every = args.trace_every

    def observer(step: int, t: float, s: float, amplitudes: np.ndarray) -> None:
        if (step + 1) % every == 0 or step == args.steps - 1:
            probs = np.abs(amplitudes) ** 2
            trace_rows.append((t, s, float(sum(probs[c] for c in codes))))

    cfg = AdiabaticConfig(total_time=args.total_time, steps=args.steps)
    state = adiabatic_evolve(ham, cfg, rescale=True, callback=observer)
    overlap = ground_overlap(state, oracle.minimizers)
    _write_trace(args.trace, "t,s,ground_overlap", trace_rows)
    probs = state.probabilities()
    best_code = int(np.argmax(probs))
    bits = tuple((best_code >> q) & 1 for q in range(ham.num_qubits))
    plan = decode(bits, scenario, enc)
    cost = scenario_cost(plan, scenario)
    report = RunReport(
        command=_echo(args),
        scenario_digest=_digest(args.scenario),
        solver="adiabatic",
        solver_config={"T": args.total_time, "steps": args.steps},
        best_bitstring=_bitstring(bits),
        best_value=cost.total,
        minimizer_count=len(oracle.minimizers),
        plan=plan,
        cost=cost,
        extras={
            "ground_overlap": overlap,
            "oracle_best_value": oracle.best_value,
            "most_probable_mass": float(probs[best_code]),
            "trace_file": str(args.trace),
        },
    )
    sys.stdout.write(report.render(args.format))
    return 0


def cmd_landscape(args) -> int:
    scenario, enc = load_scenario(args.scenario)
    rows = landscape(scenario, enc)
    write_landscape_csv(rows, args.out)
    print(f"wrote {args.out}: {len(rows)} rows")
    return 0


# ---------------------------------------------------------------------------
# Parser / entry point
# ---------------------------------------------------------------------------

def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--solver", choices=("brute", "anneal"), default="brute",
                     help="backend: exhaustive oracle or simulated annealing")
    sub.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    sub.add_argument("--sweeps", type=int, default=200, help="annealing sweeps per restart")
    sub.add_argument("--restarts", type=int, default=4, help="annealing restarts")
    sub.add_argument("--t-start", type=float, default=None,
                     help="start temperature (default: max |coefficient|)")
    sub.add_argument("--t-end", type=float, default=None,
                     help="end temperature (default: 1e-3 of start)")
    sub.add_argument("--threads", type=int, default=1, help="worker cap for brute force")
    sub.add_argument("--format", choices=("text", "json"), default="text",
                     help="report format on stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="voyageopt",
        description="Voyage speed optimization for just-in-time arrival: compile "
                    "scenarios to binary polynomials and solve them classically or "
                    "with simulated quantum algorithms.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("validate", help="check a scenario file")
    p.add_argument("scenario")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("build", help="compile a scenario to a problem file")
    p.add_argument("scenario")
    p.add_argument("out")
    p.add_argument("--mode", choices=("linear", "quadratic"), default="linear",
                   help="linear-fuel QUBO or quadratic-fuel higher-order build")
    p.add_argument("--penalty", type=float, default=None,
                   help="reciprocal-consistency penalty weight (quadratic mode)")
    p.add_argument("--quadratize", action="store_true",
                   help="reduce to degree <= 2 with substitution variables")
    p.add_argument("--ising", action="store_true", help="emit the spin-model form")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("solve", help="minimize a scenario or problem file")
    p.add_argument("input", help="scenario file or problem file")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("replan", help="re-solve the remaining route after an RTA change")
    p.add_argument("scenario")
    p.add_argument("--completed", type=int, required=True, help="sectors already sailed")
    p.add_argument("--elapsed", type=float, required=True, help="time already spent")
    p.add_argument("--rta", type=float, required=True, help="new requested arrival time")
    _add_solver_flags(p)
    p.set_defaults(func=cmd_replan)

    p = sub.add_parser("qaoa", help="layered phase/mixer simulation with angle search")
    p.add_argument("scenario")
    p.add_argument("--p", type=int, default=1, help="layer count")
    p.add_argument("--restarts", type=int, default=8, help="random angle restarts")
    p.add_argument("--shots", type=int, default=10000, help="measurement samples")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (default 0)")
    p.add_argument("--trace", default="qaoa_trace.csv", help="expectation trace CSV path")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_qaoa)

    p = sub.add_parser("adiabatic", help="interpolated evolution from the uniform state")
    p.add_argument("scenario")
    p.add_argument("--T", type=float, default=125.0, dest="total_time", help="total evolution time")
    p.add_argument("--steps", type=int, default=4000, help="integrator steps")
    p.add_argument("--trace", default="adiabatic_trace.csv", help="overlap trace CSV path")
    p.add_argument("--trace-every", type=int, default=50, help="record every K steps")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.set_defaults(func=cmd_adiabatic)

    p = sub.add_parser("landscape", help="CSV of minimal cost per reachable arrival time")
    p.add_argument("scenario")
    p.add_argument("out")
    p.set_defaults(func=cmd_landscape)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    args = parser.parse_args(argv)
    args.command_echo = " ".join(argv)
    started = time.perf_counter()
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    finally:
        print(f"wall time: {time.perf_counter() - started:.3f}s", file=sys.stderr)


def run() -> None:
    sys.exit(main())


if __name__ == "__main__":
    run()
