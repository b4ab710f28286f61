"""Command-line interface: run experiment plans and build reports.

Subcommands:

* ``run``      — execute a plan grid (qubits x ansatz x q_delta x seeds)
  and write run logs, summary.csv, and plots under --out
* ``report``   — rebuild summary.csv and plots from an existing --out
  directory's run logs
* ``scaling``  — decomposition term/gate-count and condition-number
  scaling tables and plots (no optimization runs)

A plan can come from a config file of ``key=value`` lines (same names as
the flags, ``#`` comments allowed); explicit flags override file values.
Exit status is 0 whenever the plan completes, even if cells failed to
converge — censored cells are data, not errors.
"""
from __future__ import annotations

import argparse
import sys

from .bench import ExperimentPlan, report_from_directory, run_plan, scaling_report
from .engine import OptimizerSettings

PLAN_DEFAULTS = {
    "name": "plan",
    "qubits": (3, 4, 5, 6, 7, 8, 9),
    "ansatz": "both",
    "cost": "local",
    "mode": "exact",
    "shots": 1_000_000,
    "qdelta": (0.01, 0.1),
    "seeds": 5,
    "epsilon": 0.01,
    "max_iters": 2000,
    "budget_minutes": None,
    "gea_layers": None,
    "hea_layers": 8,
    "optimizer": "bfgs",
}


def parse_qubits(text: str) -> tuple:
    """``"3..9"`` (inclusive range), ``"3,5,7"``, or a single ``"4"``."""
    values = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        if ".." in part:
            lo, hi = part.split("..", 1)
            lo, hi = int(lo), int(hi)
            if hi < lo:
                raise ValueError(f"empty qubit range {part!r}")
            values.extend(range(lo, hi + 1))
        else:
            values.append(int(part))
    if not values:
        raise ValueError("no qubit counts given")
    return tuple(values)


def parse_qdeltas(text: str) -> tuple:
    values = tuple(float(part) for part in text.split(",") if part.strip())
    if not values:
        raise ValueError("no q_delta values given")
    return values


def parse_ansatz(text: str) -> tuple:
    if text == "both":
        return ("gea", "hea")
    if text in ("gea", "hea"):
        return (text,)
    raise ValueError(f"ansatz must be gea, hea, or both, not {text!r}")


def load_config_file(path) -> dict:
    """key=value lines; keys are the flag names with - or _ spelling."""
    values = {}
    with open(path, encoding="utf-8") as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected key=value, got {raw.rstrip()!r}")
            key, value = line.split("=", 1)
            values[key.strip().replace("-", "_")] = value.strip()
    return values


def _coerce(key: str, value):
    """Parse a config-file string into the type the plan builder expects."""
    if not isinstance(value, str):
        return value
    if key == "qubits":
        return parse_qubits(value)
    if key == "qdelta":
        return parse_qdeltas(value)
    if key in ("shots", "seeds", "max_iters", "hea_layers", "gea_layers"):
        return int(value)
    if key in ("epsilon", "budget_minutes"):
        return float(value)
    return value


def build_plan(args) -> ExperimentPlan:
    """Merge defaults, config file, and explicit flags (strongest last)."""
    settings = dict(PLAN_DEFAULTS)
    if args.config:
        for key, value in load_config_file(args.config).items():
            if key not in PLAN_DEFAULTS:
                raise ValueError(f"unknown config key {key!r}")
            settings[key] = _coerce(key, value)
    for key in PLAN_DEFAULTS:
        flag_value = getattr(args, key, None)
        if flag_value is not None:
            settings[key] = _coerce(key, flag_value)
    return ExperimentPlan(
        name=settings["name"],
        qubits=tuple(settings["qubits"]),
        ansatz_kinds=parse_ansatz(settings["ansatz"])
        if isinstance(settings["ansatz"], str)
        else tuple(settings["ansatz"]),
        cost_kind=settings["cost"],
        mode=settings["mode"],
        shots=int(settings["shots"]),
        q_deltas=tuple(settings["qdelta"]),
        seeds_per_cell=int(settings["seeds"]),
        epsilon_target=float(settings["epsilon"]),
        max_iterations=int(settings["max_iters"]),
        budget_minutes=settings["budget_minutes"],
        gea_layers=settings["gea_layers"],
        hea_layers=int(settings["hea_layers"]),
        optimizer=OptimizerSettings(kind=settings["optimizer"]),
    )


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vqls-poisson",
        description="variational linear-solver experiments on the 1D Poisson system",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="execute an experiment plan")
    run.add_argument("--qubits", help="range like 3..9 or comma list like 3,5")
    run.add_argument("--ansatz", choices=("gea", "hea", "both"))
    run.add_argument("--cost", choices=("local", "global"))
    run.add_argument("--mode", choices=("exact", "sampled"))
    run.add_argument("--shots", type=int)
    run.add_argument("--qdelta", help="comma list like 0.01,0.1")
    run.add_argument("--seeds", type=int, help="seeds per cell")
    run.add_argument("--epsilon", type=float, help="target trace distance")
    run.add_argument("--max-iters", type=int, dest="max_iters")
    run.add_argument("--budget-minutes", type=float, dest="budget_minutes")
    run.add_argument("--gea-layers", type=int, dest="gea_layers")
    run.add_argument("--hea-layers", type=int, dest="hea_layers")
    run.add_argument("--optimizer", choices=("bfgs", "adam", "spsa"))
    run.add_argument("--name")
    run.add_argument("--config", help="key=value file; flags override it")
    run.add_argument("--out", default="results", help="output directory")

    report = sub.add_parser("report", help="rebuild summary and plots from run logs")
    report.add_argument("--out", default="results", help="directory holding plan.json and runs/")

    scaling = sub.add_parser("scaling", help="decomposition and kappa scaling report")
    scaling.add_argument("--out", default="results/scaling", help="output directory")

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            bundle = run_plan(build_plan(args), args.out)
            converged = sum(row["converged"] for row in bundle.rows)
            total = sum(row["seeds"] for row in bundle.rows)
            print(f"wrote {bundle.summary_path} ({len(bundle.rows)} cells, "
                  f"{converged}/{total} runs converged)")
        elif args.command == "report":
            bundle = report_from_directory(args.out)
            print(f"wrote {bundle.summary_path} ({len(bundle.rows)} cells)")
        else:
            paths = scaling_report(args.out)
            for name in sorted(paths):
                print(f"wrote {paths[name]}")
    except (OSError, ValueError) as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
