"""Experiment plans, run persistence, summary tables, and scaling reports.

Artifacts written by a plan run under its output directory:

* ``plan.json``                      — the resolved plan
* ``runs/run_n{n}_{ansatz}_qd{q}_s{s}.jsonl`` — one line-delimited log per
  run: a ``config`` line, one ``iteration`` line per optimizer iteration,
  and a ``final`` line
* ``summary.csv``                    — one row per plan cell (n, ansatz,
  q_delta), fixed column order (``SUMMARY_COLUMNS``); never contains wall
  times, so re-running a plan with identical seeds reproduces it
  byte-for-byte in exact mode
* ``plots/*.svg``                    — convergence trajectories per cell
  plus iteration/time scaling figures drawn from the summary data

Projected runtimes use the linear per-circuit time model (default 1.0
minutes per circuit evaluation, half-width 0.5): a simulated run records
the number of Hadamard-test jobs a shot-based backend would execute, and
``time_to_solution`` converts that count to minutes and days.
"""
from __future__ import annotations

import csv
import itertools
import json
import math
import statistics
from dataclasses import asdict, dataclass, field
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
matplotlib.rcParams["svg.hashsalt"] = "vqls-poisson"

import matplotlib.pyplot as plt
import numpy as np

from .ansatz import HEA_DEFAULT_LAYERS, AnsatzSpec, gea_spec, hea_spec
from .engine import OptimizerSettings, RunConfig, RunRecord, optimize
from .poisson import condition_number, decomposition_stats

DEFAULT_TIME_MODEL = (0.5, 1.0, 1.5)  # minutes per circuit evaluation
MINUTES_PER_DAY = 60.0 * 24.0

SUMMARY_COLUMNS = (
    "n",
    "ansatz",
    "layers",
    "parameters",
    "q_delta",
    "cost",
    "mode",
    "optimizer",
    "seeds",
    "converged",
    "timed_out",
    "failed",
    "median_iterations",
    "median_final_cost",
    "median_trace_distance",
    "median_circuit_evaluations",
    "threshold",
    "kappa",
    "minutes_low",
    "minutes_mid",
    "minutes_high",
    "days_mid",
)


# -- time model ---------------------------------------------------------------

@dataclass(frozen=True)
class TimeEstimate:
    """Projected wall time for a run's circuit evaluations."""

    minutes_low: float
    minutes_mid: float
    minutes_high: float

    @property
    def days_low(self) -> float:
        return self.minutes_low / MINUTES_PER_DAY

    @property
    def days_mid(self) -> float:
        return self.minutes_mid / MINUTES_PER_DAY

    @property
    def days_high(self) -> float:
        return self.minutes_high / MINUTES_PER_DAY


def time_to_solution(record, time_model=DEFAULT_TIME_MODEL) -> TimeEstimate:
    """Minutes a shot-based backend would need for a run's circuit jobs.

    ``record`` is a RunRecord (its cumulative circuit-evaluation count is
    used) or a plain evaluation count.  Exact-mode records count the jobs
    sampled mode would have required, so the estimate is meaningful for
    every run.
    """
    if isinstance(record, (int, float)):
        evaluations = float(record)
    else:
        evaluations = float(record.total_circuit_evaluations)
    if evaluations < 0:
        raise ValueError("evaluation count must be >= 0")
    low, mid, high = time_model
    return TimeEstimate(evaluations * low, evaluations * mid, evaluations * high)


# -- plans --------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentPlan:
    """A grid of optimization runs: qubits x ansatz kinds x q_delta values,
    several seeds per cell.

    ``budget_minutes`` models a hardware-queue timeout: it converts to a
    circuit-evaluation budget at the mid time-model rate, and runs that
    exhaust it are censored (flagged timed-out, never an error).
    ``gea_layers=None`` picks the depth the all-pairs ansatz needs to span
    the solution at each size: three layers up to n = 3, n layers beyond.
    """

    name: str = "plan"
    qubits: tuple = (3, 4, 5, 6, 7, 8, 9)
    ansatz_kinds: tuple = ("gea", "hea")
    cost_kind: str = "local"
    mode: str = "exact"
    shots: int = 1_000_000
    q_deltas: tuple = (0.01, 0.1)
    seeds_per_cell: int = 5
    epsilon_target: float = 0.01
    max_iterations: int = 2000
    budget_minutes: float | None = None
    time_model: tuple = DEFAULT_TIME_MODEL
    gea_layers: int | None = None
    hea_layers: int = HEA_DEFAULT_LAYERS
    decomposition: str = "hed"
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)

    def __post_init__(self):
        if not self.qubits or not self.ansatz_kinds or not self.q_deltas:
            raise ValueError("plan needs non-empty qubits, ansatz kinds, and q_deltas")
        if any(kind not in ("gea", "hea") for kind in self.ansatz_kinds):
            raise ValueError("ansatz kinds must be drawn from {'gea', 'hea'}")
        if self.seeds_per_cell < 1 or self.max_iterations < 1:
            raise ValueError("need at least one seed and one iteration")
        if self.budget_minutes is not None and self.budget_minutes <= 0:
            raise ValueError("budget_minutes must be positive")
        if len(self.time_model) != 3 or any(t <= 0 for t in self.time_model):
            raise ValueError("time_model is three positive rates (low, mid, high)")

    def cells(self):
        return list(itertools.product(self.qubits, self.ansatz_kinds, self.q_deltas))

    def ansatz_spec(self, kind: str, n: int) -> AnsatzSpec:
        if kind == "gea":
            layers = self.gea_layers if self.gea_layers is not None else (3 if n <= 3 else n)
            return gea_spec(n, layers=layers)
        return hea_spec(n, layers=self.hea_layers)

    def budget_evaluations(self):
        if self.budget_minutes is None:
            return None
        return max(1, math.floor(self.budget_minutes / self.time_model[1]))

    def run_config(self, n: int, kind: str, q_delta: float, seed: int) -> RunConfig:
        return RunConfig(
            n=n,
            ansatz=self.ansatz_spec(kind, n),
            cost_kind=self.cost_kind,
            mode=self.mode,
            shots=self.shots,
            q_delta=q_delta,
            seed=seed,
            epsilon_target=self.epsilon_target,
            max_iterations=self.max_iterations,
            decomposition=self.decomposition,
            optimizer=self.optimizer,
            budget_evaluations=self.budget_evaluations(),
        )


# -- per-run summaries and persistence ----------------------------------------

@dataclass(frozen=True)
class RunSummary:
    """The slice of one run that the summary table and plots need."""

    n: int
    ansatz: str
    layers: int
    parameters: int
    q_delta: float
    seed: int
    cost_kind: str
    mode: str
    optimizer_kind: str
    converged: bool
    failed: bool
    budget_exhausted: bool
    iterations_to_threshold: int | None
    final_cost: float
    trace_distance: float
    total_circuit_evaluations: int
    threshold: float
    kappa: float
    costs: tuple  # per-iteration trajectory, for plotting

    @classmethod
    def from_record(cls, record: RunRecord) -> "RunSummary":
        config = record.config
        return cls(
            n=config.n,
            ansatz=config.ansatz.kind,
            layers=config.ansatz.layers,
            parameters=config.ansatz.parameter_count,
            q_delta=config.q_delta,
            seed=config.seed,
            cost_kind=config.cost_kind,
            mode=config.mode,
            optimizer_kind=config.optimizer.kind,
            converged=record.converged,
            failed=record.failed,
            budget_exhausted=record.budget_exhausted,
            iterations_to_threshold=record.iterations_to_threshold,
            final_cost=record.final_cost,
            trace_distance=record.final_trace_distance,
            total_circuit_evaluations=record.total_circuit_evaluations,
            threshold=record.threshold,
            kappa=record.kappa,
            costs=tuple(rec.cost for rec in record.iterations),
        )

    @classmethod
    def from_jsonl(cls, path) -> "RunSummary":
        config = final = None
        costs = []
        with open(path, encoding="utf-8") as handle:
            for line in handle:
                line = line.strip()
                if not line:
                    continue
                entry = json.loads(line)
                if entry.get("record") == "config":
                    config = entry
                elif entry.get("record") == "iteration":
                    costs.append(entry["cost"])
                elif entry.get("record") == "final":
                    final = entry
        if config is None or final is None:
            raise ValueError(f"run log {path} is missing its config or final line")
        return cls(
            n=config["n"],
            ansatz=config["ansatz"],
            layers=config["layers"],
            parameters=config["parameters"],
            q_delta=config["q_delta"],
            seed=config["seed"],
            cost_kind=config["cost"],
            mode=config["mode"],
            optimizer_kind=config["optimizer"],
            converged=final["converged"],
            failed=final["failed"],
            budget_exhausted=final.get("budget_exhausted", False),
            iterations_to_threshold=final.get("iterations_to_threshold"),
            final_cost=final.get("final_cost", float("nan")),
            trace_distance=final.get("trace_distance", float("nan")),
            total_circuit_evaluations=final.get("total_circuit_evaluations", 0),
            threshold=config.get("threshold", float("nan")),
            kappa=config.get("kappa", float("nan")),
            costs=tuple(costs),
        )


def run_file_name(n: int, kind: str, q_delta: float, seed: int) -> str:
    return f"run_n{n}_{kind}_qd{q_delta:g}_s{seed}.jsonl"


def write_run_record(record: RunRecord, path) -> None:
    config = record.config
    lines = [
        {
            "record": "config",
            "n": config.n,
            "ansatz": config.ansatz.kind,
            "layers": config.ansatz.layers,
            "parameters": config.ansatz.parameter_count,
            "cost": config.cost_kind,
            "mode": config.mode,
            "shots": config.shots,
            "q_delta": config.q_delta,
            "seed": config.seed,
            "epsilon_target": config.epsilon_target,
            "max_iterations": config.max_iterations,
            "decomposition": config.decomposition,
            "optimizer": config.optimizer.kind,
            "budget_evaluations": config.budget_evaluations,
            "threshold": record.threshold,
            "kappa": record.kappa,
        }
    ]
    for rec in record.iterations:
        lines.append(
            {
                "record": "iteration",
                "index": rec.index,
                "cost": rec.cost,
                "theta": list(rec.theta),
                "circuit_evaluations": rec.circuit_evaluations,
            }
        )
    lines.append(
        {
            "record": "final",
            "converged": record.converged,
            "failed": record.failed,
            "budget_exhausted": record.budget_exhausted,
            "final_cost": record.final_cost,
            "final_theta": list(record.final_theta),
            "trace_distance": record.final_trace_distance,
            "iterations_to_threshold": record.iterations_to_threshold,
            "total_circuit_evaluations": record.total_circuit_evaluations,
            "wall_time_seconds": record.wall_time_seconds,
        }
    )
    with open(path, "w", encoding="utf-8") as handle:
        for entry in lines:
            handle.write(json.dumps(entry, sort_keys=True, allow_nan=True) + "\n")


def _failed_summary(plan: ExperimentPlan, n, kind, q_delta, seed) -> RunSummary:
    spec = plan.ansatz_spec(kind, n)
    return RunSummary(
        n=n,
        ansatz=kind,
        layers=spec.layers,
        parameters=spec.parameter_count,
        q_delta=q_delta,
        seed=seed,
        cost_kind=plan.cost_kind,
        mode=plan.mode,
        optimizer_kind=plan.optimizer.kind,
        converged=False,
        failed=True,
        budget_exhausted=False,
        iterations_to_threshold=None,
        final_cost=float("nan"),
        trace_distance=float("nan"),
        total_circuit_evaluations=0,
        threshold=float("nan"),
        kappa=float("nan"),
        costs=(),
    )


def _write_failed_run(plan, n, kind, q_delta, seed, error, path) -> None:
    spec = plan.ansatz_spec(kind, n)
    config_line = {
        "record": "config",
        "n": n,
        "ansatz": kind,
        "layers": spec.layers,
        "parameters": spec.parameter_count,
        "cost": plan.cost_kind,
        "mode": plan.mode,
        "shots": plan.shots,
        "q_delta": q_delta,
        "seed": seed,
        "epsilon_target": plan.epsilon_target,
        "max_iterations": plan.max_iterations,
        "decomposition": plan.decomposition,
        "optimizer": plan.optimizer.kind,
        "budget_evaluations": plan.budget_evaluations(),
        "threshold": float("nan"),
        "kappa": float("nan"),
    }
    final_line = {
        "record": "final",
        "converged": False,
        "failed": True,
        "budget_exhausted": False,
        "error": str(error),
        "final_cost": float("nan"),
        "final_theta": [],
        "trace_distance": float("nan"),
        "iterations_to_threshold": None,
        "total_circuit_evaluations": 0,
        "wall_time_seconds": 0.0,
    }
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(json.dumps(config_line, sort_keys=True, allow_nan=True) + "\n")
        handle.write(json.dumps(final_line, sort_keys=True, allow_nan=True) + "\n")


# -- summary table ------------------------------------------------------------

def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return repr(value)
    return str(value)


def summarize(plan: ExperimentPlan, summaries) -> list:
    """One row per plan cell, aggregating that cell's seeds.

    Medians of iterations-to-threshold cover converged runs only; cost,
    distance, and evaluation medians cover every non-failed run.  Cells
    whose runs all failed leave their numeric fields empty.
    """
    by_cell = {}
    for summary in summaries:
        by_cell.setdefault((summary.n, summary.ansatz, summary.q_delta), []).append(summary)
    rows = []
    for n, kind, q_delta in plan.cells():
        cell_runs = sorted(by_cell.get((n, kind, q_delta), []), key=lambda s: s.seed)
        if not cell_runs:
            continue
        alive = [s for s in cell_runs if not s.failed]
        converged = [s for s in alive if s.converged]
        timed_out = [s for s in alive if not s.converged]
        median_iterations = (
            float(statistics.median([s.iterations_to_threshold for s in converged]))
            if converged
            else None
        )
        if alive:
            median_cost = float(statistics.median([s.final_cost for s in alive]))
            median_distance = float(statistics.median([s.trace_distance for s in alive]))
            median_evals = float(
                statistics.median([s.total_circuit_evaluations for s in alive])
            )
            estimate = time_to_solution(median_evals, plan.time_model)
            threshold = cell_runs[0].threshold
            kappa = cell_runs[0].kappa
        else:
            median_cost = median_distance = median_evals = None
            estimate = None
            threshold = kappa = None
        sample = cell_runs[0]
        row = {
            "n": n,
            "ansatz": kind,
            "layers": sample.layers,
            "parameters": sample.parameters,
            "q_delta": q_delta,
            "cost": plan.cost_kind,
            "mode": plan.mode,
            "optimizer": plan.optimizer.kind,
            "seeds": len(cell_runs),
            "converged": len(converged),
            "timed_out": len(timed_out),
            "failed": len(cell_runs) - len(alive),
            "median_iterations": median_iterations,
            "median_final_cost": median_cost,
            "median_trace_distance": median_distance,
            "median_circuit_evaluations": median_evals,
            "threshold": threshold,
            "kappa": kappa,
            "minutes_low": estimate.minutes_low if estimate else None,
            "minutes_mid": estimate.minutes_mid if estimate else None,
            "minutes_high": estimate.minutes_high if estimate else None,
            "days_mid": estimate.days_mid if estimate else None,
        }
        rows.append(row)
    return rows


def write_summary_csv(rows, path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(SUMMARY_COLUMNS) + "\n")
        for row in rows:
            handle.write(",".join(_format_cell(row[col]) for col in SUMMARY_COLUMNS) + "\n")


def read_summary_csv(path) -> list:
    with open(path, encoding="utf-8", newline="") as handle:
        return list(csv.DictReader(handle))


# -- plots ---------------------------------------------------------------------

_SAVEFIG_KWARGS = {"format": "svg", "metadata": {"Date": None}}


def _plot_convergence(cell_runs, threshold, title, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    for summary in cell_runs:
        if summary.costs:
            ax.semilogy(range(len(summary.costs)), summary.costs,
                        label=f"seed {summary.seed}")
    if threshold and math.isfinite(threshold):
        ax.axhline(threshold, color="black", linestyle=":", linewidth=1.0,
                   label="threshold")
    ax.set_xlabel("iteration")
    ax.set_ylabel("cost")
    ax.set_title(title)
    handles, _ = ax.get_legend_handles_labels()
    if handles:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def _plot_iterations(rows, path) -> None:
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series = {}
    for row in rows:
        if row["median_iterations"] is None:
            continue
        series.setdefault((row["ansatz"], row["q_delta"]), []).append(
            (row["n"], row["median_iterations"])
        )
    for (kind, q_delta), points in sorted(series.items()):
        points.sort()
        ax.plot([p[0] for p in points], [p[1] for p in points], marker="o",
                label=f"{kind} qd={q_delta:g}")
    ax.set_xlabel("qubits")
    ax.set_ylabel("median iterations to threshold")
    ax.set_title("iterations to convergence")
    if series:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)


def _plot_days(rows, path) -> None:
    """Median projected days per cell, with a least-squares extrapolation
    (log2 days vs n, converged cells only) drawn dashed for the series
    that have unconverged sizes."""
    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    series = {}
    for row in rows:
        series.setdefault((row["ansatz"], row["q_delta"]), []).append(row)
    for (kind, q_delta), cell_rows in sorted(series.items()):
        cell_rows.sort(key=lambda r: r["n"])
        label = f"{kind} qd={q_delta:g}"
        solved = [r for r in cell_rows if r["converged"] > 0 and r["days_mid"]]
        if solved:
            ax.semilogy([r["n"] for r in solved], [r["days_mid"] for r in solved],
                        marker="o", label=label)
        pending = [r for r in cell_rows if r["converged"] == 0]
        if len(solved) >= 2 and pending:
            xs = np.array([r["n"] for r in solved], dtype=float)
            ys = np.log2([r["days_mid"] for r in solved])
            slope, intercept = np.polyfit(xs, ys, 1)
            px = np.array([r["n"] for r in pending], dtype=float)
            ax.semilogy(px, 2.0 ** (slope * px + intercept), marker="s",
                        linestyle="--", fillstyle="none",
                        label=f"{label} least-squares extrapolation")
    ax.set_xlabel("qubits")
    ax.set_ylabel("projected days (mid rate)")
    ax.set_title("projected time to solution")
    handles, _ = ax.get_legend_handles_labels()
    if handles:
        ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, **_SAVEFIG_KWARGS)
    plt.close(fig)


# -- plan execution ------------------------------------------------------------

@dataclass(frozen=True)
class ReportBundle:
    plan: ExperimentPlan
    out_dir: Path
    run_paths: tuple
    summary_path: Path
    plot_paths: tuple
    rows: tuple


def _assemble_report(plan, summaries, out_dir, run_paths) -> ReportBundle:
    out_dir = Path(out_dir)
    rows = summarize(plan, summaries)
    summary_path = out_dir / "summary.csv"
    write_summary_csv(rows, summary_path)

    plots_dir = out_dir / "plots"
    plots_dir.mkdir(parents=True, exist_ok=True)
    plot_paths = []
    by_cell = {}
    for summary in summaries:
        by_cell.setdefault((summary.n, summary.ansatz, summary.q_delta), []).append(summary)
    for (n, kind, q_delta), cell_runs in sorted(by_cell.items()):
        cell_runs.sort(key=lambda s: s.seed)
        path = plots_dir / f"convergence_n{n}_{kind}_qd{q_delta:g}.svg"
        threshold = cell_runs[0].threshold
        _plot_convergence(cell_runs, threshold, f"n={n} {kind} qd={q_delta:g}", path)
        plot_paths.append(path)
    iterations_path = plots_dir / "iterations_vs_qubits.svg"
    _plot_iterations(rows, iterations_path)
    plot_paths.append(iterations_path)
    days_path = plots_dir / "days_vs_qubits.svg"
    _plot_days(rows, days_path)
    plot_paths.append(days_path)

    return ReportBundle(
        plan=plan,
        out_dir=out_dir,
        run_paths=tuple(run_paths),
        summary_path=summary_path,
        plot_paths=tuple(plot_paths),
        rows=tuple(rows),
    )


def run_plan(plan: ExperimentPlan, out_dir) -> ReportBundle:
    """Execute every cell x seed of the plan and write the full bundle.

    Individual run failures are recorded in their run file and counted in
    the summary's ``failed`` column; they never abort the plan.
    """
    out_dir = Path(out_dir)
    runs_dir = out_dir / "runs"
    runs_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "plan.json", "w", encoding="utf-8") as handle:
        json.dump(asdict(plan), handle, indent=2, sort_keys=True)
        handle.write("\n")

    summaries = []
    run_paths = []
    for n, kind, q_delta in plan.cells():
        for seed in range(plan.seeds_per_cell):
            path = runs_dir / run_file_name(n, kind, q_delta, seed)
            try:
                record = optimize(plan.run_config(n, kind, q_delta, seed))
                write_run_record(record, path)
                summaries.append(RunSummary.from_record(record))
            except Exception as error:  # recorded, not fatal
                _write_failed_run(plan, n, kind, q_delta, seed, error, path)
                summaries.append(_failed_summary(plan, n, kind, q_delta, seed))
            run_paths.append(path)
    return _assemble_report(plan, summaries, out_dir, run_paths)


def plan_from_json(path) -> ExperimentPlan:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    data["qubits"] = tuple(data["qubits"])
    data["ansatz_kinds"] = tuple(data["ansatz_kinds"])
    data["q_deltas"] = tuple(data["q_deltas"])
    data["time_model"] = tuple(data["time_model"])
    data["optimizer"] = OptimizerSettings(**data["optimizer"])
    return ExperimentPlan(**data)


def report_from_directory(out_dir) -> ReportBundle:
    """Rebuild summary.csv and the plots from an existing runs/ directory."""
    out_dir = Path(out_dir)
    plan = plan_from_json(out_dir / "plan.json")
    run_paths = sorted((out_dir / "runs").glob("run_*.jsonl"))
    if not run_paths:
        raise FileNotFoundError(f"no run logs under {out_dir / 'runs'}")
    summaries = [RunSummary.from_jsonl(path) for path in run_paths]
    return _assemble_report(plan, summaries, out_dir, run_paths)


# -- decomposition / condition-number scaling report ---------------------------

def scaling_report(out_dir) -> dict:
    """Term-count, gate-count, and condition-number scaling tables + plots.

    The four-term decomposition holds a constant term count at every size
    (tabulated for n = 2..12) while the Pauli projection doubles per qubit
    (measured for n = 2..6, where the 4^n-string projection stays cheap);
    gate counts follow n^2 - 1 for the permutation block against constant
    1 and 2n+2 for the other two circuits; kappa grows exponentially.
    """
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    decomposition_rows = []
    for n in range(2, 13):
        hed = decomposition_stats("hed", n)
        pauli_terms = decomposition_stats("pauli", n).term_count if n <= 6 else None
        decomposition_rows.append(
            {
                "n": n,
                "hed_terms": hed.term_count,
                "hed_max_gates": hed.max_circuit_gates,
                "l1_gates": 1,
                "l3_gates": 2 * n + 2,
                "pauli_terms": pauli_terms,
            }
        )
    decomposition_csv = out_dir / "decomposition_scaling.csv"
    columns = ("n", "hed_terms", "hed_max_gates", "l1_gates", "l3_gates", "pauli_terms")
    with open(decomposition_csv, "w", encoding="utf-8", newline="") as handle:
        handle.write(",".join(columns) + "\n")
        for row in decomposition_rows:
            handle.write(",".join(_format_cell(row[col]) for col in columns) + "\n")

    kappa_rows = [{"n": n, "kappa": condition_number(n)} for n in range(1, 10)]
    kappa_csv = out_dir / "condition_numbers.csv"
    with open(kappa_csv, "w", encoding="utf-8", newline="") as handle:
        handle.write("n,kappa,log2_kappa\n")
        for row in kappa_rows:
            handle.write(
                f"{row['n']},{_format_cell(row['kappa'])},"
                f"{_format_cell(math.log2(row['kappa']))}\n"
            )

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    pauli_ns = [r["n"] for r in decomposition_rows if r["pauli_terms"] is not None]
    pauli_counts = [r["pauli_terms"] for r in decomposition_rows if r["pauli_terms"] is not None]
    ax.semilogy(pauli_ns, pauli_counts, marker="o", label="pauli projection")
    ax.semilogy(
        [r["n"] for r in decomposition_rows],
        [r["hed_terms"] for r in decomposition_rows],
        marker="s",
        label="four-term decomposition",
    )
    ax.set_xlabel("qubits")
    ax.set_ylabel("terms")
    ax.set_title("decomposition term count")
    ax.legend(fontsize=8)
    fig.tight_layout()
    terms_plot = out_dir / "terms_vs_qubits.svg"
    fig.savefig(terms_plot, **_SAVEFIG_KWARGS)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ns = [r["n"] for r in decomposition_rows]
    ax.plot(ns, [r["hed_max_gates"] for r in decomposition_rows], marker="o",
            label="permutation block (n^2 - 1)")
    ax.plot(ns, [r["l3_gates"] for r in decomposition_rows], marker="s",
            label="phase block (2n + 2)")
    ax.plot(ns, [r["l1_gates"] for r in decomposition_rows], marker="^",
            label="single-gate block")
    ax.set_xlabel("qubits")
    ax.set_ylabel("gates")
    ax.set_title("circuit depth per decomposition term")
    ax.legend(fontsize=8)
    fig.tight_layout()
    gates_plot = out_dir / "gates_vs_qubits.svg"
    fig.savefig(gates_plot, **_SAVEFIG_KWARGS)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6.0, 4.0))
    ax.semilogy([r["n"] for r in kappa_rows], [r["kappa"] for r in kappa_rows],
                marker="o", base=2)
    ax.set_xlabel("qubits")
    ax.set_ylabel("condition number")
    ax.set_title("condition number scaling")
    fig.tight_layout()
    kappa_plot = out_dir / "kappa_vs_qubits.svg"
    fig.savefig(kappa_plot, **_SAVEFIG_KWARGS)
    plt.close(fig)

    return {
        "decomposition_csv": decomposition_csv,
        "condition_csv": kappa_csv,
        "terms_plot": terms_plot,
        "gates_plot": gates_plot,
        "kappa_plot": kappa_plot,
    }
