"""Variational quantum linear solver laboratory for the 1D Poisson system.

The package simulates, end to end, a variational solver for the
tridiagonal (2, -1) finite-difference Poisson matrix: a small statevector
circuit simulator (``qsim``), two circuit decompositions of the matrix
(``poisson``), classical reference solvers (``classical``), two
variational ansatz families (``ansatz``), Hadamard-test cost functions
with parameter-shift optimization (``engine``), and a benchmark harness
with deterministic reports (``bench``, ``cli``).
"""
from .ansatz import (
    AnsatzSpec,
    build_ansatz,
    gea_spec,
    hea_spec,
    init_params,
)
from .bench import (
    ExperimentPlan,
    ReportBundle,
    TimeEstimate,
    run_plan,
    scaling_report,
    time_to_solution,
)
from .classical import ClassicalSolution, dense_eigen_sym, dense_matmul, thomas_solve
from .engine import (
    CostEvaluator,
    OptimizerSettings,
    RunConfig,
    RunRecord,
    TermKey,
    beta_term,
    count_unique_circuits,
    enumerate_term_keys,
    gamma_local_term,
    global_cost,
    gradient,
    local_cost,
    optimize,
    trace_distance,
)
from .poisson import (
    Decomposition,
    build_dpem_dense,
    condition_number,
    decomposition_stats,
    get_decomposition,
    hed_terms,
    pauli_projection,
)
from .qsim import (
    Circuit,
    Gate,
    StateVector,
    circuit_to_matrix,
    hadamard_test_exact,
    hadamard_test_sampled,
    run_circuit,
    zero_state,
)

__version__ = "0.1.0"

__all__ = [
    "AnsatzSpec",
    "Circuit",
    "ClassicalSolution",
    "CostEvaluator",
    "Decomposition",
    "ExperimentPlan",
    "Gate",
    "OptimizerSettings",
    "ReportBundle",
    "RunConfig",
    "RunRecord",
    "StateVector",
    "TermKey",
    "TimeEstimate",
    "beta_term",
    "build_ansatz",
    "build_dpem_dense",
    "circuit_to_matrix",
    "condition_number",
    "count_unique_circuits",
    "decomposition_stats",
    "dense_eigen_sym",
    "dense_matmul",
    "enumerate_term_keys",
    "gamma_local_term",
    "gea_spec",
    "get_decomposition",
    "global_cost",
    "gradient",
    "hadamard_test_exact",
    "hadamard_test_sampled",
    "hea_spec",
    "hed_terms",
    "init_params",
    "local_cost",
    "optimize",
    "pauli_projection",
    "run_circuit",
    "run_plan",
    "scaling_report",
    "thomas_solve",
    "time_to_solution",
    "trace_distance",
    "zero_state",
]
