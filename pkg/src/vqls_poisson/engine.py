"""Variational solver engine: cost functions, gradients, optimization loop.

The solver minimizes a normalized cost over ansatz parameters theta, where
|Phi> = A V(theta)|0> and |b> = H^{\\otimes n}|0>:

* global cost  C_G = 1 - |<b|Phi>|^2 / <Phi|Phi>
* local cost   C_L = 1/2 - (1/2n) * num / den   with
  num = sum_{l,l',j} c_l c_l' Re<0|V† A_l† U Z_j U† A_l' V|0>  and
  den = sum_{l,l'}   c_l c_l' Re<0|V† A_l† A_l' V|0>

Every matrix element maps to one Hadamard-test circuit.  Three symmetries
cut the circuit count: the denominator diagonal is exactly 1 (terms are
unitary), and both the beta and gamma families are symmetric under l <-> l',
so only canonical keys with l <= l' are ever evaluated.  For a c-term
decomposition the local cost then needs N_q = c*(n*(c+1) + c - 1)/2 unique
circuits per evaluation (10n + 6 for the four-term decomposition).

Circuit-evaluation accounting uses the same N_q in exact mode as in sampled
mode: exact evaluations count the jobs a shot-based backend *would* run, so
time-to-solution estimates are meaningful for every run record.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from .ansatz import AnsatzSpec, build_ansatz, init_params
from .classical import thomas_solve
from .poisson import Decomposition, condition_number, get_decomposition
from .qsim import (
    Circuit,
    StateVector,
    circuit_to_matrix,
    hadamard_test_exact,
    hadamard_test_sampled,
    run_circuit,
)

COST_KINDS = ("local", "global")
EVALUATION_MODES = ("exact", "sampled")
TERM_FAMILIES = ("beta", "gamma_local", "gamma_global")


# -- term bookkeeping ---------------------------------------------------------

@dataclass(frozen=True)
class TermKey:
    """Canonical identifier of one unique Hadamard-test circuit.

    beta:         Re<0|V† A_l† A_l' V|0>            (l < l_prime; the
                  diagonal l = l_prime is exactly 1 and never enqueued)
    gamma_local:  Re<0|V† A_l† U Z_j U† A_l' V|0>   (l <= l_prime, j < n)
    gamma_global: Re<0|U† A_l V|0>                  (single index l)
    """

    family: str
    l: int
    l_prime: int | None = None
    j: int | None = None

    def __post_init__(self):
        if self.family not in TERM_FAMILIES:
            raise ValueError(f"unknown term family {self.family!r}")
        if self.family == "beta":
            if self.j is not None or self.l_prime is None or self.l >= self.l_prime:
                raise ValueError("beta keys need l < l_prime and no j")
        elif self.family == "gamma_local":
            if self.j is None or self.l_prime is None or self.l > self.l_prime:
                raise ValueError("gamma_local keys need l <= l_prime and a j")
        elif self.l_prime is not None or self.j is not None:
            raise ValueError("gamma_global keys carry a single term index")

    def sort_key(self):
        return (
            TERM_FAMILIES.index(self.family),
            self.l,
            -1 if self.l_prime is None else self.l_prime,
            -1 if self.j is None else self.j,
        )


def beta_key(l: int, l_prime: int) -> TermKey:
    lo, hi = sorted((l, l_prime))
    return TermKey("beta", lo, hi)


def gamma_local_key(l: int, l_prime: int, j: int) -> TermKey:
    lo, hi = sorted((l, l_prime))
    return TermKey("gamma_local", lo, hi, j)


def enumerate_term_keys(num_terms: int, n: int, cost_kind: str) -> tuple[TermKey, ...]:
    """Every unique circuit one cost evaluation needs, in canonical order."""
    if cost_kind not in COST_KINDS:
        raise ValueError(f"unknown cost kind {cost_kind!r}")
    keys = [beta_key(l, lp) for l in range(num_terms) for lp in range(l + 1, num_terms)]
    if cost_kind == "local":
        keys += [
            gamma_local_key(l, lp, j)
            for l in range(num_terms)
            for lp in range(l, num_terms)
            for j in range(n)
        ]
    else:
        keys += [TermKey("gamma_global", l) for l in range(num_terms)]
    return tuple(sorted(keys, key=TermKey.sort_key))


def count_unique_circuits(num_terms: int, n: int) -> int:
    """Closed form for the local-cost circuit count: c*(n*(c+1) + c - 1)/2.

    Exact integer arithmetic; the product is always even (for odd c both
    n*(c+1) and c-1 are even).  Equals len(enumerate_term_keys(c, n,
    "local")) — an identity the test suite checks exhaustively.
    """
    if num_terms < 1 or n < 1:
        raise ValueError("need num_terms >= 1 and n >= 1")
    product = num_terms * (n * (num_terms + 1) + num_terms - 1)
    if product % 2:
        raise AssertionError("circuit-count product must be even")
    return product // 2


# -- configuration ------------------------------------------------------------

@dataclass(frozen=True)
class OptimizerSettings:
    """Optimizer choice and hyperparameters.

    ``bfgs`` (default) drives scipy's L-BFGS-B with the exact parameter-shift
    gradient; it is the only optimizer here whose line search reliably
    escapes the shallow attractor the near-zero initializations fall into.
    ``adam`` is the plain first-order baseline (step 0.05, standard moment
    decay); ``spsa`` estimates gradients from two perturbed cost evaluations
    and is the shot-frugal choice for sampled mode.
    """

    kind: str = "bfgs"
    learning_rate: float = 0.05
    beta1: float = 0.9
    beta2: float = 0.999
    adam_epsilon: float = 1e-8
    spsa_a: float = 0.2
    spsa_c: float = 0.1
    spsa_alpha: float = 0.602
    spsa_gamma: float = 0.101
    spsa_stability: float = 10.0

    def __post_init__(self):
        if self.kind not in ("bfgs", "adam", "spsa"):
            raise ValueError(f"unknown optimizer kind {self.kind!r}")


@dataclass(frozen=True)
class RunConfig:
    """Complete description of one optimization run.

    ``initial_theta`` warm-starts the optimizer from an explicit parameter
    vector instead of the seeded normal draw — useful for resuming or for
    starting inside a known basin.
    """

    n: int
    ansatz: AnsatzSpec
    cost_kind: str = "local"
    mode: str = "exact"
    shots: int = 1_000_000
    q_delta: float = 0.01
    seed: int = 0
    epsilon_target: float = 0.01
    max_iterations: int = 2000
    decomposition: str = "hed"
    optimizer: OptimizerSettings = field(default_factory=OptimizerSettings)
    budget_evaluations: int | None = None
    initial_theta: tuple | None = None

    def __post_init__(self):
        if self.ansatz.n != self.n:
            raise ValueError("ansatz qubit count must match config.n")
        if self.cost_kind not in COST_KINDS:
            raise ValueError(f"unknown cost kind {self.cost_kind!r}")
        if self.mode not in EVALUATION_MODES:
            raise ValueError(f"unknown evaluation mode {self.mode!r}")
        if not 0.0 < self.epsilon_target < 1.0:
            raise ValueError("epsilon_target must be in (0, 1)")
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.initial_theta is not None:
            theta = np.asarray(self.initial_theta, dtype=float)
            if theta.shape != (self.ansatz.parameter_count,):
                raise ValueError("initial_theta length must match the parameter count")
            if not np.all(np.isfinite(theta)):
                raise ValueError("initial_theta must be finite")


@dataclass(frozen=True)
class CostBreakdown:
    """Per-term values behind one cost evaluation."""

    numerator: float
    denominator: float
    term_values: dict
    unique_circuit_count: int


@dataclass(frozen=True)
class IterationRecord:
    index: int
    cost: float
    theta: tuple
    circuit_evaluations: int  # cumulative at the time of this record


@dataclass
class RunRecord:
    """Full trajectory and outcome of one optimization run."""

    config: RunConfig
    iterations: list
    converged: bool
    failed: bool
    budget_exhausted: bool
    final_cost: float
    final_theta: tuple
    final_trace_distance: float
    threshold: float
    kappa: float
    total_circuit_evaluations: int
    wall_time_seconds: float

    @property
    def iterations_to_threshold(self):
        """Index of the first iteration below threshold, or None."""
        for rec in self.iterations:
            if rec.cost < self.threshold:
                return rec.index
        return None


def convergence_threshold(cost_kind: str, n: int, kappa: float, epsilon_target: float) -> float:
    """gamma such that cost < gamma guarantees trace distance <= epsilon_target.

    From the operational bounds C_G >= eps^2/kappa^2 and C_L >= eps^2/(n kappa^2):
    pushing the cost below the corresponding bound at eps = epsilon_target
    certifies the distance.
    """
    if cost_kind == "local":
        return epsilon_target**2 / (n * kappa**2)
    return epsilon_target**2 / kappa**2


def trace_distance(state_a: StateVector, state_b: StateVector) -> float:
    """(1/2) Tr |rho_a - rho_b| for pure states: sqrt(1 - |<a|b>|^2)."""
    if state_a.n != state_b.n:
        raise ValueError("qubit-count mismatch")
    for s in (state_a, state_b):
        if abs(s.norm() - 1.0) > 1e-8:
            raise ValueError("states must be normalized")
    overlap = abs(state_a.inner(state_b)) ** 2
    return math.sqrt(max(0.0, 1.0 - overlap))


# -- cost evaluation ----------------------------------------------------------

def _u_b_circuit(n: int) -> Circuit:
    circ = Circuit(n)
    for q in range(n):
        circ.h(q)
    return circ


class CostEvaluator:
    """Evaluates one run's cost function and its parameter-shift gradient.

    The evaluator owns the circuit-evaluation accounting.  Each distinct
    theta evaluated costs ``unique_circuit_count`` modeled circuit jobs
    (identically in exact and sampled mode); re-evaluations of a theta whose
    values are still cached are free, which makes the per-iteration
    bookkeeping of the optimizers exact: one Adam iteration costs
    N_q + 2*len(theta)*N_q jobs (one cost evaluation plus two shifted
    evaluations per parameter).

    Sampled-mode estimates are deterministic: the RNG stream of each
    Hadamard-test job is derived from (run seed, evaluation counter, key
    index), so identical configs reproduce identical trajectories.
    """

    def __init__(self, config: RunConfig):
        if config.mode == "exact" and config.n > 10:
            raise ValueError("exact mode uses dense term matrices; n capped at 10")
        self.config = config
        self.decomposition: Decomposition = get_decomposition(config.decomposition, config.n)
        self.coefficients = self.decomposition.coefficients.astype(float)
        self.keys = enumerate_term_keys(len(self.coefficients), config.n, config.cost_kind)
        self.unique_circuit_count = len(self.keys)
        self.u_b = _u_b_circuit(config.n)
        self.evaluation_count = 0
        self.circuit_evaluations = 0
        self._term_circuits = [t.circuit for t in self.decomposition.terms]
        if config.mode == "exact":
            self._term_matrices = [circuit_to_matrix(c) for c in self._term_circuits]
            self._u_b_matrix = circuit_to_matrix(self.u_b)
            idx = np.arange(2**config.n)
            self._z_masks = np.array(
                [1.0 - 2.0 * ((idx >> j) & 1) for j in range(config.n)]
            )
        self._cache: dict[bytes, tuple] = {}

    # .. internals ..........................................................

    def _ansatz_state(self, theta: np.ndarray) -> np.ndarray:
        return run_circuit(build_ansatz(self.config.ansatz, theta)).amps

    def _values_exact(self, theta: np.ndarray) -> dict:
        """All canonical term values from one statevector pass."""
        c = self.coefficients
        psi = self._ansatz_state(theta)
        phi = np.stack([m @ psi for m in self._term_matrices])  # (c, N)
        beta = np.real(phi.conj() @ phi.T)
        values = {}
        for l in range(len(c)):
            for lp in range(l + 1, len(c)):
                values[beta_key(l, lp)] = float(beta[l, lp])
        if self.config.cost_kind == "local":
            w = phi @ self._u_b_matrix.conj()  # rows are U† A_l V |0>
            for j in range(self.config.n):
                gj = np.real(np.einsum("lk,k,mk->lm", w.conj(), self._z_masks[j], w))
                for l in range(len(c)):
                    for lp in range(l, len(c)):
                        values[gamma_local_key(l, lp, j)] = float(gj[l, lp])
        else:
            g = np.real(phi @ self._u_b_matrix.conj()[:, 0])  # <b|A_l V|0> = row . col0
            for l in range(len(c)):
                values[TermKey("gamma_global", l)] = float(g[l])
        return values

    def _tested_circuit(self, key: TermKey, ansatz_circuit: Circuit) -> tuple[Circuit, Circuit]:
        """(prepared, tested) circuits whose Hadamard test yields the key's value."""
        circs = self._term_circuits
        n = self.config.n
        if key.family == "beta":
            tested = circs[key.l_prime].then(circs[key.l].adjoint())
            return ansatz_circuit, tested
        if key.family == "gamma_local":
            tested = (
                circs[key.l_prime]
                .then(self.u_b.adjoint())
                .then(Circuit(n).z(key.j))
                .then(self.u_b)
                .then(circs[key.l].adjoint())
            )
            return ansatz_circuit, tested
        # gamma_global: Re<0| U† A_l V |0> — prepared state is |0>
        tested = ansatz_circuit.then(circs[key.l]).then(self.u_b.adjoint())
        return Circuit(n), tested

    def _values_sampled(self, theta: np.ndarray) -> dict:
        ansatz_circuit = build_ansatz(self.config.ansatz, theta)
        values = {}
        for key_index, key in enumerate(self.keys):
            prepared, tested = self._tested_circuit(key, ansatz_circuit)
            seed = np.random.SeedSequence(
                [int(self.config.seed), int(self.evaluation_count), int(key_index)]
            )
            values[key] = hadamard_test_sampled(prepared, tested, self.config.shots, seed)
        return values

    def _assemble(self, values: dict) -> tuple[float, float]:
        """(numerator, denominator) from canonical term values."""
        c = self.coefficients
        den = float(np.sum(c * c))  # beta diagonal is exactly 1
        for l in range(len(c)):
            for lp in range(l + 1, len(c)):
                den += 2.0 * c[l] * c[lp] * values[beta_key(l, lp)]
        if self.config.cost_kind == "local":
            num = 0.0
            for j in range(self.config.n):
                for l in range(len(c)):
                    num += c[l] * c[l] * values[gamma_local_key(l, l, j)]
                    for lp in range(l + 1, len(c)):
                        num += 2.0 * c[l] * c[lp] * values[gamma_local_key(l, lp, j)]
        else:
            overlap = sum(c[l] * values[TermKey("gamma_global", l)] for l in range(len(c)))
            num = overlap**2
        return float(num), float(den)

    def _cost_from_numden(self, num: float, den: float) -> float:
        if den <= 1e-14:
            raise ArithmeticError("degenerate denominator: A|psi> vanished")
        if self.config.cost_kind == "local":
            return 0.5 - num / (2.0 * self.config.n * den)
        return 1.0 - num / den

    def _evaluate(self, theta: np.ndarray) -> tuple:
        """(num, den, values) for theta, cached; counts one evaluation on miss."""
        theta = np.asarray(theta, dtype=float)
        key = theta.tobytes()
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        values = (
            self._values_exact(theta)
            if self.config.mode == "exact"
            else self._values_sampled(theta)
        )
        num, den = self._assemble(values)
        self.evaluation_count += 1
        self.circuit_evaluations += self.unique_circuit_count
        if len(self._cache) > 256:
            self._cache.clear()
        self._cache[key] = (num, den, values)
        return num, den, values

    # .. public surface .....................................................

    def cost(self, theta) -> float:
        num, den, _ = self._evaluate(theta)
        return self._cost_from_numden(num, den)

    def cost_with_breakdown(self, theta) -> tuple[float, CostBreakdown]:
        num, den, values = self._evaluate(theta)
        breakdown = CostBreakdown(
            numerator=num,
            denominator=den,
            term_values=dict(values),
            unique_circuit_count=self.unique_circuit_count,
        )
        return self._cost_from_numden(num, den), breakdown

    def gradient(self, theta) -> np.ndarray:
        """Exact two-point parameter-shift gradient.

        Numerator and denominator are both single-frequency trigonometric
        polynomials in each angle (they are quadratic forms in the ansatz
        state), so N'(t) = [N(t+pi/2) - N(t-pi/2)]/2 is exact; the cost
        derivative then follows from the quotient rule around the base
        evaluation, which is reused from the preceding cost call.
        """
        theta = np.asarray(theta, dtype=float)
        num0, den0, _ = self._evaluate(theta)
        grad = np.empty_like(theta)
        for i in range(len(theta)):
            shifted = theta.copy()
            shifted[i] += 0.5 * math.pi
            num_plus, den_plus, _ = self._evaluate(shifted)
            shifted[i] = theta[i] - 0.5 * math.pi
            num_minus, den_minus, _ = self._evaluate(shifted)
            dnum = 0.5 * (num_plus - num_minus)
            dden = 0.5 * (den_plus - den_minus)
            quotient = (dnum * den0 - num0 * dden) / (den0 * den0)
            if self.config.cost_kind == "local":
                grad[i] = -quotient / (2.0 * self.config.n)
            else:
                grad[i] = -quotient
        return grad


# -- spec-level helpers (single term values) ----------------------------------

def beta_term(
    decomposition: Decomposition,
    ansatz_circuit: Circuit,
    l: int,
    l_prime: int,
    mode: str = "exact",
    shots: int = 1_000_000,
    seed: int = 0,
) -> float:
    """Re<0|V† A_l† A_l' V|0>; exactly 1 (no circuit) when l = l_prime."""
    if l == l_prime:
        return 1.0
    circs = [t.circuit for t in decomposition.terms]
    tested = circs[l_prime].then(circs[l].adjoint())
    if mode == "exact":
        return hadamard_test_exact(ansatz_circuit, tested)
    return hadamard_test_sampled(ansatz_circuit, tested, shots, seed)


def gamma_local_term(
    decomposition: Decomposition,
    ansatz_circuit: Circuit,
    u_b: Circuit,
    l: int,
    l_prime: int,
    j: int,
    mode: str = "exact",
    shots: int = 1_000_000,
    seed: int = 0,
) -> float:
    """Re<0|V† A_l† U Z_j U† A_l' V|0> for one (l, l', j)."""
    n = ansatz_circuit.n
    circs = [t.circuit for t in decomposition.terms]
    tested = (
        circs[l_prime]
        .then(u_b.adjoint())
        .then(Circuit(n).z(j))
        .then(u_b)
        .then(circs[l].adjoint())
    )
    if mode == "exact":
        return hadamard_test_exact(ansatz_circuit, tested)
    return hadamard_test_sampled(ansatz_circuit, tested, shots, seed)


def local_cost(config: RunConfig, theta) -> tuple[float, CostBreakdown]:
    if config.cost_kind != "local":
        config = replace(config, cost_kind="local")
    return CostEvaluator(config).cost_with_breakdown(theta)


def global_cost(config: RunConfig, theta) -> tuple[float, CostBreakdown]:
    if config.cost_kind != "global":
        config = replace(config, cost_kind="global")
    return CostEvaluator(config).cost_with_breakdown(theta)


def gradient(config: RunConfig, theta) -> np.ndarray:
    return CostEvaluator(config).gradient(theta)


# -- optimization loop --------------------------------------------------------

class _Converged(Exception):
    def __init__(self, theta, cost):
        self.theta = np.asarray(theta, dtype=float)
        self.cost = cost


class _BudgetExhausted(Exception):
    pass


def _over_budget(evaluator: CostEvaluator) -> bool:
    budget = evaluator.config.budget_evaluations
    return budget is not None and evaluator.circuit_evaluations >= budget


def _record(evaluator, records, index, cost, theta):
    records.append(
        IterationRecord(index, cost, tuple(np.asarray(theta, dtype=float)),
                        evaluator.circuit_evaluations)
    )
    if not math.isfinite(cost):
        raise ArithmeticError("non-finite cost")


def _best_record(records):
    best = min(records, key=lambda r: r.cost)
    return np.asarray(best.theta, dtype=float), best.cost


def _run_bfgs(evaluator, theta0, threshold, records):
    """L-BFGS-B on the parameter-shift gradient; stops as soon as an
    accepted iterate dips below the threshold.  Record 0 is the initial
    cost; each later record is one accepted optimizer iterate."""
    cost0 = evaluator.cost(theta0)
    _record(evaluator, records, 0, cost0, theta0)
    if cost0 < threshold:
        return theta0, cost0, True, False
    state = {"index": 0}

    def fun(t):
        if _over_budget(evaluator):
            raise _BudgetExhausted
        return evaluator.cost(t)

    def callback(xk):
        state["index"] += 1
        cost = evaluator.cost(xk)  # cache hit: scipy just evaluated xk
        _record(evaluator, records, state["index"], cost, xk)
        if cost < threshold:
            raise _Converged(xk, cost)

    try:
        minimize(
            fun,
            theta0,
            jac=evaluator.gradient,
            method="L-BFGS-B",
            callback=callback,
            options={
                "maxiter": evaluator.config.max_iterations,
                "ftol": 0.0,
                "gtol": 1e-16,
                "maxls": 40,
            },
        )
    except _Converged as stop:
        return stop.theta, stop.cost, True, False
    except _BudgetExhausted:
        theta, cost = _best_record(records)
        return theta, cost, False, True
    theta, cost = _best_record(records)
    return theta, cost, False, False


def _run_adam(evaluator, theta0, threshold, records):
    """Adam on the parameter-shift gradient.

    Each iteration evaluates the cost at the current theta (record), checks
    convergence, then takes one gradient step; the gradient reuses the just
    recorded evaluation as its base point.  After k iterations the run has
    therefore spent exactly k*(N_q + 2*len(theta)*N_q) circuit evaluations.
    """
    settings = evaluator.config.optimizer
    theta = np.asarray(theta0, dtype=float).copy()
    m = np.zeros_like(theta)
    v = np.zeros_like(theta)
    for it in range(evaluator.config.max_iterations):
        cost = evaluator.cost(theta)
        _record(evaluator, records, it, cost, theta)
        if cost < threshold:
            return theta, cost, True, False
        if _over_budget(evaluator):
            break
        g = evaluator.gradient(theta)
        m = settings.beta1 * m + (1.0 - settings.beta1) * g
        v = settings.beta2 * v + (1.0 - settings.beta2) * g * g
        m_hat = m / (1.0 - settings.beta1 ** (it + 1))
        v_hat = v / (1.0 - settings.beta2 ** (it + 1))
        theta = theta - settings.learning_rate * m_hat / (np.sqrt(v_hat) + settings.adam_epsilon)
    exhausted = _over_budget(evaluator)
    theta, cost = _best_record(records)
    return theta, cost, False, exhausted


def _run_spsa(evaluator, theta0, threshold, records):
    """Simultaneous-perturbation steps: three cost evaluations per iteration
    (one recorded check plus two randomly perturbed points)."""
    settings = evaluator.config.optimizer
    theta = np.asarray(theta0, dtype=float).copy()
    rng = np.random.default_rng(
        np.random.SeedSequence([int(evaluator.config.seed), 0x5B5A])
    )
    for it in range(evaluator.config.max_iterations):
        cost = evaluator.cost(theta)
        _record(evaluator, records, it, cost, theta)
        if cost < threshold:
            return theta, cost, True, False
        if _over_budget(evaluator):
            break
        a_k = settings.spsa_a / (it + 1 + settings.spsa_stability) ** settings.spsa_alpha
        c_k = settings.spsa_c / (it + 1) ** settings.spsa_gamma
        delta = rng.integers(0, 2, size=theta.shape) * 2.0 - 1.0
        cost_plus = evaluator.cost(theta + c_k * delta)
        cost_minus = evaluator.cost(theta - c_k * delta)
        g_hat = (cost_plus - cost_minus) / (2.0 * c_k) * delta
        theta = theta - a_k * g_hat
    exhausted = _over_budget(evaluator)
    theta, cost = _best_record(records)
    return theta, cost, False, exhausted


_OPTIMIZER_LOOPS = {"bfgs": _run_bfgs, "adam": _run_adam, "spsa": _run_spsa}


def optimize(config: RunConfig) -> RunRecord:
    """Run the full variational loop for one configuration.

    Each iteration evaluates the cost; the run stops converged as soon as
    the cost falls below the threshold gamma (the operational bound at the
    configured epsilon_target), and otherwise steps the optimizer, up to
    max_iterations or the evaluation budget.  A non-converged run reports
    its best evaluated iterate; a non-finite cost marks the run failed.
    The returned record carries the whole trajectory plus the final trace
    distance to the classical solution.
    """
    started = time.perf_counter()
    evaluator = CostEvaluator(config)
    kappa = condition_number(config.n)
    threshold = convergence_threshold(config.cost_kind, config.n, kappa, config.epsilon_target)
    if config.initial_theta is not None:
        theta0 = np.asarray(config.initial_theta, dtype=float)
    else:
        theta0 = init_params(config.ansatz.parameter_count, config.q_delta, config.seed)

    records: list[IterationRecord] = []
    failed = False
    converged = False
    budget_exhausted = False
    theta, final_cost = theta0, float("nan")
    try:
        loop = _OPTIMIZER_LOOPS[config.optimizer.kind]
        theta, final_cost, converged, budget_exhausted = loop(
            evaluator, theta0, threshold, records
        )
    except ArithmeticError:
        failed = True
        if records:
            theta = np.asarray(records[-1].theta, dtype=float)

    solution = thomas_solve(config.n).x_normalized
    psi = run_circuit(build_ansatz(config.ansatz, np.asarray(theta, dtype=float)))
    distance = trace_distance(psi, StateVector(config.n, solution.astype(complex)))

    return RunRecord(
        config=config,
        iterations=records,
        converged=converged,
        failed=failed,
        budget_exhausted=budget_exhausted,
        final_cost=final_cost,
        final_theta=tuple(np.asarray(theta, dtype=float)),
        final_trace_distance=distance,
        threshold=threshold,
        kappa=kappa,
        total_circuit_evaluations=evaluator.circuit_evaluations,
        wall_time_seconds=time.perf_counter() - started,
    )
