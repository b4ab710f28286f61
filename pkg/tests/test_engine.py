"""Cost functions, term bookkeeping, gradients, and the optimization loop."""
import math
from dataclasses import replace
from functools import reduce

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import vqls_poisson.engine as engine
from vqls_poisson.ansatz import build_ansatz, gea_spec, hea_spec
from vqls_poisson.classical import thomas_solve
from vqls_poisson.engine import (
    CostEvaluator,
    OptimizerSettings,
    RunConfig,
    beta_key,
    beta_term,
    convergence_threshold,
    count_unique_circuits,
    enumerate_term_keys,
    gamma_local_key,
    gamma_local_term,
    global_cost,
    gradient,
    local_cost,
    optimize,
    trace_distance,
    TermKey,
)
from vqls_poisson.poisson import condition_number, get_decomposition
from vqls_poisson.qsim import Circuit, StateVector, run_circuit

HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]]) / math.sqrt(2.0)


def dense_poisson(n: int) -> np.ndarray:
    N = 2**n
    return (
        np.diag(np.full(N, 2.0))
        - np.diag(np.ones(N - 1), 1)
        - np.diag(np.ones(N - 1), -1)
    )


def dense_costs(n: int, psi: np.ndarray) -> tuple[float, float]:
    """(local, global) cost straight from the dense linear-algebra formulas."""
    N = 2**n
    phi = dense_poisson(n) @ psi
    den = float(np.real(np.vdot(phi, phi)))
    b = np.full(N, 1.0 / math.sqrt(N))
    c_global = 1.0 - abs(np.vdot(b, phi)) ** 2 / den
    w = reduce(np.kron, [HADAMARD] * n) @ phi
    z_sum = 0.0
    for j in range(n):
        mask = 1.0 - 2.0 * ((np.arange(N) >> j) & 1)
        z_sum += float(np.real(np.vdot(w, mask * w)))
    c_local = 0.5 - z_sum / (2.0 * n * den)
    return c_local, c_global


def uniform_prep(n: int) -> Circuit:
    circ = Circuit(n)
    for q in range(n):
        circ.h(q)
    return circ


def gea_config(n: int, **overrides) -> RunConfig:
    layers = overrides.pop("layers", 3)
    return RunConfig(n=n, ansatz=gea_spec(n, layers=layers), **overrides)


def ansatz_state(config: RunConfig, theta) -> StateVector:
    return run_circuit(build_ansatz(config.ansatz, np.asarray(theta, dtype=float)))


# An exactly solvable single-qubit instance: the 2x2 system decomposes into
# two Pauli terms (2*I - X) and the one-layer ansatz at theta = 0 prepares
# the normalized solution (1, 1)/sqrt(2) with no approximation error.
SOLVED_1Q = RunConfig(n=1, ansatz=gea_spec(1, layers=1), decomposition="pauli")


# -- term bookkeeping ----------------------------------------------------------

def test_term_key_validation():
    with pytest.raises(ValueError):
        TermKey("alpha", 0, 1)
    with pytest.raises(ValueError):
        TermKey("beta", 1, 1)  # diagonal never becomes a circuit
    with pytest.raises(ValueError):
        TermKey("beta", 0, 1, j=0)
    with pytest.raises(ValueError):
        TermKey("gamma_local", 0, 1)  # j is required
    with pytest.raises(ValueError):
        TermKey("gamma_local", 2, 1, j=0)
    with pytest.raises(ValueError):
        TermKey("gamma_global", 0, l_prime=1)


def test_key_canonicalization_orders_indices():
    assert beta_key(2, 0) == beta_key(0, 2) == TermKey("beta", 0, 2)
    assert gamma_local_key(3, 1, 2) == gamma_local_key(1, 3, 2)


@settings(max_examples=60, deadline=None)
@given(c=st.integers(1, 6), n=st.integers(1, 9))
def test_count_closed_form_matches_enumeration(c, n):
    assert count_unique_circuits(c, n) == len(enumerate_term_keys(c, n, "local"))


def test_four_term_local_count_is_affine_in_n():
    counts = [count_unique_circuits(4, n) for n in range(1, 10)]
    assert counts == [10 * n + 6 for n in range(1, 10)]
    assert counts[-1] == 96  # n = 9


def test_single_term_count_is_n():
    # one unitary: no beta off-diagonals, one gamma circuit per qubit
    assert [count_unique_circuits(1, n) for n in range(1, 6)] == [1, 2, 3, 4, 5]


def test_global_enumeration_count():
    keys = enumerate_term_keys(4, 3, "global")
    betas = [k for k in keys if k.family == "beta"]
    gammas = [k for k in keys if k.family == "gamma_global"]
    assert len(betas) == 6 and len(gammas) == 4
    assert len(keys) == 10


def test_enumerated_keys_are_sorted_and_unique():
    for cost_kind in ("local", "global"):
        keys = enumerate_term_keys(4, 3, cost_kind)
        assert len(set(keys)) == len(keys)
        assert list(keys) == sorted(keys, key=TermKey.sort_key)


def test_count_rejects_degenerate_inputs():
    with pytest.raises(ValueError):
        count_unique_circuits(0, 3)
    with pytest.raises(ValueError):
        count_unique_circuits(4, 0)
    with pytest.raises(ValueError):
        enumerate_term_keys(4, 3, "median")


# -- single term values --------------------------------------------------------

def test_beta_diagonal_is_exactly_one():
    dec = get_decomposition("hed", 2)
    prepared = uniform_prep(2)
    for l in range(4):
        assert beta_term(dec, prepared, l, l) == 1.0


def test_beta_uniform_state_identity_times_offdiagonal_term():
    # <b| A_0^dag A_1 |b> with A_0 = I and A_1 = X on qubit 0 flips within
    # the uniform superposition, so the overlap is exactly 1.
    dec = get_decomposition("hed", 2)
    assert dec.terms[0].label == "I" and dec.terms[1].label == "L1"
    value = beta_term(dec, uniform_prep(2), 0, 1)
    assert abs(value - 1.0) < 1e-12


def test_beta_is_symmetric_in_term_order():
    dec = get_decomposition("hed", 3)
    prepared = build_ansatz(gea_spec(3), np.linspace(-1.0, 1.2, 9))
    for l, lp in [(0, 2), (1, 3), (2, 3)]:
        assert abs(beta_term(dec, prepared, l, lp) - beta_term(dec, prepared, lp, l)) < 1e-12


def test_gamma_identity_pair_on_prepared_b_is_one():
    # V = U_b and A_l = A_l' = I give <0|Z_j|0> = 1 for every j.
    dec = get_decomposition("hed", 2)
    u_b = uniform_prep(2)
    for j in range(2):
        assert abs(gamma_local_term(dec, u_b, u_b, 0, 0, j) - 1.0) < 1e-12


def test_gamma_matches_dense_quadratic_form():
    n = 2
    dec = get_decomposition("hed", n)
    theta = np.array([0.3, -0.7, 1.1, 0.2, -0.4, 0.9])
    prepared = build_ansatz(gea_spec(n), theta)
    psi = run_circuit(prepared).amps
    u_dense = reduce(np.kron, [HADAMARD] * n)
    mats = [dec_term_matrix(dec, l) for l in range(4)]
    idx = np.arange(2**n)
    for j in range(n):
        z = np.diag(1.0 - 2.0 * ((idx >> j) & 1))
        sandwich = u_dense @ z @ u_dense.conj().T
        for l in range(4):
            for lp in range(l, 4):
                expected = np.real(
                    psi.conj() @ mats[l].conj().T @ sandwich @ mats[lp] @ psi
                )
                got = gamma_local_term(dec, prepared, uniform_prep(n), l, lp, j)
                assert abs(got - expected) < 1e-10
                assert abs(got - gamma_local_term(dec, prepared, uniform_prep(n), lp, l, j)) < 1e-12


def dec_term_matrix(dec, l):
    from vqls_poisson.qsim import circuit_to_matrix

    return circuit_to_matrix(dec.terms[l].circuit)


# -- assembled costs -----------------------------------------------------------

@pytest.mark.parametrize("n", [2, 3])
def test_local_cost_matches_dense_formula(n):
    rng = np.random.default_rng(7 + n)
    cfg = gea_config(n)
    for _ in range(8):
        theta = rng.uniform(-math.pi, math.pi, cfg.ansatz.parameter_count)
        cost, breakdown = local_cost(cfg, theta)
        expected, _ = dense_costs(n, ansatz_state(cfg, theta).amps)
        assert abs(cost - expected) < 1e-10
        assert breakdown.unique_circuit_count == 10 * n + 6


@pytest.mark.parametrize("n", [2, 3])
def test_global_cost_matches_dense_formula(n):
    rng = np.random.default_rng(17 + n)
    cfg = gea_config(n)
    for _ in range(8):
        theta = rng.uniform(-math.pi, math.pi, cfg.ansatz.parameter_count)
        cost, breakdown = global_cost(cfg, theta)
        _, expected = dense_costs(n, ansatz_state(cfg, theta).amps)
        assert abs(cost - expected) < 1e-10
        assert breakdown.unique_circuit_count == 10


def test_costs_vanish_at_embedded_exact_solution():
    theta = np.zeros(1)
    c_local, _ = local_cost(SOLVED_1Q, theta)
    c_global, _ = global_cost(SOLVED_1Q, theta)
    assert c_local < 1e-8
    assert c_global < 1e-8
    state = ansatz_state(SOLVED_1Q, theta)
    x = thomas_solve(1).x_normalized
    assert trace_distance(state, StateVector(1, x.astype(complex))) < 1e-8


def test_global_cost_is_one_when_image_is_orthogonal_to_b():
    # Ry(pi).H|0> points along (1, -1); the 2x2 system maps it to a multiple
    # of (1, -1), orthogonal to the uniform b.
    cost, _ = global_cost(SOLVED_1Q, np.array([math.pi]))
    assert abs(cost - 1.0) < 1e-10


def test_local_cost_never_exceeds_global():
    rng = np.random.default_rng(29)
    for n in (2, 3, 4):
        cfg = gea_config(n)
        local_eval = CostEvaluator(cfg)
        global_eval = CostEvaluator(RunConfig(n=n, ansatz=cfg.ansatz, cost_kind="global"))
        for _ in range(400):
            theta = rng.uniform(-math.pi, math.pi, cfg.ansatz.parameter_count)
            c_l = local_eval.cost(theta)
            c_g = global_eval.cost(theta)
            assert -1e-10 <= c_l <= c_g + 1e-10
            assert c_g <= 1.0 + 1e-10


@pytest.mark.parametrize("n", [2, 3])
def test_costs_certify_trace_distance(n):
    # Operational bound: cost >= eps^2 / kappa^2 (global), with an extra 1/n
    # for the local cost, where eps is the distance to the true solution.
    rng = np.random.default_rng(31 + n)
    cfg = gea_config(n)
    kappa = condition_number(n)
    x = StateVector(n, thomas_solve(n).x_normalized.astype(complex))
    for _ in range(40):
        theta = rng.uniform(-math.pi, math.pi, cfg.ansatz.parameter_count)
        eps = trace_distance(ansatz_state(cfg, theta), x)
        c_l, _ = local_cost(cfg, theta)
        c_g, _ = global_cost(cfg, theta)
        assert c_g >= eps**2 / kappa**2 - 1e-8
        assert c_l >= eps**2 / (n * kappa**2) - 1e-8


def test_breakdown_reassembles_cost():
    cfg = gea_config(3)
    theta = np.linspace(-0.8, 1.4, cfg.ansatz.parameter_count)
    dec = get_decomposition("hed", 3)
    c = dec.coefficients

    cost, br = local_cost(cfg, theta)
    den = sum(
        c[l] * c[lp] * (1.0 if l == lp else br.term_values[beta_key(l, lp)])
        * (1.0 if l == lp else 2.0)  # off-diagonals enter twice
        for l in range(4)
        for lp in range(l, 4)
    )
    num = sum(
        c[l] * c[lp] * br.term_values[gamma_local_key(l, lp, j)] * (1.0 if l == lp else 2.0)
        for l in range(4)
        for lp in range(l, 4)
        for j in range(3)
    )
    assert abs(den - br.denominator) < 1e-12
    assert abs(num - br.numerator) < 1e-12
    assert abs(cost - (0.5 - num / (2 * 3 * den))) < 1e-12
    assert br.unique_circuit_count == 36


def test_deduplicated_cost_equals_full_double_sum():
    # Recompute the local cost with no symmetry shortcuts: every (l, l', j)
    # ordered pair gets its own Hadamard-test value.
    n = 2
    cfg = gea_config(n)
    theta = np.array([0.9, -0.3, 0.5, 1.3, -1.1, 0.2])
    dec = get_decomposition("hed", n)
    prepared = build_ansatz(cfg.ansatz, theta)
    u_b = uniform_prep(n)
    c = dec.coefficients

    den = sum(
        c[l] * c[lp] * beta_term(dec, prepared, l, lp)
        for l in range(4)
        for lp in range(4)
    )
    num = sum(
        c[l] * c[lp] * gamma_local_term(dec, prepared, u_b, l, lp, j)
        for l in range(4)
        for lp in range(4)
        for j in range(n)
    )
    full = 0.5 - num / (2 * n * den)
    cost, _ = local_cost(cfg, theta)
    assert abs(cost - full) < 1e-12


# -- gradients -----------------------------------------------------------------

@pytest.mark.parametrize("cost_kind", ["local", "global"])
def test_gradient_matches_finite_differences(cost_kind):
    n = 3
    cfg = RunConfig(n=n, ansatz=gea_spec(n), cost_kind=cost_kind)
    rng = np.random.default_rng(43)
    theta = rng.uniform(-math.pi, math.pi, cfg.ansatz.parameter_count)
    grad = gradient(cfg, theta)
    assert grad.shape == (3 * n,)

    evaluator = CostEvaluator(cfg)
    h = 1e-5
    fd = np.empty_like(grad)
    for i in range(len(theta)):
        up, down = theta.copy(), theta.copy()
        up[i] += h
        down[i] -= h
        fd[i] = (evaluator.cost(up) - evaluator.cost(down)) / (2 * h)
    np.testing.assert_allclose(grad, fd, rtol=1e-4, atol=1e-6)


def test_gradient_vanishes_at_embedded_solution():
    grad = gradient(SOLVED_1Q, np.zeros(1))
    assert np.max(np.abs(grad)) < 1e-6


def test_gradient_is_deterministic():
    cfg = gea_config(2)
    theta = np.array([0.4, -0.2, 0.8, 0.1, -0.6, 1.0])
    np.testing.assert_array_equal(gradient(cfg, theta), gradient(cfg, theta))


# -- sampled mode --------------------------------------------------------------

def test_sampled_cost_is_deterministic_per_seed():
    cfg = gea_config(2, mode="sampled", shots=4096, seed=11)
    theta = np.array([0.5, -0.4, 1.2, 0.3, 0.8, -0.9])
    a = CostEvaluator(cfg).cost(theta)
    b = CostEvaluator(cfg).cost(theta)
    assert a == b
    other = CostEvaluator(gea_config(2, mode="sampled", shots=4096, seed=12)).cost(theta)
    assert other != a


def test_sampled_cost_concentrates_near_exact():
    cfg = gea_config(2, mode="sampled", shots=1_000_000, seed=3)
    theta = np.array([0.5, -0.4, 1.2, 0.3, 0.8, -0.9])
    sampled = CostEvaluator(cfg).cost(theta)
    exact = CostEvaluator(gea_config(2)).cost(theta)
    assert abs(sampled - exact) < 0.02


def test_sampled_and_exact_share_circuit_accounting():
    theta = np.zeros(6)
    for mode in ("exact", "sampled"):
        evaluator = CostEvaluator(gea_config(2, mode=mode, shots=256))
        evaluator.cost(theta)
        assert evaluator.circuit_evaluations == 26
        evaluator.cost(theta)  # cached: no new circuits
        assert evaluator.circuit_evaluations == 26


# -- optimization loop ---------------------------------------------------------

def test_adam_iteration_accounting_is_exact():
    # k iterations cost exactly k * (N_q + 2 * len(theta) * N_q) circuit
    # evaluations: one recorded cost plus two shifts per parameter.
    cfg = gea_config(
        2,
        layers=1,
        epsilon_target=0.001,
        max_iterations=3,
        optimizer=OptimizerSettings(kind="adam"),
    )
    record = optimize(cfg)
    n_q = 26
    assert not record.converged
    assert len(record.iterations) == 3
    assert record.total_circuit_evaluations == 3 * (n_q + 2 * 2 * n_q)


def test_spsa_uses_three_evaluations_per_iteration():
    cfg = gea_config(
        2,
        layers=1,
        epsilon_target=0.001,
        max_iterations=4,
        optimizer=OptimizerSettings(kind="spsa"),
    )
    record = optimize(cfg)
    assert not record.converged
    assert record.total_circuit_evaluations == 4 * 3 * 26


def test_budget_stops_run_early():
    cfg = gea_config(
        2,
        layers=1,
        epsilon_target=0.001,
        max_iterations=50,
        budget_evaluations=200,
        optimizer=OptimizerSettings(kind="adam"),
    )
    record = optimize(cfg)
    assert record.budget_exhausted
    assert not record.converged
    assert len(record.iterations) < 50


def test_budget_applies_to_bfgs_too():
    cfg = gea_config(2, epsilon_target=0.001, budget_evaluations=26)
    record = optimize(cfg)
    assert record.budget_exhausted and not record.converged
    assert len(record.iterations) >= 1


def test_optimize_record_structure():
    cfg = gea_config(2, seed=1)
    record = optimize(cfg)
    indices = [rec.index for rec in record.iterations]
    assert indices == list(range(len(indices)))
    evals = [rec.circuit_evaluations for rec in record.iterations]
    assert all(a < b for a, b in zip(evals, evals[1:]))
    assert record.total_circuit_evaluations >= evals[-1]
    assert record.kappa == condition_number(2)
    assert record.wall_time_seconds >= 0.0
    assert len(record.final_theta) == cfg.ansatz.parameter_count
    if record.converged:
        assert record.final_cost < record.threshold
        assert record.iterations_to_threshold is not None


def test_optimize_majority_of_seeds_converge_at_n3():
    records = [optimize(gea_config(3, seed=seed)) for seed in range(5)]
    converged = [r for r in records if r.converged]
    assert len(converged) >= 4
    for r in converged:
        assert r.final_cost < r.threshold
        assert r.final_trace_distance <= r.config.epsilon_target


def test_every_logged_iteration_respects_distance_bound():
    cfg = gea_config(2, seed=0)
    record = optimize(cfg)
    x = StateVector(2, thomas_solve(2).x_normalized.astype(complex))
    bound_scale = 1.0 / (2 * record.kappa**2)
    for rec in record.iterations:
        eps = trace_distance(ansatz_state(cfg, rec.theta), x)
        assert rec.cost >= bound_scale * eps**2 - 1e-8


def test_warm_start_from_perturbed_optimum_converges_immediately():
    first = optimize(gea_config(2, seed=2))
    assert first.converged
    rng = np.random.default_rng(0)
    nudged = np.asarray(first.final_theta) + 1e-6 * rng.standard_normal(len(first.final_theta))
    again = optimize(gea_config(2, seed=2, initial_theta=tuple(nudged)))
    assert again.converged
    assert again.iterations_to_threshold <= 5


def test_warm_start_at_optimum_costs_one_evaluation():
    record = optimize(replace(SOLVED_1Q, initial_theta=(0.0,)))
    assert record.converged
    assert record.iterations_to_threshold == 0
    assert record.total_circuit_evaluations == CostEvaluator(SOLVED_1Q).unique_circuit_count


def test_non_finite_cost_marks_run_failed(monkeypatch):
    monkeypatch.setattr(engine.CostEvaluator, "cost", lambda self, theta: float("nan"))
    record = optimize(gea_config(2, max_iterations=5))
    assert record.failed
    assert not record.converged
    assert math.isnan(record.final_cost)


# -- trace distance and thresholds ---------------------------------------------

def test_trace_distance_limits():
    a = StateVector(1, np.array([1.0, 0.0]))
    b = StateVector(1, np.array([0.0, 1.0]))
    assert trace_distance(a, a) == 0.0
    assert trace_distance(a, b) == 1.0


def test_trace_distance_matches_dense_eigenvalues():
    rng = np.random.default_rng(57)
    for _ in range(20):
        amps = rng.standard_normal((2, 4)) + 1j * rng.standard_normal((2, 4))
        amps /= np.linalg.norm(amps, axis=1, keepdims=True)
        a, b = StateVector(2, amps[0]), StateVector(2, amps[1])
        delta = np.outer(amps[0], amps[0].conj()) - np.outer(amps[1], amps[1].conj())
        dense = 0.5 * np.sum(np.abs(np.linalg.eigvalsh(delta)))
        assert abs(trace_distance(a, b) - dense) < 1e-10


def test_trace_distance_rejects_bad_inputs():
    with pytest.raises(ValueError):
        trace_distance(StateVector(1, np.array([1.0, 1.0])), StateVector(1, np.array([1.0, 0.0])))
    with pytest.raises(ValueError):
        trace_distance(
            StateVector(1, np.array([1.0, 0.0])),
            StateVector(2, np.array([1.0, 0.0, 0.0, 0.0])),
        )


def test_convergence_threshold_formulas():
    for n in (2, 3, 4):
        kappa = condition_number(n)
        g = convergence_threshold("global", n, kappa, 0.01)
        l = convergence_threshold("local", n, kappa, 0.01)
        assert g == pytest.approx(1e-4 / kappa**2)
        assert l == pytest.approx(g / n)


# -- configuration validation ----------------------------------------------------

def test_run_config_validation():
    spec = gea_spec(2)
    with pytest.raises(ValueError):
        RunConfig(n=3, ansatz=spec)
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, cost_kind="fidelity")
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, mode="emulated")
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, epsilon_target=0.0)
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, shots=0)
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, max_iterations=0)
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, initial_theta=(0.0,))
    with pytest.raises(ValueError):
        RunConfig(n=2, ansatz=spec, initial_theta=(float("inf"),) * 6)
    with pytest.raises(ValueError):
        OptimizerSettings(kind="newton")


def test_exact_mode_is_capped_at_ten_qubits():
    with pytest.raises(ValueError):
        CostEvaluator(RunConfig(n=11, ansatz=gea_spec(11, layers=1)))


def test_hea_configs_evaluate_too():
    cfg = RunConfig(n=2, ansatz=hea_spec(2, layers=2))
    cost, breakdown = local_cost(cfg, np.zeros(cfg.ansatz.parameter_count))
    assert 0.0 <= cost <= 1.0
    assert breakdown.unique_circuit_count == 26
