"""Shared helpers: random circuit generation and dense single-gate oracles."""
import numpy as np

from vqls_poisson.qsim import Circuit, Gate

PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) / np.sqrt(2.0)


def ry_matrix(angle: float) -> np.ndarray:
    half = angle / 2.0
    return np.array(
        [[np.cos(half), -np.sin(half)], [np.sin(half), np.cos(half)]], dtype=complex
    )


def random_gate(rng, n: int) -> Gate:
    kind = rng.choice(["h", "x", "y", "z", "ry"])
    target = int(rng.integers(n))
    others = [q for q in range(n) if q != target]
    max_controls = min(len(others), 2)
    num_controls = int(rng.integers(max_controls + 1))
    controls = tuple(
        int(q) for q in rng.choice(others, size=num_controls, replace=False)
    ) if num_controls else ()
    angle = float(rng.uniform(-np.pi, np.pi)) if kind == "ry" else None
    return Gate(kind, target, controls=controls, angle=angle)


def random_circuit(rng, n: int, max_gates: int = 30) -> Circuit:
    circuit = Circuit(n)
    for _ in range(int(rng.integers(1, max_gates + 1))):
        circuit.append(random_gate(rng, n))
    return circuit


def gate_dense(gate: Gate, n: int) -> np.ndarray:
    """Dense matrix of one (possibly controlled) gate via projector algebra."""
    base = {
        "h": HADAMARD,
        "x": PAULI_X,
        "y": PAULI_Y,
        "z": PAULI_Z,
        "ry": ry_matrix(gate.angle) if gate.angle is not None else None,
    }[gate.kind]
    dim = 2**n
    matrix = np.zeros((dim, dim), dtype=complex)
    for col in range(dim):
        if all((col >> c) & 1 for c in gate.controls):
            bit = (col >> gate.target) & 1
            for row_bit in range(2):
                amp = base[row_bit, bit]
                if amp != 0:
                    row = (col & ~(1 << gate.target)) | (row_bit << gate.target)
                    matrix[row, col] += amp
        else:
            matrix[col, col] = 1.0
    return matrix


def circuit_dense(circuit: Circuit) -> np.ndarray:
    """Independent dense oracle: multiply per-gate matrices left to right."""
    matrix = np.eye(2**circuit.n, dtype=complex)
    for gate in circuit.gates:
        matrix = gate_dense(gate, circuit.n) @ matrix
    return matrix
