"""Dense statevector simulator.

Pure-numpy simulation of few-qubit circuits built from a small gate set
(H, X, Y, Z, Ry, each with an arbitrary number of controls).  The simulator
exists to evaluate Hadamard-test expectation values and to extract dense
unitaries for verification, not to scale: everything is O(2^n) per gate and
the dense extraction is capped at 10 qubits.

Bit-order convention: qubit 0 is the *least-significant* bit of the basis
index, so basis state ``|q_{n-1} ... q_1 q_0>`` has index ``sum(q_k << k)``.
When the amplitude array is reshaped to ``(2,)*n``, qubit ``q`` lives on
axis ``n - 1 - q``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

GATE_KINDS = ("h", "x", "y", "z", "ry")

_SQRT1_2 = 1.0 / math.sqrt(2.0)
_BASE_MATRICES = {
    "h": np.array([[_SQRT1_2, _SQRT1_2], [_SQRT1_2, -_SQRT1_2]], dtype=complex),
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _ry_matrix(angle: float) -> np.ndarray:
    half = 0.5 * angle
    c, s = math.cos(half), math.sin(half)
    return np.array([[c, -s], [s, c]], dtype=complex)


@dataclass(frozen=True)
class Gate:
    """One primitive gate: a base single-qubit operation plus control qubits.

    ``kind`` is one of ``GATE_KINDS``.  Controls are control-on-1; a CX is
    ``Gate("x", t, (c,))``, a CCZ is ``Gate("z", t, (c1, c2))`` and so on.
    Every gate counts as depth 1 regardless of its control count (the
    all-to-all-connectivity counting used throughout the decomposition
    analytics).
    """

    kind: str
    target: int
    controls: tuple[int, ...] = ()
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        if self.kind == "ry":
            if self.angle is None or not math.isfinite(self.angle):
                raise ValueError("ry gate requires a finite angle")
        elif self.angle is not None:
            raise ValueError(f"{self.kind} gate takes no angle")
        object.__setattr__(self, "controls", tuple(sorted(self.controls)))
        if self.target in self.controls:
            raise ValueError("target cannot also be a control")
        if len(set(self.controls)) != len(self.controls):
            raise ValueError("duplicate control qubits")

    def base_matrix(self) -> np.ndarray:
        """2x2 matrix of the gate with controls stripped."""
        if self.kind == "ry":
            return _ry_matrix(self.angle)
        return _BASE_MATRICES[self.kind]

    def adjoint(self) -> "Gate":
        if self.kind == "ry":
            return Gate("ry", self.target, self.controls, -self.angle)
        return self  # H, X, Y, Z are self-adjoint

    def with_control(self, control: int) -> "Gate":
        return Gate(self.kind, self.target, self.controls + (control,), self.angle)


@dataclass
class Circuit:
    """Ordered gate list on ``n`` qubits.

    Builder methods append a gate and return ``self`` so constructions chain:
    ``Circuit(2).h(0).cx(0, 1)``.  Circuits are treated as immutable once
    built; derived circuits (``adjoint``, ``then``, ``controlled``) are new
    objects.
    """

    n: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("circuit needs at least one qubit")
        for g in self.gates:
            self._check(g)

    def _check(self, gate: Gate):
        for q in (gate.target, *gate.controls):
            if not 0 <= q < self.n:
                raise ValueError(f"qubit index {q} out of range for n={self.n}")

    # -- builders ---------------------------------------------------------
    def append(self, gate: Gate) -> "Circuit":
        self._check(gate)
        self.gates.append(gate)
        return self

    def h(self, q):
        return self.append(Gate("h", q))

    def x(self, q):
        return self.append(Gate("x", q))

    def y(self, q):
        return self.append(Gate("y", q))

    def z(self, q):
        return self.append(Gate("z", q))

    def ry(self, q, angle):
        return self.append(Gate("ry", q, (), float(angle)))

    def cx(self, control, target):
        return self.append(Gate("x", target, (control,)))

    def cz(self, a, b):
        # symmetric; stored with the larger index as target for a canonical form
        a, b = sorted((a, b))
        return self.append(Gate("z", b, (a,)))

    def mcx(self, controls, target):
        return self.append(Gate("x", target, tuple(controls)))

    def mcz(self, qubits):
        """Multi-controlled Z over ``qubits`` (Z on one, controls on the rest)."""
        qs = sorted(qubits)
        if not qs:
            raise ValueError("mcz needs at least one qubit")
        return self.append(Gate("z", qs[-1], tuple(qs[:-1])))

    # -- derived circuits --------------------------------------------------
    def then(self, other: "Circuit") -> "Circuit":
        """New circuit applying ``self`` first, then ``other``."""
        if other.n != self.n:
            raise ValueError("qubit-count mismatch")
        return Circuit(self.n, list(self.gates) + list(other.gates))

    def adjoint(self) -> "Circuit":
        return Circuit(self.n, [g.adjoint() for g in reversed(self.gates)])

    def controlled(self) -> "Circuit":
        """Same circuit on n+1 qubits with every gate controlled on qubit n."""
        anc = self.n
        return Circuit(self.n + 1, [g.with_control(anc) for g in self.gates])

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    def __len__(self):
        return len(self.gates)


def controlled(circuit: Circuit) -> Circuit:
    return circuit.controlled()


@dataclass
class StateVector:
    """Pure state of ``n`` qubits as 2^n complex amplitudes."""

    n: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=complex)
        if self.amps.shape != (2**self.n,):
            raise ValueError("amplitude length must be 2^n")

    def norm(self) -> float:
        return float(np.linalg.norm(self.amps))

    def inner(self, other: "StateVector") -> complex:
        """<self|other>."""
        if other.n != self.n:
            raise ValueError("qubit-count mismatch")
        return complex(np.vdot(self.amps, other.amps))

    def copy(self) -> "StateVector":
        return StateVector(self.n, self.amps.copy())


def zero_state(n: int) -> StateVector:
    if n < 1:
        raise ValueError("need at least one qubit")
    amps = np.zeros(2**n, dtype=complex)
    amps[0] = 1.0
    return StateVector(n, amps)


def _apply_gate_inplace(amps: np.ndarray, n: int, gate: Gate):
    """Apply one (multi-controlled) gate to the amplitude buffer in place.

    The buffer is viewed as a rank-n tensor; the control conditions select a
    sub-block (basic indexing, so a view into the buffer) and the 2x2 base
    matrix is contracted against the target axis of that block.  Multi-
    controlled gates therefore cost one amplitude-pair update, never a
    decomposition into primitive gates.
    """
    psi = amps.reshape((2,) * n)
    index = [slice(None)] * n
    for c in gate.controls:
        index[n - 1 - c] = 1
    block = psi[tuple(index)]
    # axis of the target within the control-selected block
    axis = (n - 1 - gate.target) - sum(1 for c in gate.controls if c > gate.target)
    moved = np.moveaxis(block, axis, 0)
    moved[...] = np.tensordot(gate.base_matrix(), moved, axes=(1, 0))


def apply_gate(state: StateVector, gate: Gate) -> StateVector:
    """Return the state with one gate applied (input left untouched)."""
    if not 0 <= gate.target < state.n or any(not 0 <= c < state.n for c in gate.controls):
        raise ValueError("gate qubit index out of range")
    out = state.amps.copy()
    _apply_gate_inplace(out, state.n, gate)
    return StateVector(state.n, out)


def run_circuit(circuit: Circuit, initial: StateVector | None = None) -> StateVector:
    """Apply every gate of ``circuit`` in order to ``initial`` (default |0...0>)."""
    if initial is None:
        initial = zero_state(circuit.n)
    elif initial.n != circuit.n:
        raise ValueError("qubit-count mismatch")
    amps = initial.amps.copy()
    for gate in circuit.gates:
        _apply_gate_inplace(amps, circuit.n, gate)
    return StateVector(circuit.n, amps)


def circuit_to_matrix(circuit: Circuit) -> np.ndarray:
    """Dense 2^n x 2^n unitary of the circuit (verification aid, n <= 10)."""
    if circuit.n > 10:
        raise ValueError("dense extraction capped at 10 qubits")
    dim = 2**circuit.n
    cols = np.eye(dim, dtype=complex)
    for gate in circuit.gates:
        # apply the gate to all basis columns at once: treat the column index
        # as an extra trailing axis
        psi = cols.reshape((2,) * circuit.n + (dim,))
        index = [slice(None)] * (circuit.n + 1)
        for c in gate.controls:
            index[circuit.n - 1 - c] = 1
        block = psi[tuple(index)]
        axis = (circuit.n - 1 - gate.target) - sum(1 for c in gate.controls if c > gate.target)
        moved = np.moveaxis(block, axis, 0)
        moved[...] = np.tensordot(gate.base_matrix(), moved, axes=(1, 0))
    return cols


def expectation_zj(state: StateVector, j: int) -> float:
    """<state| Z_j |state> = P(bit j = 0) - P(bit j = 1)."""
    if not 0 <= j < state.n:
        raise ValueError("qubit index out of range")
    probs = np.abs(state.amps) ** 2
    p = probs.reshape((2,) * state.n)
    axis = state.n - 1 - j
    p0 = float(p.take(0, axis=axis).sum())
    p1 = float(p.take(1, axis=axis).sum())
    return p0 - p1


# -- Hadamard tests ---------------------------------------------------------

def hadamard_test_exact(prepared: Circuit, tested: Circuit) -> float:
    """Re <psi| U |psi> with |psi> = prepared|0>, U = tested, by inner product.

    This is the numerical-simulation path: no ancilla, no sampling.  Only the
    real part is ever computed; every operator in this laboratory has a real
    expectation on the states it is paired with.
    """
    if prepared.n != tested.n:
        raise ValueError("qubit-count mismatch")
    psi = run_circuit(prepared)
    phi = run_circuit(tested, psi)
    return float(np.real(psi.inner(phi)))


def hadamard_test_circuit(prepared: Circuit, tested: Circuit) -> Circuit:
    """The (n+1)-qubit ancilla construction: H(anc), controlled-U, H(anc)."""
    if prepared.n != tested.n:
        raise ValueError("qubit-count mismatch")
    n = prepared.n
    circ = Circuit(n + 1, [Gate(g.kind, g.target, g.controls, g.angle) for g in prepared.gates])
    circ.h(n)
    for g in tested.gates:
        circ.append(g.with_control(n))
    circ.h(n)
    return circ


def ancilla_probability(prepared: Circuit, tested: Circuit) -> float:
    """Exact P(ancilla = 0) of the Hadamard-test circuit."""
    state = run_circuit(hadamard_test_circuit(prepared, tested))
    return 0.5 * (1.0 + expectation_zj(state, prepared.n))


def hadamard_test_sampled(prepared: Circuit, tested: Circuit, shots: int, seed) -> float:
    """Shot-sampled Hadamard test: returns the estimate P̂(0) - P̂(1).

    The ancilla statistics are computed exactly and then sampled from the
    binomial law, which is distribution-identical to measuring the circuit
    ``shots`` times but costs O(1) randomness.  Deterministic per seed.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    p0 = ancilla_probability(prepared, tested)
    # guard against float dust outside [0, 1]
    p0 = min(1.0, max(0.0, p0))
    rng = np.random.default_rng(seed)
    k0 = int(rng.binomial(shots, p0))
    return 2.0 * k0 / shots - 1.0
