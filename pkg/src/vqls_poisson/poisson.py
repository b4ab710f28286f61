"""The 1D discretized Poisson matrix and its two circuit decompositions.

The matrix of interest (``DPEM``) is the tridiagonal (2, -1) stencil of the
second derivative on 2^n interior grid points.  Two decompositions into a
weighted sum of unitary circuit terms are provided:

* **Pauli basis** — every tensor product of {I, X, Y, Z} with a nonzero
  trace projection onto the matrix.  Exact, but the number of surviving
  terms doubles with every added qubit.
* **High-entanglement decomposition (HED)** — exactly four terms at every
  size, ``A = 2.5 I - L1 - L2 - 0.5 L3``, at the price of one term (L2)
  whose circuit grows as n^2 gates.

All terms carry explicit gate-level circuits so that the weighted sum of
their dense matrices can be checked against the target matrix — that
reconstruction check is the central correctness oracle of the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .classical import dense_eigen_sym
from .qsim import Circuit, circuit_to_matrix

PAULI_MATRICES = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}

# Explicit small-size Pauli coefficient tables.  String convention: leftmost
# character acts on the highest qubit, matching the Kronecker-product order
# of pauli_string_matrix.
PAULI_TABLE_N2 = {
    "II": 2.0,
    "IX": -1.0,
    "XX": -0.5,
    "YY": -0.5,
}
PAULI_TABLE_N3 = {
    "III": 2.0,
    "IIX": -1.0,
    "IXX": -0.5,
    "XXX": -0.25,
    "YYX": -0.25,
    "YXY": -0.25,
    "IYY": -0.5,
    "XYY": 0.25,
}

PROJECTION_PRUNE_TOLERANCE = 1e-12


@dataclass(frozen=True)
class PoissonSystem:
    """System size bookkeeping: n qubits discretize 2^n grid points."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("need n >= 1")

    @property
    def N(self) -> int:
        return 2**self.n


@dataclass(frozen=True)
class DecompositionTerm:
    """One weighted unitary term c_l * A_l with A_l given as a circuit."""

    coeff: float
    circuit: Circuit
    label: str

    def __post_init__(self):
        if not np.isfinite(self.coeff) or self.coeff == 0.0:
            raise ValueError("coefficient must be finite and nonzero")


@dataclass(frozen=True)
class Decomposition:
    system: PoissonSystem
    terms: tuple[DecompositionTerm, ...]
    kind: str  # "hed" | "pauli"

    @property
    def coefficients(self) -> np.ndarray:
        return np.array([t.coeff for t in self.terms])

    def reconstruct_dense(self) -> np.ndarray:
        """Sum of c_l * matrix(A_l); must equal the DPEM."""
        total = np.zeros((self.system.N, self.system.N), dtype=complex)
        for term in self.terms:
            total += term.coeff * circuit_to_matrix(term.circuit)
        return total


@dataclass(frozen=True)
class DecompositionStats:
    term_count: int
    max_circuit_gates: int


def build_dpem_dense(n: int) -> np.ndarray:
    """Dense 2^n x 2^n matrix: 2 on the diagonal, -1 on the off-diagonals."""
    if not 1 <= n <= 10:
        raise ValueError("n must be in 1..10 for dense construction")
    N = 2**n
    a = 2.0 * np.eye(N)
    off = np.arange(N - 1)
    a[off, off + 1] = -1.0
    a[off + 1, off] = -1.0
    return a


# -- HED circuits -------------------------------------------------------------

def l1_circuit(n: int) -> Circuit:
    """X on qubit 0: anti-diagonal [[0,1],[1,0]] in every 2x2 diagonal block."""
    if n < 1:
        raise ValueError("need n >= 1")
    return Circuit(n).x(0)


def c_gate(i: int, n: int) -> Circuit:
    """The permutation block C_i used to assemble L2.

    Gate sequence: CX with control i onto targets i-1 .. 0, then a
    multi-controlled X with controls {0..i-1} onto target i, then the CX
    ladder mirrored.  Total 2i+1 gates.  As a matrix this swaps the basis
    indices 2^i - 1 and 2^i within each block of 2^(i+1), so the different
    C_i act on disjoint index pairs and commute.
    """
    if not 1 <= i <= n - 1:
        raise ValueError("need 1 <= i <= n-1")
    circ = Circuit(n)
    for t in range(i - 1, -1, -1):
        circ.cx(i, t)
    circ.mcx(range(i), i)
    for t in range(i):
        circ.cx(i, t)
    return circ


def l2_circuit(n: int) -> Circuit:
    """Product C_1 C_2 ... C_{n-1}; n^2 - 1 gates total.

    The C_i are mutually commuting permutations (disjoint transpositions),
    so the application order does not change the unitary; they are applied
    in ascending i.
    """
    if n < 2:
        raise ValueError("need n >= 2")
    circ = Circuit(n)
    for i in range(1, n):
        circ = circ.then(c_gate(i, n))
    return circ


def l3_circuit(n: int) -> Circuit:
    """diag(-1, 1, ..., 1, -1) as mCZ(all) X^n mCZ(all) X^n; 2n+2 gates.

    The first mCZ flips the sign of |1...1>, the X-conjugated mCZ flips the
    sign of |0...0>.  At n=1 the two entries coincide with the only two
    basis states and the matrix is diag(-1,-1).
    """
    if n < 1:
        raise ValueError("need n >= 1")
    circ = Circuit(n)
    circ.mcz(range(n))
    for q in range(n):
        circ.x(q)
    circ.mcz(range(n))
    for q in range(n):
        circ.x(q)
    return circ


def hed_terms(n: int) -> Decomposition:
    """Four-term high-entanglement decomposition A = 2.5 I - L1 - L2 - 0.5 L3."""
    if n < 2:
        raise ValueError("HED needs n >= 2 (corner structure requires N >= 4)")
    system = PoissonSystem(n)
    terms = (
        DecompositionTerm(2.5, Circuit(n), "I"),
        DecompositionTerm(-1.0, l1_circuit(n), "L1"),
        DecompositionTerm(-1.0, l2_circuit(n), "L2"),
        DecompositionTerm(-0.5, l3_circuit(n), "L3"),
    )
    return Decomposition(system, terms, "hed")


# -- Pauli decomposition ------------------------------------------------------

def pauli_string_matrix(string: str) -> np.ndarray:
    """Kronecker product of the string, leftmost character most significant."""
    return reduce(np.kron, (PAULI_MATRICES[ch] for ch in string))


def pauli_string_circuit(string: str) -> Circuit:
    """Circuit of single-qubit gates realizing the Pauli string.

    Character k of the string acts on qubit n-1-k (leftmost character on the
    highest qubit), consistent with pauli_string_matrix under the package's
    bit-order convention.
    """
    n = len(string)
    circ = Circuit(n)
    for k, ch in enumerate(string):
        if ch == "I":
            continue
        getattr(circ, ch.lower())(n - 1 - k)
    return circ


def pauli_terms_explicit(n: int) -> Decomposition:
    """The fixed coefficient tables for the 4x4 and 8x8 systems."""
    if n == 2:
        table = PAULI_TABLE_N2
    elif n == 3:
        table = PAULI_TABLE_N3
    else:
        raise ValueError("explicit tables exist for n in {2, 3} only")
    terms = tuple(
        DecompositionTerm(coeff, pauli_string_circuit(string), string)
        for string, coeff in table.items()
    )
    return Decomposition(PoissonSystem(n), terms, "pauli")


def pauli_projection(n: int) -> Decomposition:
    """All Pauli strings with nonzero trace projection onto the DPEM.

    Coefficients come from the orthogonality of the Pauli basis under the
    Hilbert-Schmidt inner product: c_P = Tr(P A) / 2^n.  Strings with
    |c_P| <= 1e-12 are pruned as double-precision noise.  Enumerating all
    4^n strings caps this at n <= 6.
    """
    if not 1 <= n <= 6:
        raise ValueError("projection enumerates 4^n strings; capped at n <= 6")
    a = build_dpem_dense(n)
    N = 2**n
    terms = []
    for chars in itertools.product("IXYZ", repeat=n):
        string = "".join(chars)
        coeff = np.trace(pauli_string_matrix(string) @ a) / N
        # A is real symmetric, so every surviving coefficient is real
        coeff = float(np.real_if_close(coeff, tol=1000))
        if abs(coeff) > PROJECTION_PRUNE_TOLERANCE:
            terms.append(DecompositionTerm(coeff, pauli_string_circuit(string), string))
    return Decomposition(PoissonSystem(n), tuple(terms), "pauli")


# -- analytics ----------------------------------------------------------------

def decomposition_stats(kind: str, n: int) -> DecompositionStats:
    """Term count and worst-term gate count for one decomposition.

    HED: always 4 terms; the size-dependent worst circuit is the L2 term at
    n^2 - 1 gates (L1 and L3 stay at 1 and 2n+2 gates regardless of size).
    Pauli: measured term count from the projection; every term is at most
    one single-qubit gate per qubit, so the worst circuit has n gates.
    """
    if kind == "hed":
        if n < 2:
            raise ValueError("HED needs n >= 2")
        return DecompositionStats(term_count=4, max_circuit_gates=n * n - 1)
    if kind == "pauli":
        return DecompositionStats(
            term_count=len(pauli_projection(n).terms), max_circuit_gates=n
        )
    raise ValueError(f"unknown decomposition kind {kind!r}")


def condition_number(n: int) -> float:
    """kappa = lambda_max / lambda_min of the DPEM via dense eigensolve."""
    if not 1 <= n <= 10:
        raise ValueError("n must be in 1..10")
    eig = dense_eigen_sym(build_dpem_dense(n))
    return float(eig[-1] / eig[0])


def get_decomposition(kind: str, n: int) -> Decomposition:
    """Dispatch helper used by the engine and the benchmark runner."""
    if kind == "hed":
        return hed_terms(n)
    if kind == "pauli":
        return pauli_projection(n)
    raise ValueError(f"unknown decomposition kind {kind!r}")
