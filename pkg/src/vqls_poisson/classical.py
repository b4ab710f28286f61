"""Classical ground truth for the Poisson system.

The tridiagonal (2, -1) system is solved directly with the Thomas algorithm
against the uniform right-hand side b = (1, ..., 1)/sqrt(N) — the vector the
quantum side prepares as H^{\\otimes n}|0>.  The normalized solution is the
target state every variational run is judged against.

The dense helpers are thin, guarded wrappers around numpy's linear algebra;
they back the condition-number and trace-distance oracles so that every
"exact" number in the test suite comes from one well-audited place.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

DENSE_DIMENSION_CAP = 1024


@dataclass(frozen=True)
class ClassicalSolution:
    """Raw and unit-normalized solutions of A x = b."""

    x_raw: np.ndarray
    x_normalized: np.ndarray


def thomas_solve(n: int) -> ClassicalSolution:
    """Solve the 2^n-point discretized Poisson system by the Thomas algorithm.

    Tridiagonal system: 2 on the diagonal, -1 on both off-diagonals, right-
    hand side fixed to the uniform unit vector (1, ..., 1)/sqrt(N).  Forward
    elimination of the subdiagonal followed by back substitution; O(N) and
    stable here because the matrix is symmetric positive definite.
    """
    if not 1 <= n <= 20:
        raise ValueError("n must be in 1..20")
    N = 2**n
    b = np.full(N, 1.0 / math.sqrt(N))
    # forward sweep: c'_k = upper/denominator, d'_k = rhs/denominator
    c_prime = np.empty(N - 1) if N > 1 else np.empty(0)
    d_prime = np.empty(N)
    denom = 2.0
    if N > 1:
        c_prime[0] = -1.0 / denom
    d_prime[0] = b[0] / denom
    for k in range(1, N):
        denom = 2.0 - (-1.0) * c_prime[k - 1]
        if k < N - 1:
            c_prime[k] = -1.0 / denom
        d_prime[k] = (b[k] - (-1.0) * d_prime[k - 1]) / denom
    x = np.empty(N)
    x[-1] = d_prime[-1]
    for k in range(N - 2, -1, -1):
        x[k] = d_prime[k] - c_prime[k] * x[k + 1]
    return ClassicalSolution(x_raw=x, x_normalized=x / np.linalg.norm(x))


def dense_matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Guarded dense product used by the verification oracles."""
    a = np.asarray(a)
    b = np.asarray(b)
    if max(a.shape[0], b.shape[-1] if b.ndim > 1 else 1) > DENSE_DIMENSION_CAP:
        raise ValueError("dense path capped at dimension 1024")
    return a @ b


def dense_eigen_sym(matrix: np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric/Hermitian matrix, ascending."""
    m = np.asarray(matrix)
    if m.shape[0] != m.shape[1] or m.shape[0] > DENSE_DIMENSION_CAP:
        raise ValueError("need a square matrix of dimension <= 1024")
    if not np.allclose(m, m.conj().T, atol=1e-10):
        raise ValueError("matrix is not symmetric")
    return np.linalg.eigvalsh(m)
