"""Parameterized state-preparation circuits.

Two families, both built from Ry rotation layers and CZ entangling layers
and optionally preconditioned with the |b>-preparation layer H^{\\otimes n}:

* **GEA** (globally-entangling ansatz): after each rotation layer, CZ on
  *every* unordered qubit pair — the all-to-all-connectivity ansatz.  The
  CZs commute, so the pair order is irrelevant to the unitary.
* **HEA** (hardware-efficient ansatz): nearest-neighbor CZ bricks, even
  pairs (0,1),(2,3),... on even layers and odd pairs (1,2),(3,4),... on odd
  layers — the linear-connectivity baseline.

Both use one parameter per Ry gate: layers * n parameters.  GEA defaults to
3 layers, the HEA baseline to 8, giving the parameter-count gap the two
families are compared under.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .qsim import Circuit

GEA_DEFAULT_LAYERS = 3
HEA_DEFAULT_LAYERS = 8


@dataclass(frozen=True)
class AnsatzSpec:
    kind: str  # "gea" | "hea"
    n: int
    layers: int
    precondition_b: bool = True

    def __post_init__(self):
        if self.kind not in ("gea", "hea"):
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.n < 1 or self.layers < 1:
            raise ValueError("need n >= 1 and layers >= 1")

    @property
    def parameter_count(self) -> int:
        return self.layers * self.n


def gea_spec(n: int, layers: int = GEA_DEFAULT_LAYERS, precondition_b: bool = True) -> AnsatzSpec:
    return AnsatzSpec("gea", n, layers, precondition_b)


def hea_spec(n: int, layers: int = HEA_DEFAULT_LAYERS, precondition_b: bool = True) -> AnsatzSpec:
    return AnsatzSpec("hea", n, layers, precondition_b)


def _start_circuit(spec: AnsatzSpec) -> Circuit:
    circ = Circuit(spec.n)
    if spec.precondition_b:
        for q in range(spec.n):
            circ.h(q)
    return circ


def _check_theta(spec: AnsatzSpec, theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (spec.parameter_count,):
        raise ValueError(
            f"expected {spec.parameter_count} parameters, got shape {theta.shape}"
        )
    if not np.all(np.isfinite(theta)):
        raise ValueError("parameters must be finite")
    return theta


def build_gea(spec: AnsatzSpec, theta) -> Circuit:
    """Rotation layer then CZ on all pairs, repeated spec.layers times."""
    if spec.kind != "gea":
        raise ValueError("spec.kind must be 'gea'")
    theta = _check_theta(spec, theta)
    circ = _start_circuit(spec)
    for layer in range(spec.layers):
        for q in range(spec.n):
            circ.ry(q, theta[layer * spec.n + q])
        for a, b in combinations(range(spec.n), 2):
            circ.cz(a, b)
    return circ


def build_hea(spec: AnsatzSpec, theta) -> Circuit:
    """Rotation layer then a nearest-neighbor CZ brick, alternating parity."""
    if spec.kind != "hea":
        raise ValueError("spec.kind must be 'hea'")
    theta = _check_theta(spec, theta)
    circ = _start_circuit(spec)
    for layer in range(spec.layers):
        for q in range(spec.n):
            circ.ry(q, theta[layer * spec.n + q])
        start = 0 if layer % 2 == 0 else 1
        for a in range(start, spec.n - 1, 2):
            circ.cz(a, a + 1)
    return circ


def build_ansatz(spec: AnsatzSpec, theta) -> Circuit:
    return build_gea(spec, theta) if spec.kind == "gea" else build_hea(spec, theta)


def init_params(count: int, q_delta: float, seed) -> np.ndarray:
    """Draw ``count`` angles i.i.d. from Normal(0, variance=q_delta).

    q_delta is the *variance* of the zero-mean initialization; the two
    experiment presets are q_delta = 0.01 and q_delta = 0.1.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not 0.0 < q_delta <= 1.0:
        raise ValueError("q_delta must be in (0, 1]")
    rng = np.random.default_rng(seed)
    return rng.normal(0.0, np.sqrt(q_delta), count)
