"""Parametrized circuit builders: the feasibility-certified ansatz (ancilla +
validation oracle) and the penalty baseline, with one independent parameter
per Hamiltonian term.

Parameter layout (normative for checkpoint files, one flat vector):
    [layer 0: beta(n), gamma(|E|), mu(n); layer 1: ...]
with gamma slots in canonical (sorted) edge order.  Angles are radians.
Within a layer the gates run RZZ (gamma), then RZ (mu), then RX (beta); the
diagonal gates commute, so this order only fixes the circuit dump.
"""

from __future__ import annotations

from dataclasses import dataclass
import json
import math

import numpy as np

from .esop import EsopExpr, constraint_esop, esop_table
from .graphs import Graph
from . import simulator
from .simulator import GateOp, StateVector

FEASIBILITY = "feasibility"
PENALTY = "penalty"

# Hadamard-basis matrix path for the RX layer pays off only while the full
# transform matrix stays small; above this many work qubits the compiled
# evaluator falls back to per-qubit kernels.
_RX_MATRIX_MAX_QUBITS = 7


@dataclass(frozen=True)
class AnsatzSpec:
    """Immutable description of one parametrized circuit family.

    For the feasibility kind, `oracle` holds the compiled validation-oracle
    gates (applied once, after all layers) and `expr` the ESOP they were built
    from; the ancilla is the last qubit (index graph.n) so work bit i stays
    vertex i.
    """

    kind: str
    problem: str
    graph: Graph
    depth: int
    lam: float | None = None
    expr: EsopExpr | None = None
    oracle: tuple[GateOp, ...] | None = None

    def __post_init__(self):
        if self.kind not in (FEASIBILITY, PENALTY):
            raise ValueError(f"unknown ansatz kind {self.kind!r}")
        if self.depth < 1:
            raise ValueError(f"depth must be >= 1, got {self.depth}")
        if self.kind == PENALTY:
            if self.lam is None or self.lam <= 0:
                raise ValueError("penalty ansatz needs a positive penalty factor")
        elif self.oracle is None or self.expr is None:
            raise ValueError("feasibility ansatz needs a compiled oracle")

    @property
    def num_qubits(self) -> int:
        return self.graph.n + (1 if self.kind == FEASIBILITY else 0)

    @property
    def ancilla(self) -> int | None:
        return self.graph.n if self.kind == FEASIBILITY else None


def make_ansatz(
    problem: str,
    g: Graph,
    kind: str,
    depth: int,
    lam: float | None = None,
    fuse_oracle: bool = False,
) -> AnsatzSpec:
    """Build an AnsatzSpec, compiling the constraint oracle when needed."""
    if kind == PENALTY:
        return AnsatzSpec(kind, problem, g, depth, lam=lam)
    expr = constraint_esop(problem, g)
    oracle = simulator.build_oracle_circuit(
        expr, list(range(g.n)), g.n, fuse_polarity=fuse_oracle
    )
    return AnsatzSpec(kind, problem, g, depth, expr=expr, oracle=tuple(oracle))


def param_count(spec: AnsatzSpec) -> int:
    """depth * (2n + |E|), identical for both kinds at equal depth."""
    return spec.depth * (2 * spec.graph.n + len(spec.graph.edges))


def _layer_angles(spec: AnsatzSpec, theta: np.ndarray, layer: int):
    n, m = spec.graph.n, len(spec.graph.edges)
    base = layer * (2 * n + m)
    beta = theta[base : base + n]
    gamma = theta[base + n : base + n + m]
    mu = theta[base + n + m : base + 2 * n + m]
    return beta, gamma, mu


def _penalty_coeffs(spec: AnsatzSpec) -> tuple[np.ndarray, np.ndarray]:
    """Per-edge and per-vertex angle scales of the penalty problem unitary:
    lambda/4 on each Z_u Z_v and (-1/2 + lambda*d_j/4) on each Z_j."""
    deg = np.array(spec.graph.degrees(), dtype=float)
    edge = np.full(len(spec.graph.edges), spec.lam / 4.0)
    vert = -0.5 + spec.lam * deg / 4.0
    return edge, vert


def build_circuit(spec: AnsatzSpec, theta: np.ndarray) -> list[GateOp]:
    """Full gate list: Hadamard wall, depth layers, then (feasibility only)
    the validation oracle."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape != (param_count(spec),):
        raise ValueError(
            f"theta has {theta.size} entries, spec needs {param_count(spec)}"
        )
    n = spec.graph.n
    if spec.kind == PENALTY:
        edge_scale, vert_scale = _penalty_coeffs(spec)
    else:
        edge_scale, vert_scale = np.ones(len(spec.graph.edges)), np.ones(n)
    gates = [simulator.h(q) for q in range(n)]
    for layer in range(spec.depth):
        beta, gamma, mu = _layer_angles(spec, theta, layer)
        for e, (u, v) in enumerate(spec.graph.edges):
            gates.append(simulator.rzz(edge_scale[e] * gamma[e], u, v))
        for j in range(n):
            gates.append(simulator.rz(vert_scale[j] * mu[j], j))
        for j in range(n):
            gates.append(simulator.rx(beta[j], j))
    if spec.kind == FEASIBILITY:
        gates.extend(spec.oracle)
    return gates


def build_state(spec: AnsatzSpec, theta: np.ndarray) -> StateVector:
    """Gate-by-gate construction of the ansatz state (the reference path;
    CompiledAnsatz is the fast equivalent)."""
    sv = StateVector(spec.num_qubits)
    return sv.apply_all(build_circuit(spec, theta))


def random_params(spec: AnsatzSpec, seed: int) -> np.ndarray:
    """Initial angles drawn uniformly from [0, 2pi) per coordinate: every gate
    family is 2pi-periodic in our full-angle convention, so this is the
    least-informative start."""
    rng = np.random.default_rng(int(seed))
    return rng.uniform(0.0, 2.0 * math.pi, param_count(spec))


def save_params(spec: AnsatzSpec, theta: np.ndarray, path) -> None:
    obj = {"kind": spec.kind, "p": spec.depth, "theta": [float(t) for t in theta]}
    with open(path, "w") as fh:
        json.dump(obj, fh, sort_keys=True)
        fh.write("\n")


def load_params(path) -> tuple[str, int, np.ndarray]:
    with open(path) as fh:
        obj = json.load(fh)
    return str(obj["kind"]), int(obj["p"]), np.asarray(obj["theta"], dtype=float)


def _hadamard_matrix(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    par = np.zeros((idx.size, idx.size), dtype=np.int64)
    both = idx[:, None] & idx[None, :]
    for b in range(n):
        par += (both >> b) & 1
    return ((1.0 - 2.0 * (par & 1)) * 2.0 ** (-n / 2.0)).astype(np.complex128)


class CompiledAnsatz:
    """Table-driven evaluator producing the same state as build_state.

    Precomputes per-layer diagonal sign tables, the RX-layer transform, and
    the oracle as a basis permutation, so repeated evaluation at new theta
    (the optimizer hot loop) costs a few small matvecs instead of a gate walk.
    """

    def __init__(self, spec: AnsatzSpec):
        self.spec = spec
        n = spec.graph.n
        idx = np.arange(1 << n)
        zbit = 1.0 - 2.0 * ((idx[:, None] >> np.arange(n)[None, :]) & 1)
        if spec.graph.edges:
            us = np.array([u for u, _ in spec.graph.edges])
            vs = np.array([v for _, v in spec.graph.edges])
            zz = zbit[:, us] * zbit[:, vs]
        else:
            zz = np.zeros((idx.size, 0))
        if spec.kind == PENALTY:
            edge_scale, vert_scale = _penalty_coeffs(spec)
        else:
            edge_scale, vert_scale = 1.0, 1.0
        # columns ordered [gamma | mu] to match the tail of each layer slice
        self._diag = np.concatenate([zz * edge_scale, zbit * vert_scale], axis=1)
        self._zbit = zbit
        if n <= _RX_MATRIX_MAX_QUBITS:
            self._hmat = _hadamard_matrix(n)
            self._rx_pairs = None
        else:
            self._hmat = None
            self._rx_pairs = [simulator._pair_indices(n, q) for q in range(n)]
        if spec.kind == FEASIBILITY:
            self.feasible = esop_table(spec.expr)
            self._perm = idx + (self.feasible.astype(np.int64) << n)
        else:
            self.feasible = None
            self._perm = None

    def _rx_layer(self, psi: np.ndarray, beta: np.ndarray) -> np.ndarray:
        if self._hmat is not None:
            return self._hmat @ (np.exp(-1j * (self._zbit @ beta)) * (self._hmat @ psi))
        for q, (i0, i1) in enumerate(self._rx_pairs):
            c, s = math.cos(beta[q]), -1j * math.sin(beta[q])
            a, b = psi[i0], psi[i1]
            psi[i0], psi[i1] = c * a + s * b, s * a + c * b
        return psi

    def work_state(self, theta: np.ndarray) -> np.ndarray:
        """Work-register amplitudes after all layers (before any oracle)."""
        theta = np.asarray(theta, dtype=float)
        if theta.shape != (param_count(self.spec),):
            raise ValueError(
                f"theta has {theta.size} entries, spec needs {param_count(self.spec)}"
            )
        n = self.spec.graph.n
        psi = np.full(1 << n, 2.0 ** (-n / 2.0), dtype=np.complex128)
        for layer in range(self.spec.depth):
            beta, gamma, mu = _layer_angles(self.spec, theta, layer)
            psi = psi * np.exp(-1j * (self._diag @ np.concatenate([gamma, mu])))
            psi = self._rx_layer(psi, beta)
        return psi

    def full_amps(self, theta: np.ndarray) -> np.ndarray:
        """Amplitudes of the complete state, oracle applied for feasibility."""
        psi = self.work_state(theta)
        if self.spec.kind == PENALTY:
            return psi
        amps = np.zeros(psi.size * 2, dtype=np.complex128)
        amps[self._perm] = psi
        return amps

    def state(self, theta: np.ndarray) -> StateVector:
        return StateVector.from_amps(self.full_amps(theta))
