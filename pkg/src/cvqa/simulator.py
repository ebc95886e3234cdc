"""Exact dense statevector simulation over N work qubits plus one ancilla.

Qubit q is bit q of the basis index (little-endian).  Angle convention is the
full-angle exponential throughout: RX(t) = exp(-i t X), RZ(t) = exp(-i t Z),
RZZ(t) = exp(-i t Z Z) -- NOT the half-angle convention of most gate
libraries, so a layer angle maps 1:1 onto the evolution parameter it
implements.  MCX supports mixed control polarities natively (polarity 1
matches |1>, polarity 0 matches |0>).

Kernels index axis 0 of the amplitude array, so a (2^q, B) array simulates B
independent states in one pass; StateVector wraps the 1-D case.
"""

from __future__ import annotations

from dataclasses import dataclass
import cmath
import math

import numpy as np

from .esop import ABSENT, EsopExpr, NEG
from .hamiltonians import ZPolynomial

MAX_QUBITS = 26


@dataclass(frozen=True)
class GateOp:
    """One gate: kind in {H, X, RX, RZ, RZZ, MCX}, targets, optional angle,
    and for MCX a tuple of (qubit, polarity) controls."""

    kind: str
    targets: tuple[int, ...]
    angle: float | None = None
    controls: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        touched = list(self.targets) + [q for q, _ in self.controls]
        if len(set(touched)) != len(touched):
            raise ValueError(f"repeated qubit in {self}")
        if self.angle is not None and not math.isfinite(self.angle):
            raise ValueError(f"non-finite angle in {self}")

    def format(self) -> str:
        """Dump-format line; angles printed with 17 significant digits."""
        if self.kind in ("H", "X"):
            return f"{self.kind} {self.targets[0]}"
        if self.kind in ("RX", "RZ"):
            return f"{self.kind} {self.angle:.17g} {self.targets[0]}"
        if self.kind == "RZZ":
            return f"RZZ {self.angle:.17g} {self.targets[0]} {self.targets[1]}"
        parts = ["MCX"]
        parts += [f"{'+' if pol else '-'}{q}" for q, pol in self.controls]
        return " ".join(parts + ["->", str(self.targets[0])])


def h(q: int) -> GateOp:
    return GateOp("H", (q,))


def x(q: int) -> GateOp:
    return GateOp("X", (q,))


def rx(angle: float, q: int) -> GateOp:
    return GateOp("RX", (q,), float(angle))


def rz(angle: float, q: int) -> GateOp:
    return GateOp("RZ", (q,), float(angle))


def rzz(angle: float, u: int, v: int) -> GateOp:
    return GateOp("RZZ", (u, v), float(angle))


def mcx(controls: tuple[tuple[int, int], ...], target: int) -> GateOp:
    return GateOp("MCX", (target,), controls=tuple(controls))


def format_circuit(gates: list[GateOp]) -> str:
    return "\n".join(g.format() for g in gates) + ("\n" if gates else "")


def _pair_indices(nq: int, q: int) -> tuple[np.ndarray, np.ndarray]:
    step = 1 << q
    base = np.arange(0, 1 << nq, step << 1)
    i0 = (base[:, None] + np.arange(step)[None, :]).ravel()
    return i0, i0 + step


def _bcast(phase: np.ndarray, amps: np.ndarray) -> np.ndarray:
    return phase[:, None] if amps.ndim == 2 else phase


def apply_to_array(amps: np.ndarray, num_qubits: int, gates) -> np.ndarray:
    """Apply gates in order to an amplitude array (axis 0 = basis index)."""
    for g in gates:
        for q in list(g.targets) + [c for c, _ in g.controls]:
            if not 0 <= q < num_qubits:
                raise IndexError(f"qubit {q} out of range for {num_qubits} qubits")
        if g.kind == "H":
            i0, i1 = _pair_indices(num_qubits, g.targets[0])
            a, b = amps[i0], amps[i1]
            s = 1.0 / math.sqrt(2.0)
            amps[i0], amps[i1] = s * (a + b), s * (a - b)
        elif g.kind == "X":
            i0, i1 = _pair_indices(num_qubits, g.targets[0])
            amps[i0], amps[i1] = amps[i1], amps[i0].copy()
        elif g.kind == "RX":
            i0, i1 = _pair_indices(num_qubits, g.targets[0])
            c, s = math.cos(g.angle), -1j * math.sin(g.angle)
            a, b = amps[i0], amps[i1]
            amps[i0], amps[i1] = c * a + s * b, s * a + c * b
        elif g.kind == "RZ":
            i0, i1 = _pair_indices(num_qubits, g.targets[0])
            amps[i0] *= cmath.exp(-1j * g.angle)
            amps[i1] *= cmath.exp(1j * g.angle)
        elif g.kind == "RZZ":
            u, v = g.targets
            idx = np.arange(1 << num_qubits)
            equal = (((idx >> u) ^ (idx >> v)) & 1) == 0
            phase = np.where(equal, cmath.exp(-1j * g.angle), cmath.exp(1j * g.angle))
            amps *= _bcast(phase, amps)
        elif g.kind == "MCX":
            t = g.targets[0]
            idx = np.arange(1 << num_qubits)
            match = ((idx >> t) & 1) == 0
            for q, pol in g.controls:
                match &= ((idx >> q) & 1) == pol
            i0 = np.flatnonzero(match)
            i1 = i0 + (1 << t)
            amps[i0], amps[i1] = amps[i1], amps[i0].copy()
        else:
            raise ValueError(f"unknown gate kind {g.kind!r}")
    return amps


class StateVector:
    """Dense complex amplitudes over num_qubits qubits, |0...0> initialized.

    apply() mutates in place; do not share an instance across tasks while
    mutating.
    """

    def __init__(self, num_qubits: int):
        if not 1 <= num_qubits <= MAX_QUBITS:
            raise ValueError(f"num_qubits must be in 1..{MAX_QUBITS}, got {num_qubits}")
        self.num_qubits = num_qubits
        self.amps = np.zeros(1 << num_qubits, dtype=np.complex128)
        self.amps[0] = 1.0

    @classmethod
    def from_amps(cls, amps: np.ndarray) -> "StateVector":
        amps = np.asarray(amps, dtype=np.complex128)
        nq = int(round(math.log2(amps.size)))
        if 1 << nq != amps.size:
            raise ValueError(f"amplitude count {amps.size} is not a power of two")
        sv = cls(nq)
        sv.amps = amps.copy()
        return sv

    def copy(self) -> "StateVector":
        return StateVector.from_amps(self.amps)

    def apply(self, gate: GateOp) -> "StateVector":
        apply_to_array(self.amps, self.num_qubits, [gate])
        return self

    def apply_all(self, gates) -> "StateVector":
        apply_to_array(self.amps, self.num_qubits, gates)
        return self

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amps) ** 2

    def norm(self) -> float:
        return float(np.sqrt(np.sum(np.abs(self.amps) ** 2)))


def apply(state: StateVector, gate: GateOp) -> StateVector:
    """Function form of StateVector.apply; mutates and returns `state`."""
    return state.apply(gate)


def build_oracle_circuit(
    e: EsopExpr, work: list[int], ancilla: int, fuse_polarity: bool = False
) -> list[GateOp]:
    """Circuit mapping |b>_a |x> to |b XOR F(x)>_a |x> for the ESOP F.

    One block per cube, in cube-list order (XOR commutes, so order only
    affects the dump): X on each negated work qubit, an MCX on the cube's
    non-absent qubits targeting the ancilla, then the undoing X gates.  With
    fuse_polarity=True each block collapses to a single mixed-polarity MCX --
    same unitary, fewer gate records (the conjugated form is what hardware
    resource counts are charged against).
    """
    if len(work) != e.n:
        raise ValueError(f"{len(work)} work qubits for {e.n} variables")
    if ancilla in work:
        raise ValueError("ancilla must not be a work qubit")
    gates: list[GateOp] = []
    for cube in e.cubes:
        active = [(work[i], lit) for i, lit in enumerate(cube.literals) if lit != ABSENT]
        if not active:
            gates.append(x(ancilla))
            continue
        if fuse_polarity:
            gates.append(mcx(tuple(active), ancilla))
            continue
        flips = [x(q) for q, lit in active if lit == NEG]
        gates.extend(flips)
        gates.append(mcx(tuple((q, 1) for q, _ in active), ancilla))
        gates.extend(flips)
    return gates


def ancilla_branch_probs(state: StateVector, ancilla: int) -> tuple[float, float]:
    """(p0, p1): probability mass on each ancilla branch."""
    if not 0 <= ancilla < state.num_qubits:
        raise IndexError(f"ancilla {ancilla} out of range")
    w = state.probabilities()
    bits = (np.arange(w.size) >> ancilla) & 1
    p1 = float(w[bits == 1].sum())
    return 1.0 - p1, p1


def expect_zpoly(
    state: StateVector, obs: ZPolynomial, restrict_ancilla: int | None = None
) -> float:
    """Expectation of a diagonal observable over the low obs.n qubits.

    With restrict_ancilla = b this is the unnormalized projector expectation
    <Psi| (|b><b|_a (x) obs) |Psi> where the ancilla is the top qubit (index
    num_qubits - 1); it includes the branch-probability factor.
    """
    if obs.n > state.num_qubits:
        raise ValueError(f"observable on {obs.n} qubits, state has {state.num_qubits}")
    w = state.probabilities()
    idx = np.arange(w.size)
    vals = obs.eigenvalues()[idx & ((1 << obs.n) - 1)]
    if restrict_ancilla is None:
        return float(w @ vals)
    if obs.n >= state.num_qubits:
        raise ValueError("ancilla restriction needs obs on fewer qubits than the state")
    sel = ((idx >> (state.num_qubits - 1)) & 1) == restrict_ancilla
    return float(w[sel] @ vals[sel])


def resource_estimate(e: EsopExpr) -> dict:
    """Gate-cost summary for implementing the oracle, never simulated:
    each width-k cube (k >= 2) is charged the 6k+2 CNOT bound of the
    single-clean-ancilla multi-controlled-X decomposition; width-1 cubes are a
    plain CNOT; width-0 cubes are an uncontrolled X (no CNOTs)."""
    widths = [c.width() for c in e.cubes]
    cnot = sum(6 * w + 2 if w >= 2 else w for w in widths)
    return {
        "mcx_count": len(e.cubes),
        "max_controls": max(widths, default=0),
        "cnot_bound": cnot,
        "ancilla_needed": 1 if any(w >= 3 for w in widths) else 0,
    }
