"""Loss functions, derivative-free optimization, and accuracy metrics.

The feasibility-guiding loss splits the state on the ancilla flag: the
feasible branch is scored by the objective shifted down by its spectral upper
bound E_O (so every feasible basis state scores <= 0, ordering preserved) and
the infeasible branch by the constraint shifted by its lower bound E_S (so
every infeasible basis state scores >= 0).  Its global minimum is therefore
attained exactly on optimal feasible solutions.  The penalty baseline scores
<O> + lambda <S> on the plain work register.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hamiltonians
from .ansatz import FEASIBILITY, PENALTY, AnsatzSpec, CompiledAnsatz, param_count, random_params
from .graphs import Graph, solution_masks
from .hamiltonians import ZPolynomial, spectral_bounds
from .simulator import StateVector, expect_zpoly


@dataclass(frozen=True)
class LossSpec:
    """Everything a loss evaluation needs besides the state itself."""

    kind: str
    objective: ZPolynomial
    constraint: ZPolynomial
    e_o: float | None = None
    e_s: float | None = None
    lam: float | None = None

    def __post_init__(self):
        if self.kind == FEASIBILITY:
            if self.e_o is None or self.e_s is None:
                raise ValueError("feasibility loss needs spectral bounds")
        elif self.kind == PENALTY:
            if self.lam is None or self.lam <= 0:
                raise ValueError("penalty loss needs a positive penalty factor")
        else:
            raise ValueError(f"unknown loss kind {self.kind!r}")


def make_loss(problem: str, g: Graph, kind: str, lam: float | None = None) -> LossSpec:
    obj = hamiltonians.objective(problem, g)
    cons = hamiltonians.constraint(problem, g)
    if kind == FEASIBILITY:
        e_o, e_s = spectral_bounds(problem, g)
        return LossSpec(kind, obj, cons, e_o=e_o, e_s=e_s)
    return LossSpec(kind, obj, cons, lam=lam)


def loss_feasibility(state: StateVector, spec: LossSpec) -> float:
    """Projector form: <1|1 branch scored by O - E_O, |0> branch by S - E_S,
    computed as two ancilla-restricted expectations."""
    return expect_zpoly(
        state, spec.objective.shift(-spec.e_o), restrict_ancilla=1
    ) + expect_zpoly(state, spec.constraint.shift(-spec.e_s), restrict_ancilla=0)


def loss_feasibility_pauli(state: StateVector, spec: LossSpec) -> float:
    """Measurable rewriting of the same loss as a Pauli combination,

        (1/2) < I(x)O - Z_a(x)O + I(x)S + Z_a(x)S + (E_O - E_S) Z_a >
            - (E_O + E_S)/2,

    evaluated term by term over the full basis.  Agrees with
    loss_feasibility to 1e-10 on every state (algebraic identity)."""
    nq = state.num_qubits
    if spec.objective.n >= nq:
        raise ValueError("state must include the ancilla qubit")
    w = state.probabilities()
    idx = np.arange(w.size)
    za = 1.0 - 2.0 * ((idx >> (nq - 1)) & 1)
    o_vals = spec.objective.eigenvalues()[idx & ((1 << spec.objective.n) - 1)]
    s_vals = spec.constraint.eigenvalues()[idx & ((1 << spec.constraint.n) - 1)]
    total = (
        w @ o_vals
        - w @ (za * o_vals)
        + w @ s_vals
        + w @ (za * s_vals)
        + (spec.e_o - spec.e_s) * (w @ za)
    )
    return float(0.5 * total - 0.5 * (spec.e_o + spec.e_s))


def loss_penalty(state: StateVector, spec: LossSpec) -> float:
    """<O> + lambda <S> on the ancilla-free register."""
    return expect_zpoly(state, spec.objective) + spec.lam * expect_zpoly(
        state, spec.constraint
    )


def accuracy(
    state: StateVector, problem: str, g: Graph, kind: str, postselect: bool = False
) -> float:
    """Probability mass the work-register measurement puts on optimal
    solutions (exact, from the statevector).

    For feasibility states the ancilla is traced out -- it is a deterministic
    function of the work bits, so this equals measuring the work register
    directly.  postselect=True instead conditions on ancilla = |1> (renormalized
    by p1); exposed for sensitivity analysis, not the default.
    """
    _, optimal, _ = solution_masks(problem, g)
    w = state.probabilities()
    if kind == PENALTY:
        if state.num_qubits != g.n:
            raise ValueError("penalty state must have exactly n qubits")
        return float(w @ optimal)
    if state.num_qubits != g.n + 1:
        raise ValueError("feasibility state must have n+1 qubits")
    idx = np.arange(w.size)
    on_optimal = optimal[idx & ((1 << g.n) - 1)]
    if not postselect:
        return float(w[on_optimal].sum())
    anc = ((idx >> g.n) & 1) == 1
    p1 = float(w[anc].sum())
    if p1 == 0.0:
        return 0.0
    return float(w[on_optimal & anc].sum() / p1)


@dataclass(frozen=True)
class RunRecord:
    """Outcome of one optimization run."""

    loss: float
    accuracy: float
    p1: float | None
    evals: int
    converged: bool
    theta: tuple[float, ...]
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.accuracy <= 1.0 + 1e-12:
            raise ValueError(f"accuracy {self.accuracy} outside [0, 1]")
        if self.evals < 1:
            raise ValueError("evals must be >= 1")

    def to_json_dict(self) -> dict:
        return {
            "seed": self.seed,
            "loss": self.loss,
            "accuracy": self.accuracy,
            "p1": self.p1,
            "evals": self.evals,
            "converged": self.converged,
            "theta": list(self.theta),
        }


class CompiledLoss:
    """Loss-as-a-function-of-theta with all state tables precomputed.

    Matches the gate-path loss functions to float precision; the agreement is
    pinned by tests, the gate path stays the reference.
    """

    def __init__(self, spec: AnsatzSpec, loss: LossSpec):
        if spec.kind != loss.kind:
            raise ValueError(f"ansatz kind {spec.kind!r} != loss kind {loss.kind!r}")
        self.spec = spec
        self.loss_spec = loss
        self.compiled = CompiledAnsatz(spec)
        o_vals = loss.objective.eigenvalues()
        s_vals = loss.constraint.eigenvalues()
        if spec.kind == FEASIBILITY:
            f = self.compiled.feasible
            self.table = np.where(f, o_vals - loss.e_o, s_vals - loss.e_s)
        else:
            self.table = o_vals + loss.lam * s_vals
        _, optimal, _ = solution_masks(spec.problem, spec.graph)
        self.optimal_mask = optimal

    def value(self, theta: np.ndarray) -> float:
        w = np.abs(self.compiled.work_state(theta)) ** 2
        return float(w @ self.table)

    def summarize(self, theta: np.ndarray) -> tuple[float, float, float | None]:
        """(loss, accuracy, p1) at theta, from one state build."""
        w = np.abs(self.compiled.work_state(theta)) ** 2
        loss = float(w @ self.table)
        acc = float(w @ self.optimal_mask)
        p1 = float(w[self.compiled.feasible].sum()) if self.spec.kind == FEASIBILITY else None
        return loss, acc, p1


class _BudgetExhausted(Exception):
    pass


def nelder_mead(
    fn,
    x0: np.ndarray,
    budget: int,
    step: float = 0.1,
    ftol: float = 1e-8,
) -> tuple[np.ndarray, float, int, bool]:
    """Simplex minimization with reflection 1, expansion 2, contraction 0.5,
    shrink 0.5; initial simplex is x0 plus `step` along each coordinate.

    Stops when the simplex loss spread drops below ftol (converged) or the
    evaluation budget is spent (not an error: the best point seen so far is
    returned).  Deterministic given (x0, budget).
    """
    if budget < 1:
        raise ValueError("budget must be >= 1")
    x0 = np.asarray(x0, dtype=float)
    dim = x0.size
    evals = 0
    best_x, best_f = x0.copy(), np.inf

    def ev(x):
        nonlocal evals, best_x, best_f
        if evals >= budget:
            raise _BudgetExhausted
        f = float(fn(x))
        evals += 1
        if f < best_f:
            best_f, best_x = f, x.copy()
        return f

    converged = False
    try:
        sim = [x0.copy()]
        for i in range(dim):
            v = x0.copy()
            v[i] += step
            sim.append(v)
        fs = [ev(v) for v in sim]
        sim = np.array(sim)
        fs = np.array(fs)
        while True:
            order = np.argsort(fs, kind="stable")
            sim, fs = sim[order], fs[order]
            if fs[-1] - fs[0] <= ftol:
                converged = True
                break
            centroid = sim[:-1].mean(axis=0)
            xr = centroid + (centroid - sim[-1])
            fr = ev(xr)
            if fr < fs[0]:
                xe = centroid + 2.0 * (centroid - sim[-1])
                fe = ev(xe)
                if fe < fr:
                    sim[-1], fs[-1] = xe, fe
                else:
                    sim[-1], fs[-1] = xr, fr
            elif fr < fs[-2]:
                sim[-1], fs[-1] = xr, fr
            else:
                if fr < fs[-1]:
                    xc = centroid + 0.5 * (centroid - sim[-1])
                    fc = ev(xc)
                    accept = fc <= fr
                else:
                    xc = centroid - 0.5 * (centroid - sim[-1])
                    fc = ev(xc)
                    accept = fc < fs[-1]
                if accept:
                    sim[-1], fs[-1] = xc, fc
                else:
                    for i in range(1, dim + 1):
                        sim[i] = sim[0] + 0.5 * (sim[i] - sim[0])
                        fs[i] = ev(sim[i])
    except _BudgetExhausted:
        pass
    return best_x, best_f, evals, converged


def optimize(
    spec: AnsatzSpec,
    loss: LossSpec,
    init: np.ndarray,
    budget: int = 20000,
    seed: int | None = None,
) -> RunRecord:
    """Nelder-Mead over the flat parameter vector; deterministic given
    (init, budget)."""
    init = np.asarray(init, dtype=float)
    if init.shape != (param_count(spec),):
        raise ValueError(
            f"init has {init.size} entries, spec needs {param_count(spec)}"
        )
    compiled = CompiledLoss(spec, loss)
    theta, _, evals, converged = nelder_mead(compiled.value, init, budget)
    loss_val, acc, p1 = compiled.summarize(theta)
    return RunRecord(
        loss=loss_val,
        accuracy=acc,
        p1=p1,
        evals=evals,
        converged=converged,
        theta=tuple(float(t) for t in theta),
        seed=seed,
    )


def multistart(
    spec: AnsatzSpec, loss: LossSpec, starts: list[int], budget: int = 20000
) -> list[RunRecord]:
    """One optimize() per seed, initial angles ~ U[0, 2pi) per coordinate;
    records returned in seed order."""
    return [
        optimize(spec, loss, random_params(spec, s), budget, seed=s) for s in starts
    ]
