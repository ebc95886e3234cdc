"""Diagonal Ising observables (Z-polynomials of degree <= 2) and the
MVC/MIS objective, constraint, and penalty Hamiltonians.

Eigenvalues follow the package spin convention: basis state bit 1 means
spin z = -1 (vertex selected).  Constant terms are kept so that eigenvalues
equal the combinatorial counts literally; circuit builders ignore them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
import json

import numpy as np

from .graphs import Graph


@dataclass(frozen=True)
class ZPolynomial:
    """constant + sum_i linear[i] Z_i + sum_{u<v} quadratic[u,v] Z_u Z_v."""

    n: int
    constant: float = 0.0
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        for i in self.linear:
            if not 0 <= i < self.n:
                raise ValueError(f"linear index {i} out of range")
        canon = {}
        for (u, v), c in self.quadratic.items():
            if u == v or not (0 <= u < self.n and 0 <= v < self.n):
                raise ValueError(f"bad quadratic pair ({u}, {v})")
            canon[(min(u, v), max(u, v))] = canon.get((min(u, v), max(u, v)), 0.0) + c
        object.__setattr__(self, "quadratic", canon)

    def __add__(self, other: "ZPolynomial") -> "ZPolynomial":
        if other.n != self.n:
            raise ValueError("qubit-count mismatch")
        lin = dict(self.linear)
        for i, c in other.linear.items():
            lin[i] = lin.get(i, 0.0) + c
        quad = dict(self.quadratic)
        for k, c in other.quadratic.items():
            quad[k] = quad.get(k, 0.0) + c
        return ZPolynomial(self.n, self.constant + other.constant, lin, quad)

    def scale(self, a: float) -> "ZPolynomial":
        return ZPolynomial(
            self.n,
            a * self.constant,
            {i: a * c for i, c in self.linear.items()},
            {k: a * c for k, c in self.quadratic.items()},
        )

    def shift(self, a: float) -> "ZPolynomial":
        """Add a multiple of the identity."""
        return ZPolynomial(self.n, self.constant + a, dict(self.linear), dict(self.quadratic))

    def evaluate(self, x: int) -> float:
        """Eigenvalue on the basis state encoding assignment integer x."""
        z = [1.0 - 2.0 * ((x >> i) & 1) for i in range(self.n)]
        val = self.constant
        val += sum(c * z[i] for i, c in self.linear.items())
        val += sum(c * z[u] * z[v] for (u, v), c in self.quadratic.items())
        return val

    def eigenvalues(self) -> np.ndarray:
        """All 2^n diagonal entries, indexed by assignment integer."""
        idx = np.arange(1 << self.n)
        zbits = 1.0 - 2.0 * ((idx[:, None] >> np.arange(self.n)[None, :]) & 1)
        vals = np.full(idx.shape, self.constant)
        for i, c in self.linear.items():
            vals += c * zbits[:, i]
        for (u, v), c in self.quadratic.items():
            vals += c * zbits[:, u] * zbits[:, v]
        return vals

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "constant": self.constant,
            "linear": {str(i): c for i, c in sorted(self.linear.items())},
            "quadratic": {f"{u},{v}": c for (u, v), c in sorted(self.quadratic.items())},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":")) + "\n"

    @classmethod
    def from_json_dict(cls, obj: dict) -> "ZPolynomial":
        quad = {}
        for key, c in obj.get("quadratic", {}).items():
            u, v = key.split(",")
            quad[(int(u), int(v))] = float(c)
        return cls(
            int(obj["n"]),
            float(obj.get("constant", 0.0)),
            {int(i): float(c) for i, c in obj.get("linear", {}).items()},
            quad,
        )


def mvc_objective(g: Graph) -> ZPolynomial:
    """sum_i (1 - Z_i)/2: counts selected vertices."""
    return ZPolynomial(
        g.n, constant=g.n / 2.0, linear={i: -0.5 for i in range(g.n)}
    )


def mvc_constraint(g: Graph) -> ZPolynomial:
    """sum_edges (Z_u Z_v + Z_u + Z_v + I)/4: counts uncovered edges."""
    out = ZPolynomial(g.n)
    for u, v in g.edges:
        out = out + ZPolynomial(
            g.n, constant=0.25, linear={u: 0.25, v: 0.25}, quadratic={(u, v): 0.25}
        )
    return out


def mis_objective(g: Graph) -> ZPolynomial:
    """nI - sum_i (I - Z_i)/2: equals n minus the selected count, so its
    minimum picks the largest set."""
    return ZPolynomial(
        g.n, constant=g.n / 2.0, linear={i: 0.5 for i in range(g.n)}
    )


def mis_constraint(g: Graph) -> ZPolynomial:
    """sum_edges (Z_u Z_v - Z_u - Z_v + I)/4: counts edges with both endpoints
    selected.  The term is (1 - z_u)(1 - z_v)/4, i.e. 1 exactly when
    z_u = z_v = -1."""
    out = ZPolynomial(g.n)
    for u, v in g.edges:
        out = out + ZPolynomial(
            g.n, constant=0.25, linear={u: -0.25, v: -0.25}, quadratic={(u, v): 0.25}
        )
    return out


def objective(problem: str, g: Graph) -> ZPolynomial:
    if problem == "MVC":
        return mvc_objective(g)
    if problem == "MIS":
        return mis_objective(g)
    raise ValueError(f"unknown problem {problem!r}")


def constraint(problem: str, g: Graph) -> ZPolynomial:
    if problem == "MVC":
        return mvc_constraint(g)
    if problem == "MIS":
        return mis_constraint(g)
    raise ValueError(f"unknown problem {problem!r}")


def penalty_hamiltonian(obj: ZPolynomial, cons: ZPolynomial, lam: float) -> ZPolynomial:
    """C = O + lambda * S.  For MVC the nonconstant coefficients come out as
    lambda/4 on each edge and (-1/2 + lambda*d_i/4) on each vertex.  lambda = 0
    degenerates to the bare objective; only negative weights are rejected."""
    if lam < 0:
        raise ValueError(f"penalty factor must be nonnegative, got {lam}")
    return obj + cons.scale(lam)


def spectral_bounds(problem: str, g: Graph) -> tuple[float, float]:
    """(E_O, E_S): an upper bound on the objective spectrum and a lower bound
    on the constraint spectrum.  Both closed forms are tight: the objective
    peaks at n (all vertices selected for MVC, the empty set for MIS) and
    violation counts are nonnegative with 0 attained by a feasible state."""
    if problem not in ("MVC", "MIS"):
        raise ValueError(f"unknown problem {problem!r}")
    return float(g.n), 0.0
