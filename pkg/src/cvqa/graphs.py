"""Problem instances: undirected graphs, random generation, exact reference solvers.

Bitstring convention used package-wide: bit i of a length-n string is vertex i,
value 1 means "selected" (in the cover / in the independent set).  The spin
mapping is selected <=> z_i = -1 <=> qubit basis state |1>.  Integers encode
assignments little-endian: bit i of the integer is vertex i.
"""

from __future__ import annotations

from dataclasses import dataclass
import json

import numpy as np

MAX_BRUTE_FORCE_VERTICES = 24


class ConfigError(ValueError):
    """Invalid instance or experiment configuration (CLI exit code 2)."""


def bitstring(x: int, n: int) -> str:
    """Render assignment integer x as a length-n string, char i = vertex i."""
    return "".join("1" if (x >> i) & 1 else "0" for i in range(n))


def bits_from_string(s: str) -> int:
    return sum(1 << i for i, c in enumerate(s) if c == "1")


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 with canonical sorted edges."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ConfigError(f"vertex count must be >= 1, got {self.n}")
        canon = []
        for u, v in self.edges:
            if u == v:
                raise ConfigError(f"self-loop at vertex {u}")
            if not (0 <= u < self.n and 0 <= v < self.n):
                raise ConfigError(f"edge ({u}, {v}) out of range for n={self.n}")
            canon.append((min(u, v), max(u, v)))
        canon.sort()
        for a, b in zip(canon, canon[1:]):
            if a == b:
                raise ConfigError(f"duplicate edge {a}")
        object.__setattr__(self, "edges", tuple(canon))

    def degrees(self) -> list[int]:
        d = [0] * self.n
        for u, v in self.edges:
            d[u] += 1
            d[v] += 1
        return d

    def degree(self, v: int) -> int:
        return sum(1 for e in self.edges if v in e)

    def to_json(self) -> str:
        """Canonical byte-exact form: u < v per pair, edges sorted, compact keys."""
        return json.dumps(
            {"edges": [[u, v] for u, v in self.edges], "n": self.n},
            sort_keys=True,
            separators=(",", ":"),
        ) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        try:
            obj = json.loads(text)
            return cls(int(obj["n"]), tuple((int(u), int(v)) for u, v in obj["edges"]))
        except (KeyError, TypeError, json.JSONDecodeError) as exc:
            raise ConfigError(f"malformed graph JSON: {exc}") from exc


@dataclass(frozen=True)
class BruteForceResult:
    """Exhaustive-enumeration reference solution; the oracle for every other module."""

    optimal_value: int
    optimal_set: frozenset[str]
    feasible_set: frozenset[str]


def generate_erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p); resample with seed+1, seed+2, ... until at least one edge.

    Zero-edge graphs make both constraints vacuous, so they are rejected.
    Configurations that can never produce an edge (p = 0 or n < 2) raise
    ConfigError instead of looping.
    """
    if n < 1:
        raise ConfigError(f"need n >= 1, got {n}")
    if not 0.0 <= p <= 1.0:
        raise ConfigError(f"edge probability must be in [0, 1], got {p}")
    if p == 0.0 or n < 2:
        raise ConfigError(
            f"G({n}, {p}) cannot contain an edge; zero-edge graphs are rejected"
        )
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    for attempt in range(1000):
        rng = np.random.default_rng(int(seed) + attempt)
        draws = rng.uniform(0.0, 1.0, size=len(pairs))
        edges = tuple(pair for pair, u in zip(pairs, draws) if u < p)
        if edges:
            return Graph(n, edges)
    raise ConfigError(f"no edges after 1000 resampling attempts of G({n}, {p})")


def _check_size(g: Graph) -> np.ndarray:
    if g.n > MAX_BRUTE_FORCE_VERTICES:
        raise ValueError(
            f"brute force capped at n <= {MAX_BRUTE_FORCE_VERTICES}, got {g.n}"
        )
    return np.arange(1 << g.n, dtype=np.uint32)


def _popcount(idx: np.ndarray) -> np.ndarray:
    if hasattr(np, "bitwise_count"):
        return np.bitwise_count(idx).astype(np.int64)
    counts = np.zeros(idx.shape, dtype=np.int64)
    vals = idx.copy()
    while vals.any():
        counts += vals & 1
        vals >>= 1
    return counts


def mvc_feasible_mask(g: Graph) -> np.ndarray:
    """Boolean table over all 2^n assignments: every edge has a selected endpoint."""
    idx = _check_size(g)
    mask = np.ones(idx.shape, dtype=bool)
    for u, v in g.edges:
        mask &= (((idx >> u) | (idx >> v)) & 1).astype(bool)
    return mask


def mis_feasible_mask(g: Graph) -> np.ndarray:
    """Boolean table over all 2^n assignments: no edge has both endpoints selected."""
    idx = _check_size(g)
    mask = np.ones(idx.shape, dtype=bool)
    for u, v in g.edges:
        mask &= ~(((idx >> u) & (idx >> v)) & 1).astype(bool)
    return mask


def solution_masks(problem: str, g: Graph) -> tuple[np.ndarray, np.ndarray, int]:
    """(feasible_mask, optimal_mask, optimal_value) over assignment integers."""
    idx = np.arange(1 << g.n, dtype=np.uint32)
    sizes = _popcount(idx)
    if problem == "MVC":
        feasible = mvc_feasible_mask(g)
        best = int(sizes[feasible].min())
    elif problem == "MIS":
        feasible = mis_feasible_mask(g)
        best = int(sizes[feasible].max())
    else:
        raise ConfigError(f"unknown problem {problem!r}")
    optimal = feasible & (sizes == best)
    return feasible, optimal, best


def _result(g: Graph, feasible: np.ndarray, optimal: np.ndarray, best: int) -> BruteForceResult:
    return BruteForceResult(
        optimal_value=best,
        optimal_set=frozenset(bitstring(int(x), g.n) for x in np.flatnonzero(optimal)),
        feasible_set=frozenset(bitstring(int(x), g.n) for x in np.flatnonzero(feasible)),
    )


def brute_force_mvc(g: Graph) -> BruteForceResult:
    """Minimum vertex cover by enumerating all 2^n subsets."""
    feasible, optimal, best = solution_masks("MVC", g)
    return _result(g, feasible, optimal, best)


def brute_force_mis(g: Graph) -> BruteForceResult:
    """Maximum independent set by enumerating all 2^n subsets."""
    feasible, optimal, best = solution_masks("MIS", g)
    return _result(g, feasible, optimal, best)
