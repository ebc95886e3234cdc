"""Boolean-function machinery: truth tables, Shannon expansion into ESOP form,
heuristic cube minimization, and the MVC/MIS constraint builders.

A cube is a product of literals, each positive, negated, or absent; an ESOP
expression is the XOR of its cubes' values.  Literal codes 0/1/2 mean
negated/positive/absent.  Truth tables are materialized as 2^n bit arrays
(index = assignment integer, bit i = x_i), capped at n <= 24.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graphs import Graph

NEG, POS, ABSENT = 0, 1, 2

MAX_TABLE_VARS = 24


@dataclass(frozen=True)
class Cube:
    """Product term: AND over non-absent positions of (bit == required polarity)."""

    literals: tuple[int, ...]

    def __post_init__(self):
        if any(l not in (NEG, POS, ABSENT) for l in self.literals):
            raise ValueError(f"bad literal codes in {self.literals}")

    @property
    def n(self) -> int:
        return len(self.literals)

    def width(self) -> int:
        """Number of non-absent literals (controls needed on hardware)."""
        return sum(1 for l in self.literals if l != ABSENT)

    def evaluate(self, x: int) -> int:
        for i, l in enumerate(self.literals):
            if l != ABSENT and ((x >> i) & 1) != l:
                return 0
        return 1

    def with_literal(self, i: int, code: int) -> "Cube":
        lits = list(self.literals)
        lits[i] = code
        return Cube(tuple(lits))

    def to_string(self) -> str:
        return "".join("01-"[l] for l in self.literals)

    @classmethod
    def from_string(cls, s: str) -> "Cube":
        return cls(tuple({"0": NEG, "1": POS, "-": ABSENT}[c] for c in s))

    @classmethod
    def tautology(cls, n: int) -> "Cube":
        return cls((ABSENT,) * n)


@dataclass(frozen=True)
class EsopExpr:
    """XOR (modulo-2 sum) of cubes over n variables; cube order is irrelevant
    to the evaluated function but fixed for reproducible circuit emission."""

    n: int
    cubes: tuple[Cube, ...]

    def __post_init__(self):
        if any(c.n != self.n for c in self.cubes):
            raise ValueError("cube arity mismatch")

    def to_text(self) -> str:
        lines = [f"vars={self.n} cubes={len(self.cubes)}"]
        lines += [c.to_string() for c in self.cubes]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "EsopExpr":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        head = dict(kv.split("=") for kv in lines[0].split())
        n, m = int(head["vars"]), int(head["cubes"])
        cubes = tuple(Cube.from_string(ln.strip()) for ln in lines[1 : 1 + m])
        if len(cubes) != m:
            raise ValueError(f"expected {m} cubes, found {len(cubes)}")
        return cls(n, cubes)


def esop_table(e: EsopExpr) -> np.ndarray:
    """Truth table of the expression over all 2^n assignments (vectorized)."""
    idx = np.arange(1 << e.n)
    acc = np.zeros(idx.shape, dtype=bool)
    for cube in e.cubes:
        hit = np.ones(idx.shape, dtype=bool)
        for i, lit in enumerate(cube.literals):
            if lit != ABSENT:
                hit &= ((idx >> i) & 1) == lit
        acc ^= hit
    return acc


def eval_esop(e: EsopExpr, x: int | str) -> int:
    """XOR of cube evaluations at assignment x (integer or bitstring)."""
    if isinstance(x, str):
        if len(x) != e.n:
            raise ValueError(f"assignment length {len(x)} != {e.n} variables")
        x = sum(1 << i for i, c in enumerate(x) if c == "1")
    acc = 0
    for c in e.cubes:
        acc ^= c.evaluate(x)
    return acc


@dataclass(frozen=True)
class BoolFn:
    """Boolean function as an explicit truth table of length 2^n."""

    n: int
    table: np.ndarray  # bool, table[x] = f(x)

    def __post_init__(self):
        if self.n > MAX_TABLE_VARS:
            raise ValueError(f"truth tables capped at n <= {MAX_TABLE_VARS}")
        t = np.asarray(self.table, dtype=bool)
        if t.shape != (1 << self.n,):
            raise ValueError(f"table length {t.shape} != 2^{self.n}")
        object.__setattr__(self, "table", t)

    def __call__(self, x: int) -> int:
        return int(self.table[x])

    def is_const(self, b: int) -> bool:
        return bool(self.table.all() if b else not self.table.any())

    @classmethod
    def constant(cls, n: int, b: int) -> "BoolFn":
        return cls(n, np.full(1 << n, bool(b)))

    @classmethod
    def variable(cls, n: int, i: int) -> "BoolFn":
        idx = np.arange(1 << n)
        return cls(n, ((idx >> i) & 1).astype(bool))

    def __and__(self, other: "BoolFn") -> "BoolFn":
        return BoolFn(self.n, self.table & other.table)

    def __or__(self, other: "BoolFn") -> "BoolFn":
        return BoolFn(self.n, self.table | other.table)

    def __invert__(self) -> "BoolFn":
        return BoolFn(self.n, ~self.table)


def cofactor(f: BoolFn, i: int, b: int) -> BoolFn:
    """f with x_i fixed to b.  Arity stays n; the result ignores bit i."""
    if not 0 <= i < f.n:
        raise IndexError(f"variable {i} out of range for {f.n} variables")
    idx = np.arange(1 << f.n)
    src = (idx & ~(1 << i)) | (b << i)
    return BoolFn(f.n, f.table[src])


def shannon_esop(f: BoolFn, order: list[int] | None = None) -> EsopExpr:
    """Recursive Shannon expansion f = x_i^0 f_i^0 XOR x_i^1 f_i^1 along `order`.

    Recursion stops at constant subfunctions (constant 1 contributes the cube
    accumulated so far, constant 0 contributes nothing); variables a
    subfunction does not depend on are passed over without adding a literal.
    Identical (depth, table) subproblems are memoized, which is what makes the
    expansion cheap when clauses share variables.
    """
    order = list(range(f.n)) if order is None else list(order)
    if sorted(order) != list(range(f.n)):
        raise ValueError(f"order must be a permutation of 0..{f.n - 1}")

    cache: dict[tuple[int, bytes], tuple[Cube, ...]] = {}

    def expand(fn: BoolFn, pos: int) -> tuple[Cube, ...]:
        if fn.is_const(0):
            return ()
        if fn.is_const(1):
            return (Cube.tautology(f.n),)
        key = (pos, fn.table.tobytes())
        hit = cache.get(key)
        if hit is not None:
            return hit
        i = order[pos]
        f0, f1 = cofactor(fn, i, 0), cofactor(fn, i, 1)
        if np.array_equal(f0.table, f1.table):
            out = expand(f0, pos + 1)
        else:
            out = tuple(c.with_literal(i, NEG) for c in expand(f0, pos + 1))
            out += tuple(c.with_literal(i, POS) for c in expand(f1, pos + 1))
        cache[key] = out
        return out

    return EsopExpr(f.n, expand(f, 0))


def _merge(a: tuple[int, ...], b: tuple[int, ...], pos: int) -> tuple[int, ...]:
    # XOR algebra on a pair differing only at pos:
    #   c x  ^ c x' = c        (NEG/POS  -> ABSENT)
    #   c x  ^ c    = c x'     (POS/ABSENT -> NEG, NEG/ABSENT -> POS)
    la, lb = a[pos], b[pos]
    if {la, lb} == {NEG, POS}:
        code = ABSENT
    else:
        lit = la if lb == ABSENT else lb
        code = POS if lit == NEG else NEG
    out = list(a)
    out[pos] = code
    return tuple(out)


def minimize_esop(e: EsopExpr) -> EsopExpr:
    """Iterated local rewrites to a fixpoint: delete duplicate cube pairs
    (c ^ c = 0) and merge every pair at Hamming distance 1 in literal space.

    Each pass greedily pairs cubes in index order (a cube joins at most one
    rewrite per pass), so the result is deterministic and the cube count
    strictly decreases until no pair at distance <= 1 remains.  This is a
    distance-1 scheme, not a full exclusive-cover minimizer; adequate for the
    n <= 10 working regime.
    """
    cubes = [c.literals for c in e.cubes]
    while len(cubes) > 1:
        arr = np.array(cubes, dtype=np.uint8)
        diff = (arr[:, None, :] != arr[None, :, :]).sum(axis=2)
        consumed = [False] * len(cubes)
        out: list[tuple[int, ...] | None] = list(cubes)
        rewrites = 0
        for i in range(len(cubes)):
            if consumed[i]:
                continue
            for j in range(i + 1, len(cubes)):
                if consumed[j] or diff[i, j] > 1:
                    continue
                consumed[i] = consumed[j] = True
                out[j] = None
                if diff[i, j] == 0:
                    out[i] = None
                else:
                    pos = int(np.flatnonzero(arr[i] != arr[j])[0])
                    out[i] = _merge(cubes[i], cubes[j], pos)
                rewrites += 1
                break
        cubes = [c for c in out if c is not None]
        if rewrites == 0:
            break
    return EsopExpr(e.n, tuple(Cube(c) for c in cubes))


def mvc_constraint_fn(g: Graph) -> BoolFn:
    """F(q) = AND over edges of (q_u OR q_v): 1 iff q is a vertex cover."""
    f = BoolFn.constant(g.n, 1)
    for u, v in g.edges:
        f = f & (BoolFn.variable(g.n, u) | BoolFn.variable(g.n, v))
    return f


def mis_constraint_fn(g: Graph) -> BoolFn:
    """G(q) = AND over edges of (NOT q_u OR NOT q_v): 1 iff q is independent."""
    f = BoolFn.constant(g.n, 1)
    for u, v in g.edges:
        f = f & (~BoolFn.variable(g.n, u) | ~BoolFn.variable(g.n, v))
    return f


def constraint_fn(problem: str, g: Graph) -> BoolFn:
    if problem == "MVC":
        return mvc_constraint_fn(g)
    if problem == "MIS":
        return mis_constraint_fn(g)
    raise ValueError(f"unknown problem {problem!r}")


def clause_frequency_order(g: Graph) -> list[int]:
    """Split order for constraint functions: descending frequency of the
    variable across edge clauses (= vertex degree), ties to the lower index."""
    deg = g.degrees()
    return sorted(range(g.n), key=lambda v: (-deg[v], v))


def constraint_esop(problem: str, g: Graph, minimize: bool = True) -> EsopExpr:
    """Compile the problem's feasibility predicate to a (minimized) ESOP."""
    expr = shannon_esop(constraint_fn(problem, g), clause_frequency_order(g))
    return minimize_esop(expr) if minimize else expr
