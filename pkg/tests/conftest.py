import numpy as np
import pytest

from cvqa import Graph, generate_erdos_renyi


@pytest.fixture
def single_edge():
    return Graph(2, ((0, 1),))


@pytest.fixture
def path3():
    return Graph(3, ((0, 1), (1, 2)))


@pytest.fixture
def triangle():
    return Graph(3, ((0, 1), (1, 2), (0, 2)))


def random_graphs(sizes, per_size, seed_base=9000):
    """Deterministic pool of G(n, 0.5) instances used across test modules."""
    out = []
    for n in sizes:
        for k in range(per_size):
            out.append(generate_erdos_renyi(n, 0.5, seed_base + 100 * n + k))
    return out


def random_state(num_qubits: int, rng: np.random.Generator) -> np.ndarray:
    amps = rng.normal(size=1 << num_qubits) + 1j * rng.normal(size=1 << num_qubits)
    return amps / np.linalg.norm(amps)
