import itertools

import numpy as np
import pytest

from qubofp import QuboInstance

ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")


def all_values(instance: QuboInstance) -> np.ndarray:
    """Objective value of every assignment, index k <-> bits of k with x_1 as LSB.

    Dense einsum over the full matrix; independent of the oracle's chunked scan.
    """
    n = instance.n
    dense = np.zeros((n, n))
    for (i, j), q in instance.entries.items():
        dense[i - 1, j - 1] = q
    codes = np.arange(1 << n)
    x = ((codes[:, None] >> np.arange(n)) & 1).astype(float)
    vals = np.einsum("ki,ij,kj->k", x, dense, x)
    return np.rint(vals).astype(np.int64)


def brute_min(instance: QuboInstance) -> int:
    if max((abs(q) for q in instance.entries.values()), default=0) * len(instance.entries) < 2**50:
        return int(all_values(instance).min())
    return min(pure_values(instance).values())


def pure_values(instance: QuboInstance) -> dict[tuple[int, ...], int]:
    """Exact Python-int enumeration, for small n or huge coefficients."""
    out = {}
    for bits in itertools.product((0, 1), repeat=instance.n):
        out[bits] = sum(q for (i, j), q in instance.entries.items() if bits[i - 1] and bits[j - 1])
    return out


def bits_of(code: int, n: int) -> tuple[int, ...]:
    return tuple((code >> p) & 1 for p in range(n))


def random_qubo(rng: np.random.Generator, n: int, lo: int = -50, hi: int = 50, density: float = 1.0) -> QuboInstance:
    entries = {}
    for i in range(1, n + 1):
        for j in range(i, n + 1):
            if rng.random() < density:
                entries[(i, j)] = int(rng.integers(lo, hi + 1))
    return QuboInstance(n, entries)


@pytest.fixture
def sqexample():
    # n=3, q_11=q_22=q_33=-1, q_13=1: the path-graph clique QUBO
    return QuboInstance(3, {(1, 1): -1, (2, 2): -1, (3, 3): -1, (1, 3): 1})
