"""Seeded query-count benchmarks.

``squbo-random`` solves the clique QUBO of a G(n, 1/2) random graph: the
search interval has n + 1 values, so queries grow like log n.
``single-bigcoeff`` solves the one-variable instance q_11 = -2**b: the
interval has 2**b + 1 values, so queries grow linearly in b.
"""

from __future__ import annotations

import csv
import io
from typing import Iterator

import numpy as np

from .core import QuboInstance
from .oracle import MAX_FREE_VARIABLES, OracleCapacityError, OracleHandle
from .reductions import Graph, reduce_clique_to_squbo
from .solvers import solve_qubo

FAMILIES = ("squbo-random", "single-bigcoeff")
RNG_ALGORITHM = "numpy-PCG64"
EDGE_DENSITY = 0.5
COLUMNS = ("family", "n_or_bits", "trial", "queries", "min_value")


def random_graph(n: int, rng: np.random.Generator, density: float = EDGE_DENSITY) -> Graph:
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    keep = rng.random(len(pairs)) < density
    return Graph(n, frozenset(p for p, k in zip(pairs, keep) if k))


def instance_for(family: str, size: int, rng: np.random.Generator) -> QuboInstance:
    if family == "squbo-random":
        return reduce_clique_to_squbo(random_graph(size, rng))
    if family == "single-bigcoeff":
        return QuboInstance(1, {(1, 1): -(1 << size)})
    raise ValueError(f"unknown family {family!r}")


def check_capacity(family: str, sizes: range) -> None:
    if family == "squbo-random" and sizes and max(sizes) > MAX_FREE_VARIABLES:
        raise OracleCapacityError(f"n={max(sizes)} exceeds the oracle limit of {MAX_FREE_VARIABLES}")


def run(family: str, sizes: range, trials: int, seed: int) -> Iterator[tuple[str, int, int, int, int]]:
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    check_capacity(family, sizes)
    rng = np.random.Generator(np.random.PCG64(seed))
    for size in sizes:
        for trial in range(trials):
            inst = instance_for(family, size, rng)
            report = solve_qubo(inst, OracleHandle(inst))
            yield family, size, trial, report.queries, report.min_value


def to_csv(family: str, sizes: range, trials: int, seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# rng={RNG_ALGORITHM} seed={seed} family={family} density={EDGE_DENSITY}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(COLUMNS)
    writer.writerows(run(family, sizes, trials, seed))
    return buf.getvalue()
