"""Constructive reductions into QUBO.

* 0-1 integer programming -> QUBO via a binary-slack penalty,
* maximum clique -> {-1, 0, 1} QUBO plus the clique repair pass,
* knapsack -> 0-1 integer programming,
* rational coefficients -> integer coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .core import (
    Assignment,
    DimensionError,
    InconsistencyError,
    ParameterError,
    QuboError,
    QuboInstance,
    as_assignment,
    evaluate,
)
from .solvers import SolveReport


class UnsupportedInstance(QuboError, ValueError):
    pass


@dataclass(frozen=True)
class IlpInstance:
    """maximize c.x subject to A x <= b, x binary."""

    a: tuple[tuple[int, ...], ...]
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self) -> None:
        a = tuple(tuple(int(v) for v in row) for row in self.a)
        b = tuple(int(v) for v in self.b)
        c = tuple(int(v) for v in self.c)
        if not a or not c:
            raise DimensionError("ILP needs at least one row and one column")
        if len(b) != len(a):
            raise DimensionError(f"b has {len(b)} entries for {len(a)} rows")
        if any(len(row) != len(c) for row in a):
            raise DimensionError(f"every row of A must have {len(c)} entries")
        if any(v < 0 for v in b):
            raise UnsupportedInstance("b must be non-negative (x = 0 has to be feasible)")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def m(self) -> int:
        return len(self.a)

    @property
    def n(self) -> int:
        return len(self.c)

    def feasible(self, x: Sequence[int]) -> bool:
        return all(sum(aij * xj for aij, xj in zip(row, x)) <= bi for row, bi in zip(self.a, self.b))

    def objective(self, x: Sequence[int]) -> int:
        return sum(ci * xi for ci, xi in zip(self.c, x))


@dataclass(frozen=True)
class IlpQuboMapping:
    """Result of the ILP reduction.

    ``qubo`` holds the penalty objective without its constant term
    ``h * sum(b_i**2)``, which is kept in ``constant``.  Variable ``j`` of the
    ILP is QUBO variable ``j``; the slack bits of row ``i`` are
    ``slack_layout[i-1]`` (least significant first).
    """

    qubo: QuboInstance
    ilp: IlpInstance
    x_vars: tuple[int, ...]
    slack_layout: tuple[tuple[int, ...], ...]
    h: int
    k: int
    constant: int
    negate_output: bool = True

    def split(self, assignment: Sequence[int]) -> tuple[Assignment, tuple[int, ...]]:
        """ILP part of a QUBO assignment and the decoded slack value of each row."""
        x = tuple(assignment[v - 1] for v in self.x_vars)
        slacks = tuple(
            sum(assignment[v - 1] << pos for pos, v in enumerate(row)) for row in self.slack_layout
        )
        return x, slacks

    def constraint_penalty(self, assignment: Sequence[int]) -> int:
        """``sum_i (a_i . x + y_i - b_i)**2`` for a full QUBO assignment."""
        x, slacks = self.split(assignment)
        return sum(
            (sum(aij * xj for aij, xj in zip(row, x)) + y - bi) ** 2
            for row, bi, y in zip(self.ilp.a, self.ilp.b, slacks)
        )

    def penalty_objective(self, assignment: Sequence[int]) -> int:
        """The full penalty function including the folded constant."""
        return evaluate(self.qubo, assignment) + self.constant


def slack_bits(ilp: IlpInstance) -> int:
    """Bits needed so the slack covers ``b_i - a_i . x`` for every x."""
    min_a = min(min(row) for row in ilp.a)
    span = max(ilp.b) - ilp.n * min(0, min_a)
    return max(1, span).bit_length()


def reduce_ilp_to_qubo(ilp: IlpInstance) -> IlpQuboMapping:
    n, m = ilp.n, ilp.m
    h = n * max(0, max(ilp.c)) + 1
    k = slack_bits(ilp)
    total = n + m * k
    entries: dict[tuple[int, int], int] = {}

    def add(i: int, j: int, value: int) -> None:
        if value:
            key = (i, j) if i <= j else (j, i)
            entries[key] = entries.get(key, 0) + value

    for j, cj in enumerate(ilp.c, start=1):
        add(j, j, -cj)

    layout = []
    for r, (row, br) in enumerate(zip(ilp.a, ilp.b)):
        slack = tuple(n + r * k + pos for pos in range(1, k + 1))
        layout.append(slack)
        # (sum_t w_t v_t - b)^2 with v_t^2 = v_t
        terms = [(j, aij) for j, aij in enumerate(row, start=1) if aij]
        terms += [(v, 1 << pos) for pos, v in enumerate(slack)]
        for s, (vs, ws) in enumerate(terms):
            add(vs, vs, h * (ws * ws - 2 * br * ws))
            for vt, wt in terms[s + 1 :]:
                add(vs, vt, 2 * h * ws * wt)

    constant = h * sum(bi * bi for bi in ilp.b)
    qubo = QuboInstance(total, {key: v for key, v in entries.items() if v})
    return IlpQuboMapping(
        qubo=qubo,
        ilp=ilp,
        x_vars=tuple(range(1, n + 1)),
        slack_layout=tuple(layout),
        h=h,
        k=k,
        constant=constant,
    )


def interpret_ilp_result(mapping: IlpQuboMapping, report: SolveReport) -> int:
    """ILP optimum from a solve of ``mapping.qubo``: ``-(minimum + constant)``."""
    return -(report.min_value + mapping.constant)


@dataclass(frozen=True)
class Graph:
    n_vertices: int
    edges: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        if self.n_vertices < 1:
            raise DimensionError("graph needs at least one vertex")
        norm: set[tuple[int, int]] = set()
        for u, v in self.edges:
            if u == v:
                raise DimensionError(f"self-loop at vertex {u}")
            if not (1 <= u <= self.n_vertices and 1 <= v <= self.n_vertices):
                raise DimensionError(f"edge ({u},{v}) out of range 1..{self.n_vertices}")
            e = (min(u, v), max(u, v))
            if e in norm:
                raise DimensionError(f"duplicate edge ({u},{v})")
            norm.add(e)
        object.__setattr__(self, "edges", frozenset(norm))

    def is_clique(self, vertices: Sequence[int]) -> bool:
        vs = sorted(vertices)
        return all((a, b) in self.edges for i, a in enumerate(vs) for b in vs[i + 1 :])


def reduce_clique_to_squbo(graph: Graph) -> QuboInstance:
    """-1 on the diagonal, +1 on every non-adjacent pair; minimum = -(max clique size)."""
    n = graph.n_vertices
    entries = {(i, i): -1 for i in range(1, n + 1)}
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            if (i, j) not in graph.edges:
                entries[(i, j)] = 1
    return QuboInstance(n, entries)


def clique_penalty(squbo: QuboInstance, assignment: Sequence[int]) -> int:
    return sum(q for (i, j), q in squbo.entries.items() if i < j and assignment[i - 1] and assignment[j - 1])


def repair_to_clique(squbo: QuboInstance, optimal: Sequence[int]) -> Assignment:
    """Turn a minimizer of the clique QUBO into one whose 1-vertices form a clique.

    Left-to-right pass: vertex ``a`` is dropped when the already-repaired
    prefix plus the untouched suffix put a penalty of at least 1 on it.
    """
    x = as_assignment(optimal, squbo.n)
    n = squbo.n
    z = list(x)
    for a in range(1, n + 1):
        pressure = sum(squbo.coefficient(i, a) * z[i - 1] for i in range(1, a))
        pressure += sum(squbo.coefficient(a, j) * x[j - 1] for j in range(a + 1, n + 1))
        z[a - 1] = 0 if pressure >= 1 else x[a - 1]
    out = tuple(z)
    if evaluate(squbo, out) != evaluate(squbo, x) or clique_penalty(squbo, out) != 0:
        raise InconsistencyError("assignment is not a minimizer; repair did not preserve its value")
    return out


@dataclass(frozen=True)
class KnapsackInstance:
    """Largest subset sum strictly below ``cap``."""

    items: tuple[int, ...]
    cap: int

    def __post_init__(self) -> None:
        items = tuple(int(v) for v in self.items)
        if not items:
            raise DimensionError("knapsack needs at least one item")
        if any(v < 1 for v in items):
            raise ParameterError("item weights must be positive")
        if self.cap < 1:
            raise ParameterError("capacity must be positive")
        object.__setattr__(self, "items", items)


def reduce_knapsack_to_ilp(kp: KnapsackInstance) -> IlpInstance:
    return IlpInstance(a=(kp.items,), b=(kp.cap - 1,), c=kp.items)


@dataclass(frozen=True)
class RationalQubo:
    n: int
    entries: Mapping[tuple[int, int], tuple[int, int]]

    def __post_init__(self) -> None:
        clean = {}
        for (i, j), (num, den) in dict(self.entries).items():
            if den == 0:
                raise ParameterError(f"zero denominator at ({i},{j})")
            if den < 0:
                raise ParameterError(f"denominator must be positive at ({i},{j})")
            if not (1 <= i <= j <= self.n):
                raise DimensionError(f"entry ({i},{j}) is not upper triangular in 1..{self.n}")
            clean[(int(i), int(j))] = (int(num), int(den))
        if self.n < 1:
            raise DimensionError("n must be at least 1")
        object.__setattr__(self, "entries", dict(sorted(clean.items())))

    def value(self, assignment: Sequence[int]) -> Fraction:
        return sum(
            (Fraction(num, den) for (i, j), (num, den) in self.entries.items() if assignment[i - 1] and assignment[j - 1]),
            Fraction(0),
        )


def normalize_rational(rq: RationalQubo) -> tuple[QuboInstance, int]:
    """Scale by the lcm of the denominators; minimum of the original = integer minimum / scale."""
    scale = math.lcm(*(den for _, den in rq.entries.values())) if rq.entries else 1
    entries = {key: num * (scale // den) for key, (num, den) in rq.entries.items()}
    return QuboInstance(rq.n, entries), scale
