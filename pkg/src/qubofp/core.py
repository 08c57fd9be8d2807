"""QUBO instances over exact integers.

An instance is ``n`` binary variables and a sparse upper-triangular
coefficient map ``{(i, j): q_ij}`` with 1-based indices ``i <= j``.  The
objective is ``sum_{i<=j} q_ij * x_i * x_j``; there is no constant term.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence


class QuboError(Exception):
    """Base class for every error raised by this package."""


class DimensionError(QuboError, ValueError):
    pass


class RestrictionError(QuboError, ValueError):
    pass


class ParameterError(QuboError, ValueError):
    pass


class SubclassViolation(QuboError, ValueError):
    """An instance falls outside the LQUBO / UQUBO class a solver requires."""


class InconsistencyError(QuboError):
    """A claimed optimum or minimizer does not check out."""


Pair = tuple[int, int]


def _as_int(value: object, what: str) -> int:
    # bool is an int subclass but never a meaningful coefficient
    if isinstance(value, bool):
        raise TypeError(f"{what} must be an integer, got bool")
    try:
        return operator.index(value)
    except TypeError:
        raise TypeError(f"{what} must be an integer, got {type(value).__name__}") from None


@dataclass(frozen=True)
class QuboInstance:
    """Immutable sparse upper-triangular QUBO with unbounded integer coefficients."""

    n: int
    entries: Mapping[Pair, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        n = _as_int(self.n, "n")
        if n < 1:
            raise DimensionError(f"n must be at least 1, got {n}")
        clean: dict[Pair, int] = {}
        for key, value in dict(self.entries).items():
            i, j = (_as_int(k, "index") for k in key)
            if i > j:
                raise DimensionError(f"entry ({i},{j}) is below the diagonal")
            if i < 1 or j > n:
                raise DimensionError(f"entry ({i},{j}) out of range 1..{n}")
            clean[(i, j)] = _as_int(value, f"q_{i}{j}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "entries", MappingProxyType(dict(sorted(clean.items()))))

    @classmethod
    def from_triples(cls, n: int, triples: Iterable[tuple[int, int, int]]) -> "QuboInstance":
        """Build from ``(i, j, q_ij)`` triples, rejecting duplicate keys."""
        entries: dict[Pair, int] = {}
        for i, j, q in triples:
            if (i, j) in entries:
                raise DimensionError(f"duplicate entry ({i},{j})")
            entries[(i, j)] = q
        return cls(n, entries)

    @classmethod
    def zeros(cls, n: int) -> "QuboInstance":
        return cls(n, {})

    def coefficient(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        return self.entries.get((i, j), 0)

    def nonzero(self) -> dict[Pair, int]:
        return {k: v for k, v in self.entries.items() if v != 0}

    def __add__(self, other: "QuboInstance") -> "QuboInstance":
        if not isinstance(other, QuboInstance):
            return NotImplemented
        if other.n != self.n:
            raise DimensionError(f"cannot add instances with n={self.n} and n={other.n}")
        merged = dict(self.entries)
        for key, value in other.entries.items():
            merged[key] = merged.get(key, 0) + value
        return QuboInstance(self.n, merged)

    def __hash__(self) -> int:
        return hash((self.n, tuple(self.entries.items())))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, QuboInstance):
            return NotImplemented
        return self.n == other.n and dict(self.entries) == dict(other.entries)


Assignment = tuple[int, ...]


def as_assignment(bits: Sequence[int], n: int | None = None) -> Assignment:
    """Validate a 0/1 vector and return it as a tuple of ints."""
    out = tuple(int(b) for b in bits)
    if any(b not in (0, 1) for b in out):
        raise DimensionError("assignment values must be 0 or 1")
    if n is not None and len(out) != n:
        raise DimensionError(f"assignment has length {len(out)}, instance has n={n}")
    return out


@dataclass(frozen=True)
class Restriction:
    """Partial assignment: variables forced to 1 and variables forced to 0 (1-based)."""

    forced_one: frozenset[int] = frozenset()
    forced_zero: frozenset[int] = frozenset()

    def __post_init__(self) -> None:
        object.__setattr__(self, "forced_one", frozenset(int(i) for i in self.forced_one))
        object.__setattr__(self, "forced_zero", frozenset(int(i) for i in self.forced_zero))
        both = self.forced_one & self.forced_zero
        if both:
            raise RestrictionError(f"variables forced to both 0 and 1: {sorted(both)}")

    def check(self, n: int) -> None:
        bad = [i for i in self.forced_one | self.forced_zero if not 1 <= i <= n]
        if bad:
            raise RestrictionError(f"restricted indices out of range 1..{n}: {sorted(bad)}")

    def with_one(self, i: int) -> "Restriction":
        return Restriction(self.forced_one | {i}, self.forced_zero)

    def with_zero(self, i: int) -> "Restriction":
        return Restriction(self.forced_one, self.forced_zero | {i})

    def admits(self, assignment: Sequence[int]) -> bool:
        return all(assignment[i - 1] == 1 for i in self.forced_one) and all(
            assignment[i - 1] == 0 for i in self.forced_zero
        )


NO_RESTRICTION = Restriction()


def evaluate(instance: QuboInstance, assignment: Sequence[int]) -> int:
    """Exact value of ``sum q_ij x_i x_j`` at a 0/1 assignment."""
    x = as_assignment(assignment)
    if len(x) != instance.n:
        raise DimensionError(f"assignment has length {len(x)}, instance has n={instance.n}")
    return sum(q for (i, j), q in instance.entries.items() if x[i - 1] and x[j - 1])


def lower_bound(instance: QuboInstance) -> int:
    """Sum of the non-positive coefficients; the minimum lies in ``[lower_bound, 0]``."""
    return sum(q for q in instance.entries.values() if q <= 0)


@dataclass(frozen=True)
class SubclassFlags:
    lqubo: bool | None
    uqubo: bool | None
    squbo: bool


def classify(instance: QuboInstance, ell: int | None = None, u: int | None = None) -> SubclassFlags:
    """Report LQUBO (all > ell), UQUBO (all < u) and SQUBO ({-1,0,1}) membership.

    Flags for bounds that were not given are None.
    """
    if ell is not None and ell >= 0:
        raise ParameterError(f"ell must be negative, got {ell}")
    if u is not None and u <= 0:
        raise ParameterError(f"u must be positive, got {u}")
    values = list(instance.entries.values())
    return SubclassFlags(
        lqubo=None if ell is None else all(q > ell for q in values),
        uqubo=None if u is None else all(q < u for q in values),
        squbo=all(q in (-1, 0, 1) for q in values),
    )
