"""Oracle-driven minimization: binary search over DLEQUBO answers.

All solvers charge their queries to the handle's ``OracleStats``; the
``queries`` field of a report is the number of oracle calls made by that
solve (argmin extraction included when requested).
"""

from __future__ import annotations

from dataclasses import dataclass

from .core import (
    NO_RESTRICTION,
    Assignment,
    InconsistencyError,
    ParameterError,
    QuboInstance,
    Restriction,
    SubclassViolation,
    classify,
    evaluate,
    lower_bound,
)
from .oracle import OracleHandle, dle_query


@dataclass(frozen=True)
class SolveReport:
    n: int
    min_value: int
    queries: int
    search_interval: tuple[int, int]
    argmin: Assignment | None = None
    offset_applied: int = 0

    @property
    def search_lo(self) -> int:
        return self.search_interval[0]


@dataclass(frozen=True)
class UquboSplit:
    a_matrix: QuboInstance
    i_b: frozenset[tuple[int, int]]
    offset: int
    forced: Restriction
    threshold: int


def _check_bound(instance: QuboInstance, handle: OracleHandle) -> None:
    if handle.instance != instance:
        raise ValueError("oracle handle is bound to a different instance")


def least_true(
    handle: OracleHandle, lo: int, hi: int, restriction: Restriction = NO_RESTRICTION
) -> int:
    """Least ``q`` in ``[lo, hi]`` with an affirmative oracle answer.

    The caller guarantees the answer at ``hi`` is true, so ``hi`` itself is
    never queried; an interval of ``N`` integers costs ``ceil(log2 N)`` queries.
    """
    while lo < hi:
        mid = (lo + hi) // 2
        if dle_query(handle, mid, restriction):
            hi = mid
        else:
            lo = mid + 1
    return lo


def solve_qubo(instance: QuboInstance, handle: OracleHandle, *, with_argmin: bool = False) -> SolveReport:
    """Exact minimum by binary search over ``[lower_bound(instance), 0]``."""
    _check_bound(instance, handle)
    start = handle.stats.queries
    lo = lower_bound(instance)
    # the all-zero assignment attains 0, so the upper end needs no query
    value = least_true(handle, lo, 0)
    argmin = extract_argmin(instance, value, handle) if with_argmin else None
    return SolveReport(
        n=instance.n,
        min_value=value,
        queries=handle.stats.queries - start,
        search_interval=(lo, 0),
        argmin=argmin,
    )


def solve_lqubo(
    instance: QuboInstance, ell: int, handle: OracleHandle, *, with_argmin: bool = False
) -> SolveReport:
    """Minimum of an instance whose coefficients all exceed ``ell``.

    Searches ``[lower_bound, 0]``, which sits inside ``[ell * n**2, 0]``.
    """
    if not classify(instance, ell=ell).lqubo:
        raise SubclassViolation(f"some coefficient is <= ell={ell}")
    return solve_qubo(instance, handle, with_argmin=with_argmin)


def uqubo_threshold(n: int, u: int) -> int:
    return -2 * (n - 1) * u


def uqubo_split(instance: QuboInstance, u: int) -> UquboSplit:
    """Separate the coefficients below ``-2(n-1)u``; their variables must be 1 at any optimum."""
    if u <= 0:
        raise ParameterError(f"u must be positive, got {u}")
    if not classify(instance, u=u).uqubo:
        raise SubclassViolation(f"some coefficient is >= u={u}")
    threshold = uqubo_threshold(instance.n, u)
    kept: dict[tuple[int, int], int] = {}
    i_b: set[tuple[int, int]] = set()
    offset = 0
    for key, q in instance.entries.items():
        if q < threshold:
            i_b.add(key)
            offset += q
        else:
            kept[key] = q
    forced = Restriction(frozenset(v for pair in i_b for v in pair))
    return UquboSplit(QuboInstance(instance.n, kept), frozenset(i_b), offset, forced, threshold)


def _restricted_interval(a: QuboInstance, forced: Restriction) -> tuple[int, int]:
    # hi is attained by setting exactly the forced variables; lo adds every
    # negative coefficient that is not already fixed by the forced set
    ones = forced.forced_one
    hi = 0
    negatives = 0
    for (i, j), q in a.entries.items():
        if i in ones and j in ones:
            hi += q
        elif q < 0:
            negatives += q
    return hi + negatives, hi


def solve_uqubo(
    instance: QuboInstance, u: int, handle: OracleHandle, *, with_argmin: bool = False
) -> SolveReport:
    """Minimum of an instance whose coefficients are all below ``u``.

    Solves the kept part under the forced-to-one restriction and adds back the
    split-off coefficients.  The reported search interval lives in the
    restricted problem's value space.
    """
    _check_bound(instance, handle)
    split = uqubo_split(instance, u)
    start = handle.stats.queries
    sub = OracleHandle(split.a_matrix, engine=handle.engine, workers=handle.workers, stats=handle.stats)
    lo, hi = _restricted_interval(split.a_matrix, split.forced)
    restricted_min = least_true(sub, lo, hi, split.forced)
    value = restricted_min + split.offset
    argmin = extract_argmin(instance, value, handle) if with_argmin else None
    return SolveReport(
        n=instance.n,
        min_value=value,
        queries=handle.stats.queries - start,
        search_interval=(lo, hi),
        argmin=argmin,
        offset_applied=split.offset,
    )


def decide_dqubo(instance: QuboInstance, q: int, handle: OracleHandle) -> bool:
    """Is the minimum exactly ``q``?  At most two oracle queries."""
    _check_bound(instance, handle)
    return dle_query(handle, q) and not dle_query(handle, q - 1)


def extract_argmin(instance: QuboInstance, min_value: int, handle: OracleHandle) -> Assignment:
    """Minimizer by self-reduction, preferring 0 at each index in ascending order.

    Uses exactly ``n`` queries.  Raises ``InconsistencyError`` when
    ``min_value`` is not the attainable minimum.
    """
    _check_bound(instance, handle)
    restriction = NO_RESTRICTION
    for i in range(1, instance.n + 1):
        trial = restriction.with_zero(i)
        if dle_query(handle, min_value, trial):
            restriction = trial
        else:
            restriction = restriction.with_one(i)
    bits = tuple(1 if i in restriction.forced_one else 0 for i in range(1, instance.n + 1))
    got = evaluate(instance, bits)
    if got != min_value:
        raise InconsistencyError(f"value {min_value} is not the minimum (extraction reached {got})")
    return bits
