"""Exact DLEQUBO decision oracle with query accounting.

``dle_query(handle, q, restriction)`` answers "is there an assignment that
agrees with ``restriction`` and has value <= q?" by exhaustive enumeration of
the unrestricted variables.  Enumeration order is ascending integer order of
the free bits, with the lowest-indexed free variable as the least
significant bit; the scan stops at the first witness.
"""

from __future__ import annotations

import functools
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .core import NO_RESTRICTION, QuboError, QuboInstance, Restriction

MAX_FREE_VARIABLES = 30
CHUNK_BITS = 14
ENGINES = ("vectorized", "scalar")

# float64 holds integers exactly below 2**53, int64 below 2**63; beyond that
# the scan falls back to Python integers in object arrays
_FLOAT_SAFE = 1 << 52
_INT64_SAFE = 1 << 62


class OracleCapacityError(QuboError):
    """The query has more free variables than the enumeration guard allows."""


@dataclass
class OracleStats:
    queries: int = 0
    assignments_examined: int = 0

    def reset(self) -> None:
        self.queries = 0
        self.assignments_examined = 0


@dataclass
class OracleHandle:
    """An oracle bound to one instance, carrying its own counters.

    Several handles may share one ``OracleStats`` (the UQUBO solver queries a
    derived instance but charges the caller's counter).
    """

    instance: QuboInstance
    engine: str = "vectorized"
    workers: int = 1
    stats: OracleStats = field(default_factory=OracleStats)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}; expected one of {ENGINES}")
        if self.workers < 1:
            raise ValueError("workers must be >= 1")

    def query(self, q: int, restriction: Restriction = NO_RESTRICTION) -> bool:
        return dle_query(self, q, restriction)


def reset_stats(handle: OracleHandle) -> None:
    handle.stats.reset()


@dataclass(frozen=True)
class _Reduced:
    """The instance with forced variables substituted out."""

    free: tuple[int, ...]
    const: int
    linear: tuple[int, ...]
    quad: dict[tuple[int, int], int]  # positions into ``free``, a < b


def _reduce(instance: QuboInstance, restriction: Restriction) -> _Reduced:
    ones = restriction.forced_one
    fixed = ones | restriction.forced_zero
    free = tuple(i for i in range(1, instance.n + 1) if i not in fixed)
    pos = {v: p for p, v in enumerate(free)}
    const = 0
    linear = [0] * len(free)
    quad: dict[tuple[int, int], int] = {}
    for (i, j), q in instance.entries.items():
        if q == 0:
            continue
        if i == j:
            if i in ones:
                const += q
            elif i in pos:
                linear[pos[i]] += q
            continue
        i_free, j_free = i in pos, j in pos
        if i_free and j_free:
            quad[(pos[i], pos[j])] = quad.get((pos[i], pos[j]), 0) + q
        elif i_free and j in ones:
            linear[pos[i]] += q
        elif j_free and i in ones:
            linear[pos[j]] += q
        elif i in ones and j in ones:
            const += q
    return _Reduced(free, const, tuple(linear), quad)


def dle_query(handle: OracleHandle, q: int, restriction: Restriction = NO_RESTRICTION) -> bool:
    """True iff some assignment consistent with ``restriction`` has value <= ``q``.

    Raises ``RestrictionError`` for out-of-range indices and
    ``OracleCapacityError`` when more than ``MAX_FREE_VARIABLES`` variables are
    free.  Each successful call adds exactly one to ``handle.stats.queries``.
    """
    q = int(q)
    restriction.check(handle.instance.n)
    red = _reduce(handle.instance, restriction)
    if len(red.free) > MAX_FREE_VARIABLES:
        raise OracleCapacityError(
            f"{len(red.free)} free variables exceeds the limit of {MAX_FREE_VARIABLES}"
        )
    with handle._lock:
        handle.stats.queries += 1
        if handle.engine == "scalar":
            found, examined = _scan_scalar(red, q)
        else:
            found, examined = _scan_vectorized(red, q, handle.workers)
        handle.stats.assignments_examined += examined
    return found


def _scan_scalar(red: _Reduced, q: int) -> tuple[bool, int]:
    f = len(red.free)
    pairs = list(red.quad.items())
    for code in range(1 << f):
        value = red.const
        for p in range(f):
            if code >> p & 1:
                value += red.linear[p]
        for (a, b), c in pairs:
            if code >> a & 1 and code >> b & 1:
                value += c
        if value <= q:
            return True, code + 1
    return False, 1 << f


@functools.lru_cache(maxsize=64)
def _bit_matrix(width: int, dtype) -> np.ndarray:
    codes = np.arange(1 << width, dtype=np.int64)
    out = ((codes[:, None] >> np.arange(width, dtype=np.int64)) & 1).astype(dtype)
    out.flags.writeable = False
    return out


def _scan_vectorized(red: _Reduced, q: int, workers: int) -> tuple[bool, int]:
    f = len(red.free)
    if f == 0:
        return red.const <= q, 1

    magnitude = abs(red.const) + sum(abs(c) for c in red.linear) + sum(abs(c) for c in red.quad.values())
    # every value lies strictly inside (-limit, limit), so clamping q keeps the comparison exact
    if magnitude < _FLOAT_SAFE:
        dtype = np.float64
        threshold = float(max(min(q, _FLOAT_SAFE), -_FLOAT_SAFE))
    elif magnitude < _INT64_SAFE:
        dtype = np.int64
        threshold = max(min(q, _INT64_SAFE), -_INT64_SAFE)
    else:
        dtype = object
        threshold = q

    low = min(f, CHUNK_BITS)
    high = f - low
    lin = np.array(red.linear, dtype=dtype)
    q_low = np.zeros((low, low), dtype=dtype)
    couple = np.zeros((low, high), dtype=dtype)
    q_high = np.zeros((high, high), dtype=dtype)
    for (a, b), c in red.quad.items():
        if b < low:
            q_low[a, b] += c
        elif a >= low:
            q_high[a - low, b - low] += c
        else:
            couple[a, b - low] += c

    x_low = _bit_matrix(low, dtype)
    e_low = x_low @ lin[:low] + ((x_low @ q_low) * x_low).sum(axis=1) + red.const
    if high:
        x_high = _bit_matrix(high, dtype)
        e_high = x_high @ lin[low:] + ((x_high @ q_high) * x_high).sum(axis=1)
        shift = x_high @ couple.T  # (2**high, low)
    else:
        e_high = np.zeros(1, dtype=dtype)
        shift = np.zeros((1, low), dtype=dtype)

    n_chunks = len(e_high)
    chunk_size = len(e_low)

    def scan(start: int, stop: int, stop_flag: threading.Event) -> tuple[bool, int]:
        examined = 0
        for c in range(start, stop):
            if stop_flag.is_set():
                break
            values = e_low + e_high[c] + x_low @ shift[c]
            hits = np.flatnonzero(values <= threshold)
            if hits.size:
                stop_flag.set()
                return True, examined + int(hits[0]) + 1
            examined += chunk_size
        return False, examined

    flag = threading.Event()
    if workers == 1 or n_chunks == 1:
        return scan(0, n_chunks, flag)
    bounds = np.linspace(0, n_chunks, min(workers, n_chunks) + 1).astype(int)
    with ThreadPoolExecutor(max_workers=len(bounds) - 1) as pool:
        results = list(pool.map(lambda k: scan(bounds[k], bounds[k + 1], flag), range(len(bounds) - 1)))
    return any(r[0] for r in results), sum(r[1] for r in results)
