"""Exact QUBO toolkit: reductions into QUBO and oracle-driven solvers with query counting."""

from .core import (
    NO_RESTRICTION,
    Assignment,
    DimensionError,
    InconsistencyError,
    ParameterError,
    QuboError,
    QuboInstance,
    Restriction,
    RestrictionError,
    SubclassFlags,
    SubclassViolation,
    classify,
    evaluate,
    lower_bound,
)
from .oracle import OracleCapacityError, OracleHandle, OracleStats, dle_query, reset_stats
from .reductions import (
    Graph,
    IlpInstance,
    IlpQuboMapping,
    KnapsackInstance,
    RationalQubo,
    UnsupportedInstance,
    interpret_ilp_result,
    normalize_rational,
    reduce_clique_to_squbo,
    reduce_ilp_to_qubo,
    reduce_knapsack_to_ilp,
    repair_to_clique,
)
from .solvers import (
    SolveReport,
    UquboSplit,
    decide_dqubo,
    extract_argmin,
    solve_lqubo,
    solve_qubo,
    solve_uqubo,
    uqubo_split,
)

__all__ = [name for name in dir() if not name.startswith("_")]
