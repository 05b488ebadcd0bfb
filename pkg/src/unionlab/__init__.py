"""Exact finite experiments on union-closed set systems and their log-weights."""

from .setsystem import (
    BudgetExceeded,
    GroundSet,
    MultiplicationTable,
    SetSystem,
    breadth,
    cayley_embedding,
    divides,
    filter_generated,
    is_incompressible,
    is_union_closed,
    join,
    multiplication_table,
    union_closure,
)
from .propagation import (
    LogWeight,
    VValue,
    check_log_weight,
    fbp_closure,
    fbp_step,
    level_set,
    propagation_constant,
    v_value,
)
from .canonical import Spread, make_spread, refine, restrict, tmax, tmin, tort

__version__ = "0.1.0"

__all__ = [
    "BudgetExceeded",
    "GroundSet",
    "LogWeight",
    "MultiplicationTable",
    "SetSystem",
    "Spread",
    "VValue",
    "breadth",
    "cayley_embedding",
    "check_log_weight",
    "divides",
    "fbp_closure",
    "fbp_step",
    "filter_generated",
    "is_incompressible",
    "is_union_closed",
    "join",
    "level_set",
    "make_spread",
    "multiplication_table",
    "propagation_constant",
    "refine",
    "restrict",
    "tmax",
    "tmin",
    "tort",
    "union_closure",
    "v_value",
]
