"""Generalized entropy decomposition and informal employment classification."""

from ._core import (
    DEFAULT_ALPHA,
    FixtureError,
    StatsError,
    classify_enterprise,
    classify_worker,
    decompose,
    ge_curve,
    ge_index,
    nested_decompose,
    validate_table,
    weighted_mean,
)

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ALPHA",
    "FixtureError",
    "StatsError",
    "classify_enterprise",
    "classify_worker",
    "decompose",
    "ge_curve",
    "ge_index",
    "nested_decompose",
    "validate_table",
    "weighted_mean",
]
