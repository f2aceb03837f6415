"""Pilot sequence design and evaluation for multi-cell massive MIMO."""

from ._pilotseq import (
    InterferenceMatrix,
    ValidationError,
    bound_report,
    etsc,
    interference_split,
    optimal_multi_cell,
    papr_db,
    pooled_wbe,
    random_set,
    simulate,
    solve,
    sum_mse_analytic,
    tsc,
    wbe_truncated_dft,
    welch_bound,
)

__all__ = [
    "InterferenceMatrix",
    "ValidationError",
    "bound_report",
    "etsc",
    "interference_split",
    "optimal_multi_cell",
    "papr_db",
    "pooled_wbe",
    "random_set",
    "simulate",
    "solve",
    "sum_mse_analytic",
    "tsc",
    "wbe_truncated_dft",
    "welch_bound",
]
