"""Unscented Kalman filter variants on the six-state anaerobic digestion model."""

from ._core import (
    ConfigError,
    NumericalError,
    benchmark,
    estimate,
    group_nrmse,
    nrmse,
    psd_cholesky,
    simulate,
    solve_qp,
    variant_names,
)

UNMEASURED = (2, 3, 4)
MEASURED = (0, 1, 5)

__all__ = [
    "ConfigError",
    "NumericalError",
    "benchmark",
    "estimate",
    "group_nrmse",
    "nrmse",
    "psd_cholesky",
    "simulate",
    "solve_qp",
    "variant_names",
    "UNMEASURED",
    "MEASURED",
]
