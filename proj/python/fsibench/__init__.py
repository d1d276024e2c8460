"""Python access to the monolithic FSI solver."""

from ._core import (
    Config,
    ConfigError,
    Simulation,
    SolverError,
    exact_ldu_residual,
    gmres,
    imbalance,
    read_time_series,
    run,
    verify,
)

__all__ = [
    "Config",
    "ConfigError",
    "Simulation",
    "SolverError",
    "exact_ldu_residual",
    "gmres",
    "imbalance",
    "read_time_series",
    "run",
    "verify",
]
