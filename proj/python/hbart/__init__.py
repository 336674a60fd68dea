"""Tree-ensemble regression with a fitted variance surface.

The heavy lifting lives in the compiled ``_hbart`` extension; this package
re-exports its surface.
"""

from hbart._hbart import (
    DataError,
    FitResult,
    NumericError,
    __version__,
    calibrate_tau,
    calibrate_variance_prior,
    energy_statistic,
    fit,
    h_evidence,
    load_csv,
    load_forests,
    predictive_percentiles,
    simulate,
)

__all__ = [
    "DataError",
    "FitResult",
    "NumericError",
    "__version__",
    "calibrate_tau",
    "calibrate_variance_prior",
    "energy_statistic",
    "fit",
    "h_evidence",
    "load_csv",
    "load_forests",
    "predictive_percentiles",
    "simulate",
]
