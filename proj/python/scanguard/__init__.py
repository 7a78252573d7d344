"""Control-limit outlier detection for weekly price scanner data."""

from ._scanguard import (
    Bandwidth,
    ConfusionCounts,
    ControlLimits,
    FlagVector,
    Method,
    MethodConfig,
    RatioSeries,
    ScanguardError,
    Space,
    SplitResult,
    TransactionRecord,
    VarianceSurface,
    VolumePair,
    classify,
    confusion,
    const_limits,
    fit_variance_surface,
    hb_limits,
    loocv_error,
    nw_estimate,
    oracle_limits,
    parse_scanner_csv,
    quantile,
    quartile_limits,
    ratio_series,
    rates,
    rf_limits,
    run_study,
    select_bandwidth,
    split_by_week,
    tukey_filter,
    tukey_limits,
    var_limits,
)

__all__ = [
    "Bandwidth",
    "ConfusionCounts",
    "ControlLimits",
    "FlagVector",
    "Method",
    "MethodConfig",
    "RatioSeries",
    "ScanguardError",
    "Space",
    "SplitResult",
    "TransactionRecord",
    "VarianceSurface",
    "VolumePair",
    "classify",
    "confusion",
    "const_limits",
    "fit_variance_surface",
    "hb_limits",
    "loocv_error",
    "nw_estimate",
    "oracle_limits",
    "parse_scanner_csv",
    "quantile",
    "quartile_limits",
    "ratio_series",
    "rates",
    "rf_limits",
    "run_study",
    "select_bandwidth",
    "split_by_week",
    "tukey_filter",
    "tukey_limits",
    "var_limits",
]
