"""Classical and Minnesota-prior Bayesian VAR estimation."""

from ._core import (
    BvarkitError,
    MinnesotaHyper,
    SeriesPanel,
    VarSpec,
    __version__,
    build_design,
    classify_effect,
    criteria_row,
    denormalize,
    fit_bvar,
    fit_ols,
    irf,
    load_panel,
    load_panel_text,
    lr_test,
    normalize,
    run_pipeline,
    select_lag,
    stability,
)

__all__ = [
    "BvarkitError",
    "MinnesotaHyper",
    "SeriesPanel",
    "VarSpec",
    "__version__",
    "build_design",
    "classify_effect",
    "criteria_row",
    "denormalize",
    "fit_bvar",
    "fit_ols",
    "irf",
    "load_panel",
    "load_panel_text",
    "lr_test",
    "normalize",
    "run_pipeline",
    "select_lag",
    "stability",
]
