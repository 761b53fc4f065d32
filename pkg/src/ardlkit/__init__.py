"""ardlkit: ARDL bounds-testing toolkit for annual time series.

Unit-root pretesting (ADF with MacKinnon surfaces), ARDL estimation and order
selection, the Pesaran-Shin-Smith bounds cointegration test, long-run
coefficients with delta-method standard errors, the error-correction form,
residual diagnostics, CUSUM stability, a pipeline CLI, and a seeded Monte
Carlo harness that validates the embedded critical-value tables.
"""

from ._version import __version__
from .ardl import (
    ArdlModel,
    ArdlOrder,
    BoundsCase,
    BoundsResult,
    CointVerdict,
    EcmResult,
    LongRunCoeffs,
    adjustment_narrative,
    bounds_test,
    bounds_verdict,
    fit_ardl,
    fit_ecm,
    long_run,
    pesaran_bounds,
    select_order,
)
from .diagnostics import (
    CusumResult,
    HetKind,
    TestResult,
    cusum,
    het_test,
    ramsey_reset,
    serial_lm,
)
from .errors import (
    ArdlKitError,
    BoundsLookupError,
    ConfigError,
    DegenerateError,
    DomainError,
    EstimationWarning,
    FetchError,
    I2Error,
    IngestError,
    NoCointegrationError,
    PipelineError,
    RankError,
    SampleError,
    SingularLongRunError,
)
from .mc import DgpSpec, McConfig, McQuantiles, simulate_bounds, simulate_df, simulate_dgp
from .ols import OlsFit, fit_ols, recursive_residuals
from .pipeline import (
    PipelineConfig,
    Report,
    emit_cusum_plot,
    load_config,
    render_report,
    run_pipeline,
    significance_stars,
)
from .probdist import DistSpec, cdf, chi_square, fisher_f, normal, quantile, student_t, survival
from .series import (
    Dataset,
    DesignMatrix,
    IngestOptions,
    TimeSeries,
    build_design,
    difference,
    lag,
    load_csv,
    log_transform,
    normalize_digits,
)
from .unitroot import (
    AdfResult,
    AdfSpec,
    Deterministic,
    IntegrationOrder,
    Verdict,
    adf_test,
    classify_integration,
    select_adf_lag,
)
from .worldbank import fetch_worldbank

__all__ = [
    "__version__",
    "AdfResult",
    "AdfSpec",
    "ArdlKitError",
    "ArdlModel",
    "ArdlOrder",
    "BoundsCase",
    "BoundsLookupError",
    "BoundsResult",
    "CointVerdict",
    "ConfigError",
    "CusumResult",
    "Dataset",
    "DegenerateError",
    "DesignMatrix",
    "Deterministic",
    "DgpSpec",
    "DistSpec",
    "DomainError",
    "EcmResult",
    "EstimationWarning",
    "FetchError",
    "HetKind",
    "I2Error",
    "IngestError",
    "IngestOptions",
    "IntegrationOrder",
    "LongRunCoeffs",
    "McConfig",
    "McQuantiles",
    "NoCointegrationError",
    "OlsFit",
    "PipelineConfig",
    "PipelineError",
    "RankError",
    "Report",
    "SampleError",
    "SingularLongRunError",
    "TestResult",
    "TimeSeries",
    "Verdict",
    "adf_test",
    "adjustment_narrative",
    "bounds_test",
    "bounds_verdict",
    "build_design",
    "cdf",
    "chi_square",
    "classify_integration",
    "cusum",
    "difference",
    "emit_cusum_plot",
    "fetch_worldbank",
    "fisher_f",
    "fit_ardl",
    "fit_ecm",
    "fit_ols",
    "het_test",
    "lag",
    "load_config",
    "load_csv",
    "log_transform",
    "long_run",
    "normal",
    "normalize_digits",
    "pesaran_bounds",
    "quantile",
    "ramsey_reset",
    "recursive_residuals",
    "render_report",
    "run_pipeline",
    "select_adf_lag",
    "select_order",
    "serial_lm",
    "significance_stars",
    "simulate_bounds",
    "simulate_df",
    "simulate_dgp",
    "student_t",
    "survival",
]
