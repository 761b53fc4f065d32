"""Exception hierarchy and warning categories."""

from __future__ import annotations


class ArdlKitError(Exception):
    """Base class for all package errors."""


class IngestError(ArdlKitError):
    """Malformed input data: bad cells, duplicate or gapped periods."""


class DomainError(ArdlKitError):
    """Argument outside the mathematical domain of an operation."""


class SampleError(ArdlKitError):
    """Too few observations to estimate the requested model."""


class RankError(ArdlKitError):
    """Design matrix is rank deficient; names the offending column."""

    def __init__(self, message: str, column: str | None = None):
        super().__init__(message)
        self.column = column


class DegenerateError(ArdlKitError):
    """Zero-variance input where variation is required."""


class SingularLongRunError(ArdlKitError):
    """Autoregressive lag polynomial has a (near) unit root; no long-run solution."""


class BoundsLookupError(ArdlKitError, LookupError):
    """Requested row absent from the bounds critical-value table."""


class ConfigError(ArdlKitError):
    """Invalid or unknown pipeline configuration."""


class FetchError(ArdlKitError):
    """Remote data retrieval failed; carries the request URL."""

    def __init__(self, message: str, url: str | None = None):
        super().__init__(message)
        self.url = url


class I2Error(ArdlKitError):
    """A variable classified as integrated of order two or higher."""


class NoCointegrationError(ArdlKitError):
    """Long-run output requested but the bounds test rejected cointegration."""


class PipelineError(ArdlKitError):
    """A pipeline stage failed; the message names the stage."""

    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class EstimationWarning(UserWarning):
    """Non-fatal estimation caveat (shifted recursion start, unstable roots, ...)."""
