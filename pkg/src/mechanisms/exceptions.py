"""
Custom exceptions for the private estimation library.

This module defines the exception hierarchy shared by the mechanisms,
estimators, distribution oracle, audits and the experiment harness.
"""

from typing import Optional


class PrivateEstimationError(Exception):
    """Base exception for all private-estimation errors."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.error_code = error_code

    def __str__(self) -> str:
        if self.error_code:
            return f"[{self.error_code}] {self.message}"
        return self.message


class InvalidParameterError(PrivateEstimationError):
    """Raised when a privacy, noise or estimator parameter is out of range."""

    def __init__(self, message: str):
        super().__init__(message, "PARAM_ERROR")


class SoundnessViolation(PrivateEstimationError):
    """
    Raised when a lazy histogram is thresholded at or below the noise bound.

    Below that point an unmaterialized bin could cross the threshold, so the
    lazy histogram would no longer match the infinite mechanism. In practice
    this means the dataset is too small for the chosen constants.
    """

    def __init__(self, threshold: float, z_max: float):
        message = (
            f"Selection threshold {threshold:.6g} does not exceed the noise "
            f"truncation bound {z_max:.6g}; dataset too small for these constants"
        )
        super().__init__(message, "SOUNDNESS_ERROR")
        self.threshold = threshold
        self.z_max = z_max


class InsufficientDataError(PrivateEstimationError):
    """Raised when a dataset has too few samples for an operation."""

    def __init__(self, message: str):
        super().__init__(message, "DATA_ERROR")


class InvalidScaleError(PrivateEstimationError):
    """Raised when a scale estimate is not strictly positive."""

    def __init__(self, scale: float):
        super().__init__(f"Scale estimate must be positive, got {scale}", "SCALE_ERROR")
        self.scale = scale


class InvalidQuantileError(PrivateEstimationError):
    """Raised when an empirical quantile is requested outside [1/n, 1]."""

    def __init__(self, p: object, n: int):
        super().__init__(f"Quantile level {p} outside [1/{n}, 1]", "QUANTILE_ERROR")
        self.p = p
        self.n = n


class EmptySliceError(PrivateEstimationError):
    """Raised when the middle slice of a dataset contains no samples."""

    def __init__(self, lower: float, upper: float):
        super().__init__(
            f"No samples strictly inside ({lower}, {upper})", "SLICE_ERROR"
        )
        self.lower = lower
        self.upper = upper


class InfiniteMomentError(PrivateEstimationError):
    """Raised when a distribution lacks a finite second moment."""

    def __init__(self, message: str):
        super().__init__(message, "MOMENT_ERROR")


class SupportViolationError(PrivateEstimationError):
    """Raised when a distribution's support breaks a construction's requirement."""

    def __init__(self, message: str):
        super().__init__(message, "SUPPORT_ERROR")


class NotNeighborsError(PrivateEstimationError):
    """Raised when two datasets given to a privacy audit are not neighbors."""

    def __init__(self, distance: int):
        super().__init__(
            f"Datasets must differ in exactly one entry, found Hamming distance {distance}",
            "NEIGHBOR_ERROR",
        )
        self.distance = distance


class ConfigError(PrivateEstimationError):
    """Raised when an experiment configuration is invalid."""

    def __init__(self, message: str, field: Optional[str] = None):
        super().__init__(message, "CONFIG_ERROR")
        self.field = field
