"""Tail and expected-log bounds for condition numbers of Gaussian random matrices."""

__version__ = "0.1.0"

from .bounds import (
    BoundKind,
    BoundResult,
    exact_tail_2xn,
    expected_log_references,
    expected_log_upper,
    lower_tail,
    square_limit_tail,
    upper_tail,
)
from .errors import (
    AccuracyError,
    BoundNotApplicable,
    DomainError,
    KappaBoundsError,
    SVDConvergenceError,
    VacuousConfigError,
)
from .shapes import Field, MatrixShape, Scaling, TailQuery, canonicalize

__all__ = [
    "AccuracyError",
    "BoundKind",
    "BoundNotApplicable",
    "BoundResult",
    "DomainError",
    "Field",
    "KappaBoundsError",
    "MatrixShape",
    "SVDConvergenceError",
    "Scaling",
    "TailQuery",
    "VacuousConfigError",
    "canonicalize",
    "exact_tail_2xn",
    "expected_log_references",
    "expected_log_upper",
    "lower_tail",
    "square_limit_tail",
    "upper_tail",
]
