"""Wishart eigenvalue densities and envelopes for the extreme eigenvalues.

W = G G^T (real) or G G^H (complex, entries u + iv with u, v ~ N(0, 1)),
G of shape m x n with m <= n.  Ordered eigenvalues x_1 >= ... >= x_m have
joint density

    real:    K exp(-sum x / 2) prod x_i^((n-m-1)/2) prod_{i<j} (x_i - x_j)
    complex: K exp(-sum x / 2) prod x_i^(n-m)       prod_{i<j} (x_i - x_j)^2

All evaluators work in natural-log space.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .errors import DomainError
from .special import log_gamma
from .shapes import Field, MatrixShape

_LOG2 = math.log(2.0)
_LOGPI = math.log(math.pi)


def log_normalizer(m: int, n: int, field: Field) -> float:
    """log K for an m x n ensemble; m = 0 gives 0 (empty product)."""
    if field is Field.REAL:
        inv = 0.5 * m * (n * _LOG2 - _LOGPI)
        inv += sum(log_gamma((n - m + i) / 2.0) + log_gamma(i / 2.0) for i in range(1, m + 1))
    else:
        inv = m * n * _LOG2
        inv += sum(log_gamma(n - m + i) + log_gamma(i) for i in range(1, m + 1))
    return -inv


@dataclass(frozen=True)
class EnsembleConstants:
    """Log normalising constant K and the envelope constants C and L."""

    shape: MatrixShape
    field: Field
    log_K: float
    log_C: float
    log_L: float


def ensemble_constants(shape: MatrixShape, field: Field) -> EnsembleConstants:
    field = Field.parse(field)
    m, n = shape.m, shape.n
    lg = log_gamma
    if field is Field.REAL:
        log_C = -(2.0 * _LOG2 + lg(m - 1) + lg(n - m + 1))
        log_L = 0.5 * (n - m - 1) * _LOG2 + lg((n + 1) / 2.0) - lg(m / 2.0) - lg(n - m + 1)
    else:
        log_C = -(2 * n * _LOG2 + lg(m - 1) + lg(m) + lg(n - m + 1) + lg(n - m + 2))
        log_L = lg(n + 1) - (n - m + 1) * _LOG2 - lg(m) - lg(n - m + 1) - lg(n - m + 2)
    return EnsembleConstants(shape, field, log_normalizer(m, n, field), log_C, log_L)


def _power(shape: MatrixShape, field: Field) -> float:
    """Exponent of each eigenvalue in the joint density."""
    if field is Field.REAL:
        return 0.5 * (shape.n - shape.m - 1)
    return float(shape.n - shape.m)


@dataclass(frozen=True)
class DensityEval:
    log_density: float
    point: tuple[float, ...]


def joint_density(shape: MatrixShape, field: Field, point: Sequence[float]) -> DensityEval:
    """Log of the ordered joint eigenvalue density at ``point``.

    Ties give -inf: the Vandermonde factor vanishes there.
    """
    field = Field.parse(field)
    xs = tuple(float(v) for v in point)
    if len(xs) != shape.m:
        raise DomainError(f"point must have length m = {shape.m}, got {len(xs)}")
    if not all(math.isfinite(v) and v > 0.0 for v in xs):
        raise DomainError("eigenvalues must be positive and finite")
    if any(xs[i] < xs[i + 1] for i in range(len(xs) - 1)):
        raise DomainError("eigenvalues must be given in non-increasing order")
    if any(xs[i] == xs[i + 1] for i in range(len(xs) - 1)):
        return DensityEval(-math.inf, xs)
    consts = ensemble_constants(shape, field)
    p = _power(shape, field)
    vandermonde = sum(
        math.log(xs[i] - xs[j]) for i in range(len(xs)) for j in range(i + 1, len(xs))
    )
    log_f = consts.log_K - 0.5 * sum(xs) + p * sum(math.log(v) for v in xs)
    log_f += field.beta * vandermonde
    return DensityEval(log_f, xs)


def extreme_pair_density_upper(shape: MatrixShape, field: Field, x: float, y: float) -> float:
    """Log envelope for the joint density of (largest, smallest) eigenvalue at (x, y).

    real:    C e^(-(x+y)/2) x^((n+m-3)/2) y^((n-m-1)/2)
    complex: C e^(-(x+y)/2) x^(n+m-2)     y^(n-m)
    """
    field = Field.parse(field)
    x, y = float(x), float(y)
    if not (math.isfinite(x) and math.isfinite(y)) or y <= 0.0:
        raise DomainError(f"need finite y > 0, got y = {y!r}")
    if y > x:
        raise DomainError(f"need x >= y, got x = {x!r}, y = {y!r}")
    m, n = shape.m, shape.n
    if field is Field.REAL:
        px, py = 0.5 * (n + m - 3), 0.5 * (n - m - 1)
    else:
        px, py = float(n + m - 2), float(n - m)
    log_C = ensemble_constants(shape, field).log_C
    return log_C - 0.5 * (x + y) + px * math.log(x) + py * math.log(y)


def smallest_eigenvalue_density_bounds(
    shape: MatrixShape, field: Field, x: float
) -> tuple[float, float]:
    """``(log_lower, log_upper)`` envelope for the smallest-eigenvalue density.

    lower = L e^(-m x / 2) x^p, upper = L e^(-x / 2) x^p with p the
    joint-density exponent.  The lower envelope is only a true lower bound
    when p >= 0; for real square shapes (p = -1/2) it overshoots.
    """
    field = Field.parse(field)
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"x must be positive and finite, got {x!r}")
    log_L = ensemble_constants(shape, field).log_L
    base = log_L + _power(shape, field) * math.log(x)
    return base - 0.5 * shape.m * x, base - 0.5 * x
