"""Closed-form tail and expected-log bounds for Gaussian condition numbers.

For an m x n Gaussian matrix with m <= n, d = n - m + 1 and beta = 1 (real)
or 2 (complex), the scaled tail P(kappa / (n / d) > x) is bracketed for
x >= d by

    (2 pi)^(-beta/2) (c / x)^(beta d)  <  P  <  (2 pi)^(-beta/2) (C / x)^(beta d)

with C = 6.414, c = 0.245 (real) and C = 6.298, c = 0.319 (complex).
Everything is evaluated in log space so d up to 1e6 and x up to 1e300
stay finite.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError
from .oracle import expected_log_m2
from .shapes import Field, MatrixShape, TailQuery

UPPER_CONSTANT = {Field.REAL: 6.414, Field.COMPLEX: 6.298}
LOWER_CONSTANT = {Field.REAL: 0.245, Field.COMPLEX: 0.319}
EXPECTED_LOG_CONSTANT = {Field.REAL: 2.258, Field.COMPLEX: 2.240}

# Ranges known to contain the best possible constants.  The upper ends of
# the lower-constant ranges come from the 2 x n exact tail, the lower ends
# of the upper-constant ranges from the square-matrix limit law.
UPPER_CONSTANT_RANGE = {
    Field.REAL: (2.0 * math.sqrt(2.0 * math.pi), 6.414),
    Field.COMPLEX: (2.0 * math.sqrt(2.0 * math.pi), 6.298),
}
LOWER_CONSTANT_RANGE = {Field.REAL: (0.245, 2.0), Field.COMPLEX: (0.319, 2.0)}

# Reference only: the prior square-case constant improved upon by the
# m = n specialisation of the real upper bound.
PRIOR_SQUARE_CONSTANT = 5.60

SQUARE_EXPECTED_LOG_OFFSET = 1.537

_LOG10_2PI = math.log10(2.0 * math.pi)


class BoundKind(enum.Enum):
    UPPER_TAIL = "upper_tail"
    LOWER_TAIL = "lower_tail"


@dataclass(frozen=True)
class BoundResult:
    """A bound value with its validity flag and the constant that produced it.

    For tail kinds ``log10_value`` is log10 of the probability bound.  Values
    above 1 are kept as computed; ``informative`` reports whether the bound
    says anything.
    """

    kind: BoundKind
    log10_value: float
    valid: bool
    constant_used: float

    @property
    def value(self) -> float:
        return 10.0**self.log10_value

    @property
    def informative(self) -> bool:
        return self.log10_value <= 0.0

    def constant_range(self, field: Field) -> tuple[float, float]:
        if self.kind is BoundKind.UPPER_TAIL:
            return UPPER_CONSTANT_RANGE[field]
        return LOWER_CONSTANT_RANGE[field]


def _log10_tail(field: Field, d: int, constant: float, x_scaled: float) -> float:
    beta = field.beta
    return -0.5 * beta * _LOG10_2PI + beta * d * (math.log10(constant) - math.log10(x_scaled))


def upper_tail(query: TailQuery) -> BoundResult:
    """Upper bound on P(kappa / (n/d) > x); guaranteed only when x >= d."""
    c = UPPER_CONSTANT[query.field]
    return BoundResult(
        BoundKind.UPPER_TAIL,
        _log10_tail(query.field, query.shape.d, c, query.x_scaled),
        query.valid,
        c,
    )


def lower_tail(query: TailQuery) -> BoundResult:
    """Lower bound on P(kappa / (n/d) > x); guaranteed only when x >= d."""
    c = LOWER_CONSTANT[query.field]
    return BoundResult(
        BoundKind.LOWER_TAIL,
        _log10_tail(query.field, query.shape.d, c, query.x_scaled),
        query.valid,
        c,
    )


def exact_tail_2xn(n: int, x: float) -> float:
    """Exact P(kappa > x) for a real 2 x n Gaussian matrix.

    Equals (2x / (x^2 + 1))^(n - 1) for x >= 1, and 1 below that since
    kappa >= 1 surely.
    """
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    x = float(x)
    if not math.isfinite(x) or x <= 0.0:
        raise DomainError(f"x must be positive and finite, got {x!r}")
    if x <= 1.0:
        return 1.0
    # 2x / (x^2 + 1) = 2 / (x (1 + x^-2)), safe for huge x
    log_base = math.log(2.0) - math.log(x) - math.log1p(1.0 / (x * x))
    return math.exp((int(n) - 1) * log_base)


def square_limit_tail(x: float) -> float:
    """Limit as m -> infinity of P(kappa / m > x) for real m x m matrices."""
    x = float(x)
    if not x > 0.0:
        raise DomainError(f"x must be positive, got {x!r}")
    return -math.expm1(-2.0 / x - 2.0 / (x * x))


def expected_log_upper(shape: MatrixShape, field: Field) -> float:
    """Upper bound on E[ln kappa]: ln(n/d) + 2.258 (real) or + 2.240 (complex)."""
    return math.log(shape.n / shape.d) + EXPECTED_LOG_CONSTANT[Field.parse(field)]


def expected_log_references(shape: MatrixShape) -> list[tuple[str, float]]:
    """Known exact or asymptotic values of E[ln kappa] for real matrices.

    Reference-only: the square and rectangular entries are large-size
    limits and carry an o(1) error at any finite shape.
    """
    refs: list[tuple[str, float]] = []
    if shape.m == 2:
        refs.append(("exact_2xn", expected_log_m2(shape.n)))
    if shape.m == shape.n:
        refs.append(("square_asymptote", math.log(shape.m) + SQUARE_EXPECTED_LOG_OFFSET))
    else:
        root = math.sqrt(shape.m / shape.n)
        refs.append(("rectangular_asymptote", math.log((1.0 + root) / (1.0 - root))))
    return refs
