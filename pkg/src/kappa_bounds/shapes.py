"""Problem descriptions shared by the bounds, density and sampling code."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

from .errors import DomainError

# Keeps every Gamma-function constant finite in log space.
MAX_DIMENSION = 10**6


class Field(enum.Enum):
    """Real (beta = 1) or complex (beta = 2) Gaussian ensemble."""

    REAL = 1
    COMPLEX = 2

    @property
    def beta(self) -> int:
        return self.value

    @classmethod
    def parse(cls, text: str | Field) -> Field:
        if isinstance(text, Field):
            return text
        try:
            return cls[str(text).strip().upper()]
        except KeyError:
            raise DomainError(f"unknown field {text!r}; expected 'real' or 'complex'") from None

    def __str__(self) -> str:
        return self.name.lower()


class Scaling(enum.Enum):
    """How a threshold is interpreted.

    SCALED asks about kappa / (n / d) > x, RAW about kappa > x.
    """

    SCALED = "scaled"
    RAW = "raw"

    @classmethod
    def parse(cls, text: str | Scaling) -> Scaling:
        if isinstance(text, Scaling):
            return text
        try:
            return cls(str(text).strip().lower())
        except ValueError:
            raise DomainError(f"unknown scaling {text!r}; expected 'scaled' or 'raw'") from None

    def __str__(self) -> str:
        return self.value


@dataclass(frozen=True)
class MatrixShape:
    """An m x n shape stored with m <= n.

    Condition numbers are invariant under transposition, so (m, n) and
    (n, m) describe the same problem; the constructor swaps if needed.
    m = 2 is allowed without special-casing: the pair-density constant
    involves Gamma(m - 1) = Gamma(1) = 1 there.
    """

    m: int
    n: int

    def __post_init__(self) -> None:
        m, n = self.m, self.n
        for name, v in (("m", m), ("n", n)):
            if isinstance(v, bool) or int(v) != v:
                raise DomainError(f"{name} must be an integer, got {v!r}")
        m, n = int(m), int(n)
        if m < 2 or n < 2:
            raise DomainError(f"both dimensions must be >= 2, got ({m}, {n})")
        if m > MAX_DIMENSION or n > MAX_DIMENSION:
            raise DomainError(f"dimensions are capped at {MAX_DIMENSION}, got ({m}, {n})")
        if m > n:
            m, n = n, m
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    @property
    def d(self) -> int:
        """Tail exponent n - m + 1."""
        return self.n - self.m + 1

    @property
    def scale(self) -> float:
        """The normalisation n / d applied to kappa in scaled queries."""
        return self.n / self.d

    def __str__(self) -> str:
        return f"{self.m}x{self.n}"


def canonicalize(m: int, n: int) -> MatrixShape:
    return MatrixShape(m, n)


def scaled_from_raw(shape: MatrixShape, x_raw: float) -> float:
    return x_raw * shape.d / shape.n


def raw_from_scaled(shape: MatrixShape, x_scaled: float) -> float:
    return x_scaled * shape.n / shape.d


@dataclass(frozen=True)
class TailQuery:
    """The event kappa / (n / d) > x (SCALED) or kappa > x (RAW)."""

    shape: MatrixShape
    field: Field
    x: float
    scaling: Scaling = Scaling.SCALED

    def __post_init__(self) -> None:
        x = float(self.x)
        if not math.isfinite(x) or x <= 0.0:
            raise DomainError(f"threshold must be positive and finite, got {self.x!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "field", Field.parse(self.field))
        object.__setattr__(self, "scaling", Scaling.parse(self.scaling))

    @property
    def x_scaled(self) -> float:
        if self.scaling is Scaling.SCALED:
            return self.x
        return scaled_from_raw(self.shape, self.x)

    @property
    def x_raw(self) -> float:
        if self.scaling is Scaling.RAW:
            return self.x
        return raw_from_scaled(self.shape, self.x)

    @property
    def valid(self) -> bool:
        """Whether the threshold is inside the region where the tail bounds are proven."""
        return self.x_scaled >= self.shape.d
