"""Ground-truth tail probabilities for 2 x n Gaussian matrices by quadrature.

Method: with eigenvalues l1 >= l2 and r = l1 / l2 the inner integral over
l2 of the joint density is a complete Gamma integral, leaving a 1-D
density for r.  Substituting v = r^(-1/2) = 1 / kappa gives

    real:    P(kappa > x) = 2^(n+1) K Gamma(n)  int_0^(1/x) v^(n-2)  (1-v^2)   / (1+v^2)^n  dv
    complex: P(kappa > x) = 2^(2n+1) K Gamma(2n) int_0^(1/x) v^(2n-3) (1-v^2)^2 / (1+v^2)^(2n) dv

whose integrands are smooth on a finite interval.  K is the joint-density
normaliser, so this route shares nothing with the closed-form 2 x n tail.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy import integrate

from .densities import log_normalizer
from .errors import AccuracyError, DomainError
from .special import log_gamma
from .shapes import Field

MAX_ABS_ERROR = 1e-8


@dataclass(frozen=True)
class OracleResult:
    probability: float
    abs_error_estimate: float


def _tail_integrand(n: int, field: Field):
    if field is Field.REAL:
        def g(v: float) -> float:
            w = v * v
            return v ** (n - 2) * (1.0 - w) / (1.0 + w) ** n
        log_pref = (n + 1) * math.log(2.0) + log_normalizer(2, n, field) + log_gamma(n)
    else:
        def g(v: float) -> float:
            w = v * v
            return v ** (2 * n - 3) * (1.0 - w) ** 2 / (1.0 + w) ** (2 * n)
        log_pref = (2 * n + 1) * math.log(2.0) + log_normalizer(2, n, field) + log_gamma(2 * n)
    return g, math.exp(log_pref)


def tail_probability_m2(n: int, field: Field, x: float) -> OracleResult:
    """P(kappa > x) for a 2 x n matrix, x >= 1 a raw threshold."""
    field = Field.parse(field)
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    n = int(n)
    x = float(x)
    if not math.isfinite(x) or x < 1.0:
        raise DomainError(f"x must be a finite raw threshold >= 1, got {x!r}")
    g, pref = _tail_integrand(n, field)
    value, err = integrate.quad(g, 0.0, 1.0 / x, epsabs=1e-14, epsrel=1e-13, limit=200)
    prob, abs_err = pref * value, pref * err
    if abs_err > MAX_ABS_ERROR:
        raise AccuracyError(f"quadrature error estimate {abs_err:.3g} exceeds {MAX_ABS_ERROR}")
    return OracleResult(min(max(prob, 0.0), 1.0), abs_err)


def expected_log_m2(n: int) -> float:
    """Exact E[ln kappa] for a real 2 x n matrix: (sqrt(pi)/2) Gamma((n-1)/2) / Gamma(n/2)."""
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"n must be an integer >= 2, got {n!r}")
    log_value = 0.5 * math.log(math.pi) - math.log(2.0)
    log_value += log_gamma((n - 1) / 2.0) - log_gamma(n / 2.0)
    return math.exp(log_value)
