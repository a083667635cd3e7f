"""Log-space Gamma function and elementary Gamma/incomplete-Gamma inequalities.

Every bound here is returned as a natural logarithm so callers can combine
them without overflow. The inequalities are conditional; asking for one
outside its hypotheses raises :class:`BoundNotApplicable` rather than
returning a number that carries no guarantee.
"""

from __future__ import annotations

import math

import numpy as np
from scipy import special as _sp

from .errors import BoundNotApplicable, DomainError

_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)

# Taylor coefficients of log Gamma about its roots x = 1 and x = 2:
#   log Gamma(1 + e) = -gamma e + sum_k (-1)^k zeta(k) / k e^k
#   log Gamma(2 + e) = (1 - gamma) e + sum_k (-1)^k (zeta(k) - 1) / k e^k
_K = np.arange(2, 72)
_SIGN = np.where(_K % 2 == 0, 1.0, -1.0)
_COEF_AT_1 = tuple(float(c) for c in _SIGN * _sp.zeta(_K) / _K)
_COEF_AT_2 = tuple(float(c) for c in _SIGN * _sp.zetac(_K) / _K)
_ROOT_RADIUS = 0.5


def _check_positive(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be a positive finite number, got {value!r}")
    return value


def log_gamma(x: float) -> float:
    """Natural log of Gamma(x) for x > 0.

    On [0.5, 2.5] a Taylor series about the nearer root (x = 1 or x = 2) in
    the exactly representable offset keeps full relative accuracy, which the
    C library ``lgamma`` loses near the roots.  Elsewhere ``math.lgamma``.
    """
    x = _check_positive("x", x)
    if abs(x - 1.0) < _ROOT_RADIUS:
        return _series(x - 1.0, -np.euler_gamma, _COEF_AT_1)
    if abs(x - 2.0) <= _ROOT_RADIUS:
        return _series(x - 2.0, 1.0 - np.euler_gamma, _COEF_AT_2)
    return math.lgamma(x)


def _series(e: float, linear: float, coefs: tuple[float, ...]) -> float:
    acc = 0.0
    for c in reversed(coefs):
        acc = (acc + c) * e
    return (linear + acc) * e


def stirling_bounds(x: float) -> tuple[float, float]:
    """Return ``(log_lower, log_upper)`` bracketing ``log Gamma(x + 1)``.

    lower = sqrt(2 pi) x^(x + 1/2) e^(-x)
    upper = lower * e^(1 / (12 x))
    """
    x = _check_positive("x", x)
    log_lower = _HALF_LOG_2PI + (x + 0.5) * math.log(x) - x
    return log_lower, log_lower + 1.0 / (12.0 * x)


def gamma_halfshift_bound(x: float) -> float:
    """``log(Gamma(x) * sqrt(x))``, an upper bound for ``log Gamma(x + 1/2)``."""
    x = _check_positive("x", x)
    return math.lgamma(x) + 0.5 * math.log(x)


def incomplete_gamma_head_bound(a: float, b: float, t: float) -> float:
    """Bound ``log int_0^t e^(-a s) s^b ds <= log(e^(-a t) t^(b + 1))``.

    Holds for a > 0, b > 0 and t <= b / a.
    """
    a = _check_positive("a", a)
    b = _check_positive("b", b)
    t = _check_positive("t", t)
    if t > b / a:
        raise BoundNotApplicable(f"head bound needs t <= b/a = {b / a!r}, got t = {t!r}")
    return -a * t + (b + 1.0) * math.log(t)


def incomplete_gamma_tail_bound(a: float, b: float, k: float, t: float) -> float:
    """Bound ``log int_t^inf e^(-a s) s^b ds <= log(k e^(-a t) t^b)``.

    Holds for a > 0, b >= 0, k > 1/a and t >= k b / (k a - 1).
    """
    a = _check_positive("a", a)
    t = _check_positive("t", t)
    b = float(b)
    k = float(k)
    if not math.isfinite(b) or b < 0.0:
        raise DomainError(f"b must be a non-negative finite number, got {b!r}")
    if not math.isfinite(k) or k * a <= 1.0:
        raise BoundNotApplicable(f"tail bound needs k > 1/a = {1.0 / a!r}, got k = {k!r}")
    threshold = k * b / (k * a - 1.0)
    if t < threshold:
        raise BoundNotApplicable(
            f"tail bound needs t >= k b / (k a - 1) = {threshold!r}, got t = {t!r}"
        )
    return math.log(k) - a * t + b * math.log(t)
