"""Quadrature oracles used only by the tests.

All integrals use QUADPACK's adaptive Gauss-Kronrod rules through
``scipy.integrate.quad``.  The ordered eigenvalue cone is mapped to the
positive orthant with gaps (x_m = a, x_{m-1} = a + b, x_1 = a + b + c) and
the smallest coordinate is written a = u^2 to remove the x^(-1/2)
singularity of real square shapes.
"""

import math

from scipy import integrate

from kappa_bounds.densities import joint_density
from kappa_bounds.shapes import Field, MatrixShape

QUAD_OPTS = dict(epsabs=1e-12, epsrel=1e-12, limit=200)
INF = math.inf


def quad(f, a, b, **kw):
    opts = {**QUAD_OPTS, **kw}
    return integrate.quad(f, a, b, **opts)[0]


def density(shape, field, *point):
    return math.exp(joint_density(shape, field, point).log_density)


def normalization(m, n, field):
    """Integral of the joint density over x_1 >= ... >= x_m > 0 for m in {2, 3}."""
    shape = MatrixShape(m, n)
    field = Field.parse(field)
    if m == 2:
        def inner(u):
            a = u * u
            return 2 * u * quad(lambda b: density(shape, field, a + b, a) if b > 0 else 0.0, 0, INF)
        return quad(inner, 0, INF, epsabs=1e-10, epsrel=1e-10)
    if m == 3:
        opts = dict(epsabs=1e-9, epsrel=1e-8, limit=100)

        def over_c(a, b):
            return quad(lambda c: density(shape, field, a + b + c, a + b, a) if b > 0 and c > 0 else 0.0,
                        0, INF, **opts)

        def over_b(u):
            a = u * u
            return 2 * u * quad(lambda b: over_c(a, b), 0, INF, **opts)

        return quad(over_b, 0, INF, **opts)
    raise ValueError("normalization oracle supports m = 2, 3 only")


def smallest_marginal_m2(n, field, y):
    """Density of the smallest eigenvalue of a 2 x n Wishart matrix at y."""
    shape = MatrixShape(2, n)
    return quad(lambda s: density(shape, field, y + s, y) if s > 0 else 0.0, 0, INF)


def extreme_pair_marginal_m3(n, field, x, y):
    """Joint density of (largest, smallest) eigenvalue for m = 3, integrating the middle one."""
    shape = MatrixShape(3, n)
    return quad(lambda z: density(shape, field, x, z, y) if y < z < x else 0.0, y, x)
