import math

import mpmath
import numpy as np
import pytest

from kappa_bounds.densities import (
    ensemble_constants,
    extreme_pair_density_upper,
    joint_density,
    log_normalizer,
    smallest_eigenvalue_density_bounds,
)
from kappa_bounds.errors import DomainError
from kappa_bounds.shapes import Field, MatrixShape
from support import INF, extreme_pair_marginal_m3, normalization, quad, smallest_marginal_m2

REAL, COMPLEX = Field.REAL, Field.COMPLEX
mpmath.mp.dps = 30


def mp_log_K_real(m, n):
    inv = (mpmath.mpf(2) ** n / mpmath.pi) ** (mpmath.mpf(m) / 2)
    for i in range(1, m + 1):
        inv *= mpmath.gamma(mpmath.mpf(n - m + i) / 2) * mpmath.gamma(mpmath.mpf(i) / 2)
    return float(-mpmath.log(inv))


def mp_log_K_complex(m, n):
    inv = mpmath.mpf(2) ** (m * n)
    for i in range(1, m + 1):
        inv *= mpmath.gamma(n - m + i) * mpmath.gamma(i)
    return float(-mpmath.log(inv))


class TestJointDensity:
    def test_tie_is_minus_infinity(self):
        assert joint_density(MatrixShape(2, 2), REAL, (1.5, 1.5)).log_density == -math.inf

    @pytest.mark.parametrize(
        "point", [(1.0,), (1.0, 2.0), (1.0, 0.0), (1.0, -1.0), (1.0, math.nan)]
    )
    def test_domain(self, point):
        with pytest.raises(DomainError):
            joint_density(MatrixShape(2, 3), REAL, point)

    @pytest.mark.parametrize("n, field", [(3, REAL), (2, COMPLEX)])
    def test_normalised(self, n, field):
        assert normalization(2, n, field) == pytest.approx(1.0, abs=1e-8)

    def test_matches_formula(self):
        # m = 3, n = 5: K e^{-s/2} prod x^{1/2} prod (xi - xj)
        pt = (4.0, 2.5, 0.3)
        ev = joint_density(MatrixShape(3, 5), REAL, pt)
        K = math.exp(mp_log_K_real(3, 5))
        expect = K * math.exp(-sum(pt) / 2) * math.sqrt(4.0 * 2.5 * 0.3) * 1.5 * 3.7 * 2.2
        assert math.exp(ev.log_density) == pytest.approx(expect, rel=1e-12)
        assert ev.point == pt


class TestConstants:
    @pytest.mark.parametrize("m, n", [(2, 2), (2, 9), (3, 3), (4, 7), (10, 25), (50, 50)])
    def test_log_K_matches_mpmath(self, m, n):
        shape = MatrixShape(m, n)
        assert ensemble_constants(shape, REAL).log_K == pytest.approx(mp_log_K_real(m, n), rel=1e-12)
        assert ensemble_constants(shape, COMPLEX).log_K == pytest.approx(mp_log_K_complex(m, n), rel=1e-12)

    @pytest.mark.parametrize("m, n", [(2, 2), (2, 9), (3, 3), (4, 7), (10, 25), (50, 50)])
    def test_identities(self, m, n):
        shape = MatrixShape(m, n)
        r = ensemble_constants(shape, REAL)
        c = ensemble_constants(shape, COMPLEX)
        lg = math.lgamma
        assert math.exp(r.log_C + math.log(4) + lg(m - 1) + lg(n - m + 1)) == pytest.approx(1, abs=1e-12)
        # C and L are ratios of joint-density normalisers
        assert r.log_C == pytest.approx(log_normalizer(m, n, REAL) - log_normalizer(m - 2, n, REAL), abs=1e-10)
        assert c.log_C == pytest.approx(log_normalizer(m, n, COMPLEX) - log_normalizer(m - 2, n, COMPLEX), abs=1e-10)
        assert r.log_L == pytest.approx(log_normalizer(m, n, REAL) - log_normalizer(m - 1, n + 1, REAL), abs=1e-10)
        assert c.log_L == pytest.approx(log_normalizer(m, n, COMPLEX) - log_normalizer(m - 1, n + 1, COMPLEX), abs=1e-10)

    def test_finite_at_cap(self):
        for field in (REAL, COMPLEX):
            k = ensemble_constants(MatrixShape(1000, 10**6), field)
            assert all(math.isfinite(v) for v in (k.log_K, k.log_C, k.log_L))


class TestExtremePairUpper:
    def test_square_2x2(self):
        for t in (0.1, 1.0, 7.0):
            assert extreme_pair_density_upper(MatrixShape(2, 2), REAL, t, t) == pytest.approx(math.log(0.25) - t)

    def test_domain(self):
        with pytest.raises(DomainError):
            extreme_pair_density_upper(MatrixShape(2, 2), REAL, 1.0, 2.0)
        with pytest.raises(DomainError):
            extreme_pair_density_upper(MatrixShape(2, 2), REAL, 1.0, 0.0)

    @pytest.mark.parametrize("field", [REAL, COMPLEX])
    def test_dominates_2x4_pointwise(self, field):
        shape = MatrixShape(2, 4)
        rng = np.random.default_rng(5)
        for a, b in rng.uniform(1e-3, 40.0, size=(1000, 2)):
            x, y = max(a, b), min(a, b)
            bound = extreme_pair_density_upper(shape, field, x, y)
            assert bound >= joint_density(shape, field, (x, y)).log_density

    def test_dominates_3x5_marginal(self):
        shape = MatrixShape(3, 5)
        grid = np.linspace(0.2, 30.0, 10)
        for i, x in enumerate(grid):
            for y in grid[:i]:
                marg = extreme_pair_marginal_m3(5, REAL, x, y)
                assert math.exp(extreme_pair_density_upper(shape, REAL, x, y)) >= marg
        for x, y in [(0.5, 0.4), (30.0, 0.01), (12.0, 11.9)]:
            marg = extreme_pair_marginal_m3(5, REAL, x, y)
            assert math.exp(extreme_pair_density_upper(shape, REAL, x, y)) >= marg


class TestSmallestEigenvalueEnvelope:
    @pytest.mark.parametrize("m, n", [(2, 2), (3, 8), (7, 7)])
    @pytest.mark.parametrize("field", [REAL, COMPLEX])
    def test_gap(self, m, n, field):
        for x in (0.01, 1.0, 13.0):
            lo, hi = smallest_eigenvalue_density_bounds(MatrixShape(m, n), field, x)
            assert lo <= hi
            assert hi - lo == pytest.approx((m - 1) * x / 2)

    def test_domain(self):
        with pytest.raises(DomainError):
            smallest_eigenvalue_density_bounds(MatrixShape(2, 2), REAL, 0.0)

    @pytest.mark.parametrize("n, field", [(5, REAL), (3, COMPLEX), (5, COMPLEX)])
    def test_strict_bracket_m2(self, n, field):
        shape = MatrixShape(2, n)
        for x in np.linspace(0.2, 20.0, 100):
            lo, hi = smallest_eigenvalue_density_bounds(shape, field, x)
            f = smallest_marginal_m2(n, field, x)
            assert math.exp(lo) < f < math.exp(hi)

    @pytest.mark.parametrize("n, field", [(3, REAL), (2, COMPLEX)])
    def test_lower_is_exact_when_power_is_zero(self, n, field):
        # density exponent 0: the lower envelope is the density itself
        shape = MatrixShape(2, n)
        for x in np.linspace(0.2, 20.0, 25):
            lo, hi = smallest_eigenvalue_density_bounds(shape, field, x)
            f = smallest_marginal_m2(n, field, x)
            assert f == pytest.approx(math.exp(lo), rel=1e-10)
            assert f < math.exp(hi)

    def test_lower_overshoots_real_square(self):
        # exponent -1/2: the lower envelope lies above the density.
        shape = MatrixShape(2, 2)
        for x in np.linspace(0.2, 20.0, 25):
            lo, hi = smallest_eigenvalue_density_bounds(shape, REAL, x)
            f = smallest_marginal_m2(2, REAL, x)
            assert f < math.exp(lo)
            assert f < math.exp(hi)

    def test_bracket_m3_real(self):
        shape = MatrixShape(3, 6)

        def marginal(y):
            inner = lambda s: quad(
                lambda t: math.exp(joint_density(shape, REAL, (y + s + t, y + s, y)).log_density)
                if s > 0 and t > 0 else 0.0, 0, INF, epsabs=1e-11, epsrel=1e-9)
            return quad(inner, 0, INF, epsabs=1e-11, epsrel=1e-9)

        for y in (0.3, 2.0, 8.0):
            lo, hi = smallest_eigenvalue_density_bounds(shape, REAL, y)
            assert math.exp(lo) < marginal(y) < math.exp(hi)
