"""Closed-form constants against independent oracles.

The gamma-based values are checked against a self-contained Lanczos
implementation and against mpmath at 50 digits; the ball volume-ratio
constants are checked against a chord-decomposition integral that shares
no code (and no derivation) with the package formula.
"""

import math

import mpmath
import numpy as np
import pytest
from scipy.integrate import quad

from fracgeo.constants import (
    FracParams,
    SpecialValue,
    closed_form_table,
    digamma,
    omega,
    ps_ball,
    radial_mean_ball_ratio,
    sharp_constant,
)
from fracgeo.errors import DomainError, ParameterError

# Lanczos approximation (g = 7, 9 coefficients), an implementation of the
# gamma function independent of math.gamma.
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def lanczos_gamma(z: float) -> float:
    if z < 0.5:
        return math.pi / (math.sin(math.pi * z) * lanczos_gamma(1.0 - z))
    z -= 1.0
    x = _LANCZOS[0]
    for i, c in enumerate(_LANCZOS[1:], start=1):
        x += c / (z + i)
    t = z + 7.5
    return math.sqrt(2.0 * math.pi) * t ** (z + 0.5) * math.exp(-t) * x


# Euler-Mascheroni constant, for the digamma special points.
EULER_GAMMA = 0.5772156649015329


class TestOmega:
    @pytest.mark.parametrize("n, closed", [
        (1, 2.0),
        (2, math.pi),
        (3, 4.0 * math.pi / 3.0),
        (4, math.pi ** 2 / 2.0),
    ])
    def test_integer_dimensions(self, n, closed):
        assert omega(n) == pytest.approx(closed, rel=1e-14)

    @pytest.mark.parametrize("q", [0.3, 0.5, 1.0, 1.7, 2.5, 3.9, 6.0])
    def test_against_lanczos(self, q):
        expected = math.pi ** (q / 2.0) / lanczos_gamma(q / 2.0 + 1.0)
        assert omega(q) == pytest.approx(expected, rel=1e-12)

    @pytest.mark.parametrize("q", [1.0, 2.0, 2.7, 5.0])
    def test_dimension_recursion(self, q):
        # omega_q = omega_{q-2} * 2 pi / q, from the Gamma recurrence.
        assert omega(q + 2.0) == pytest.approx(
            omega(q) * 2.0 * math.pi / (q + 2.0), rel=1e-13)

    @pytest.mark.parametrize("q", [0.0, -1.0, math.inf, math.nan])
    def test_domain(self, q):
        with pytest.raises(DomainError):
            omega(q)


class TestDigamma:
    def test_special_points(self):
        assert digamma(1.0) == pytest.approx(-EULER_GAMMA, abs=1e-14)
        assert digamma(0.5) == pytest.approx(
            -EULER_GAMMA - 2.0 * math.log(2.0), abs=1e-13)

    @pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 2.3, 7.7, 15.0, 120.0])
    def test_against_mpmath(self, x):
        expected = float(mpmath.digamma(mpmath.mpf(x)))
        assert digamma(x) == pytest.approx(expected, rel=1e-13, abs=1e-13)

    @pytest.mark.parametrize("x", [0.25, 1.5, 3.0, 9.0])
    def test_recurrence(self, x):
        assert digamma(x + 1.0) == pytest.approx(
            digamma(x) + 1.0 / x, rel=1e-12)

    def test_domain(self):
        with pytest.raises(DomainError):
            digamma(0.0)
        with pytest.raises(DomainError):
            digamma(-2.0)


class TestFracParams:
    @pytest.mark.parametrize("s", [0.0, 1.0, -0.3, 1.5])
    def test_order_range(self, s):
        with pytest.raises(DomainError):
            FracParams(2, s)

    @pytest.mark.parametrize("n", [0, -1, 1.5])
    def test_dimension(self, n):
        with pytest.raises(ParameterError):
            FracParams(n, 0.5)


class TestPsBall:
    @pytest.mark.parametrize("s", [0.25, 0.3, 0.5, 0.7, 0.9])
    def test_interval_closed_form(self, s):
        # For the segment [-1, 1], the double integral over E x E^c of
        # |x - y|^{-1-s} reduces to 2^{2-s} / (s (1-s)) by hand.
        assert ps_ball(FracParams(1, s)) == pytest.approx(
            2.0 ** (2.0 - s) / (s * (1.0 - s)), rel=1e-13)

    @pytest.mark.parametrize("n, s", [(1, 0.5), (2, 0.3), (2, 0.5),
                                      (2, 0.7), (3, 0.5)])
    def test_against_mpmath(self, n, s):
        with mpmath.workdps(50):
            def vol(q):
                return mpmath.pi ** (q / 2) / mpmath.gamma(q / 2 + 1)
            sm = mpmath.mpf(s)
            expected = float(2 ** (1 - sm) * n * vol(mpmath.mpf(n))
                             * vol(n - sm) / (sm * (1 - sm) * vol(1 - sm)))
        assert ps_ball(FracParams(n, s)) == pytest.approx(expected,
                                                          rel=1e-13)

    def test_frozen_value(self):
        assert ps_ball(FracParams(2, 0.5)) == pytest.approx(
            62.1306387777798, rel=1e-12)


class TestSharpConstant:
    def test_one_dimensional_half(self):
        assert sharp_constant(FracParams(1, 0.5)) == pytest.approx(
            0.0625, rel=1e-13)

    @pytest.mark.parametrize("n, s", [(1, 0.3), (2, 0.5), (2, 0.7), (3, 0.4)])
    def test_normalization(self, n, s):
        # alpha is exactly the ratio making 2 alpha P_s(B^n) equal to
        # omega_n^{(n-s)/n}; both factors have their own tests.
        params = FracParams(n, s)
        assert 2.0 * sharp_constant(params) * ps_ball(params) == \
            pytest.approx(omega(n) ** ((n - s) / n), rel=1e-13)

    def test_frozen_value(self):
        assert sharp_constant(FracParams(2, 0.5)) == pytest.approx(
            0.018990071073103333, rel=1e-12)


def _disk_ratio_oracle(p: float) -> float:
    """|R_p B^2| / |B^2| by chord decomposition, independent of gamma.

    Every chord of the unit disk at offset d has length L = 2 sqrt(1-d^2),
    and along a chord the exit distance runs linearly 0..L, so the mean of
    rho^p over the disk is integral L^{p+1}/(p+1) dd / pi.
    """
    val, _ = quad(lambda d: (2.0 * math.sqrt(max(1.0 - d * d, 0.0)))
                  ** (p + 1.0), -1.0, 1.0)
    mean = val / ((p + 1.0) * math.pi)
    return mean ** (2.0 / p)


def _ball3_ratio_oracle(p: float) -> float:
    """Same chord decomposition in dimension three (offsets fill a disk)."""
    val, _ = quad(lambda r: 2.0 * math.pi * r *
                  (2.0 * math.sqrt(max(1.0 - r * r, 0.0))) ** (p + 1.0),
                  0.0, 1.0)
    mean = val / ((p + 1.0) * (4.0 * math.pi / 3.0))
    return mean ** (3.0 / p)


class TestRadialMeanBallRatio:
    @pytest.mark.parametrize("p", [-0.5, -0.2, 0.5, 1.0, 3.0, 7.0])
    def test_disk_against_chord_integral(self, p):
        assert radial_mean_ball_ratio(2, p) == pytest.approx(
            _disk_ratio_oracle(p), rel=1e-9)

    @pytest.mark.parametrize("p", [-0.5, 1.0, 2.0, 5.0])
    def test_ball3_against_chord_integral(self, p):
        assert radial_mean_ball_ratio(3, p) == pytest.approx(
            _ball3_ratio_oracle(p), rel=1e-9)

    @pytest.mark.parametrize("n", [1, 2, 3, 4])
    def test_p_equals_n_is_one(self, n):
        assert radial_mean_ball_ratio(n, float(n)) == 1.0

    def test_zero_exponent_digamma_branch(self):
        # In the plane the geometric-mean value collapses to 1/e.
        assert radial_mean_ball_ratio(2, 0.0) == pytest.approx(
            math.exp(-1.0), rel=1e-12)

    def test_zero_exponent_branch_continuity(self):
        left = radial_mean_ball_ratio(2, -1e-7)
        mid = radial_mean_ball_ratio(2, 0.0)
        right = radial_mean_ball_ratio(2, 1e-7)
        assert left == pytest.approx(mid, rel=1e-6)
        assert right == pytest.approx(mid, rel=1e-6)

    def test_frozen_disk_values(self):
        # Frozen from the chord-integral oracle above.
        assert radial_mean_ball_ratio(2, -0.5) == pytest.approx(
            0.1630105347239442, rel=1e-8)
        assert radial_mean_ball_ratio(2, 1.0) == pytest.approx(
            0.7205061947899578, rel=1e-10)

    def test_domain(self):
        with pytest.raises(DomainError):
            radial_mean_ball_ratio(2, -1.0)
        with pytest.raises(ParameterError):
            radial_mean_ball_ratio(2.0, 1.0)


class TestClosedFormTable:
    def test_names_and_bounds(self):
        table = closed_form_table(FracParams(2, 0.5), p=2.0)
        names = [sv.name for sv in table]
        assert names == ["omega", "omega_n_minus_s", "ps_ball",
                         "sharp_constant", "radial_mean_ball_ratio"]
        for sv in table:
            assert sv.abs_error_bound >= 0.0
            assert math.isfinite(sv.value)

    def test_special_value_validation(self):
        with pytest.raises(DomainError):
            SpecialValue("bad", math.inf, 0.0)
        with pytest.raises(ParameterError):
            SpecialValue("bad", 1.0, -1.0)
