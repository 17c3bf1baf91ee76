"""Sphere grids, the singular integrator, and the seeded RNG streams."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracgeo.errors import DomainError, ParameterError, QuadratureFailure
from fracgeo.quadrature import (
    SingularIntegrandProfile,
    SphereQuadrature,
    antipodal_indices,
    integrate_singular,
    rng_for,
    sphere_grid,
)


class TestSphereGrid:
    @pytest.mark.parametrize("n, resolution", [(1, 2), (2, 16), (2, 64),
                                               (3, 32), (3, 256)])
    def test_weights_sum_to_sphere_measure(self, n, resolution):
        q = sphere_grid(n, resolution)
        # Surface measure of S^{n-1}: 2, 2 pi, 4 pi for n = 1, 2, 3.
        measure = {1: 2.0, 2: 2.0 * math.pi, 3: 4.0 * math.pi}[n]
        assert q.weights.sum() == pytest.approx(measure, rel=1e-12)

    @pytest.mark.parametrize("n, resolution", [(2, 32), (3, 128)])
    def test_nodes_unit_length(self, n, resolution):
        q = sphere_grid(n, resolution)
        assert np.allclose(np.linalg.norm(q.nodes, axis=1), 1.0, atol=1e-12)

    def test_dimension_one_is_two_points(self):
        q = sphere_grid(1, 2)
        assert sorted(q.nodes[:, 0].tolist()) == [-1.0, 1.0]
        assert q.weights.tolist() == [1.0, 1.0]

    def test_circle_grid_integrates_trig_polynomials_exactly(self):
        # The equal-weight circle rule is exact on low trigonometric
        # polynomials; u1^2 integrates to pi over the circle.
        q = sphere_grid(2, 64)
        val = float(q.weights @ (q.nodes[:, 0] ** 2))
        assert val == pytest.approx(math.pi, rel=1e-13)

    def test_fibonacci_grid_second_moment(self):
        q = sphere_grid(3, 512)
        val = float(q.weights @ (q.nodes[:, 0] ** 2))
        assert val == pytest.approx(4.0 * math.pi / 3.0, rel=2e-3)

    def test_monte_carlo_grid_seeded(self):
        a = sphere_grid(2, 128, monte_carlo=True, seed=5)
        b = sphere_grid(2, 128, monte_carlo=True, seed=5)
        c = sphere_grid(2, 128, monte_carlo=True, seed=6)
        assert np.array_equal(a.nodes, b.nodes)
        assert not np.array_equal(a.nodes, c.nodes)
        assert a.kind == "monte_carlo"
        assert a.weights.sum() == pytest.approx(2.0 * math.pi, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ParameterError):
            sphere_grid(2, 1)
        with pytest.raises(ParameterError):
            sphere_grid(0, 8)
        with pytest.raises(ParameterError):
            SphereQuadrature(2, np.ones((3, 2)), np.ones(4))


class TestAntipodalIndices:
    @pytest.mark.parametrize("n, resolution", [(1, 2), (2, 16), (2, 64)])
    def test_pairing_is_exact(self, n, resolution):
        q = sphere_grid(n, resolution)
        perm = antipodal_indices(q)
        assert perm is not None
        # Paired nodes are antipodal to float rounding (the grid stores
        # cos/sin values, so -u is not bit-equal in general).
        assert np.allclose(q.nodes[perm], -q.nodes, atol=1e-12, rtol=0.0)
        # An involution without fixed points.
        assert np.array_equal(perm[perm], np.arange(len(q)))
        assert np.all(perm != np.arange(len(q)))

    def test_fibonacci_grid_has_no_pairing(self):
        assert antipodal_indices(sphere_grid(3, 64)) is None


class TestRngFor:
    def test_streams_are_deterministic(self):
        a = rng_for(7, 3, 11).normal(size=8)
        b = rng_for(7, 3, 11).normal(size=8)
        assert np.array_equal(a, b)

    @pytest.mark.parametrize("other", [(3, 12), (4, 11), (3,)])
    def test_streams_are_distinct(self, other):
        a = rng_for(7, 3, 11).normal(size=8)
        b = rng_for(7, *other).normal(size=8)
        assert not np.array_equal(a, b)


class TestIntegrateSingular:
    @pytest.mark.parametrize("s", [0.25, 0.5, 0.75])
    def test_piecewise_linear_closed_form(self, s):
        # g(t) = min(t, 1):  integral = 1/(1-s) + 1/s.
        profile = SingularIntegrandProfile(upper_knot=1.0,
                                           small_t_slope_bound=1.0)
        val = integrate_singular(lambda t: min(t, 1.0), s, profile,
                                 rel_tol=1e-10)
        assert val == pytest.approx(1.0 / (1.0 - s) + 1.0 / s, rel=1e-8)

    @pytest.mark.parametrize("s", [0.3, 0.6])
    def test_smooth_saturating_integrand(self, s):
        # g(t) = 1 - exp(-t): integral = Gamma(1-s)/s by parts.
        profile = SingularIntegrandProfile(upper_knot=80.0,
                                           small_t_slope_bound=1.0)
        val = integrate_singular(lambda t: -math.expm1(-t), s, profile,
                                 rel_tol=1e-9)
        assert val == pytest.approx(math.gamma(1.0 - s) / s, rel=1e-6)

    @given(st.floats(min_value=0.05, max_value=0.95),
           st.floats(min_value=0.2, max_value=5.0))
    @settings(max_examples=25, deadline=None)
    def test_scaling_property(self, s, a):
        # Substituting t -> a t turns the kernel integral of g(t) = min(t/a, 1)
        # into a^{-s} times the a = 1 case.
        profile = SingularIntegrandProfile(upper_knot=a,
                                           small_t_slope_bound=1.0 / a)
        val = integrate_singular(lambda t: min(t / a, 1.0), s, profile,
                                 rel_tol=1e-9)
        base = 1.0 / (1.0 - s) + 1.0 / s
        assert val == pytest.approx(a ** (-s) * base, rel=1e-7)

    def test_rejects_bad_order(self):
        profile = SingularIntegrandProfile(upper_knot=1.0)
        with pytest.raises(DomainError):
            integrate_singular(lambda t: t, 1.0, profile)

    def test_rejects_negative_integrand(self):
        profile = SingularIntegrandProfile(upper_knot=1.0)
        with pytest.raises(DomainError):
            integrate_singular(lambda t: -1.0, 0.5, profile)

    def test_profile_validation(self):
        with pytest.raises(ParameterError):
            SingularIntegrandProfile(upper_knot=0.0)
        with pytest.raises(ParameterError):
            SingularIntegrandProfile(upper_knot=1.0, small_t_slope_bound=0.0)
