"""Radial mean bodies R_p E: exact dilate forms, polygon chord profiles,
Monte Carlo cross-checks, and the gauge link to polar projection bodies.

The exact polygon route and the axis-box trapezoid route are algebraically
independent; they are held against each other and against sampling.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracgeo.bodies import Ball, Ellipsoid, Polytope, radial_many
from fracgeo.constants import FracParams, radial_mean_ball_ratio
from fracgeo.errors import ParameterError, UnsupportedError
from fracgeo.quadrature import antipodal_indices, sphere_grid
from fracgeo.radialmean import (
    RadialMeanBody,
    _box_radius,
    _polygon_radius,
    gz_link_check,
    radial_mean_body,
    zhang_ratio,
)

SQUARE = Polytope.box([-0.5, -0.5], [0.5, 0.5])
TRIANGLE = Polytope.from_vertices([[-0.25, -0.25], [0.75, -0.25],
                                   [-0.25, 0.75]])
INTERVAL = Polytope.box([0.0], [1.0])


class TestExactDilateRoute:
    @pytest.mark.parametrize("p", [-0.5, 0.5, 1.0, 3.0])
    def test_ball_radii_constant(self, p):
        q = sphere_grid(2, 64)
        body = radial_mean_body(Ball(1.0, n=2), p, q)
        assert body.method == "exact"
        expected = radial_mean_ball_ratio(2, p) ** 0.5
        assert np.allclose(body.table.radii, expected, rtol=1e-12)

    def test_ball_log_mean_value(self):
        q = sphere_grid(2, 32)
        body = radial_mean_body(Ball(1.0, n=2), 0.0, q)
        # n=2 log-mean constant is exp(-1/2): the ratio 1/e spread over
        # two dimensions.
        assert np.allclose(body.table.radii, math.exp(-0.5), rtol=1e-12)

    @pytest.mark.parametrize("p", [0.5, 2.0])
    def test_ellipsoid_is_dilate(self, p):
        q = sphere_grid(2, 64)
        E = Ellipsoid.from_semi_axes([2.0, 0.5])
        body = radial_mean_body(E, p, q)
        c = radial_mean_ball_ratio(2, p) ** 0.5
        assert np.allclose(body.table.radii,
                           c * radial_many(E, q.nodes), rtol=1e-12)

    @pytest.mark.parametrize("p", [-0.5, 0.5, 1.0, 3.0])
    def test_ball_volume_ratio_is_exact_on_grid(self, p):
        # Constant radii integrate exactly, so the grid ratio equals the
        # closed form to rounding.
        q = sphere_grid(2, 64)
        assert zhang_ratio(Ball(1.0, n=2), p, q) == pytest.approx(
            radial_mean_ball_ratio(2, p), rel=1e-12)

    def test_translation_invariance(self):
        q = sphere_grid(2, 32)
        a = radial_mean_body(Ball(1.0, n=2), 0.5, q)
        b = radial_mean_body(Ball(1.0, n=2, center=[5.0, -3.0]), 0.5, q)
        assert np.array_equal(a.table.radii, b.table.radii)


class TestPolygonChordRoute:
    @given(st.floats(min_value=0.3, max_value=3.0),
           st.floats(min_value=0.3, max_value=3.0),
           st.floats(min_value=0.0, max_value=math.tau),
           st.sampled_from([-0.5, 0.5, 1.3, 3.0]))
    @settings(max_examples=60, deadline=None)
    def test_box_trapezoid_agrees_with_polygon_clipping(self, L1, L2,
                                                        theta, p):
        u = np.array([math.cos(theta), math.sin(theta)])
        box = Polytope.box([-L1 / 2.0, -L2 / 2.0], [L1 / 2.0, L2 / 2.0])
        a = _box_radius(np.array([L1, L2]), u, p)
        b = _polygon_radius(box, u, p)
        assert b == pytest.approx(a, rel=1e-10)

    @given(st.floats(min_value=0.3, max_value=3.0),
           st.floats(min_value=0.3, max_value=3.0),
           st.floats(min_value=0.0, max_value=math.tau))
    @settings(max_examples=30, deadline=None)
    def test_box_log_branch_agrees_with_polygon(self, L1, L2, theta):
        u = np.array([math.cos(theta), math.sin(theta)])
        box = Polytope.box([-L1 / 2.0, -L2 / 2.0], [L1 / 2.0, L2 / 2.0])
        a = _box_radius(np.array([L1, L2]), u, 0.0)
        b = _polygon_radius(box, u, 0.0)
        assert b == pytest.approx(a, rel=1e-10)

    def test_log_branch_is_limit_of_power_branch(self):
        u = np.array([0.6, 0.8])
        at_zero = _polygon_radius(TRIANGLE, u, 0.0)
        for p in (1e-7, -1e-7):
            assert _polygon_radius(TRIANGLE, u, p) == pytest.approx(
                at_zero, rel=1e-5)

    def test_triangle_against_monte_carlo(self):
        q = sphere_grid(2, 16)
        p = 0.7
        exact = radial_mean_body(TRIANGLE, p, q, method="exact")
        mc = radial_mean_body(TRIANGLE, p, q, method="mc", samples=200_000,
                              seed=11)
        assert mc.method == "mc"
        assert mc.std_errors is not None
        gap = np.abs(exact.table.radii - mc.table.radii)
        assert np.all(gap <= 4.0 * mc.std_errors + 1e-9)

    def test_square_p_equals_n_volume_identity(self):
        # |R_n E| = |E| for every body; only grid error remains.
        q = sphere_grid(2, 512)
        assert zhang_ratio(SQUARE, 2.0, q) == pytest.approx(1.0, rel=5e-3)


class TestMonteCarloRoute:
    def test_deterministic_given_seed(self):
        q = sphere_grid(2, 16)
        a = radial_mean_body(TRIANGLE, 0.5, q, method="mc", samples=20_000,
                             seed=7)
        b = radial_mean_body(TRIANGLE, 0.5, q, method="mc", samples=20_000,
                             seed=7)
        c = radial_mean_body(TRIANGLE, 0.5, q, method="mc", samples=20_000,
                             seed=8)
        assert np.array_equal(a.table.radii, b.table.radii)
        assert not np.array_equal(a.table.radii, c.table.radii)

    def test_antipodal_nodes_share_estimates(self):
        q = sphere_grid(2, 16)
        perm = antipodal_indices(q)
        body = radial_mean_body(TRIANGLE, 0.5, q, method="mc",
                                samples=20_000, seed=7)
        assert np.array_equal(body.table.radii, body.table.radii[perm])

    def test_log_branch_mc(self):
        q = sphere_grid(2, 8)
        exact = radial_mean_body(TRIANGLE, 0.0, q, method="exact")
        mc = radial_mean_body(TRIANGLE, 0.0, q, method="mc",
                              samples=100_000, seed=3)
        gap = np.abs(exact.table.radii - mc.table.radii)
        assert np.all(gap <= 4.0 * mc.std_errors + 1e-9)


class TestGaugeLink:
    def test_interval_link_is_tight(self):
        gap, lhs, rhs = gz_link_check(INTERVAL, FracParams(1, 0.5),
                                      sphere_grid(1, 2))
        assert gap <= 1e-6
        # Link scale collapses to the known interval radius.
        assert lhs == pytest.approx(1.0 / 64.0, rel=1e-9)

    def test_square_link(self):
        gap, _, _ = gz_link_check(SQUARE, FracParams(2, 0.5),
                                  sphere_grid(2, 32))
        assert gap <= 1e-5

    def test_disk_link(self):
        gap, _, _ = gz_link_check(Ball(1.0, n=2), FracParams(2, 0.5),
                                  sphere_grid(2, 16))
        assert gap <= 1e-5


class TestValidation:
    def test_p_at_or_below_minus_one(self):
        q = sphere_grid(2, 8)
        for p in (-1.0, -2.0):
            with pytest.raises(ParameterError):
                radial_mean_body(SQUARE, p, q)

    def test_unknown_method(self):
        q = sphere_grid(2, 8)
        with pytest.raises(ParameterError):
            radial_mean_body(SQUARE, 0.5, q, method="fastest")

    def test_exact_method_unavailable_in_3d(self):
        q = sphere_grid(3, 64)
        simplex = Polytope.from_vertices(
            [[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
             [0.0, 0.0, 1.0]])
        with pytest.raises(UnsupportedError):
            radial_mean_body(simplex, 0.5, q, method="exact")

    def test_quadrature_dimension_mismatch(self):
        with pytest.raises(ParameterError):
            radial_mean_body(SQUARE, 0.5, sphere_grid(3, 64))

    def test_volume_uses_table_grid_by_default(self):
        q = sphere_grid(2, 32)
        body = radial_mean_body(Ball(1.0, n=2), 1.0, q)
        assert body.volume() == pytest.approx(body.volume(q), rel=1e-15)
        assert isinstance(body, RadialMeanBody)
