"""Convex bodies: volumes, radial/support functions, projection bodies,
polars.

Polygon areas are cross-checked with an inline shoelace oracle, polygon
brightness with the facet-sum formula written out in the test, and the
projection-body special values against hand closed forms.
"""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.integrate import quad

from fracgeo.bodies import (
    Ball,
    Ellipsoid,
    Polytope,
    RadialTable,
    Zonotope,
    brightness,
    dual_mixed_volume,
    exact_volume,
    gauge,
    linear_image,
    p_convexity_defect,
    polar_of_convex,
    polar_projection_volume_exact,
    polar_volume,
    projection_body_polytope,
    radial,
    radial_many,
    ray_exit,
    support,
    surface_measure,
    translate,
    volume,
)
from fracgeo.errors import (
    DomainError,
    FracGeoError,
    RepresentationError,
)
from fracgeo.quadrature import sphere_grid


def shoelace(vertices) -> float:
    v = np.asarray(vertices, dtype=float)
    x, y = v[:, 0], v[:, 1]
    return 0.5 * abs(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


SQUARE = Polytope.box([-0.5, -0.5], [0.5, 0.5])
TRIANGLE = Polytope.from_vertices([[-0.25, -0.25], [0.75, -0.25],
                                   [-0.25, 0.75]])
ELL = Ellipsoid.from_semi_axes([2.0, 0.5])


class TestExactVolume:
    @pytest.mark.parametrize("body, vol", [
        (Ball(1.0, n=2), math.pi),
        (Ball(2.0, n=3), 32.0 * math.pi / 3.0),
        (Ball(3.0, n=1), 6.0),
        (ELL, math.pi),
        (SQUARE, 1.0),
        (Polytope.box([0.0], [1.0]), 1.0),
        (Polytope.box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]), 1.0),
    ])
    def test_closed_forms(self, body, vol):
        assert exact_volume(body) == pytest.approx(vol, rel=1e-12)

    @pytest.mark.parametrize("verts", [
        [[-0.25, -0.25], [0.75, -0.25], [-0.25, 0.75]],
        [[0.0, -1.0], [2.0, 0.0], [0.0, 1.0], [-1.0, 0.0]],
        [[1.0, 0.1], [-0.3, 1.2], [-1.1, -0.2], [0.2, -0.9], [0.9, -0.5]],
    ])
    def test_polygon_matches_shoelace(self, verts):
        assert exact_volume(Polytope.from_vertices(verts)) == pytest.approx(
            shoelace(verts), rel=1e-12)

    def test_quadrature_volume_agrees(self):
        q = sphere_grid(2, 256)
        assert volume(Ball(1.0, n=2), q) == pytest.approx(math.pi,
                                                          rel=1e-12)
        assert volume(SQUARE, q) == pytest.approx(1.0, rel=1e-3)
        assert volume(TRIANGLE, q) == pytest.approx(shoelace(
            TRIANGLE.vertices), rel=1e-3)


class TestRadialSupportGauge:
    @pytest.mark.parametrize("body", [Ball(1.5, n=2), ELL, SQUARE, TRIANGLE])
    def test_gauge_is_reciprocal_radial(self, body):
        rng = np.random.default_rng(3)
        for _ in range(20):
            u = rng.normal(size=2)
            u /= np.linalg.norm(u)
            rho = radial(body, u)
            assert gauge(body, u) == pytest.approx(1.0 / rho, rel=1e-10)
            # Scaling: the gauge is positively homogeneous.
            assert gauge(body, 3.0 * u) == pytest.approx(3.0 / rho,
                                                         rel=1e-10)

    @pytest.mark.parametrize("body", [Ball(1.5, n=2), ELL, SQUARE, TRIANGLE])
    def test_boundary_point_is_in_body_frontier(self, body):
        q = sphere_grid(2, 32)
        rho = radial_many(body, q.nodes)
        pts = q.nodes * rho[:, None]
        # Just inside lies inside, just outside lies outside: the support
        # inequality h(u) >= <x, u> separates.
        for x in pts:
            assert gauge(body, x) == pytest.approx(1.0, rel=1e-9)

    def test_square_radial_closed_form(self):
        # rho(u) = 1 / (2 max(|u1|, |u2|)) for the unit square.
        q = sphere_grid(2, 64)
        rho = radial_many(SQUARE, q.nodes)
        expected = 0.5 / np.max(np.abs(q.nodes), axis=1)
        assert np.allclose(rho, expected, rtol=1e-10)

    def test_support_of_polytope_is_vertex_max(self):
        q = sphere_grid(2, 64)
        h = support(TRIANGLE, q.nodes)
        expected = (q.nodes @ TRIANGLE.vertices.T).max(axis=1)
        assert np.allclose(h, expected, rtol=1e-12)


class TestBrightness:
    def test_disk_is_constant_two(self):
        q = sphere_grid(2, 32)
        assert np.allclose(brightness(Ball(1.0, n=2), q.nodes), 2.0,
                           rtol=1e-12)

    @pytest.mark.parametrize("poly", [SQUARE, TRIANGLE])
    def test_polygon_matches_facet_sum(self, poly):
        q = sphere_grid(2, 48)
        got = brightness(poly, q.nodes)
        # Shadow length of a polygon: half the total facet length weighted
        # by |cos| against the direction.
        expected = 0.5 * np.abs(q.nodes @ poly.facet_normals.T) \
            @ poly.facet_measures
        assert np.allclose(got, expected, rtol=1e-10)

    def test_cube_brightness(self):
        cube = Polytope.box([-0.5] * 3, [0.5] * 3)
        u = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0],
                      [1.0, 1.0, 1.0] / np.sqrt(3.0)])
        got = brightness(cube, u)
        expected = np.abs(u).sum(axis=1)
        assert np.allclose(got, expected, rtol=1e-12)


class TestProjectionBody:
    def test_square_support_is_l1_norm(self):
        z = projection_body_polytope(SQUARE)
        q = sphere_grid(2, 64)
        assert np.allclose(z.support(q.nodes),
                           np.abs(q.nodes).sum(axis=1), rtol=1e-12)

    def test_square_polar_volume_is_two(self):
        z = projection_body_polytope(SQUARE)
        P = polar_of_convex(z.to_polytope())
        assert exact_volume(P) == pytest.approx(2.0, rel=1e-10)

    def test_cube_polar_volume_is_cross_polytope(self):
        cube = Polytope.box([-0.5] * 3, [0.5] * 3)
        z = projection_body_polytope(cube)
        P = polar_of_convex(z.to_polytope())
        # Polar of the support sum |x1|+|x2|+|x3| is the cross-polytope,
        # volume 2^3/3!.
        assert exact_volume(P) == pytest.approx(8.0 / 6.0, rel=1e-9)

    def test_ball_closed_form(self):
        # The shadow of the unit disk has length 2 in every direction, so
        # the polar projection body is the disk of radius 1/2.
        assert polar_projection_volume_exact(Ball(1.0, n=2)) == \
            pytest.approx(math.pi / 4.0, rel=1e-12)

    def test_volume_preserving_image_keeps_polar_volume(self):
        # det = 1 linear images leave the polar projection volume alone.
        assert polar_projection_volume_exact(ELL) == pytest.approx(
            polar_projection_volume_exact(Ball(1.0, n=2)), rel=1e-12)

    def test_grid_polar_volume_converges_to_exact(self):
        # Same quantity two ways: vertex-exact polar volume vs the radial
        # quadrature of the polar body on a fine grid.
        z = projection_body_polytope(SQUARE)
        q = sphere_grid(2, 1024)
        assert polar_volume(z.to_polytope(), q) == pytest.approx(
            2.0, rel=1e-4)


class TestDualMixedVolume:
    q = sphere_grid(2, 128)

    @pytest.mark.parametrize("p", [-0.5, 0.5, 2.0])
    @pytest.mark.parametrize("K", [Ball(1.3, n=2), SQUARE])
    def test_self_is_volume(self, K, p):
        assert dual_mixed_volume(K, K, p, self.q) == pytest.approx(
            volume(K, self.q), rel=1e-12)

    def test_ball_pair_closed_form(self):
        # For balls rB and RB: (1/n) 2 pi r^{n-p} R^p in the plane.
        got = dual_mixed_volume(Ball(1.5, n=2), Ball(0.5, n=2), -0.5,
                                self.q)
        expected = 0.5 * 2.0 * math.pi * 1.5 ** 2.5 * 0.5 ** -0.5
        assert got == pytest.approx(expected, rel=1e-12)


class TestTransforms:
    @pytest.mark.parametrize("body", [Ball(1.0, n=2), ELL, SQUARE, TRIANGLE])
    def test_linear_image_scales_volume(self, body):
        phi = np.array([[1.2, 0.3], [-0.1, 0.8]])
        img = linear_image(body, phi)
        assert exact_volume(img) == pytest.approx(
            abs(np.linalg.det(phi)) * exact_volume(body), rel=1e-10)

    @pytest.mark.parametrize("body", [Ball(1.0, n=2), SQUARE])
    def test_translate_keeps_volume(self, body):
        moved = translate(body, [0.1, -0.2])
        assert exact_volume(moved) == pytest.approx(exact_volume(body),
                                                    rel=1e-12)

    def test_rotation_preserves_brightness_distribution(self):
        theta = 0.35
        R = np.array([[math.cos(theta), -math.sin(theta)],
                      [math.sin(theta), math.cos(theta)]])
        sq = linear_image(SQUARE, R)
        u = np.array([1.0, 0.0])
        assert brightness(sq, (R @ u)[None, :])[0] == pytest.approx(
            brightness(SQUARE, u[None, :])[0], rel=1e-10)


class TestSurfaceMeasure:
    def test_polygon_perimeter(self):
        assert surface_measure(SQUARE) == pytest.approx(4.0, rel=1e-12)

    def test_ball(self):
        assert surface_measure(Ball(2.0, n=2)) == pytest.approx(
            4.0 * math.pi, rel=1e-12)
        assert surface_measure(Ball(1.0, n=3)) == pytest.approx(
            4.0 * math.pi, rel=1e-12)

    def test_ellipse_against_arc_integral(self):
        a, b = 2.0, 0.5
        arc, _ = quad(lambda t: math.hypot(a * math.sin(t),
                                           b * math.cos(t)), 0.0,
                      2.0 * math.pi, limit=200)
        assert surface_measure(ELL) == pytest.approx(arc, rel=1e-9)


class TestRayExit:
    @given(st.floats(min_value=-0.6, max_value=0.6),
           st.floats(min_value=-0.6, max_value=0.6),
           st.floats(min_value=0.0, max_value=2.0 * math.pi))
    @settings(max_examples=60, deadline=None)
    def test_ball_closed_form(self, x0, x1, theta):
        r = 1.0
        x = np.array([[x0, x1]])
        u = np.array([math.cos(theta), math.sin(theta)])
        t = ray_exit(Ball(r, n=2), x, u)[0]
        xu = x[0] @ u
        expected = -xu + math.sqrt(xu * xu + r * r - x[0] @ x[0])
        assert t == pytest.approx(expected, rel=1e-10, abs=1e-12)

    @pytest.mark.parametrize("body", [SQUARE, TRIANGLE, ELL])
    def test_exit_point_sits_on_boundary(self, body):
        rng = np.random.default_rng(11)
        # Interior sample points: shrink the body's own boundary samples.
        q = sphere_grid(2, 16)
        pts = 0.4 * q.nodes * radial_many(body, q.nodes)[:, None]
        u = np.array([0.6, 0.8])
        t = ray_exit(body, pts, u)
        for x, ti in zip(pts, t):
            assert gauge(body, x + ti * u) == pytest.approx(1.0, rel=1e-8)


class TestRadialTable:
    def test_symmetry_validation(self):
        q = sphere_grid(2, 16)
        with pytest.raises(RepresentationError):
            RadialTable(q, np.linspace(1.0, 2.0, 16), origin_symmetric=True)

    def test_rejects_nonpositive_radii(self):
        q = sphere_grid(2, 16)
        radii = np.ones(16)
        radii[3] = 0.0
        with pytest.raises(DomainError):
            RadialTable(q, radii)

    def test_ball_table_has_zero_convexity_defect(self):
        q = sphere_grid(2, 64)
        table = RadialTable(q, np.full(64, 1.7), origin_symmetric=True)
        assert p_convexity_defect(table, 0.5) == pytest.approx(0.0,
                                                               abs=1e-12)


class TestZonotope:
    @given(st.integers(min_value=1, max_value=5),
           st.integers(min_value=0, max_value=10_000))
    @settings(max_examples=30, deadline=None)
    def test_support_is_generator_sum(self, m, seed):
        rng = np.random.default_rng(seed)
        G = rng.normal(size=(m, 2))
        z = Zonotope(G)
        u = rng.normal(size=(4, 2))
        assert np.allclose(z.support(u), np.abs(u @ G.T).sum(axis=1),
                           rtol=1e-12)

    def test_to_polytope_volume_formula(self):
        # |Z| = 2^n sum over generator pairs of |det|.
        rng = np.random.default_rng(2)
        G = rng.normal(size=(4, 2))
        z = Zonotope(G)
        expected = 4.0 * sum(
            abs(np.linalg.det(G[[i, j]]))
            for i in range(4) for j in range(i + 1, 4))
        assert exact_volume(z.to_polytope()) == pytest.approx(expected,
                                                              rel=1e-9)


class TestPolytopeRepresentation:
    def test_box_round_trip(self):
        assert np.allclose(sorted(map(tuple, SQUARE.vertices)),
                           [(-0.5, -0.5), (-0.5, 0.5), (0.5, -0.5),
                            (0.5, 0.5)])
        # H-rep consistency: every vertex saturates n constraints and
        # violates none.
        slack = SQUARE.offsets[None, :] - SQUARE.vertices @ SQUARE.normals.T
        assert slack.min() > -1e-12

    def test_degenerate_vertices_rejected(self):
        with pytest.raises(FracGeoError):
            Polytope.from_vertices([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0]])

    def test_origin_must_be_interior_for_radial(self):
        shifted = Polytope.box([1.0, 1.0], [2.0, 2.0])
        with pytest.raises(RepresentationError):
            radial(shifted, np.array([1.0, 0.0]))
