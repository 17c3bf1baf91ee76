"""Convex and star bodies: balls, ellipsoids, polytopes (dual H/V
representation), sampled radial tables, and the operations the rest of the
package leans on — radial/gauge/support evaluation, volumes, dual mixed
volumes, polars, linear images, projection bodies of polytopes.

Conventions: bodies live in R^n with n in {1, 2, 3} for exact paths.
Star-body roles (radial functions, gauges) require the origin strictly
inside. H-rep is {x : <eta_i, x> <= h_i} with unit outward normals.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog
from scipy.spatial import ConvexHull, QhullError, cKDTree

from .constants import omega
from .errors import (
    DegenerateInputError,
    DomainError,
    ParameterError,
    RepresentationError,
    UnsupportedError,
)
from .quadrature import OP_CONVEXITY_PROBE, SphereQuadrature, rng_for

__all__ = [
    "Ball",
    "Ellipsoid",
    "Polytope",
    "RadialTable",
    "Zonotope",
    "dim",
    "radial",
    "radial_many",
    "gauge",
    "support",
    "brightness",
    "exact_volume",
    "volume",
    "dual_mixed_volume",
    "polar_of_convex",
    "polar_volume",
    "linear_image",
    "translate",
    "projection_body_polytope",
    "polar_projection_volume_exact",
    "surface_measure",
    "ray_exit",
    "p_convexity_defect",
]

_VERTEX_TOL = 1e-9


def _as_point(x, n):
    v = np.asarray(x, dtype=float).reshape(-1)
    if v.shape != (n,):
        raise ParameterError(f"expected a point in R^{n}, got shape {v.shape}")
    return v


@dataclass(frozen=True)
class Ball:
    r: float
    n: int = 2
    center: tuple = None

    def __post_init__(self):
        if not (self.r > 0.0 and math.isfinite(self.r)):
            raise DomainError(f"ball radius must be positive, got {self.r!r}")
        if not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"bad dimension {self.n!r}")
        c = np.zeros(self.n) if self.center is None else _as_point(self.center, self.n)
        object.__setattr__(self, "center", tuple(c))

    @property
    def center_array(self):
        return np.asarray(self.center, dtype=float)


class Ellipsoid:
    """{x : (x-c) . A (x-c) <= 1} with A symmetric positive definite."""

    def __init__(self, A, center=None):
        A = np.asarray(A, dtype=float)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ParameterError("ellipsoid matrix must be square")
        if not np.allclose(A, A.T, rtol=0.0, atol=1e-10):
            raise ParameterError("ellipsoid matrix must be symmetric")
        w, V = np.linalg.eigh(0.5 * (A + A.T))
        if np.any(w <= 0.0):
            raise DomainError("ellipsoid matrix must be positive definite")
        self.A = 0.5 * (A + A.T)
        self.n = A.shape[0]
        self.center = np.zeros(self.n) if center is None else _as_point(center, self.n)
        self._eigvals = w
        self._eigvecs = V

    @classmethod
    def from_semi_axes(cls, semi_axes, center=None):
        a = np.asarray(semi_axes, dtype=float)
        if np.any(a <= 0.0):
            raise DomainError("semi-axes must be positive")
        return cls(np.diag(1.0 / a**2), center=center)

    @property
    def A_inv(self):
        return (self._eigvecs / self._eigvals) @ self._eigvecs.T

    @property
    def sqrt_A(self):
        return (self._eigvecs * np.sqrt(self._eigvals)) @ self._eigvecs.T

    @property
    def inv_sqrt_A(self):
        """phi with E = phi B^n (centered)."""
        return (self._eigvecs / np.sqrt(self._eigvals)) @ self._eigvecs.T

    def __repr__(self):
        return f"Ellipsoid(A={self.A.tolist()}, center={self.center.tolist()})"


class Polytope:
    """Bounded convex polytope carrying both representations.

    ``normals``/``offsets`` give the irredundant H-rep, ``vertices`` the
    V-rep, ``facet_normals``/``facet_measures`` the (possibly triangulated)
    facet decomposition used for surface-measure sums. The two reps are
    validated against each other at construction.
    """

    def __init__(self, vertices, normals, offsets, facet_normals, facet_measures):
        self.vertices = np.asarray(vertices, dtype=float)
        self.normals = np.asarray(normals, dtype=float)
        self.offsets = np.asarray(offsets, dtype=float)
        self.facet_normals = np.asarray(facet_normals, dtype=float)
        self.facet_measures = np.asarray(facet_measures, dtype=float)
        self.n = self.vertices.shape[1]
        scale = max(1.0, float(np.abs(self.vertices).max()))
        worst = (self.vertices @ self.normals.T - self.offsets).max()
        if worst > 1e-7 * scale:
            raise RepresentationError(f"vertex violates a half-space by {worst:g}")
        if np.any(self.facet_measures <= 0.0):
            raise RepresentationError("facet measures must be positive")

    # -- constructors ---------------------------------------------------

    @classmethod
    def from_vertices(cls, vertices) -> "Polytope":
        V = np.atleast_2d(np.asarray(vertices, dtype=float))
        n = V.shape[1]
        if n == 1:
            lo, hi = float(V.min()), float(V.max())
            if hi - lo <= 0.0:
                raise DegenerateInputError("interval has no length")
            return cls(
                vertices=[[lo], [hi]],
                normals=[[1.0], [-1.0]],
                offsets=[hi, -lo],
                facet_normals=[[1.0], [-1.0]],
                facet_measures=[1.0, 1.0],
            )
        if n not in (2, 3):
            raise UnsupportedError(f"polytopes implemented for n <= 3, got n = {n}")
        try:
            hull = ConvexHull(V)
        except QhullError as exc:
            raise DegenerateInputError(f"degenerate vertex set: {exc}") from None
        eqs = hull.equations  # rows [eta, -h] with <eta, x> <= h
        normals, offsets = _dedupe_halfspaces(eqs[:, :-1], -eqs[:, -1])
        fn, fm = _facet_data(hull, n)
        return cls(V[hull.vertices], normals, offsets, fn, fm)

    @classmethod
    def from_halfspaces(cls, normals, offsets) -> "Polytope":
        N = np.atleast_2d(np.asarray(normals, dtype=float))
        h = np.asarray(offsets, dtype=float).reshape(-1)
        if N.shape[0] != h.shape[0]:
            raise ParameterError("normals/offsets length mismatch")
        n = N.shape[1]
        norms = np.linalg.norm(N, axis=1)
        if np.any(norms <= 0.0):
            raise ParameterError("zero normal vector")
        N = N / norms[:, None]
        h = h / norms
        if n == 1:
            hi = h[N[:, 0] > 0].min() if np.any(N[:, 0] > 0) else math.inf
            lo = -h[N[:, 0] < 0].min() if np.any(N[:, 0] < 0) else -math.inf
            if not (math.isfinite(lo) and math.isfinite(hi)):
                raise RepresentationError("interval is unbounded")
            if hi - lo <= 0.0:
                raise DegenerateInputError("interval has no length")
            return cls.from_vertices([[lo], [hi]])
        # Chebyshev center as a strictly interior point.
        res = linprog(
            c=np.r_[np.zeros(n), -1.0],
            A_ub=np.c_[N, np.ones(len(h))],
            b_ub=h,
            bounds=[(None, None)] * n + [(0.0, None)],
            method="highs",
        )
        if not res.success or res.x[-1] <= 1e-12:
            raise RepresentationError("half-spaces bound no full-dimensional region")
        from scipy.spatial import HalfspaceIntersection

        hs = HalfspaceIntersection(np.c_[N, -h], res.x[:n])
        poly = cls.from_vertices(hs.intersections)
        worst = (poly.vertices @ N.T - h).max()
        if worst > 1e-7 * max(1.0, float(np.abs(poly.vertices).max())):
            raise RepresentationError("H-rep and recovered V-rep disagree")
        return poly

    @classmethod
    def box(cls, lo, hi) -> "Polytope":
        lo = np.asarray(lo, dtype=float).reshape(-1)
        hi = np.asarray(hi, dtype=float).reshape(-1)
        if lo.shape != hi.shape or np.any(hi <= lo):
            raise ParameterError("box needs lo < hi componentwise")
        n = lo.size
        corners = np.array(np.meshgrid(*[(l, u) for l, u in zip(lo, hi)], indexing="ij"))
        V = corners.reshape(n, -1).T
        return cls.from_vertices(V)

    # -- queries --------------------------------------------------------

    def axis_box(self):
        """(lo, hi) if this polytope is an axis-aligned box, else None."""
        if len(self.offsets) != 2 * self.n:
            return None
        lo = np.full(self.n, np.nan)
        hi = np.full(self.n, np.nan)
        for eta, h in zip(self.normals, self.offsets):
            k = int(np.argmax(np.abs(eta)))
            rest = np.delete(eta, k)
            if np.any(np.abs(rest) > 1e-12) or abs(abs(eta[k]) - 1.0) > 1e-12:
                return None
            if eta[k] > 0:
                hi[k] = h
            else:
                lo[k] = -h
        if np.any(np.isnan(lo)) or np.any(np.isnan(hi)):
            return None
        return lo, hi

    def __repr__(self):
        return f"Polytope(n={self.n}, vertices={len(self.vertices)}, facets={len(self.offsets)})"


def _dedupe_halfspaces(normals, offsets):
    seen = {}
    for eta, h in zip(normals, offsets):
        key = tuple(np.round(np.r_[eta, h], 9))
        if key not in seen:
            seen[key] = (eta, h)
    etas = np.array([v[0] for v in seen.values()])
    hs = np.array([v[1] for v in seen.values()])
    return etas, hs


def _facet_data(hull, n):
    pts = hull.points
    normals = hull.equations[:, :-1]
    measures = np.empty(len(hull.simplices))
    for i, simplex in enumerate(hull.simplices):
        verts = pts[simplex]
        if n == 2:
            measures[i] = np.linalg.norm(verts[1] - verts[0])
        else:
            measures[i] = 0.5 * np.linalg.norm(
                np.cross(verts[1] - verts[0], verts[2] - verts[0])
            )
    keep = measures > 0.0
    return normals[keep], measures[keep]


class RadialTable:
    """A star body sampled as radii over a sphere quadrature grid.

    Interpolation: exact sign lookup in n=1, periodic linear-in-angle in
    n=2, nearest grid node in n=3 (documented fallback; exact at nodes,
    relative error O(grid spacing) off-node).
    """

    def __init__(self, quadrature: SphereQuadrature, radii, origin_symmetric=False):
        radii = np.asarray(radii, dtype=float)
        if radii.shape != (len(quadrature),):
            raise ParameterError("radii must align with quadrature nodes")
        if np.any(~np.isfinite(radii)) or np.any(radii <= 0.0):
            raise DomainError("radial table requires positive finite radii")
        ratio = radii.max() / radii.min()
        if self._adjacent_ratio(quadrature, radii) > 10.0:
            raise RepresentationError(
                f"adjacent-node radial ratio too large (global spread {ratio:g})"
            )
        self.quadrature = quadrature
        self.radii = radii
        self.origin_symmetric = bool(origin_symmetric)
        self.n = quadrature.n
        if self.origin_symmetric:
            from .quadrature import antipodal_indices

            perm = antipodal_indices(quadrature)
            if perm is not None:
                pair_gap = np.abs(radii - radii[perm]) / radii
                if pair_gap.max() > 1e-9:
                    raise RepresentationError(
                        f"symmetric table has asymmetric radii (gap {pair_gap.max():g})"
                    )
        self._angle_order = None
        self._tree = None
        if self.n == 2:
            ang = np.arctan2(quadrature.nodes[:, 1], quadrature.nodes[:, 0])
            order = np.argsort(ang)
            self._angle_order = (ang[order], order)
        elif self.n == 3:
            self._tree = cKDTree(quadrature.nodes)

    @staticmethod
    def _adjacent_ratio(quadrature, radii):
        nodes = quadrature.nodes
        if quadrature.n == 1 or len(radii) < 2:
            return float(radii.max() / radii.min())
        if quadrature.n == 2:
            ang = np.arctan2(nodes[:, 1], nodes[:, 0])
            order = np.argsort(ang)
            r = radii[order]
            neighbor = np.roll(r, -1)
            return float(np.max(np.maximum(r / neighbor, neighbor / r)))
        tree = cKDTree(nodes)
        _, idx = tree.query(nodes, k=2)
        neighbor = radii[idx[:, 1]]
        return float(np.max(np.maximum(radii / neighbor, neighbor / radii)))

    def interpolate(self, directions) -> np.ndarray:
        U = np.atleast_2d(np.asarray(directions, dtype=float))
        if U.shape[1] != self.n:
            raise ParameterError("direction dimension mismatch")
        norms = np.linalg.norm(U, axis=1)
        if np.any(norms <= 0.0):
            raise ParameterError("zero direction")
        U = U / norms[:, None]
        if self.n == 1:
            plus = self.quadrature.nodes[:, 0] > 0
            r_plus = self.radii[plus][0]
            r_minus = self.radii[~plus][0]
            return np.where(U[:, 0] > 0, r_plus, r_minus)
        if self.n == 2:
            ang_nodes, order = self._angle_order
            r = self.radii[order]
            theta = np.arctan2(U[:, 1], U[:, 0])
            idx = np.searchsorted(ang_nodes, theta)
            lo = (idx - 1) % len(r)
            hi = idx % len(r)
            a_lo = ang_nodes[lo]
            a_hi = ang_nodes[hi]
            span = (a_hi - a_lo) % (2.0 * math.pi)
            span = np.where(span == 0.0, 1.0, span)
            frac = ((theta - a_lo) % (2.0 * math.pi)) / span
            return r[lo] + (r[hi] - r[lo]) * frac
        _, idx = self._tree.query(U, k=1)
        return self.radii[idx]


@dataclass(frozen=True)
class Zonotope:
    """Minkowski sum of centered segments [-g_i, g_i]; support function
    h(xi) = sum |<g_i, xi>|. V-rep available through :meth:`to_polytope`."""

    generators: np.ndarray

    def __post_init__(self):
        G = np.atleast_2d(np.asarray(self.generators, dtype=float))
        if np.any(~np.isfinite(G)):
            raise ParameterError("non-finite generator")
        object.__setattr__(self, "generators", G)

    @property
    def n(self):
        return self.generators.shape[1]

    def support(self, directions) -> np.ndarray:
        U = np.atleast_2d(np.asarray(directions, dtype=float))
        return np.abs(U @ self.generators.T).sum(axis=1)

    def to_polytope(self) -> Polytope:
        G = self.generators
        n = self.n
        if n == 1:
            h = float(np.abs(G).sum())
            return Polytope.from_vertices([[-h], [h]])
        if n == 2:
            vs = []
            vecs = []
            for g in G:
                v = 2.0 * g
                if v[1] < 0 or (v[1] == 0 and v[0] < 0):
                    v = -v
                if np.linalg.norm(v) > 0:
                    vecs.append(v)
            vecs.sort(key=lambda v: math.atan2(v[1], v[0]))
            start = -0.5 * np.sum(vecs, axis=0)
            pt = start.copy()
            vs.append(pt.copy())
            for v in vecs:
                pt = pt + v
                vs.append(pt.copy())
            for v in vecs:
                pt = pt - v
                vs.append(pt.copy())
            return Polytope.from_vertices(np.array(vs))
        m = len(G)
        if m > 16:
            raise UnsupportedError(f"zonotope V-rep with {m} generators exceeds desk scale")
        signs = np.array(np.meshgrid(*([[-1.0, 1.0]] * m), indexing="ij")).reshape(m, -1).T
        return Polytope.from_vertices(signs @ G)


# -- generic star/convex operations -------------------------------------

StarBody = (Ball, Ellipsoid, Polytope, RadialTable)


def dim(body) -> int:
    if isinstance(body, StarBody) or isinstance(body, Zonotope):
        return body.n
    raise ParameterError(f"not a body: {body!r}")


def _require_origin_interior(body):
    if isinstance(body, Ball):
        if np.any(body.center_array != 0.0):
            raise RepresentationError("star-body role requires a centered ball")
    elif isinstance(body, Ellipsoid):
        if np.any(body.center != 0.0):
            raise RepresentationError("star-body role requires a centered ellipsoid")
    elif isinstance(body, Polytope):
        if np.any(body.offsets <= 0.0):
            raise RepresentationError("origin is not interior to the polytope")


def radial_many(body, directions) -> np.ndarray:
    """Radial function rho_K(u) = sup{t : t u in K} for unit directions (rows)."""
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    _require_origin_interior(body)
    if isinstance(body, Ball):
        return np.full(U.shape[0], body.r)
    if isinstance(body, Ellipsoid):
        q = np.einsum("ij,jk,ik->i", U, body.A, U)
        return 1.0 / np.sqrt(q)
    if isinstance(body, Polytope):
        denom = U @ body.normals.T  # (k, m)
        with np.errstate(divide="ignore"):
            cand = np.where(denom > 1e-15, body.offsets[None, :] / denom, np.inf)
        rho = cand.min(axis=1)
        if np.any(~np.isfinite(rho)):
            raise RepresentationError("unbounded radial direction")
        return rho
    if isinstance(body, RadialTable):
        return body.interpolate(U)
    raise ParameterError(f"not a star body: {body!r}")


def radial(body, direction) -> float:
    return float(radial_many(body, np.asarray(direction, dtype=float)[None, :])[0])


def gauge(body, x) -> float:
    """Minkowski gauge ||x||_K (0 at the origin)."""
    v = np.asarray(x, dtype=float).reshape(-1)
    norm = np.linalg.norm(v)
    if norm == 0.0:
        return 0.0
    return norm / radial(body, v / norm)


def support(body, directions) -> np.ndarray:
    """Support function h_K over rows of ``directions`` (convex bodies only)."""
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    if isinstance(body, Ball):
        return body.r * np.linalg.norm(U, axis=1) + U @ body.center_array
    if isinstance(body, Ellipsoid):
        q = np.einsum("ij,jk,ik->i", U, body.A_inv, U)
        return np.sqrt(q) + U @ body.center
    if isinstance(body, Polytope):
        return (U @ body.vertices.T).max(axis=1)
    if isinstance(body, Zonotope):
        return body.support(U)
    raise ParameterError("support function needs a convex body")


def brightness(body, directions) -> np.ndarray:
    """(n-1)-volume of the shadow of the body in each direction; equals the
    support function of its projection body."""
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    n = dim(body)
    if isinstance(body, Polytope):
        return 0.5 * np.abs(U @ body.facet_normals.T) @ body.facet_measures
    if isinstance(body, Ball):
        return np.full(U.shape[0], omega(float(n - 1)) * body.r ** (n - 1)) if n > 1 else np.ones(U.shape[0])
    if isinstance(body, Ellipsoid):
        if n == 1:
            return np.ones(U.shape[0])
        det_a = float(np.prod(body._eigvals))
        lengths = np.linalg.norm(U @ body.sqrt_A.T, axis=1)
        return omega(float(n - 1)) * det_a ** (-0.5) * lengths
    raise ParameterError("brightness implemented for balls, ellipsoids, polytopes")


def exact_volume(body) -> float:
    if isinstance(body, Ball):
        return omega(float(body.n)) * body.r ** body.n
    if isinstance(body, Ellipsoid):
        return omega(float(body.n)) / math.sqrt(float(np.prod(body._eigvals)))
    if isinstance(body, Polytope):
        if body.n == 1:
            return float(body.vertices.max() - body.vertices.min())
        return float(ConvexHull(body.vertices).volume)
    if isinstance(body, Zonotope):
        return exact_volume(body.to_polytope())
    raise ParameterError(f"no exact volume for {body!r}")


def volume(body, quadrature: SphereQuadrature) -> float:
    """(1/n) sum w_i rho(u_i)^n over the grid."""
    n = dim(body)
    if quadrature.n != n:
        raise ParameterError("quadrature dimension mismatch")
    rho = radial_many(body, quadrature.nodes)
    return float(quadrature.weights @ rho**n) / n


def dual_mixed_volume(K, L, p: float, quadrature: SphereQuadrature) -> float:
    """Vtilde_p(K, L) = (1/n) int rho_K^{n-p} rho_L^p dxi over the grid."""
    n = dim(K)
    if dim(L) != n or quadrature.n != n:
        raise ParameterError("dimension mismatch in dual mixed volume")
    if not math.isfinite(p):
        raise DomainError("p must be finite")
    rho_k = radial_many(K, quadrature.nodes)
    rho_l = radial_many(L, quadrature.nodes)
    return float(quadrature.weights @ (rho_k ** (n - p) * rho_l**p)) / n


def polar_of_convex(body):
    """Polar body K* = {y : <x, y> <= 1 for all x in K}; origin must be interior."""
    _require_origin_interior(body)
    if isinstance(body, Ball):
        return Ball(1.0 / body.r, n=body.n)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(body.A_inv)
    if isinstance(body, Polytope):
        return Polytope.from_vertices(body.normals / body.offsets[:, None])
    if isinstance(body, Zonotope):
        return polar_of_convex(body.to_polytope())
    raise ParameterError("polar implemented for convex families")


def polar_volume(body, quadrature: SphereQuadrature) -> float:
    """|K*| by radial integration of the support function: (1/n) int h^{-n}."""
    n = dim(body)
    h = support(body, quadrature.nodes) if not isinstance(body, RadialTable) else None
    if h is None:
        raise ParameterError("polar volume needs a support-function evaluator")
    if np.any(h <= 0.0):
        raise RepresentationError("support must be positive (origin interior)")
    return float(quadrature.weights @ h ** (-float(n))) / n


def linear_image(body, phi):
    """Image of the body under an invertible linear map."""
    phi = np.asarray(phi, dtype=float)
    n = dim(body)
    if phi.shape != (n, n):
        raise ParameterError("linear map shape mismatch")
    det = np.linalg.det(phi)
    if abs(det) < 1e-14:
        raise DegenerateInputError("linear map is singular")
    phi_inv = np.linalg.inv(phi)
    if isinstance(body, Ball):
        A = phi_inv.T @ phi_inv / body.r**2
        return Ellipsoid(A, center=phi @ body.center_array)
    if isinstance(body, Ellipsoid):
        return Ellipsoid(phi_inv.T @ body.A @ phi_inv, center=phi @ body.center)
    if isinstance(body, Polytope):
        return Polytope.from_vertices(body.vertices @ phi.T)
    if isinstance(body, RadialTable):
        U = body.quadrature.nodes
        W = U @ phi_inv.T
        lengths = np.linalg.norm(W, axis=1)
        rho_at = body.interpolate(W / lengths[:, None])
        return RadialTable(body.quadrature, rho_at / lengths,
                           origin_symmetric=body.origin_symmetric)
    raise ParameterError(f"cannot map {body!r}")


def translate(body, vector):
    n = dim(body)
    v = _as_point(vector, n)
    if isinstance(body, Ball):
        return Ball(body.r, n=n, center=tuple(body.center_array + v))
    if isinstance(body, Ellipsoid):
        return Ellipsoid(body.A, center=body.center + v)
    if isinstance(body, Polytope):
        return Polytope.from_vertices(body.vertices + v)
    raise ParameterError(f"cannot translate {body!r}")


def projection_body_polytope(poly: Polytope) -> Zonotope:
    """Projection body of a polytope: the zonotope with generators
    (1/2) area_i eta_i over facets; h(xi) = (1/2) sum area_i |<xi, eta_i>|."""
    if not isinstance(poly, Polytope):
        raise ParameterError("projection body route requires a polytope")
    G = 0.5 * poly.facet_measures[:, None] * poly.facet_normals
    return Zonotope(G)


def polar_projection_volume_exact(body) -> float:
    """|Pi* K| in closed form for balls and ellipsoids."""
    n = dim(body)
    if n < 2:
        return 2.0  # Pi* of any interval is [-1, 1]
    if isinstance(body, Ball):
        return omega(float(n)) * (omega(float(n - 1)) * body.r ** (n - 1)) ** (-n)
    if isinstance(body, Ellipsoid):
        det_a = float(np.prod(body._eigvals))
        det_phi = det_a ** (-0.5)  # |det phi| with E = phi B
        return omega(float(n)) * omega(float(n - 1)) ** (-n) * det_phi ** (1 - n)
    raise ParameterError("closed-form polar projection volume: ball/ellipsoid only")


def surface_measure(body) -> float:
    """Perimeter (n=2) / surface area of the body; boundary measure of BV indicator."""
    n = dim(body)
    if isinstance(body, Polytope):
        return float(body.facet_measures.sum())
    if isinstance(body, Ball):
        return n * omega(float(n)) * body.r ** (n - 1)
    if isinstance(body, Ellipsoid):
        if n == 2:
            from scipy.special import ellipe

            a, b = sorted(1.0 / np.sqrt(body._eigvals), reverse=True)
            ecc2 = 1.0 - (b / a) ** 2
            return 4.0 * a * float(ellipe(ecc2))
        if n == 1:
            return 2.0
        raise UnsupportedError("ellipsoid surface area implemented for n <= 2")
    raise ParameterError(f"no surface measure for {body!r}")


def ray_exit(body, points, direction) -> np.ndarray:
    """Exit parameter rho_{K-x}(xi) = sup{t : x + t xi in K} for each row x of
    ``points`` (which must lie in K), a shared unit direction xi."""
    X = np.atleast_2d(np.asarray(points, dtype=float))
    xi = np.asarray(direction, dtype=float).reshape(-1)
    if isinstance(body, Ball):
        c = body.center_array
        d = X - c
        b = d @ xi
        c0 = np.einsum("ij,ij->i", d, d) - body.r**2
        disc = np.maximum(b * b - c0, 0.0)
        return -b + np.sqrt(disc)
    if isinstance(body, Ellipsoid):
        d = X - body.center
        Axi = body.A @ xi
        a = float(xi @ Axi)
        b = d @ Axi
        c0 = np.einsum("ij,jk,ik->i", d, body.A, d) - 1.0
        disc = np.maximum(b * b - a * c0, 0.0)
        return (-b + np.sqrt(disc)) / a
    if isinstance(body, Polytope):
        denom = body.normals @ xi  # (m,)
        pos = denom > 1e-15
        if not np.any(pos):
            raise RepresentationError("unbounded ray direction")
        num = body.offsets[pos][None, :] - X @ body.normals[pos].T
        return np.maximum(num / denom[pos][None, :], 0.0).min(axis=1)
    raise ParameterError(f"no ray exit for {body!r}")


def p_convexity_defect(table: RadialTable, p: float, trials: int = 512,
                       seed: int = 0) -> float:
    """Sampled p-convexity defect of the gauge of a radial table.

    Over random pairs (x, y), the largest value of
    ||x+y||^p - ||x||^p - ||y||^p, clipped below at zero. Zero means every
    sampled pair satisfied the p-triangle inequality. The probe points are
    standard Gaussian, so the reported defect carries the scale of the
    gauge itself; divide by a typical ||x||^p to compare across bodies.
    """
    if not (0.0 < p <= 1.0):
        raise DomainError(f"p-convexity defined here for p in (0, 1], got {p!r}")
    if trials < 1:
        raise ParameterError("trials must be positive")
    rng = rng_for(seed, OP_CONVEXITY_PROBE, trials)
    n = table.n
    X = rng.standard_normal((trials, n))
    Y = rng.standard_normal((trials, n))
    S = X + Y
    keep = (np.linalg.norm(X, axis=1) > 1e-12) & (np.linalg.norm(Y, axis=1) > 1e-12) \
        & (np.linalg.norm(S, axis=1) > 1e-12)
    X, Y, S = X[keep], Y[keep], S[keep]

    def gauges(M):
        lengths = np.linalg.norm(M, axis=1)
        rho = table.interpolate(M / lengths[:, None])
        return lengths / rho

    gx = gauges(X) ** p
    gy = gauges(Y) ** p
    gs = gauges(S) ** p
    return float(max(0.0, (gs - gx - gy).max()))
