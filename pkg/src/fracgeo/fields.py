"""Scalar fields: indicators of convex bodies, voxel grids, and decreasing
radial step profiles, plus the field-level machinery the fractional module
consumes — L^p norms, superlevel sets, shift differences (via covariograms
on the indicator side), Schwarz and Steiner symmetrization, and the layer
cake comparison.

Shift differences canonicalize the sign of the direction, so f(. + t xi)
and f(. - t xi) produce bit-identical output; that is what makes computed
polar projection bodies exactly origin-symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from . import bodies
from .bodies import Ball, Ellipsoid, Polytope
from .constants import omega
from .errors import (
    DegenerateInputError,
    DomainError,
    ParameterError,
    UnsupportedError,
)
from .quadrature import OP_COVARIOGRAM, OP_FIELD_SYNTH, rng_for

__all__ = [
    "IndicatorOfBody",
    "VoxelGrid",
    "RadialProfile",
    "LevelSetSummary",
    "field_dim",
    "total_mass",
    "max_value",
    "lp_norm",
    "support_radius",
    "support_diameter",
    "superlevel_measure",
    "superlevel_field",
    "level_set_summary",
    "covariogram",
    "shift_difference",
    "shift_difference_profile",
    "schwarz_symmetrize",
    "steiner_symmetrize",
    "layer_cake_sides",
    "abs_field",
    "voxelize",
    "random_blob_field",
]


@dataclass(frozen=True)
class IndicatorOfBody:
    """f = height * chi_body for a convex body."""

    body: object
    height: float = 1.0

    def __post_init__(self):
        if not isinstance(self.body, (Ball, Ellipsoid, Polytope)):
            raise ParameterError("indicator body must be a ball, ellipsoid, or polytope")
        if not (self.height >= 0.0 and math.isfinite(self.height)):
            raise DomainError(f"indicator height must be >= 0, got {self.height!r}")


class VoxelGrid:
    """Cell-center samples on a regular grid over the box [lo, hi].

    Values are stored row-major with cell centers lo + (idx + 1/2) h. Most
    operations require nonnegative values; signed grids are accepted at
    construction solely so |f| reduction can be tested, and the operations
    whose contracts need nonnegativity enforce it themselves.
    """

    def __init__(self, lo, hi, values):
        lo = np.asarray(lo, dtype=float).reshape(-1)
        hi = np.asarray(hi, dtype=float).reshape(-1)
        values = np.asarray(values, dtype=float)
        n = lo.size
        if n not in (1, 2, 3):
            raise UnsupportedError(f"voxel grids cover n in {{1,2,3}}, got {n}")
        if hi.shape != lo.shape or np.any(hi <= lo):
            raise ParameterError("voxel box needs lo < hi componentwise")
        if values.ndim != n:
            raise ParameterError("voxel values rank must equal the dimension")
        if np.any(~np.isfinite(values)):
            raise DomainError("voxel values must be finite")
        self.lo = lo
        self.hi = hi
        self.values = values
        self.n = n
        self.counts = values.shape
        self.h = (hi - lo) / np.asarray(values.shape, dtype=float)
        self.cell_volume = float(np.prod(self.h))

    def __repr__(self):
        return f"VoxelGrid(n={self.n}, counts={self.counts})"


class RadialProfile:
    """Decreasing radial step function: value values[i] for
    radii[i-1] < |x| <= radii[i], zero beyond the last knot."""

    def __init__(self, n, radii, values):
        radii = np.asarray(radii, dtype=float).reshape(-1)
        values = np.asarray(values, dtype=float).reshape(-1)
        if n not in (1, 2, 3):
            raise UnsupportedError(f"radial profiles cover n in {{1,2,3}}, got {n}")
        if radii.size == 0 or radii.size != values.size:
            raise ParameterError("radii and values must be nonempty and aligned")
        if np.any(radii <= 0.0) or np.any(np.diff(radii) <= 0.0):
            raise ParameterError("radii must be positive and strictly increasing")
        if np.any(values <= 0.0) or np.any(np.diff(values) > 0.0):
            raise DomainError("profile values must be positive and nonincreasing")
        self.n = int(n)
        self.radii = radii
        self.values = values

    def layer_weights(self):
        """Weights of the decomposition f = sum_i w_i chi_{B_{r_i}}."""
        v_next = np.r_[self.values[1:], 0.0]
        return self.values - v_next

    def __repr__(self):
        return f"RadialProfile(n={self.n}, knots={len(self.radii)})"


ScalarField = (IndicatorOfBody, VoxelGrid, RadialProfile)


@dataclass(frozen=True)
class LevelSetSummary:
    """Thresholds (increasing) and superlevel measures (nonincreasing)."""

    thresholds: np.ndarray
    measures: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.thresholds, dtype=float)
        m = np.asarray(self.measures, dtype=float)
        if t.shape != m.shape or t.ndim != 1 or t.size == 0:
            raise ParameterError("thresholds/measures must be aligned 1-d arrays")
        if np.any(t <= 0.0) or np.any(np.diff(t) <= 0.0):
            raise ParameterError("thresholds must be positive and increasing")
        if np.any(m < 0.0) or np.any(np.diff(m) > 1e-12 * max(1.0, m.max())):
            raise DomainError("superlevel measures must be nonnegative and nonincreasing")
        object.__setattr__(self, "thresholds", t)
        object.__setattr__(self, "measures", m)


# -- basic functionals ----------------------------------------------------


def field_dim(f) -> int:
    if isinstance(f, IndicatorOfBody):
        return bodies.dim(f.body)
    if isinstance(f, (VoxelGrid, RadialProfile)):
        return f.n
    raise ParameterError(f"not a scalar field: {f!r}")


def _require_nonnegative(f, what):
    if isinstance(f, VoxelGrid) and np.any(f.values < 0.0):
        raise DomainError(f"{what} requires a nonnegative field")


def total_mass(f) -> float:
    if isinstance(f, IndicatorOfBody):
        return f.height * bodies.exact_volume(f.body)
    if isinstance(f, VoxelGrid):
        _require_nonnegative(f, "total mass")
        return float(f.values.sum()) * f.cell_volume
    if isinstance(f, RadialProfile):
        w = omega(float(f.n))
        shells = np.diff(np.r_[0.0, f.radii**f.n]) * w
        return float(f.values @ shells)
    raise ParameterError(f"not a scalar field: {f!r}")


def max_value(f) -> float:
    if isinstance(f, IndicatorOfBody):
        return f.height
    if isinstance(f, VoxelGrid):
        return float(f.values.max())
    if isinstance(f, RadialProfile):
        return float(f.values[0])
    raise ParameterError(f"not a scalar field: {f!r}")


def lp_norm(f, p: float) -> float:
    """L^p norm, p >= 1 (indicator, voxel, and profile have exact forms)."""
    if not (p >= 1.0 and math.isfinite(p)):
        raise DomainError(f"lp_norm requires p >= 1, got {p!r}")
    if isinstance(f, IndicatorOfBody):
        return f.height * bodies.exact_volume(f.body) ** (1.0 / p)
    if isinstance(f, VoxelGrid):
        return float((np.abs(f.values) ** p).sum() * f.cell_volume) ** (1.0 / p)
    if isinstance(f, RadialProfile):
        w = omega(float(f.n))
        shells = np.diff(np.r_[0.0, f.radii**f.n]) * w
        return float((f.values**p) @ shells) ** (1.0 / p)
    raise ParameterError(f"not a scalar field: {f!r}")


def support_radius(f) -> float:
    """Radius r with supp f inside r B^n (measured from the origin)."""
    if isinstance(f, IndicatorOfBody):
        b = f.body
        if isinstance(b, Ball):
            return float(np.linalg.norm(b.center_array) + b.r)
        if isinstance(b, Ellipsoid):
            return float(np.linalg.norm(b.center) + 1.0 / math.sqrt(b._eigvals.min()))
        return float(np.linalg.norm(b.vertices, axis=1).max())
    if isinstance(f, VoxelGrid):
        corners = np.array([f.lo, f.hi])
        worst = np.max(np.abs(corners), axis=0)
        return float(np.linalg.norm(worst))
    if isinstance(f, RadialProfile):
        return float(f.radii[-1])
    raise ParameterError(f"not a scalar field: {f!r}")


def support_diameter(f) -> float:
    if isinstance(f, IndicatorOfBody):
        b = f.body
        if isinstance(b, Ball):
            return 2.0 * b.r
        if isinstance(b, Ellipsoid):
            return 2.0 / math.sqrt(b._eigvals.min())
        V = b.vertices
        diffs = V[:, None, :] - V[None, :, :]
        return float(np.sqrt((diffs**2).sum(-1)).max())
    if isinstance(f, VoxelGrid):
        return float(np.linalg.norm(f.hi - f.lo))
    if isinstance(f, RadialProfile):
        return 2.0 * float(f.radii[-1])
    raise ParameterError(f"not a scalar field: {f!r}")


# -- superlevel sets ------------------------------------------------------


def superlevel_measure(f, t: float) -> float:
    """|{f >= t}| for t > 0 (the >= convention is part of the contract)."""
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"superlevel threshold must be positive, got {t!r}")
    if isinstance(f, IndicatorOfBody):
        return bodies.exact_volume(f.body) if f.height >= t else 0.0
    if isinstance(f, VoxelGrid):
        return float((f.values >= t).sum()) * f.cell_volume
    if isinstance(f, RadialProfile):
        idx = np.nonzero(f.values >= t)[0]
        if idx.size == 0:
            return 0.0
        return omega(float(f.n)) * float(f.radii[idx[-1]]) ** f.n
    raise ParameterError(f"not a scalar field: {f!r}")


def superlevel_field(f, t: float):
    """The superlevel set {f >= t} as a unit-height field of the same class."""
    if not (t > 0.0 and math.isfinite(t)):
        raise DomainError(f"superlevel threshold must be positive, got {t!r}")
    if isinstance(f, IndicatorOfBody):
        if f.height < t:
            raise DegenerateInputError("empty superlevel set")
        return IndicatorOfBody(f.body, 1.0)
    if isinstance(f, VoxelGrid):
        return VoxelGrid(f.lo, f.hi, (f.values >= t).astype(float))
    if isinstance(f, RadialProfile):
        idx = np.nonzero(f.values >= t)[0]
        if idx.size == 0:
            raise DegenerateInputError("empty superlevel set")
        return IndicatorOfBody(Ball(float(f.radii[idx[-1]]), n=f.n), 1.0)
    raise ParameterError(f"not a scalar field: {f!r}")


def level_set_summary(f, m: int) -> LevelSetSummary:
    """Midpoint thresholds t_k = (k - 1/2) max(f)/m and their measures."""
    if m < 1:
        raise ParameterError("need at least one threshold")
    _require_nonnegative(f, "level set summary")
    top = max_value(f)
    if top <= 0.0:
        raise DegenerateInputError("field has no positive values")
    t = (np.arange(m) + 0.5) * (top / m)
    mu = np.array([superlevel_measure(f, tk) for tk in t])
    return LevelSetSummary(t, mu)


# -- covariograms ---------------------------------------------------------


def _lens_volume(n: int, r: float, d: float) -> float:
    """|B_r cap (B_r + z)| with d = |z|."""
    if d >= 2.0 * r:
        return 0.0
    if n == 1:
        return 2.0 * r - d
    if n == 2:
        return 2.0 * r * r * math.acos(d / (2.0 * r)) - 0.5 * d * math.sqrt(
            4.0 * r * r - d * d
        )
    if n == 3:
        return math.pi * (2.0 * r - d) ** 2 * (d + 4.0 * r) / 12.0
    raise UnsupportedError(f"lens volume for n = {n}")


def _clip_polygon(points, eta, h):
    out = []
    d = points @ eta - h
    m = len(points)
    for i in range(m):
        a, da = points[i], d[i]
        b, db = points[(i + 1) % m], d[(i + 1) % m]
        if da <= 0.0:
            out.append(a)
        if (da < 0.0 < db) or (db < 0.0 < da):
            frac = da / (da - db)
            out.append(a + frac * (b - a))
    return np.asarray(out)


def _polygon_area(points) -> float:
    if len(points) < 3:
        return 0.0
    x, y = points[:, 0], points[:, 1]
    return 0.5 * abs(float(x @ np.roll(y, -1) - y @ np.roll(x, -1)))


def _sample_in_polytope(poly: Polytope, samples: int, rng) -> np.ndarray:
    lo = poly.vertices.min(axis=0)
    hi = poly.vertices.max(axis=0)
    out = np.empty((samples, poly.n))
    got = 0
    while got < samples:
        batch = rng.uniform(lo, hi, size=(max(2 * (samples - got), 1024), poly.n))
        inside = np.all(batch @ poly.normals.T <= poly.offsets + 1e-12, axis=1)
        hits = batch[inside]
        take = min(len(hits), samples - got)
        out[got : got + take] = hits[:take]
        got += take
    return out


def covariogram(body, z, mc_samples: int = 200_000, seed: int = 0,
                _mc_points=None) -> float:
    """cov_E(z) = |E cap (E + z)|.

    Exact for balls, ellipsoids, intervals, axis boxes, and planar polytopes
    (half-plane clipping). Non-box polytopes in n=3 fall back to seeded
    Monte Carlo; pass ``_mc_points`` to reuse one sample cloud across many
    shifts (common random numbers keep the profile smooth in t).
    """
    z = np.asarray(z, dtype=float).reshape(-1)
    if isinstance(body, Ball):
        return _lens_volume(body.n, body.r, float(np.linalg.norm(z)))
    if isinstance(body, Ellipsoid):
        det_phi = float(np.prod(body._eigvals)) ** -0.5
        return det_phi * _lens_volume(body.n, 1.0, float(np.linalg.norm(body.sqrt_A @ z)))
    if isinstance(body, Polytope):
        if body.n == 1:
            length = float(body.vertices.max() - body.vertices.min())
            return max(0.0, length - abs(float(z[0])))
        box = body.axis_box()
        if box is not None:
            ext = box[1] - box[0]
            return float(np.prod(np.maximum(ext - np.abs(z), 0.0)))
        if body.n == 2:
            pts = body.vertices + z
            for eta, h in zip(body.normals, body.offsets):
                pts = _clip_polygon(pts, eta, h)
                if len(pts) < 3:
                    return 0.0
            return _polygon_area(pts)
        pts = _mc_points
        if pts is None:
            rng = rng_for(seed, OP_COVARIOGRAM)
            pts = _sample_in_polytope(body, mc_samples, rng)
        shifted = pts - z
        inside = np.all(shifted @ body.normals.T <= body.offsets + 1e-12, axis=1)
        vol = bodies.exact_volume(body)
        return vol * float(inside.mean())
    raise ParameterError(f"no covariogram for {body!r}")


def covariogram_std_error(body, z, mc_samples: int = 200_000, seed: int = 0) -> float:
    """Monte-Carlo standard error of the n=3 polytope covariogram estimate
    (zero on exact paths)."""
    if isinstance(body, Polytope) and body.n == 3 and body.axis_box() is None:
        rng = rng_for(seed, OP_COVARIOGRAM)
        pts = _sample_in_polytope(body, mc_samples, rng)
        z = np.asarray(z, dtype=float).reshape(-1)
        inside = np.all((pts - z) @ body.normals.T <= body.offsets + 1e-12, axis=1)
        p = float(inside.mean())
        vol = bodies.exact_volume(body)
        return vol * math.sqrt(max(p * (1.0 - p), 0.0) / len(pts))
    return 0.0


# -- shift differences ----------------------------------------------------


def _canonical_direction(xi, n):
    xi = np.asarray(xi, dtype=float).reshape(-1)
    if xi.shape != (n,):
        raise ParameterError(f"direction must live in R^{n}")
    norm = np.linalg.norm(xi)
    if not (abs(norm - 1.0) <= 1e-9):
        raise ParameterError("direction must be a unit vector")
    for c in xi:
        if c != 0.0:
            return -xi if c < 0.0 else xi
    raise ParameterError("zero direction")


def shift_difference(f, xi, t: float, mc_samples: int = 200_000, seed: int = 0,
                     _mc_points=None) -> float:
    """||f(. + t xi) - f||_1 for a unit direction xi and t >= 0."""
    if not (t >= 0.0 and math.isfinite(t)):
        raise DomainError(f"shift must be >= 0, got {t!r}")
    n = field_dim(f)
    xi = _canonical_direction(xi, n)
    if t == 0.0:
        return 0.0
    if isinstance(f, IndicatorOfBody):
        if f.height == 0.0:
            return 0.0
        vol = bodies.exact_volume(f.body)
        cov = covariogram(f.body, t * xi, mc_samples=mc_samples, seed=seed,
                          _mc_points=_mc_points)
        return 2.0 * f.height * (vol - min(cov, vol))
    if isinstance(f, RadialProfile):
        w = f.layer_weights()
        out = 0.0
        wn = omega(float(f.n))
        for weight, r in zip(w, f.radii):
            if weight == 0.0:
                continue
            out += weight * 2.0 * (wn * r**f.n - _lens_volume(f.n, float(r), t))
        return out
    if isinstance(f, VoxelGrid):
        return _voxel_shift_difference(f, xi, t)
    raise ParameterError(f"not a scalar field: {f!r}")


def _voxel_shift_difference(f: VoxelGrid, xi, t: float) -> float:
    delta = t * xi / f.h  # shift in index coordinates
    pad = np.ceil(np.abs(delta)).astype(int) + 1
    shapes = [c + 2 * p for c, p in zip(f.counts, pad)]
    padded = np.zeros(shapes)
    inner = tuple(slice(p, p + c) for p, c in zip(pad, f.counts))
    padded[inner] = f.values
    axes = [np.arange(s, dtype=float) + d for s, d in zip(shapes, delta)]
    mesh = np.meshgrid(*axes, indexing="ij")
    shifted = ndimage.map_coordinates(padded, mesh, order=1, mode="constant", cval=0.0)
    return float(np.abs(shifted - padded).sum()) * f.cell_volume


def shift_difference_profile(f, xi, mc_samples: int = 200_000, seed: int = 0):
    """A reusable t -> ||f(. + t xi) - f||_1 evaluator plus its singular
    integrand profile (upper knot, small-t slope bound).

    The callable shares one Monte-Carlo sample cloud across all t when a
    covariogram has to be sampled, so adaptive integration sees a smooth
    deterministic function.
    """
    from .quadrature import SingularIntegrandProfile

    n = field_dim(f)
    xi = _canonical_direction(xi, n)
    T = support_diameter(f) * 1.0 + 1e-12
    mc_points = None
    if (isinstance(f, IndicatorOfBody) and isinstance(f.body, Polytope)
            and f.body.n == 3 and f.body.axis_box() is None):
        rng = rng_for(seed, OP_COVARIOGRAM)
        mc_points = _sample_in_polytope(f.body, mc_samples, rng)

    def g(t):
        return shift_difference(f, xi, float(t), mc_samples=mc_samples,
                                seed=seed, _mc_points=mc_points)

    # ||f(.+z) - f||_1 <= |z| |Df|(R^n) = |z| height Per(E) for indicators;
    # doubled for safety margin. Fields without a cheap perimeter pass inf,
    # which skips the integrator's profile probe.
    slope = math.inf
    if isinstance(f, IndicatorOfBody) and f.height > 0.0:
        try:
            slope = 2.0 * f.height * bodies.surface_measure(f.body)
        except UnsupportedError:
            slope = math.inf
    return g, SingularIntegrandProfile(upper_knot=T, small_t_slope_bound=slope)


# -- symmetrization -------------------------------------------------------


def schwarz_symmetrize(f, m: int = 256) -> RadialProfile:
    """Layer-cake rearrangement onto centered balls through m midpoint
    thresholds spanning (0, max f]. Mass is preserved within max(f) |{f>0}| / m."""
    summary = level_set_summary(f, m)
    n = field_dim(f)
    dt = max_value(f) / m
    wn = omega(float(n))
    keep = summary.measures > 0.0
    radii_levels = (summary.measures[keep] / wn) ** (1.0 / n)
    if radii_levels.size == 0:
        raise DegenerateInputError("field has no mass above the first threshold")
    u = np.unique(radii_levels)
    counts = (radii_levels[None, :] >= u[:, None]).sum(axis=1)
    return RadialProfile(n, u, dt * counts)


def steiner_symmetrize(f: VoxelGrid, axis: int) -> VoxelGrid:
    """Symmetric-decreasing rearrangement of every grid line parallel to a
    coordinate axis. Exact per-line mass preservation; already-symmetric
    fields are fixed points."""
    if not isinstance(f, VoxelGrid):
        raise ParameterError("Steiner symmetrization operates on voxel grids")
    if not (0 <= axis < f.n):
        raise ParameterError(f"axis out of range: {axis}")
    _require_nonnegative(f, "Steiner symmetrization")
    vals = np.moveaxis(f.values, axis, -1)
    N = vals.shape[-1]
    center = (N - 1) / 2.0
    order = sorted(range(N), key=lambda pos: (abs(pos - center), pos))
    srt = np.sort(vals, axis=-1)[..., ::-1]
    out = np.empty_like(vals)
    out[..., order] = srt
    return VoxelGrid(f.lo, f.hi, np.moveaxis(out, -1, axis).copy())


# -- layer cake -----------------------------------------------------------


def layer_cake_sides(f, params, m: int = 256):
    """Both sides of the layer cake estimate at exponent n/(n-s):
    lhs = ||f||_{n/(n-s)}, rhs = int |{f >= t}|^{(n-s)/n} dt (midpoint sum).
    Returns (lhs, rhs)."""
    n = field_dim(f)
    if params.n != n:
        raise ParameterError("params dimension mismatch")
    s = params.s
    q = n / (n - s)
    lhs = lp_norm(f, q)
    summary = level_set_summary(f, m)
    dt = max_value(f) / m
    rhs = float(dt * (summary.measures ** ((n - s) / n)).sum())
    return lhs, rhs


def abs_field(f: VoxelGrid) -> VoxelGrid:
    if not isinstance(f, VoxelGrid):
        raise ParameterError("abs_field operates on voxel grids")
    return VoxelGrid(f.lo, f.hi, np.abs(f.values))


# -- construction helpers -------------------------------------------------


def _contains(body, X):
    if isinstance(body, Ball):
        return np.linalg.norm(X - body.center_array, axis=1) <= body.r
    if isinstance(body, Ellipsoid):
        d = X - body.center
        return np.einsum("ij,jk,ik->i", d, body.A, d) <= 1.0
    if isinstance(body, Polytope):
        return np.all(X @ body.normals.T <= body.offsets + 1e-12, axis=1)
    raise ParameterError(f"no membership test for {body!r}")


def voxelize(body, lo, hi, counts, height: float = 1.0) -> VoxelGrid:
    """Cell-center indicator sampling of a body on a regular grid."""
    lo = np.asarray(lo, dtype=float).reshape(-1)
    hi = np.asarray(hi, dtype=float).reshape(-1)
    counts = tuple(int(c) for c in np.atleast_1d(counts))
    n = lo.size
    axes = [lo[i] + (np.arange(counts[i]) + 0.5) * (hi[i] - lo[i]) / counts[i]
            for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    X = np.column_stack([m.ravel() for m in mesh])
    vals = height * _contains(body, X).astype(float).reshape(counts)
    return VoxelGrid(lo, hi, vals)


def random_blob_field(n: int, counts, seed: int, blobs: int = 4) -> VoxelGrid:
    """Seeded nonnegative test field: a few Gaussian bumps on [-1, 1]^n."""
    rng = rng_for(seed, OP_FIELD_SYNTH, n)
    counts = tuple(int(c) for c in np.atleast_1d(counts))
    if len(counts) == 1 and n > 1:
        counts = counts * n
    lo = -np.ones(n)
    hi = np.ones(n)
    axes = [lo[i] + (np.arange(counts[i]) + 0.5) * 2.0 / counts[i] for i in range(n)]
    mesh = np.meshgrid(*axes, indexing="ij")
    vals = np.zeros(counts)
    for _ in range(blobs):
        c = rng.uniform(-0.5, 0.5, size=n)
        width = rng.uniform(0.08, 0.35)
        amp = rng.uniform(0.4, 1.0)
        r2 = sum((m - ci) ** 2 for m, ci in zip(mesh, c))
        vals += amp * np.exp(-r2 / (2.0 * width**2))
    return VoxelGrid(lo, hi, vals)
