"""Checks pairing computed quantities with the statements they must satisfy.

Every check builds both sides of one inequality, identity, or limit from the
lower-level modules -- usually through two routes that share nothing beyond
the sphere grid -- and wraps the comparison in a :class:`VerificationReport`.
A report passes when its declared ordering (``le``, ``ge``, or ``eq``) holds
within a tolerance drawn from the single :data:`TOLERANCES` table.  Callers
can override any entry; nothing in this module adjusts a bound on its own.

The named suites bundle the checks over a fixed fixture set, so the whole
battery runs from one call (or from the command line).
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass

import numpy as np

from . import bodies, fields
from .bodies import Ball, Ellipsoid, Polytope
from .constants import (
    FracParams,
    omega,
    ps_ball,
    radial_mean_ball_ratio,
    sharp_constant,
)
from .errors import ParameterError
from .fields import (
    IndicatorOfBody,
    RadialProfile,
    VoxelGrid,
    layer_cake_sides,
    random_blob_field,
    schwarz_symmetrize,
    steiner_symmetrize,
    voxelize,
)
from .fractional import (
    frac_perimeter,
    petty_relation_check,
    polar_projection_body,
    source_digest,
    uniform_radius_bound,
)
from .quadrature import (
    OP_FIELD_SYNTH,
    SphereQuadrature,
    antipodal_indices,
    rng_for,
    sphere_grid,
)
from .radialmean import gz_link_check, radial_mean_body

# ---------------------------------------------------------------------------
# Tolerances. One table; every entry can be overridden per call.  Relative
# entries compare against max(|lhs|, |rhs|); "sigmas" entries are z-score
# budgets applied to Monte Carlo standard errors.
# ---------------------------------------------------------------------------

TOLERANCES: dict[str, float] = {
    "perimeter_closed_form": 1e-4,   # spherical route vs closed form, relative
    "perimeter_interval": 1e-8,      # n=1 interval value, relative
    "perimeter_mc_sigmas": 3.0,      # Monte Carlo z-score budget
    "gauge_interval": 1e-6,          # interval gauge closed form, relative
    "identity_deterministic": 1e-3,  # perimeter / dual-mixed-volume identity
    "identity_mc_sigmas": 3.0,
    "gz_interval": 1e-6,             # radial-mean link, exact fixtures
    "gz_disk": 1e-2,
    "gz_polytope": 2e-2,
    "gz_ball3": 1e-2,
    "gz_cube": 5e-2,                 # the one purely Monte Carlo fixture
    "mean_radial_ball": 1e-2,        # MC volume ratio vs ball constant
    "mean_radial_exact": 1e-9,       # exact-route volume ratio vs constant
    "mean_radial_pn": 5e-3,          # p = n identity
    "mean_radial_sigmas": 3.0,       # ordering slack for MC noise
    "frac_petty": 1e-6,              # chain orderings, relative slack
    "sobolev_chain": 1e-6,
    "affine_invariance": 1e-2,
    "symmetrization_exact": 1e-6,    # indicator / profile representations
    "symmetrization_voxel": 2e-2,    # declared voxel discretization budget
    "limit_richardson": 2e-2,        # extrapolated limit vs target, relative
    "layer_cake": 1e-9,
    "layer_cake_equality": 1e-6,
    "classical_petty": 1e-9,
    "classical_petty_equality": 1e-2,
    "prop3_symmetry": 0.0,           # antipodal radii agree to the bit
    "prop3_convexity": 1e-3,         # sampled defect / typical gauge^s
    "prop3_bound": 1e-9,             # uniform radius bound slack, relative
    "dilate_equality": 1e-6,
    "determinism": 0.0,
    "ordering_slack": 1e-9,
}


def resolve_tolerances(overrides=None) -> dict[str, float]:
    """Copy of :data:`TOLERANCES` with ``overrides`` applied.

    Unknown keys raise, so a typo in a tolerance file fails loudly instead of
    silently keeping the default.
    """
    table = dict(TOLERANCES)
    if overrides:
        for key, value in dict(overrides).items():
            if key not in table:
                raise ParameterError(
                    f"unknown tolerance {key!r}; known keys: {sorted(table)}"
                )
            table[key] = float(value)
    return table


# ---------------------------------------------------------------------------
# Report plumbing
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VerificationReport:
    """One verified statement: two sides, their gap, and the verdict.

    ``gap`` is ``(rhs - lhs)`` scaled by ``max(|lhs|, |rhs|)`` for relative
    comparisons (the default) or left raw for absolute ones; the sign
    convention makes ``gap >= 0`` the satisfied direction for ``le`` checks.
    """

    check: str
    digest: str
    lhs: float
    rhs: float
    gap: float
    tolerance: float
    passed: bool
    notes: str = ""

    def to_dict(self) -> dict:
        return {
            "check": self.check,
            "digest": self.digest,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "gap": self.gap,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "notes": self.notes,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    def __str__(self) -> str:
        verdict = "pass" if self.passed else "FAIL"
        return (f"[{verdict}] {self.check}: lhs={self.lhs:.9g} rhs={self.rhs:.9g} "
                f"gap={self.gap:.3g} tol={self.tolerance:.3g}")


def _digest(**parts) -> str:
    canon = json.dumps(parts, sort_keys=True, default=str)
    return hashlib.sha256(canon.encode()).hexdigest()[:16]


def _report(check: str, digest: str, lhs: float, rhs: float, tolerance: float,
            mode: str, notes: str = "", relative: bool = True) -> VerificationReport:
    lhs = float(lhs)
    rhs = float(rhs)
    if relative:
        scale = max(abs(lhs), abs(rhs), 1e-300)
        gap = (rhs - lhs) / scale
    else:
        gap = rhs - lhs
    if mode == "le":          # lhs <= rhs + tol
        passed = gap >= -tolerance
    elif mode == "ge":        # lhs >= rhs - tol
        passed = gap <= tolerance
    elif mode == "eq":
        passed = abs(gap) <= tolerance
    else:
        raise ParameterError(f"unknown comparison mode {mode!r}")
    return VerificationReport(check=check, digest=digest, lhs=lhs, rhs=rhs,
                              gap=float(gap), tolerance=float(tolerance),
                              passed=bool(passed), notes=notes)


def _auto_rel_tol(*field_list) -> float:
    """Shift-profile quadrature target: voxel fields interpolate bilinearly,
    which leaves lattice kinks the adaptive rule cannot polish past ~1e-4,
    so they get a looser (still ample) budget."""
    for f in field_list:
        if isinstance(f, VoxelGrid):
            return 1e-3
    return 1e-7


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------


def standard_bodies() -> dict[str, object]:
    """Benchmark planar bodies: the inequalities' equality cases (ball,
    ellipsoid) plus two genuinely asymmetric convex bodies."""
    return {
        "ball": Ball(1.0, n=2),
        "ellipsoid": Ellipsoid.from_semi_axes([2.0, 0.5]),
        "square": Polytope.box([-0.5, -0.5], [0.5, 0.5]),
        "triangle": Polytope.from_vertices(
            [[-0.25, -0.25], [0.75, -0.25], [-0.25, 0.75]]),
    }


_BALL_BODY_CACHE: dict[tuple, object] = {}


def _ball_ppbody(params: FracParams, quadrature: SphereQuadrature,
                 rel_tol: float = 1e-7):
    """Polar body of the unit-ball indicator, cached per (n, s, grid)."""
    key = (params.n, round(params.s, 12), len(quadrature), rel_tol)
    if key not in _BALL_BODY_CACHE:
        f = IndicatorOfBody(Ball(1.0, n=params.n))
        _BALL_BODY_CACHE[key] = polar_projection_body(
            f, params, quadrature, rel_tol=rel_tol)
    return _BALL_BODY_CACHE[key]


def _polar_projection_volume(E) -> float:
    """|Pi* E| by the route the body admits: closed form for balls,
    ellipsoids, and intervals; the generator sum plus polar-vertex volume
    for polytopes."""
    if isinstance(E, (Ball, Ellipsoid)) or bodies.dim(E) == 1:
        return bodies.polar_projection_volume_exact(E)
    if isinstance(E, Polytope):
        shadow = bodies.projection_body_polytope(E).to_polytope()
        return bodies.exact_volume(bodies.polar_of_convex(shadow))
    raise ParameterError(f"no polar projection volume route for {E!r}")


# ---------------------------------------------------------------------------
# Individual checks
# ---------------------------------------------------------------------------


def check_affine_frac_sobolev(f, params: FracParams,
                              quadrature: SphereQuadrature, *,
                              rel_tol: float | None = None, seed: int = 0,
                              tolerances=None, fracbody=None):
    """Both inequalities of the sharp chain

        ||f||_{n/(n-s)}  <=  c n w_n^{(n+s)/n} |body|^{-s/n}  <=  c E_s(f),

    where ``body`` is the polar body of f, E_s is the spherical decomposition
    of the (n+s)-kernel double integral, and c is the sharp constant.  The
    chain is scaling- and volume-preserving-affine invariant, which the
    affine-invariance reports in the suites exercise separately.
    """
    tol = resolve_tolerances(tolerances)
    if rel_tol is None:
        rel_tol = _auto_rel_tol(f)
    n, s = params.n, params.s
    fb = fracbody if fracbody is not None else polar_projection_body(
        f, params, quadrature, rel_tol=rel_tol, seed=seed)
    lhs = fields.lp_norm(f, n / (n - s))
    alpha = sharp_constant(params)
    vol = fb.volume(quadrature)
    mid = alpha * n * omega(float(n)) ** ((n + s) / n) * vol ** (-s / n)
    seminorm = float(quadrature.weights @ fb.gauges() ** s)
    rhs = alpha * seminorm
    dig = _digest(check="affine_sobolev", f=source_digest(f), n=n, s=s,
                  nodes=len(quadrature), rel_tol=rel_tol, seed=seed)
    scale1 = max(lhs, mid)
    scale2 = max(mid, rhs)
    first = _report("affine_sobolev_first", dig, lhs, mid,
                    tol["sobolev_chain"], "le",
                    notes=(f"polar body volume {vol:.12g}; "
                           f"equality defect {(mid - lhs) / scale1:.3e}"))
    second = _report("affine_sobolev_second", dig, mid, rhs,
                     tol["sobolev_chain"], "le",
                     notes=(f"seminorm {seminorm:.12g}; "
                            f"equality defect {(rhs - mid) / scale2:.3e}"))
    return [first, second]


def check_frac_petty(E, params: FracParams, quadrature: SphereQuadrature, *,
                     rel_tol: float = 1e-7, seed: int = 0, tolerances=None):
    """Volume-ratio chain for the polar body of an indicator:

        (|E|/|B|)^{(n-s)/n}  <=  (|body E|/|body B|)^{-s/n}  <=  P_s(E)/P_s(B).

    The left report's gap measures distance from the ellipsoid equality case;
    the right report's notes carry the s-brightness spread (zero spread means
    the polar body is a ball dilate, the right-hand equality case).
    """
    tol = resolve_tolerances(tolerances)
    n, s = params.n, params.s
    fb_e = polar_projection_body(IndicatorOfBody(E), params, quadrature,
                                 rel_tol=rel_tol, seed=seed)
    fb_b = _ball_ppbody(params, quadrature, rel_tol)
    lhs = (bodies.exact_volume(E) / omega(float(n))) ** ((n - s) / n)
    mid = (fb_e.volume(quadrature) / fb_b.volume(quadrature)) ** (-s / n)
    per_e = 0.5 * float(quadrature.weights @ fb_e.gauges() ** s)
    per_b = 0.5 * float(quadrature.weights @ fb_b.gauges() ** s)
    rhs = per_e / per_b
    g = fb_e.gauges()
    spread = float(np.ptp(g) / np.median(g))
    dig = _digest(check="frac_petty", E=source_digest(E), n=n, s=s,
                  nodes=len(quadrature), rel_tol=rel_tol, seed=seed)
    left = _report("frac_petty_left", dig, lhs, mid, tol["frac_petty"], "le",
                   notes=f"ellipsoid-equality defect {(mid - lhs) / mid:.3e}")
    right = _report("frac_petty_right", dig, mid, rhs, tol["frac_petty"], "le",
                    notes=(f"s-brightness spread {spread:.3e}; "
                           f"P_s(ball) quadrature vs closed "
                           f"{abs(per_b - ps_ball(params)) / ps_ball(params):.2e}"))
    return [left, right]


def check_symmetrization_monotone(f, params: FracParams,
                                  quadrature: SphereQuadrature, *,
                                  mode: str = "schwarz", axis: int = 0,
                                  rel_tol: float | None = None, seed: int = 0,
                                  tolerances=None, fracbody=None):
    """|body(f)|^{-s/n} >= |body(f~)|^{-s/n} for the radial-decreasing
    rearrangement (``schwarz``) or the reflection average along ``axis``
    (``steiner``).  Voxel fields are compared under the declared
    discretization budget, exact representations under a tight one.
    ``fracbody`` short-circuits the polar body of ``f`` when the caller
    already holds it."""
    tol = resolve_tolerances(tolerances)
    if mode == "schwarz":
        f_sym = schwarz_symmetrize(f)
    elif mode == "steiner":
        if not isinstance(f, VoxelGrid):
            raise ParameterError("axis symmetrization operates on voxel fields")
        f_sym = steiner_symmetrize(f, axis)
    else:
        raise ParameterError(f"unknown symmetrization mode {mode!r}")
    if rel_tol is None:
        rel_tol = _auto_rel_tol(f, f_sym)
    n, s = params.n, params.s
    fb = fracbody if fracbody is not None else polar_projection_body(
        f, params, quadrature, rel_tol=rel_tol, seed=seed)
    fb_sym = polar_projection_body(f_sym, params, quadrature, rel_tol=rel_tol,
                                   seed=seed)
    e_orig = fb.volume(quadrature) ** (-s / n)
    e_sym = fb_sym.volume(quadrature) ** (-s / n)
    voxel = isinstance(f, VoxelGrid) or isinstance(f_sym, VoxelGrid)
    key = "symmetrization_voxel" if voxel else "symmetrization_exact"
    dig = _digest(check="symmetrization", f=source_digest(f), mode=mode,
                  axis=axis, n=n, s=s, nodes=len(quadrature), rel_tol=rel_tol,
                  seed=seed)
    return _report(f"symmetrization_{mode}", dig, e_sym, e_orig, tol[key],
                   "le",
                   notes=(f"axis={axis if mode == 'steiner' else '-'} "
                          f"energy original {e_orig:.9g} vs symmetral "
                          f"{e_sym:.9g}"))


def _richardson(h: np.ndarray, ys: np.ndarray):
    """Linear-in-h extrapolation to h=0 from the two smallest h values,
    plus the absolute residual of that linear model at the largest h
    (a witness that the data actually follows the trend).  ``ys`` has the
    h-axis first; extrapolation broadcasts over any trailing axes."""
    order = np.argsort(h)
    i2, i1, iw = order[0], order[1], order[-1]
    h2, h1, hw = h[i2], h[i1], h[iw]
    extr = (h1 * ys[i2] - h2 * ys[i1]) / (h1 - h2)
    slope = (ys[i1] - extr) / h1
    witness = np.abs(extr + slope * hw - ys[iw])
    return extr, witness


def check_limits_s_to_1(f, K, quadrature: SphereQuadrature, *,
                        s_grid=(0.90, 0.95, 0.975),
                        rel_tol: float | None = None, seed: int = 0,
                        tolerances=None):
    """Extrapolated s->1 limits of the polar-body data of an indicator field
    against independently computed first-order targets.

    Three reports: (a) node-wise gauge limit against twice the brightness,
    (b) the volume power against the classical polar projection body, and
    (c) the perimeter form: for the round kernel, the sharp-constant energy
    against Per(E)/(n w_n^{1/n}); for any other star kernel, the dual mixed
    volume against its first-order target.
    """
    tol = resolve_tolerances(tolerances)
    if not isinstance(f, IndicatorOfBody):
        raise ParameterError("limit targets are closed forms for indicators")
    E = f.body
    c = f.height
    n = bodies.dim(E)
    if K is None:
        K = Ball(1.0, n=n)
    k_is_unit_ball = (isinstance(K, Ball) and K.r == 1.0
                      and not np.any(K.center_array))
    if rel_tol is None:
        rel_tol = _auto_rel_tol(f)
    s_grid = tuple(float(s) for s in s_grid)
    if len(s_grid) < 3:
        raise ParameterError("need at least three s values (two for the "
                             "extrapolation, one witness)")
    params_grid = [FracParams(n, s) for s in s_grid]
    fbs = [polar_projection_body(f, p, quadrature, rel_tol=rel_tol, seed=seed)
           for p in params_grid]
    h = 1.0 - np.asarray(s_grid)
    dig = _digest(check="limits", f=source_digest(f), K=source_digest(K),
                  s_grid=s_grid, nodes=len(quadrature), rel_tol=rel_tol,
                  seed=seed)
    reports = []

    # (a) node-wise: (1-s) * gauge^s -> 2 * height * brightness
    ys = np.stack([(1.0 - p.s) * fb.gauges() ** p.s
                   for p, fb in zip(params_grid, fbs)])
    target = 2.0 * c * bodies.brightness(E, quadrature.nodes)
    extr, witness = _richardson(h, ys)
    rel = np.abs(extr - target) / target
    worst = int(np.argmax(rel))
    reports.append(_report(
        "limit_gauge_nodewise", dig, extr[worst], target[worst],
        tol["limit_richardson"], "eq",
        notes=(f"max node gap {rel.max():.3e} at direction "
               f"{np.array2string(quadrature.nodes[worst], precision=3)}; "
               f"witness residual {float(np.max(witness / target)):.3e}")))

    # (b) scalar: (1-s) * |body|^{-s/n} -> 2 * height * |Pi* E|^{-1/n}
    yv = np.array([(1.0 - p.s) * fb.volume(quadrature) ** (-p.s / n)
                   for p, fb in zip(params_grid, fbs)])
    vol_target = 2.0 * c * _polar_projection_volume(E) ** (-1.0 / n)
    extr_v, witness_v = _richardson(h, yv)
    reports.append(_report(
        "limit_volume", dig, float(extr_v), vol_target,
        tol["limit_richardson"], "eq",
        notes=(f"trend {np.array2string(yv, precision=6)}; witness residual "
               f"{float(witness_v) / vol_target:.3e}")))

    # (c) perimeter form
    if k_is_unit_ball:
        ye = np.array([sharp_constant(p) *
                       float(quadrature.weights @ fb.gauges() ** p.s)
                       for p, fb in zip(params_grid, fbs)])
        per_target = c * bodies.surface_measure(E) / (n * omega(float(n))
                                                      ** (1.0 / n))
        name = "limit_bbm"
    else:
        ye = np.array([(1.0 - p.s) *
                       bodies.dual_mixed_volume(K, fb.table, -p.s, quadrature)
                       for p, fb in zip(params_grid, fbs)])
        rho_k = bodies.radial_many(K, quadrature.nodes)
        bright = bodies.brightness(E, quadrature.nodes)
        per_target = (2.0 / n) * float(
            quadrature.weights @ (rho_k ** (n + 1) * c * bright))
        name = "limit_dual_mixed"
    extr_e, witness_e = _richardson(h, ye)
    reports.append(_report(
        name, dig, float(extr_e), per_target, tol["limit_richardson"], "eq",
        notes=(f"trend {np.array2string(ye, precision=6)}; witness residual "
               f"{float(witness_e) / per_target:.3e}")))
    return reports


def _volume_rel_se(rmb, quadrature: SphereQuadrature) -> float:
    """Relative standard error of the quadrature volume of a sampled radial
    mean body, propagated from per-node radius errors.  Antipodal nodes share
    one Monte Carlo draw, so each pair contributes as a single unit."""
    if rmb.std_errors is None:
        return 0.0
    rho = rmb.table.radii
    se = np.asarray(rmb.std_errors, dtype=float)
    n = quadrature.n
    contrib = quadrature.weights * rho ** (n - 1) * se
    perm = antipodal_indices(quadrature)
    if perm is None:
        var = float(np.sum(contrib ** 2))
    else:
        idx = np.arange(len(rho))
        first = idx < perm[idx]
        var = float(np.sum((contrib[first] + contrib[perm[idx][first]]) ** 2))
        var += float(np.sum(contrib[idx == perm[idx]] ** 2))
    return math.sqrt(var) / rmb.volume(quadrature)


def check_mean_radial(E, p_grid, quadrature: SphereQuadrature, *,
                      samples: int = 200_000, seed: int = 0,
                      method: str = "auto", tolerances=None):
    """Volume ratios |R_p E| / |E| against the ball constant, one report per
    exponent.

    Orderings: the ratio is at most the ball constant for -1 < p < n (the
    ball maximizes; equality exactly for ellipsoids), equals 1 at p = n for
    every convex body, and is at least the ball constant for p > n.  For
    ball and ellipsoid inputs each report is an equality test against the
    closed-form constant.  Both volumes in the ratio are taken on the shared
    grid, so the grid's own volume error cancels instead of polluting the
    equality cases.
    """
    tol = resolve_tolerances(tolerances)
    n = bodies.dim(E)
    ellipsoidal = isinstance(E, (Ball, Ellipsoid))
    vol_e = bodies.volume(E, quadrature)
    reports = []
    for p in p_grid:
        p = float(p)
        rmb = radial_mean_body(E, p, quadrature, samples=samples, seed=seed,
                               method=method)
        ratio = rmb.volume(quadrature) / vol_e
        rel_se = _volume_rel_se(rmb, quadrature)
        ball_ratio = radial_mean_ball_ratio(n, p)
        dig = _digest(check="mean_radial", E=source_digest(E), p=p, n=n,
                      nodes=len(quadrature), samples=samples, seed=seed,
                      method=rmb.method)
        noise = tol["mean_radial_sigmas"] * rel_se
        base_notes = (f"p={p:g} method={rmb.method} ratio={ratio:.8g} "
                      f"ball={ball_ratio:.8g} rel_se={rel_se:.2e}")
        if abs(p - n) < 1e-12:
            t = max(tol["mean_radial_pn"], noise)
            rep = _report(f"mean_radial[p={p:g}]", dig, ratio, 1.0, t, "eq",
                          notes=base_notes + "; identity for every body")
        elif ellipsoidal:
            t = (tol["mean_radial_exact"] if rmb.method == "exact"
                 else max(tol["mean_radial_ball"], noise))
            rep = _report(f"mean_radial[p={p:g}]", dig, ratio, ball_ratio, t,
                          "eq", notes=base_notes + "; equality case")
        elif p > n:
            t = max(tol["ordering_slack"], noise)
            rep = _report(f"mean_radial[p={p:g}]", dig, ratio, ball_ratio, t,
                          "ge", notes=base_notes + "; ball minimizes")
        else:
            t = max(tol["ordering_slack"], noise)
            rep = _report(f"mean_radial[p={p:g}]", dig, ratio, ball_ratio, t,
                          "le", notes=base_notes + "; ball maximizes")
        reports.append(rep)
    return reports


def check_classical_petty(E, tolerances=None) -> VerificationReport:
    """|E|^{(n-1)/n} <= (w_n / w_{n-1}) |Pi* E|^{-1/n} through the exact
    polytope route (facet generator sums, polar vertex volume)."""
    tol = resolve_tolerances(tolerances)
    if not isinstance(E, Polytope):
        raise ParameterError("the exact classical route requires a polytope")
    n = bodies.dim(E)
    vol_p = _polar_projection_volume(E)
    lhs = bodies.exact_volume(E) ** ((n - 1) / n)
    rhs = omega(float(n)) / omega(float(n - 1)) * vol_p ** (-1.0 / n)
    dig = _digest(check="classical_petty", E=source_digest(E), n=n)
    return _report("classical_petty", dig, lhs, rhs, tol["classical_petty"],
                   "le", notes=f"ratio rhs/lhs = {rhs / lhs:.6f}; "
                               f"|Pi* E| = {vol_p:.9g}")


def check_body_properties(f, params: FracParams,
                          quadrature: SphereQuadrature, *,
                          rel_tol: float | None = None, seed: int = 0,
                          s_grid=(0.3, 0.5, 0.7, 0.9), trials: int = 512,
                          tolerances=None):
    """Structural invariants of the polar body construction: exact origin
    symmetry, sampled s-convexity of the gauge, and the uniform-in-s radius
    bound (3r / (2||f||_1))^{1/s} for support radius r."""
    tol = resolve_tolerances(tolerances)
    if rel_tol is None:
        rel_tol = _auto_rel_tol(f)
    perm = antipodal_indices(quadrature)
    if perm is None:
        raise ParameterError("property checks need an antipodally closed grid")
    fb = polar_projection_body(f, params, quadrature, rel_tol=rel_tol,
                               seed=seed)
    dig = _digest(check="properties", f=source_digest(f), n=params.n,
                  s=params.s, nodes=len(quadrature), rel_tol=rel_tol,
                  seed=seed, s_grid=tuple(s_grid))
    radii = fb.table.radii
    sym_gap = float(np.max(np.abs(radii - radii[perm])))
    reports = [_report("prop3_origin_symmetry", dig, sym_gap, 0.0,
                       tol["prop3_symmetry"], "le", relative=False,
                       notes="max |rho(u) - rho(-u)| over the grid")]

    defect = bodies.p_convexity_defect(fb.table, params.s, trials=trials,
                                       seed=seed)
    scale = float(np.median(fb.gauges() ** params.s))
    reports.append(_report("prop3_s_convexity", dig, defect / scale, 0.0,
                           tol["prop3_convexity"], "le", relative=False,
                           notes=(f"sampled over {trials} Gaussian pairs; "
                                  f"raw defect {defect:.3g}, "
                                  f"gauge^s scale {scale:.3g}")))

    worst_margin = math.inf
    worst = None
    for s_val in s_grid:
        p_s = FracParams(params.n, float(s_val))
        fb_s = (fb if abs(s_val - params.s) < 1e-15 else
                polar_projection_body(f, p_s, quadrature, rel_tol=rel_tol,
                                      seed=seed))
        r_max = float(fb_s.table.radii.max())
        mass = fields.total_mass(f)
        r_sup = fields.support_radius(f)
        bound = (3.0 * r_sup / (2.0 * mass)) ** (1.0 / float(s_val))
        margin = (bound - r_max) / bound
        if margin < worst_margin:
            worst_margin = margin
            worst = (float(s_val), r_max, bound)
    reports.append(_report("prop3_uniform_bound", dig, worst[1], worst[2],
                           tol["prop3_bound"], "le",
                           notes=(f"tightest at s={worst[0]:g}; construction "
                                  f"bound {uniform_radius_bound(f, worst[0]):.4g}")))
    return reports


def check_dilate_equality(K, p: float, lam: float,
                          quadrature: SphereQuadrature,
                          tolerances=None) -> VerificationReport:
    """Dual mixed volume of a body with its own dilate: the p-mean over the
    shared grid must collapse to lam^p * |K|."""
    tol = resolve_tolerances(tolerances)
    n = bodies.dim(K)
    dilated = bodies.linear_image(K, lam * np.eye(n))
    lhs = bodies.dual_mixed_volume(K, dilated, p, quadrature)
    rhs = lam ** p * bodies.volume(K, quadrature)
    dig = _digest(check="dilate", K=source_digest(K), p=p, lam=lam,
                  nodes=len(quadrature))
    return _report("dual_mixed_dilate", dig, lhs, rhs, tol["dilate_equality"],
                   "eq", notes=f"p={p:g}, lambda={lam:g}")


def check_determinism(seed: int = 7, tolerances=None) -> VerificationReport:
    """Repeat every seeded Monte Carlo path twice and count byte-level
    mismatches; the library promises bit-identical reruns."""
    tol = resolve_tolerances(tolerances)
    mismatches = []

    tri = standard_bodies()["triangle"]
    q = sphere_grid(2, 16)
    a = radial_mean_body(tri, 0.5, q, samples=20_000, seed=seed, method="mc")
    b = radial_mean_body(tri, 0.5, q, samples=20_000, seed=seed, method="mc")
    if not np.array_equal(a.table.radii, b.table.radii):
        mismatches.append("radial mean sampling")

    sq = standard_bodies()["square"]
    params = FracParams(2, 0.5)
    p1 = frac_perimeter(sq, Ball(1.0, n=2), params, method="direct_mc",
                        samples=50_000, seed=seed)
    p2 = frac_perimeter(sq, Ball(1.0, n=2), params, method="direct_mc",
                        samples=50_000, seed=seed)
    if p1.value != p2.value:
        mismatches.append("perimeter sampling")

    f = random_blob_field(2, (32, 32), seed=seed)
    q8 = sphere_grid(2, 8)
    fb1 = polar_projection_body(f, params, q8, rel_tol=1e-3, seed=seed)
    fb2 = polar_projection_body(f, params, q8, rel_tol=1e-3, seed=seed)
    if not np.array_equal(fb1.table.radii, fb2.table.radii):
        mismatches.append("polar body construction")

    dig = _digest(check="determinism", seed=seed)
    return _report("determinism_reruns", dig, float(len(mismatches)), 0.0,
                   tol["determinism"], "le", relative=False,
                   notes=("bit-identical" if not mismatches
                          else "mismatches: " + ", ".join(mismatches)))


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------


def suite_perimeter(seed: int = 0, tolerances=None):
    """Ball perimeter closed form by spherical decomposition (n = 1, 2) and
    direct Monte Carlo (n = 2), plus the interval value."""
    tol = resolve_tolerances(tolerances)
    reports = []
    for n in (1, 2):
        q = sphere_grid(n, 2 if n == 1 else 256)
        ball = Ball(1.0, n=n)
        for s in (0.3, 0.5, 0.7):
            params = FracParams(n, s)
            est = frac_perimeter(ball, ball, params,
                                 method="spherical_decomposition",
                                 quadrature=q)
            closed = ps_ball(params)
            dig = _digest(check="perimeter", n=n, s=s, nodes=len(q),
                          method="spherical")
            reports.append(_report(
                f"perimeter_ball[n={n},s={s:g}]", dig, est.value, closed,
                tol["perimeter_closed_form"], "eq",
                notes=f"spherical decomposition on {len(q)} nodes"))
    ball2 = Ball(1.0, n=2)
    for s in (0.3, 0.5, 0.7):
        params = FracParams(2, s)
        est = frac_perimeter(ball2, ball2, params, method="direct_mc",
                             samples=1_000_000, seed=seed)
        closed = ps_ball(params)
        dig = _digest(check="perimeter_mc", n=2, s=s, samples=1_000_000,
                      seed=seed)
        z = (est.value - closed) / est.std_error
        reports.append(_report(
            f"perimeter_ball_mc[s={s:g}]", dig, est.value, closed,
            tol["perimeter_mc_sigmas"] * est.std_error, "eq", relative=False,
            notes=f"z = {z:+.2f} at 1e6 samples, se = {est.std_error:.3g}"))
    interval = Polytope.box([0.0], [1.0])
    q1 = sphere_grid(1, 2)
    for s in (0.3, 0.5, 0.7):
        params = FracParams(1, s)
        est = frac_perimeter(interval, Ball(1.0, n=1), params,
                             method="spherical_decomposition", quadrature=q1)
        exact = 2.0 / (s * (1.0 - s))
        dig = _digest(check="perimeter_interval", s=s)
        reports.append(_report(
            f"perimeter_interval[s={s:g}]", dig, est.value, exact,
            tol["perimeter_interval"], "eq",
            notes="unit interval against 2/(s(1-s))"))
    return reports


def suite_gauge(seed: int = 0, tolerances=None):
    """Interval indicator gauge against (2/(s(1-s)))^{1/s} in both
    directions."""
    tol = resolve_tolerances(tolerances)
    q1 = sphere_grid(1, 2)
    f = IndicatorOfBody(Polytope.box([0.0], [1.0]))
    reports = []
    for s in (0.25, 0.5, 0.75):
        params = FracParams(1, s)
        fb = polar_projection_body(f, params, q1, seed=seed)
        worst = float(np.max(np.abs(fb.gauges())))  # both nodes mirrored
        closed = (2.0 / (s * (1.0 - s))) ** (1.0 / s)
        dig = _digest(check="gauge_interval", s=s, seed=seed)
        reports.append(_report(
            f"gauge_interval[s={s:g}]", dig, worst, closed,
            tol["gauge_interval"], "eq",
            notes="adaptive singular quadrature on the shift profile"))
    return reports


def suite_identity(seed: int = 0, tolerances=None):
    """Perimeter / dual-mixed-volume identity 2 P_s(E, K) = n Vtil_{-s}(K, .)
    on three (E, K) pairs, the left side routed independently of the right."""
    tol = resolve_tolerances(tolerances)
    fixtures = standard_bodies()
    cases = [
        ("ball", fixtures["ball"], Ball(1.0, n=2), sphere_grid(2, 256)),
        ("square", fixtures["square"], Ball(1.0, n=2), sphere_grid(2, 64)),
        ("interval", Polytope.box([0.0], [1.0]), Ball(1.0, n=1),
         sphere_grid(1, 2)),
    ]
    params_by_n = {1: FracParams(1, 0.5), 2: FracParams(2, 0.5)}
    reports = []
    for name, E, K, q in cases:
        params = params_by_n[q.n]
        lhs, rhs, se = petty_relation_check(E, K, params, q,
                                            samples=1_000_000, seed=seed)
        dig = _digest(check="identity", E=source_digest(E),
                      K=source_digest(K), s=params.s, nodes=len(q), seed=seed)
        if se == 0.0:
            rep = _report(f"identity_{name}", dig, lhs, rhs,
                          tol["identity_deterministic"], "eq",
                          notes="closed-form left side")
        else:
            z = (rhs - lhs) / se
            rep = _report(f"identity_{name}", dig, lhs, rhs,
                          tol["identity_mc_sigmas"] * se, "eq",
                          relative=False,
                          notes=f"Monte Carlo left side, z = {z:+.2f}")
        reports.append(rep)
    return reports


def suite_gz_link(seed: int = 0, tolerances=None):
    """Node-wise agreement of the polar body of an indicator with the scaled
    radial mean body at negative exponent."""
    tol = resolve_tolerances(tolerances)
    fixtures = standard_bodies()
    cases = [
        ("interval", Polytope.box([0.0], [1.0]), sphere_grid(1, 2),
         tol["gz_interval"]),
        ("disk", fixtures["ball"], sphere_grid(2, 64), tol["gz_disk"]),
        ("square", fixtures["square"], sphere_grid(2, 64),
         tol["gz_polytope"]),
        ("triangle", fixtures["triangle"], sphere_grid(2, 64),
         tol["gz_polytope"]),
        ("ball3", Ball(1.0, n=3), sphere_grid(3, 64), tol["gz_ball3"]),
        ("cube", Polytope.box([-0.5, -0.5, -0.5], [0.5, 0.5, 0.5]),
         sphere_grid(3, 64), tol["gz_cube"]),
    ]
    reports = []
    for name, E, q, bound in cases:
        params = FracParams(q.n, 0.5)
        gap, lhs, rhs = gz_link_check(E, params, q, seed=seed)
        dig = _digest(check="gz_link", E=source_digest(E), s=params.s,
                      nodes=len(q), seed=seed)
        reports.append(_report(
            f"gz_link_{name}", dig, gap, 0.0, bound, "le", relative=False,
            notes=(f"max node-wise relative gap over {len(q)} directions; "
                   f"radii ~ {float(np.median(lhs)):.4g}")))
    return reports


def suite_mean_radial(seed: int = 0, tolerances=None):
    """Ball volume-ratio constants by Monte Carlo plus the orderings on
    asymmetric bodies via the exact chord routes."""
    fixtures = standard_bodies()
    q = sphere_grid(2, 64)
    reports = check_mean_radial(fixtures["ball"],
                                (-0.5, 0.0, 0.5, 1.0, 2.0, 3.0), q,
                                samples=1_000_000, seed=seed, method="mc",
                                tolerances=tolerances)
    reports += check_mean_radial(fixtures["triangle"], (1.0,), q,
                                 samples=200_000, seed=seed,
                                 tolerances=tolerances)
    reports += check_mean_radial(fixtures["square"], (-0.5, 2.0, 3.0), q,
                                 seed=seed, tolerances=tolerances)
    reports += check_mean_radial(fixtures["ellipsoid"], (0.5,), q,
                                 seed=seed, tolerances=tolerances)
    return reports


def suite_frac_petty(seed: int = 0, tolerances=None):
    """Volume-ratio chain over the standard bodies at two fractional
    orders."""
    q = sphere_grid(2, 64)
    reports = []
    for name, E in standard_bodies().items():
        for s in (0.3, 0.7):
            reports += check_frac_petty(E, FracParams(2, s), q, seed=seed,
                                        tolerances=tolerances)
    return reports


def suite_affine_sobolev(seed: int = 0, tolerances=None):
    """Sharp chain on the standard indicators, the two-level radial equality
    case of the second inequality, and affine invariance under the
    volume-preserving map that carries the ball to the ellipsoid fixture."""
    tol = resolve_tolerances(tolerances)
    q = sphere_grid(2, 64)
    params = FracParams(2, 0.5)
    reports = []
    per_body = {}
    for name, E in standard_bodies().items():
        reps = check_affine_frac_sobolev(IndicatorOfBody(E), params, q,
                                         seed=seed, tolerances=tolerances)
        per_body[name] = reps
        reports += reps

    two_level = RadialProfile(2, [0.5, 1.0], [2.0, 1.0])
    reports += check_affine_frac_sobolev(two_level, params, q, seed=seed,
                                         tolerances=tolerances)

    # Both sides of the sharp norm/volume inequality are unchanged when the
    # ball is replaced by its volume-preserving linear image (the kernel
    # energy on the right of the second inequality is not, by design: the
    # volume form strengthens it exactly because it sees only the affine
    # class).
    dig = _digest(check="affine_invariance", s=params.s, nodes=len(q),
                  map="diag(2, 1/2)", seed=seed)
    ball_first, _ = per_body["ball"]
    ell_first, _ = per_body["ellipsoid"]
    reports.append(_report(
        "affine_invariance_norm", dig, ball_first.lhs, ell_first.lhs,
        tol["affine_invariance"], "eq",
        notes="Lebesgue norm under the volume-preserving linear map"))
    reports.append(_report(
        "affine_invariance_mid", dig, ball_first.rhs, ell_first.rhs,
        tol["affine_invariance"], "eq",
        notes="volume term under the volume-preserving linear map"))
    return reports


def suite_symmetrization(seed: int = 0, tolerances=None, count: int = 10):
    """Monotonicity under both symmetrizations on seeded voxel fields, plus
    the fixed points (radial field under the radial rearrangement, mirror
    symmetric field under the axis average)."""
    tol = resolve_tolerances(tolerances)
    q = sphere_grid(2, 16)
    params = FracParams(2, 0.5)
    reports = []
    for k in range(count):
        f = random_blob_field(2, (128, 128), seed=seed + k)
        fb = polar_projection_body(f, params, q, rel_tol=_auto_rel_tol(f),
                                   seed=seed)
        reports.append(check_symmetrization_monotone(
            f, params, q, mode="schwarz", seed=seed, tolerances=tolerances,
            fracbody=fb))
        reports.append(check_symmetrization_monotone(
            f, params, q, mode="steiner", axis=k % 2, seed=seed,
            tolerances=tolerances, fracbody=fb))

    # Fixed point: a radial indicator is its own rearrangement.
    ball_f = IndicatorOfBody(Ball(1.0, n=2))
    fb = polar_projection_body(ball_f, params, q, seed=seed)
    fb_sym = polar_projection_body(schwarz_symmetrize(ball_f), params, q,
                                   seed=seed)
    e0 = fb.volume(q) ** (-params.s / params.n)
    e1 = fb_sym.volume(q) ** (-params.s / params.n)
    dig = _digest(check="symmetrization_fixed", f=source_digest(ball_f),
                  nodes=len(q), seed=seed)
    reports.append(_report("symmetrization_fixed_point", dig, e1, e0,
                           tol["symmetrization_exact"], "eq",
                           notes="radial indicator under the rearrangement"))

    # Fixed point: an axis-symmetric voxel field under the axis average.
    sq_vox = voxelize(standard_bodies()["square"], [-0.625, -0.625],
                      [0.625, 0.625], (128, 128))
    rep = check_symmetrization_monotone(sq_vox, params, q, mode="steiner",
                                        axis=0, seed=seed,
                                        tolerances=tolerances)
    fixed = _report("symmetrization_fixed_point_steiner", rep.digest,
                    rep.lhs, rep.rhs, tol["symmetrization_exact"], "eq",
                    notes="mirror-symmetric voxel field, axis average")
    reports.append(fixed)
    return reports


def suite_limits(seed: int = 0, tolerances=None):
    """Extrapolated s->1 limits for the disk and square indicators, plus one
    non-round kernel variant of the perimeter form."""
    q = sphere_grid(2, 64)
    fixtures = standard_bodies()
    f_disk = IndicatorOfBody(fixtures["ball"])
    f_square = IndicatorOfBody(fixtures["square"])
    reports = []
    reports += check_limits_s_to_1(f_disk, None, q, seed=seed,
                                   tolerances=tolerances)
    reports += check_limits_s_to_1(f_square, None, q, seed=seed,
                                   tolerances=tolerances)
    reports += check_limits_s_to_1(f_disk, fixtures["ellipsoid"], q,
                                   seed=seed, tolerances=tolerances)[2:]
    return reports


def suite_layer_cake(seed: int = 0, tolerances=None, count: int = 20):
    """Layer-cake estimate on seeded two-level radial fields (strict side)
    and single indicators (equality side)."""
    tol = resolve_tolerances(tolerances)
    params = FracParams(2, 0.5)
    reports = []
    for k in range(count):
        rng = rng_for(seed, OP_FIELD_SYNTH, 17, k)
        r1 = 0.2 + 0.6 * rng.random()
        r2 = r1 + 0.2 + 0.8 * rng.random()
        v2 = 0.3 + rng.random()
        v1 = v2 + 0.2 + 1.5 * rng.random()
        f = RadialProfile(2, [r1, r2], [v1, v2])
        lhs, rhs = layer_cake_sides(f, params)
        dig = _digest(check="layer_cake", f=source_digest(f), s=params.s,
                      k=k, seed=seed)
        reports.append(_report(f"layer_cake[{k}]", dig, lhs, rhs,
                               tol["layer_cake"], "le",
                               notes=f"levels ({v1:.3f}, {v2:.3f}) at radii "
                                     f"({r1:.3f}, {r2:.3f})"))
    for name, E in (("ball", standard_bodies()["ball"]),
                    ("square", standard_bodies()["square"])):
        f = IndicatorOfBody(E)
        lhs, rhs = layer_cake_sides(f, params)
        dig = _digest(check="layer_cake_eq", f=source_digest(f), s=params.s)
        reports.append(_report(f"layer_cake_equality_{name}", dig, lhs, rhs,
                               tol["layer_cake_equality"], "eq",
                               notes="single indicator: both sides collapse "
                                     "to |E|^{(n-s)/n} max f"))
    return reports


def suite_properties(seed: int = 0, tolerances=None):
    """Structural invariants (symmetry, s-convexity, uniform bound), the
    dual-mixed-volume dilate identity, and bit-identical reruns."""
    q2 = sphere_grid(2, 32)
    fixtures = standard_bodies()
    cases = [
        (IndicatorOfBody(Polytope.box([0.0], [1.0])), FracParams(1, 0.5),
         sphere_grid(1, 2)),
        (IndicatorOfBody(fixtures["ball"]), FracParams(2, 0.5), q2),
        (IndicatorOfBody(fixtures["square"]), FracParams(2, 0.5), q2),
    ]
    reports = []
    for f, params, q in cases:
        reports += check_body_properties(f, params, q, seed=seed,
                                         tolerances=tolerances)
    reports.append(check_dilate_equality(fixtures["ellipsoid"], -0.5, 1.7,
                                         q2, tolerances=tolerances))
    reports.append(check_dilate_equality(fixtures["square"], 2.0, 0.5, q2,
                                         tolerances=tolerances))
    reports.append(check_determinism(seed=seed + 7, tolerances=tolerances))
    return reports


def suite_ordering(seed: int = 0, tolerances=None, count: int = 20):
    """The chain's interior ordering on random convex polygons: the volume
    power never exceeds the perimeter ratio."""
    q = sphere_grid(2, 24)
    params = FracParams(2, 0.5)
    reports = []
    for k in range(count):
        rng = rng_for(seed, OP_FIELD_SYNTH, 23, k)
        pts = rng.uniform(-1.0, 1.0, size=(rng.integers(5, 11), 2))
        pts *= rng.uniform(0.5, 1.5)
        poly = Polytope.from_vertices(pts)
        rep = check_frac_petty(poly, params, q, seed=seed,
                               tolerances=tolerances)[1]
        reports.append(rep)
    return reports


def suite_classical_petty(seed: int = 0, tolerances=None):
    """Classical projection inequality by the exact polytope route: strict on
    the square and a thin box, near-equality on a fine polygon disk."""
    tol = resolve_tolerances(tolerances)
    fixtures = standard_bodies()
    reports = [check_classical_petty(fixtures["square"],
                                     tolerances=tolerances),
               check_classical_petty(Polytope.box([0.0, 0.0], [3.0, 0.2]),
                                     tolerances=tolerances)]
    angles = 2.0 * math.pi * np.arange(256) / 256
    gon = Polytope.from_vertices(np.column_stack([np.cos(angles),
                                                  np.sin(angles)]))
    near = check_classical_petty(gon, tolerances=tolerances)
    reports.append(near)
    reports.append(_report("classical_petty_equality", near.digest, near.lhs,
                           near.rhs, tol["classical_petty_equality"], "eq",
                           notes="256-gon approximates the round equality "
                                 "case"))
    return reports


SUITES = {
    "perimeter": suite_perimeter,
    "gauge": suite_gauge,
    "identity": suite_identity,
    "gz_link": suite_gz_link,
    "mean_radial": suite_mean_radial,
    "frac_petty": suite_frac_petty,
    "affine_sobolev": suite_affine_sobolev,
    "symmetrization": suite_symmetrization,
    "limits": suite_limits,
    "layer_cake": suite_layer_cake,
    "properties": suite_properties,
    "ordering": suite_ordering,
    "classical_petty": suite_classical_petty,
}


def run_suite(name: str, seed: int = 0, tolerances=None):
    """Run one named suite; ``run_suite("all", ...)`` runs every suite in
    declaration order."""
    if name == "all":
        reports = []
        for suite in SUITES.values():
            reports += suite(seed=seed, tolerances=tolerances)
        return reports
    if name not in SUITES:
        raise ParameterError(
            f"unknown suite {name!r}; available: {['all'] + sorted(SUITES)}")
    return SUITES[name](seed=seed, tolerances=tolerances)
