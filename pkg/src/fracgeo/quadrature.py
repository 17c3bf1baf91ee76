"""Sphere quadrature grids and the one-dimensional singular integrator.

All Monte-Carlo randomness in the package flows from a single 64-bit seed
through :func:`rng_for`, which derives independent deterministic substreams
from (seed, operation code, node index) tuples.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate

from .constants import omega
from .errors import DomainError, ParameterError, QuadratureFailure

__all__ = [
    "SphereQuadrature",
    "SingularIntegrandProfile",
    "sphere_grid",
    "integrate_singular",
    "rng_for",
    "antipodal_indices",
]

_GOLDEN = (1.0 + math.sqrt(5.0)) / 2.0

# Registry of operation codes for RNG substream derivation. Stable small integers;
# never reuse a retired code.
OP_COVARIOGRAM = 1
OP_RADIAL_MEAN = 2
OP_PERIMETER_MC = 3
OP_CONVEXITY_PROBE = 4
OP_FIELD_SYNTH = 5
OP_MC_GRID = 6


def rng_for(seed: int, *key: int) -> np.random.Generator:
    """Deterministic substream for (seed, operation, node index, ...)."""
    return np.random.default_rng(np.random.SeedSequence([int(seed), *map(int, key)]))


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes and weights on S^{n-1}; weights sum to the surface measure n omega_n."""

    n: int
    nodes: np.ndarray
    weights: np.ndarray
    kind: str = "deterministic"

    def __post_init__(self):
        nodes = np.asarray(self.nodes, dtype=float)
        weights = np.asarray(self.weights, dtype=float)
        if nodes.ndim != 2 or nodes.shape[1] != self.n or nodes.shape[0] != weights.shape[0]:
            raise ParameterError("nodes/weights shape mismatch")
        norms = np.linalg.norm(nodes, axis=1)
        if not np.allclose(norms, 1.0, rtol=0.0, atol=1e-12):
            raise ParameterError("quadrature nodes must be unit vectors")
        if np.any(weights <= 0.0):
            raise ParameterError("quadrature weights must be positive")
        surface = self.n * omega(float(self.n))
        if abs(weights.sum() - surface) > 1e-9 * surface:
            raise ParameterError("quadrature weights must sum to the sphere surface measure")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    def __len__(self):
        return self.nodes.shape[0]


def sphere_grid(n: int, resolution: int, monte_carlo: bool = False, seed: int = 0) -> SphereQuadrature:
    """Quadrature grid on S^{n-1}.

    Deterministic layouts exist for n in {1, 2, 3}: the two signs, equally
    spaced angles (antipodally closed for even resolution), and the offset
    Fibonacci lattice. ``monte_carlo=True`` (required for n >= 4) draws
    uniform directions with equal weights from the seeded stream.
    """
    if not isinstance(n, int) or n < 1:
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    if not isinstance(resolution, int) or resolution < 2:
        raise ParameterError(f"resolution must be an integer >= 2, got {resolution!r}")
    surface = n * omega(float(n))
    if monte_carlo:
        rng = rng_for(seed, OP_MC_GRID, n, resolution)
        raw = rng.standard_normal((resolution, n))
        norms = np.linalg.norm(raw, axis=1, keepdims=True)
        nodes = raw / norms
        weights = np.full(resolution, surface / resolution)
        return SphereQuadrature(n, nodes, weights, kind="monte_carlo")
    if n == 1:
        return SphereQuadrature(1, np.array([[1.0], [-1.0]]), np.array([1.0, 1.0]))
    if n == 2:
        angles = 2.0 * math.pi * np.arange(resolution) / resolution
        nodes = np.column_stack([np.cos(angles), np.sin(angles)])
        weights = np.full(resolution, 2.0 * math.pi / resolution)
        return SphereQuadrature(2, nodes, weights)
    if n == 3:
        i = np.arange(resolution)
        z = 1.0 - (2.0 * i + 1.0) / resolution
        theta = (2.0 * math.pi / _GOLDEN) * i
        rho = np.sqrt(np.maximum(0.0, 1.0 - z * z))
        nodes = np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])
        weights = np.full(resolution, 4.0 * math.pi / resolution)
        return SphereQuadrature(3, nodes, weights)
    raise ParameterError(f"no deterministic grid for n = {n}; pass monte_carlo=True")


def antipodal_indices(quad: SphereQuadrature) -> np.ndarray | None:
    """Index permutation mapping each node to its antipode, or None if the
    grid is not closed under the antipodal map."""
    nodes = quad.nodes
    m = len(quad)
    perm = np.full(m, -1, dtype=int)
    # Desk-scale grids: a quadratic scan is fine and avoids tolerance tuning.
    dots = nodes @ nodes.T
    for i in range(m):
        j = int(np.argmin(dots[i]))
        if np.linalg.norm(nodes[i] + nodes[j]) > 1e-9:
            return None
        perm[i] = j
    return perm


@dataclass(frozen=True)
class SingularIntegrandProfile:
    """Structural facts about g that make int_0^inf t^{-s-1} g(t) dt tame:
    g vanishes at least linearly at 0 (slope bound c) and is constant from
    ``upper_knot`` on."""

    upper_knot: float
    small_t_slope_bound: float = field(default=math.inf)

    def __post_init__(self):
        if not (self.upper_knot > 0.0 and math.isfinite(self.upper_knot)):
            raise ParameterError(f"upper_knot must be positive and finite, got {self.upper_knot!r}")
        if not self.small_t_slope_bound > 0.0:
            raise ParameterError("small_t_slope_bound must be positive")


def integrate_singular(g, s: float, profile: SingularIntegrandProfile,
                       rel_tol: float = 1e-7) -> float:
    """Evaluate int_0^inf t^{-s-1} g(t) dt for 0 < s < 1.

    The tail beyond the profile's upper knot T is analytic:
    g(T) T^{-s} / s. The core [0, T] is integrated after the substitution
    u = t^{1-s}, under which the integrand becomes g(t)/t — bounded, since
    g vanishes linearly at zero. Below t = 1e-8 T the ratio g(t)/t is frozen
    at its value at the floor; that guards float underflow of u^{1/(1-s)}
    and cancellation inside g, at a relative cost within the tolerance.

    Raises QuadratureFailure (carrying the last two estimates) if the
    adaptive core does not converge to ``rel_tol``.
    """
    if not (0.0 < s < 1.0):
        raise DomainError(f"s must lie in (0, 1), got {s!r}")
    if not (0.0 < rel_tol < 1e-1):
        raise ParameterError(f"rel_tol out of range: {rel_tol!r}")
    T = profile.upper_knot
    gT = float(g(T))
    if not math.isfinite(gT) or gT < 0.0:
        raise DomainError(f"g({T}) = {gT!r}; integrand must be finite and nonnegative")
    tail = gT * T ** (-s) / s

    # Probe the declared small-t profile once, with a wide margin: a wildly
    # superlinear g would silently break the substitution.
    bound = profile.small_t_slope_bound
    if math.isfinite(bound):
        t_probe = 1e-4 * T
        g_probe = float(g(t_probe))
        if g_probe > 10.0 * bound * t_probe:
            raise ParameterError(
                f"integrand violates declared small-t slope bound: g({t_probe:g}) = {g_probe:g}"
            )

    t_floor = 1e-8 * T
    inv = 1.0 / (1.0 - s)
    ratio_floor_cache = {}

    def core(u):
        t = u ** inv
        if t < t_floor:
            if "v" not in ratio_floor_cache:
                ratio_floor_cache["v"] = float(g(t_floor)) / t_floor
            return ratio_floor_cache["v"]
        return float(g(t)) / t

    upper = T ** (1.0 - s)
    with warnings.catch_warnings():
        warnings.simplefilter("error", integrate.IntegrationWarning)
        try:
            val, abserr, info = integrate.quad(
                core, 0.0, upper, epsabs=0.0, epsrel=rel_tol / 4.0,
                limit=200, full_output=True)[:3]
        except integrate.IntegrationWarning:
            # Re-run at two coarser subdivision limits to expose the trend.
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                est1 = integrate.quad(core, 0.0, upper, epsabs=0.0,
                                      epsrel=rel_tol / 4.0, limit=100)[0]
                est2 = integrate.quad(core, 0.0, upper, epsabs=0.0,
                                      epsrel=rel_tol / 4.0, limit=200)[0]
            raise QuadratureFailure(
                "singular core did not converge; last two estimates "
                f"{est1 * inv + tail:.17g}, {est2 * inv + tail:.17g}",
                estimates=(est1 * inv + tail, est2 * inv + tail),
            ) from None
    core_val = val * inv
    total = core_val + tail
    if total != 0.0 and abserr * inv > rel_tol * abs(total):
        raise QuadratureFailure(
            "singular core met subdivision limit but not tolerance; "
            f"estimate {total:.17g} +- {abserr * inv:.3g}",
            estimates=(total - abserr * inv, total),
        )
    return total
