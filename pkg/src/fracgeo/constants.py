"""Closed-form constants: ball volumes in real dimension, digamma,
fractional ball perimeters, the sharp Sobolev constant, and radial mean
body volume ratios.

Everything here is a plain function of its arguments, float in / float out,
with domain checks. The only nontrivial numerics is ``digamma``; gamma comes
from the C library via ``math.gamma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ParameterError

__all__ = [
    "FracParams",
    "SpecialValue",
    "omega",
    "digamma",
    "ps_ball",
    "sharp_constant",
    "radial_mean_ball_ratio",
    "closed_form_table",
]


@dataclass(frozen=True)
class FracParams:
    """Dimension and fractional order (n, s) with s in the open unit interval."""

    n: int
    s: float

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ParameterError(f"dimension must be a positive integer, got {self.n!r}")
        if not (0.0 < self.s < 1.0):
            raise DomainError(f"fractional order s must lie in (0, 1), got {self.s!r}")


@dataclass(frozen=True)
class SpecialValue:
    """A named evaluation together with an absolute error bound."""

    name: str
    value: float
    abs_error_bound: float

    def __post_init__(self):
        if not math.isfinite(self.value):
            raise DomainError(f"{self.name}: non-finite value {self.value!r}")
        if not (math.isfinite(self.abs_error_bound) and self.abs_error_bound >= 0.0):
            raise ParameterError(f"{self.name}: bad error bound {self.abs_error_bound!r}")


def omega(q: float) -> float:
    """Volume of the unit ball in real dimension q > 0: pi^(q/2) / Gamma(q/2 + 1)."""
    if not (q > 0.0 and math.isfinite(q)):
        raise DomainError(f"omega requires q > 0, got {q!r}")
    return math.pi ** (q / 2.0) / math.gamma(q / 2.0 + 1.0)


# B_{2k}/(2k) for the asymptotic tail of digamma, k = 1..7.
_DIGAMMA_TAIL = (
    1.0 / 12.0,
    -1.0 / 120.0,
    1.0 / 252.0,
    -1.0 / 240.0,
    1.0 / 132.0,
    -691.0 / 32760.0,
    1.0 / 12.0,
)


def digamma(x: float) -> float:
    """Digamma psi(x) for x > 0.

    Upward recurrence onto x >= 12, then the Bernoulli asymptotic series
    psi(x) = ln x - 1/(2x) - sum B_{2k}/(2k x^{2k}).  Good to ~1e-15 relative
    on the range this package touches.
    """
    if not (x > 0.0 and math.isfinite(x)):
        raise DomainError(f"digamma requires x > 0, got {x!r}")
    acc = 0.0
    while x < 12.0:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    tail = 0.0
    power = inv2
    for coeff in _DIGAMMA_TAIL:
        tail += coeff * power
        power *= inv2
    return acc + math.log(x) - 0.5 / x - tail


def ps_ball(params: FracParams) -> float:
    """Fractional perimeter of the unit ball against itself.

    P_s(B^n) = 2^(1-s) n omega_n omega_{n-s} / (s (1-s) omega_{1-s}).
    """
    n, s = params.n, params.s
    return (
        2.0 ** (1.0 - s)
        * n
        * omega(float(n))
        * omega(n - s)
        / (s * (1.0 - s) * omega(1.0 - s))
    )


def sharp_constant(params: FracParams) -> float:
    """Constant making the fractional Sobolev inequality an equality on balls.

    alpha_{n,s} = omega_n^((n-s)/n) / (2 P_s(B^n)); at n=1, s=1/2 this is
    exactly 1/16.
    """
    n, s = params.n, params.s
    return omega(float(n)) ** ((n - s) / n) / (2.0 * ps_ball(params))


def radial_mean_ball_ratio(n: int, p: float) -> float:
    """|R_p B^n| / |B^n| for p > -1.

    Power-mean branch for generic p, the digamma branch at p = 0, and the
    exact value 1 at p = n (where R_n E has the volume of E itself).  The
    two branches agree across the p -> 0 switch to ~1e-8 relative.
    """
    if not (isinstance(n, int) and n >= 1):
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    if not (p > -1.0 and math.isfinite(p)):
        raise DomainError(f"radial mean ratio requires p > -1, got {p!r}")
    if p == n:
        return 1.0
    if abs(p) < 1e-6:
        return 2.0 ** n * math.exp((n / 2.0) * (digamma(0.5) - digamma(n / 2.0 + 1.0)))
    base = 2.0 ** (p + 1.0) * omega(n + p) / ((p + 1.0) * omega(float(n)) * omega(p + 1.0))
    return base ** (n / p)


def closed_form_table(params: FracParams, p: float | None = None) -> list[SpecialValue]:
    """The named constants for (n, s), optionally plus the ratio at exponent p.

    Error bounds are generous float bounds: each entry is a few ulp of
    elementary-function arithmetic, bounded here by 1e-12 relative.
    """
    n, s = params.n, params.s
    rows = [
        ("omega", omega(float(n))),
        ("omega_n_minus_s", omega(n - s)),
        ("ps_ball", ps_ball(params)),
        ("sharp_constant", sharp_constant(params)),
    ]
    if p is not None:
        rows.append(("radial_mean_ball_ratio", radial_mean_ball_ratio(n, p)))
    return [SpecialValue(name, v, 1e-12 * abs(v)) for name, v in rows]
