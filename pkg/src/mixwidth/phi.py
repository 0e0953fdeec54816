"""Single-ball width profile in mixed norms.

`phi` evaluates the closed-form order profile Phi(p, theta; q, sigma, m, k, n)
of the n-width of the unit (p, theta)-ball measured in the (q, sigma) mixed
norm, for 2 <= q, sigma < inf and n <= m*k/2.  The exponent square splits into
six closed regions, each with its own formula; the formulas coincide on the
overlaps, which `phi` asserts on every call.

Region membership is decided with exact rational comparisons on reciprocal
exponents; only the final power evaluations are floating point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .exponents import HALF, Exponent

_REL_BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class Dimensions:
    """Block shape (m inner, k outer) and the width index n <= m*k/2."""

    m: int
    k: int
    n: int

    def __post_init__(self) -> None:
        if not (isinstance(self.m, int) and isinstance(self.k, int) and isinstance(self.n, int)):
            raise ValueError("m, k, n must be integers")
        if self.m < 1 or self.k < 1:
            raise ValueError(f"m and k must be positive, got m={self.m}, k={self.k}")
        if self.n < 0:
            raise ValueError(f"n must be nonnegative, got n={self.n}")
        if 2 * self.n > self.m * self.k:
            raise ValueError(f"n={self.n} exceeds m*k/2={self.m * self.k / 2}")


@dataclass(frozen=True)
class TargetSpace:
    """The ambient mixed norm (q, sigma) with 2 <= q, sigma < infinity."""

    q: Exponent
    sigma: Exponent

    def __post_init__(self) -> None:
        for name, e in (("q", self.q), ("sigma", self.sigma)):
            if not 0 < e.u <= HALF:
                raise ValueError(f"{name} must lie in [2, inf), got {e}")


@dataclass(frozen=True)
class PhiValue:
    """A profile value together with every branch whose region contained the input."""

    value: float
    branches: tuple[int, ...]


def omega(p: Exponent, q: Exponent) -> Fraction:
    """Interpolation ratio for p <= q: min{(1/p - 1/q)/(1/2 - 1/q), 1}, or 1 at q = 2."""
    if p.u < q.u:
        raise ValueError(f"requires p <= q, got p={p}, q={q}")
    if q.u == HALF:
        return Fraction(1)
    return min((p.u - q.u) / (HALF - q.u), Fraction(1))


def _pow(base: float, e) -> float:
    # float('inf') ** 0.0 == 1.0, which is exactly the convention needed at n = 0.
    return base ** float(e)


def phi(p: Exponent, theta: Exponent, target: TargetSpace, dims: Dimensions) -> PhiValue:
    """Evaluate the six-branch profile at (p, theta).

    Every branch whose (closed) region contains the point is evaluated; the
    results must agree to relative 1e-9 and the minimum is returned together
    with the list of applicable branch ids.  At n = 0 the factor n^{-1/2} is
    taken as +inf so each min picks its finite branch.
    """
    u, v = p.u, theta.u
    uq, vs = target.q.u, target.sigma.u
    fm, fk = float(dims.m), float(dims.k)
    rootn = math.inf if dims.n == 0 else dims.n**-0.5

    values: dict[int, float] = {}

    if u <= uq and v <= vs:  # p >= q, theta >= sigma
        values[1] = _pow(fm, uq - u) * _pow(fk, vs - v)
    if u <= uq and v >= vs:  # p >= q, theta <= sigma
        a = _pow(fm, uq - u)
        w = omega(theta, target.sigma)
        values[2] = min(a, a * _pow(rootn * math.sqrt(fm) * _pow(fk, vs), w))
    if u >= uq and v <= vs:  # p <= q, theta >= sigma
        a = _pow(fk, vs - v)
        w = omega(p, target.q)
        values[3] = min(a, a * _pow(rootn * _pow(fm, uq) * math.sqrt(fk), w))
    if uq <= u <= HALF and v >= vs:
        wp, wt = omega(p, target.q), omega(theta, target.sigma)
        if wp <= wt:  # 2 <= p <= q, 1 <= theta <= sigma, slower direction p
            values[4] = min(
                1.0,
                _pow(rootn * _pow(fm, uq) * _pow(fk, vs), wp),
                _pow(fm, uq - u) * _pow(rootn * math.sqrt(fm) * _pow(fk, vs), wt),
            )
    if vs <= v <= HALF and u >= uq:
        wp, wt = omega(p, target.q), omega(theta, target.sigma)
        if wt <= wp:  # 2 <= theta <= sigma, 1 <= p <= q, slower direction theta
            values[5] = min(
                1.0,
                _pow(rootn * _pow(fm, uq) * _pow(fk, vs), wt),
                _pow(fk, vs - v) * _pow(rootn * _pow(fm, uq) * math.sqrt(fk), wp),
            )
    if u >= HALF and v >= HALF:  # p <= 2, theta <= 2
        values[6] = min(1.0, rootn * _pow(fm, uq) * _pow(fk, vs))

    if not values:
        raise RuntimeError(
            f"no branch covers (1/p, 1/theta) = ({u}, {v}); this cannot happen "
            "for exponents in [1, inf]"
        )
    lo, hi = min(values.values()), max(values.values())
    if hi - lo > _REL_BRANCH_TOL * hi:
        raise ArithmeticError(
            f"applicable branches disagree beyond tolerance: {values}"
        )
    return PhiValue(lo, tuple(sorted(values)))


def single_ball_width_estimate(ball, target: TargetSpace, dims: Dimensions) -> float:
    """Order estimate of the n-width of nu * B_{p,theta}: nu * Phi(p, theta)."""
    return ball.nu * phi(ball.p, ball.theta, target, dims).value
