"""Mixed norms on m x k matrices, ball membership, and interpolation checks.

The mixed (p, theta) norm takes the l_p norm down each column (the inner,
length-m index) and then the l_theta norm across the k column norms.  Norms
are evaluated with max-factoring so large exponents do not overflow.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import numpy as np

from .exponents import Exponent, Weight, convex_combine

MEMBERSHIP_SLACK = 1e-12

ExponentPair = tuple[Exponent, Exponent]


def _lp_rows(a: np.ndarray, p: Exponent) -> np.ndarray:
    """l_p norm of each column of a nonnegative 2-d array (vectorized, max-factored)."""
    if p.is_inf:
        return a.max(axis=0)
    pf = p.value
    s = a.max(axis=0)
    out = np.zeros_like(s)
    nz = s > 0
    if np.any(nz):
        scaled = a[:, nz] / s[nz]
        out[nz] = s[nz] * (scaled**pf).sum(axis=0) ** (1.0 / pf)
    return out


def mixed_norm(x, p: Exponent, theta: Exponent) -> float:
    """The (p, theta) mixed norm of an m x k matrix; inf exponents mean max."""
    a = np.abs(np.asarray(x, dtype=float))
    if a.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix entries must be finite")
    cols = _lp_rows(a, p)
    if theta.is_inf:
        return float(cols.max())
    tf = theta.value
    s = cols.max()
    if s == 0:
        return 0.0
    return float(s * ((cols / s) ** tf).sum() ** (1.0 / tf))


def membership(x, balls: Sequence) -> tuple[bool, float]:
    """Whether x lies in every ball, and the largest norm/radius ratio seen."""
    ratio = max(mixed_norm(x, b.p, b.theta) / b.nu for b in balls)
    return ratio <= 1.0 + MEMBERSHIP_SLACK, float(ratio)


def interpolation_check(
    x, s1: ExponentPair, s2: ExponentPair, lam: Weight
) -> tuple[float, float, bool]:
    """Two-norm interpolation inequality at the convex combination of s1, s2.

    With 1/p = (1-lam)/p1 + lam/p2 and likewise for theta, checks
    ||x||_{p,theta} <= ||x||_{p1,theta1}^{1-lam} * ||x||_{p2,theta2}^{lam}.
    Returns (lhs, rhs, holds) with a 1e-12 relative slack.
    """
    lam = Fraction(lam)
    p = convex_combine(s1[0], s2[0], lam)
    theta = convex_combine(s1[1], s2[1], lam)
    lhs = mixed_norm(x, p, theta)
    rhs = mixed_norm(x, *s1) ** float(1 - lam) * mixed_norm(x, *s2) ** float(lam)
    return lhs, rhs, lhs <= rhs * (1.0 + MEMBERSHIP_SLACK)


def corollary_check(
    x, specs: Sequence[tuple[ExponentPair, Weight]]
) -> tuple[float, float, bool]:
    """Multiway interpolation: weights tau_i >= 0 summing to one, exactly."""
    taus = [Fraction(t) for _, t in specs]
    if any(t < 0 for t in taus):
        raise ValueError("weights must be nonnegative")
    if sum(taus) != 1:
        raise ValueError(f"weights must sum to 1, got {sum(taus)}")
    u = sum((t * pair[0].u for (pair, _), t in zip(specs, taus)), Fraction(0))
    v = sum((t * pair[1].u for (pair, _), t in zip(specs, taus)), Fraction(0))
    lhs = mixed_norm(x, Exponent(u), Exponent(v))
    rhs = 1.0
    for (pair, _), t in zip(specs, taus):
        rhs *= mixed_norm(x, *pair) ** float(t)
    return lhs, rhs, lhs <= rhs * (1.0 + MEMBERSHIP_SLACK)


def sample_boundary(balls: Sequence, m: int, k: int, seed: int = 0) -> np.ndarray:
    """A random point on the boundary of the ball intersection (ratio 1).

    Deterministic per seed: a Gaussian direction scaled so the largest
    norm/radius ratio equals one.
    """
    if not balls:
        raise ValueError("need a nonempty ball family")
    rng = np.random.default_rng(seed)
    while True:
        x = rng.standard_normal((m, k))
        _, ratio = membership(x, balls)
        if ratio > 0:
            return x / ratio
