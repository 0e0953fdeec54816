"""Order estimate of the n-width of an intersection of mixed-norm balls.

For a finite family of balls nu_a * B_{p_a,theta_a} the width order estimate
is Psi = min_{0<=j<=7} Psi_j.  Psi_0 scans single balls; Psi_1..Psi_5 scan
ordered pairs whose reciprocal segment crosses one of the distinguished
lines (1/q, 1/sigma, 1/2 on either coordinate, or the critical line); Psi_6
and Psi_7 scan triples whose reciprocal triangle strictly contains
(1/q, 1/sigma) or (1/2, 1/2).  Each finite component carries a certificate:
the indices, the exact interpolation weights, and the exponent pair at
which the single-ball profile is evaluated, which together reproduce the
component value.

Candidate-set membership is decided with exact rational arithmetic; the
triple scans vectorize the containment test in floats with margins that
dominate the float error, handing only uncertain triples and the final
minimum window to the exact solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .exponents import (
    HALF,
    Exponent,
    ReciprocalPoint,
    barycentric,
    convex_combine,
    solve_critical_crossing,
    solve_crossing,
)
from .phi import Dimensions, PhiValue, TargetSpace, phi

REL_TIE_TOL = 1e-9

TWO = Exponent(HALF)


@dataclass(frozen=True)
class BallSpec:
    """One ball: exponent pair (p, theta) and radius nu > 0."""

    p: Exponent
    theta: Exponent
    nu: float

    def __post_init__(self) -> None:
        if not (self.nu > 0 and math.isfinite(self.nu)):
            raise ValueError(f"radius must be positive and finite, got {self.nu}")

    @property
    def point(self) -> ReciprocalPoint:
        return ReciprocalPoint(self.p.u, self.theta.u)


@dataclass(frozen=True)
class Instance:
    """Dimensions, target space and a nonempty ball family."""

    dims: Dimensions
    target: TargetSpace
    balls: tuple[BallSpec, ...]

    def __post_init__(self) -> None:
        if not self.balls:
            raise ValueError("ball family must be nonempty")
        object.__setattr__(self, "balls", tuple(self.balls))


@dataclass(frozen=True)
class Certificate:
    """Everything needed to re-derive one finite component value.

    `weights` are the exact exponents applied to the participating radii
    (they sum to one); (p, theta) is where the single-ball profile is
    evaluated.  value = prod(nu_i^w_i) * profile.value.
    """

    j: int
    indices: tuple[int, ...]
    weights: tuple[Fraction, ...]
    p: Exponent
    theta: Exponent
    profile: PhiValue
    value: float


@dataclass
class PsiEstimate:
    """The estimate, all eight components, the tie set and the certificates."""

    value: float
    components: tuple[float, ...]
    argmin: tuple[int, ...]
    certificates: dict[int, Certificate] = field(default_factory=dict)


def validate_instance(inst: Instance) -> Instance:
    """Check ranges and coalesce duplicate (p, theta) pairs keeping the smallest radius.

    The intersection with the larger of two concentric balls is redundant,
    so duplicates are merged rather than rejected.
    """
    # Dimensions/TargetSpace/BallSpec already enforce their own invariants on
    # construction; re-deriving the instance here also normalizes duplicates.
    kept: dict[tuple[Fraction, Fraction], int] = {}
    balls: list[BallSpec] = []
    for ball in inst.balls:
        key = (ball.p.u, ball.theta.u)
        if key in kept:
            i = kept[key]
            if ball.nu < balls[i].nu:
                balls[i] = ball
        else:
            kept[key] = len(balls)
            balls.append(ball)
    return Instance(inst.dims, inst.target, tuple(balls))


def _pair_value(
    nu_a: float, nu_b: float, w: Fraction, profile: PhiValue
) -> float:
    return nu_a ** float(1 - w) * nu_b ** float(w) * profile.value


def _component_pairs(inst: Instance, j: int) -> tuple[float, Optional[Certificate]]:
    """Components 1-4: ordered pairs whose segment crosses a coordinate level.

    The crossing runs along the p coordinate (j = 1, 3) or the theta
    coordinate (j = 2, 4), toward the target exponent (j = 1, 2) or toward
    2 (j = 3, 4); the other coordinate is interpolated with the same weight
    and the profile is evaluated at (level, companion) in crossing order.
    """
    on_p = j in (1, 3)
    level = {1: inst.target.q, 2: inst.target.sigma, 3: TWO, 4: TWO}[j]

    best = math.inf
    cert: Optional[Certificate] = None
    for ia, a in enumerate(inst.balls):
        for ib, b in enumerate(inst.balls):
            if ia == ib:
                continue
            if on_p:
                w = solve_crossing(a.p, b.p, level)
            else:
                w = solve_crossing(a.theta, b.theta, level)
            if w is None:
                continue
            if on_p:
                pe, te = level, convex_combine(a.theta, b.theta, w)
            else:
                pe, te = convex_combine(a.p, b.p, w), level
            profile = phi(pe, te, inst.target, inst.dims)
            value = _pair_value(a.nu, b.nu, w, profile)
            if value < best:
                best = value
                cert = Certificate(
                    j, (ia, ib), (1 - w, w), pe, te, profile, value
                )
    return best, cert


def _component_critical(inst: Instance) -> tuple[float, Optional[Certificate]]:
    """Component 5: ordered pairs crossing the critical line strictly inside."""
    target = inst.target
    if target.q.u == HALF or target.sigma.u == HALF:
        return math.inf, None
    best = math.inf
    cert: Optional[Certificate] = None
    for ia, a in enumerate(inst.balls):
        for ib, b in enumerate(inst.balls):
            if ia == ib:
                continue
            hit = solve_critical_crossing(a.point, b.point, target.q, target.sigma)
            if hit is None:
                continue
            w, cross = hit
            pe, te = Exponent(cross.u), Exponent(cross.v)
            profile = phi(pe, te, target, inst.dims)
            value = _pair_value(a.nu, b.nu, w, profile)
            if value < best:
                best = value
                cert = Certificate(
                    5, (ia, ib), (1 - w, w), pe, te, profile, value
                )
    return best, cert


def _component_triples(inst: Instance, j: int) -> tuple[float, Optional[Certificate]]:
    """Components 6-7: unordered triples strictly containing the goal point.

    The scan is vectorized: floating-point barycentric coordinates decide
    clear containment with margins far above their error bound (for a
    denominator above 1e-8 the coordinate error stays below ~3e-7, against
    a 1e-4 margin), uncertain triples fall through to the exact solver, and
    the minimum is re-derived exactly over a small value window so the
    certificate weights and the reported value stay exact-rational-backed.
    """
    target = inst.target
    if j == 6:
        goal = ReciprocalPoint(target.q.u, target.sigma.u)
        pe, te = target.q, target.sigma
    else:
        goal = ReciprocalPoint(HALF, HALF)
        pe, te = TWO, TWO
    profile = phi(pe, te, target, inst.dims)

    points = [b.point for b in inst.balls]
    count = len(points)
    if count < 3:
        return math.inf, None
    combos = np.fromiter(
        (i for c in combinations(range(count), 3) for i in c), dtype=np.int64
    ).reshape(-1, 3)
    uf = np.array([float(p.u) for p in points])
    vf = np.array([float(p.v) for p in points])
    lognu = np.log(np.array([b.nu for b in inst.balls]))
    gu, gv = float(goal.u), float(goal.v)

    ia, ib, ic = combos[:, 0], combos[:, 1], combos[:, 2]
    eu, ev = uf[ib] - uf[ia], vf[ib] - vf[ia]
    fu, fv = uf[ic] - uf[ia], vf[ic] - vf[ia]
    det = eu * fv - ev * fu
    with np.errstate(divide="ignore", invalid="ignore"):
        tb = ((gu - uf[ia]) * fv - (gv - vf[ia]) * fu) / det
        tc = (eu * (gv - vf[ia]) - ev * (gu - uf[ia])) / det
        ta = 1.0 - tb - tc
        tmin = np.minimum(ta, np.minimum(tb, tc))  # NaN (det = 0) falls to uncertain
    decisive = np.abs(det) > 1e-8
    inside = decisive & (tmin > 1e-4)
    uncertain = ~(decisive & ((tmin > 1e-4) | (tmin < -1e-4)))

    values = np.full(len(combos), math.inf)
    values[inside] = np.exp(
        ta[inside] * lognu[ia[inside]]
        + tb[inside] * lognu[ib[inside]]
        + tc[inside] * lognu[ic[inside]]
    ) * profile.value

    def exact_value(t: int):
        taus = barycentric(
            points[combos[t, 0]], points[combos[t, 1]], points[combos[t, 2]], goal
        )
        if taus is None:
            return None, None
        value = profile.value
        for idx, w in zip(combos[t], taus):
            value *= inst.balls[idx].nu ** float(w)
        return value, taus

    for t in np.nonzero(uncertain)[0]:
        value, _ = exact_value(int(t))
        values[t] = math.inf if value is None else value

    finite = np.isfinite(values)
    if not finite.any():
        return math.inf, None
    vmin = float(values[finite].min())
    # Re-derive the minimum exactly over every near-minimal triple; the
    # window dominates the float-scan error, and ascending index order keeps
    # tie-breaking lexicographic.
    best = math.inf
    cert: Optional[Certificate] = None
    for t in np.nonzero(values <= vmin * (1.0 + 1e-5))[0]:
        value, taus = exact_value(int(t))
        if value is None or value >= best:
            continue
        best = value
        cert = Certificate(
            j, tuple(int(i) for i in combos[t]), taus, pe, te, profile, value
        )
    return best, cert


def psi_component(inst: Instance, j: int) -> tuple[float, Optional[Certificate]]:
    """One component value and its minimizing certificate (None when empty).

    Pairs are scanned in ordered index-lexicographic order and triples in
    unordered combination order, so ties resolve deterministically to the
    first minimizer.
    """
    if j == 0:
        best = math.inf
        cert: Optional[Certificate] = None
        for i, ball in enumerate(inst.balls):
            profile = phi(ball.p, ball.theta, inst.target, inst.dims)
            value = ball.nu * profile.value
            if value < best:
                best = value
                cert = Certificate(
                    0, (i,), (Fraction(1),), ball.p, ball.theta, profile, value
                )
        return best, cert
    if j in (1, 2, 3, 4):
        return _component_pairs(inst, j)
    if j == 5:
        return _component_critical(inst)
    if j in (6, 7):
        return _component_triples(inst, j)
    raise ValueError(f"component index must be 0..7, got {j}")


def psi(inst: Instance) -> PsiEstimate:
    """All eight components, the overall minimum, the tie set and certificates."""
    values: list[float] = []
    certificates: dict[int, Certificate] = {}
    for j in range(8):
        value, cert = psi_component(inst, j)
        values.append(value)
        if cert is not None:
            certificates[j] = cert
    best = min(values)
    argmin = tuple(
        j for j, v in enumerate(values) if v <= best * (1.0 + REL_TIE_TOL)
    )
    return PsiEstimate(best, tuple(values), argmin, certificates)


def family_reduce(
    balls: Sequence[BallSpec], delta: Fraction, m: int, k: int
) -> list[BallSpec]:
    """Coalesce a ball family onto a delta-grid of reciprocal points.

    Covers the reciprocal points by half-open axis-aligned squares of side
    delta and keeps, per occupied cell, the ball with the smallest radius.
    Admissible only when (m*k)^delta <= 4/3, which sandwiches the reduced
    intersection M' between M and 2M.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError(f"delta must be positive, got {delta}")
    # (mk)^delta <= 4/3 checked in exact integer arithmetic.
    a, b = delta.numerator, delta.denominator
    if (m * k) ** a * 3**b > 4**b:
        raise ValueError(
            f"delta={delta} too coarse: requires (m*k)^delta <= 4/3 for m*k={m * k}"
        )
    if not balls:
        raise ValueError("ball family must be nonempty")
    kept: dict[tuple[int, int], int] = {}
    chosen: list[BallSpec] = []
    for ball in balls:
        cell = (int(ball.p.u // delta), int(ball.theta.u // delta))
        if cell in kept:
            i = kept[cell]
            if ball.nu < chosen[i].nu:
                chosen[i] = ball
        else:
            kept[cell] = len(chosen)
            chosen.append(ball)
    return chosen
