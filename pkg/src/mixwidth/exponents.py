"""Exact rational arithmetic on reciprocal norm exponents.

A norm exponent p in [1, inf] is stored by its reciprocal u = 1/p in [0, 1],
which turns every interpolation condition used by the estimator into an
affine equation over the rationals.  Everything in this module is exact:
predicates and solvers operate on `fractions.Fraction` values and never
round, so strict conditions (interior weights, collinearity, positivity)
are decided correctly even on inputs that sit on a boundary.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

# Interpolation weights are exact rationals; the admissible interval is
# enforced at each construction site (usually strict interiority in (0, 1)).
Weight = Fraction

HALF = Fraction(1, 2)

#: A violated general-position condition: (condition number 1-4, offending indices).
Violation = tuple[int, tuple[int, ...]]


@dataclass(frozen=True)
class Exponent:
    """A norm exponent p in [1, inf], stored as the exact reciprocal u = 1/p.

    u = 0 encodes p = inf and u = 1 encodes p = 1.
    """

    u: Fraction

    def __post_init__(self) -> None:
        u = Fraction(self.u)
        if not 0 <= u <= 1:
            raise ValueError(f"reciprocal exponent must lie in [0, 1], got {u}")
        object.__setattr__(self, "u", u)

    @classmethod
    def from_p(cls, p) -> "Exponent":
        """Build from the exponent value itself (int, Fraction, float or 'inf')."""
        if p == math.inf or (isinstance(p, str) and p.strip().lower() == "inf"):
            return cls(Fraction(0))
        frac = Fraction(p)
        if frac < 1:
            raise ValueError(f"exponent must be >= 1, got {p}")
        return cls(1 / frac)

    @property
    def is_inf(self) -> bool:
        return self.u == 0

    @property
    def value(self) -> float:
        """The exponent p as a float (math.inf when u = 0)."""
        return math.inf if self.u == 0 else 1.0 / float(self.u)

    def render(self) -> str:
        """Canonical text form: 'inf' or the exponent as a lowest-terms fraction."""
        if self.u == 0:
            return "inf"
        p = 1 / self.u
        if p.denominator == 1:
            return str(p.numerator)
        return f"{p.numerator}/{p.denominator}"

    def __str__(self) -> str:
        return self.render()


TWO = Exponent(HALF)
ONE = Exponent(Fraction(1))
INF = Exponent(Fraction(0))


def parse_exponent(text: str) -> Exponent:
    """Parse 'inf', an integer, a fraction 'a/b' or a decimal into an Exponent.

    Decimal literals are converted to the exact rational they denote
    (e.g. '2.5' -> 5/2), never through a binary float.
    """
    if not isinstance(text, str):
        raise ValueError(f"exponent text must be a string, got {type(text).__name__}")
    t = text.strip().lower()
    if t in ("inf", "infinity"):
        return Exponent(Fraction(0))
    try:
        value = Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"malformed exponent {text!r}") from None
    if value < 1:
        raise ValueError(f"exponent must be >= 1, got {text!r}")
    return Exponent(1 / value)


def convex_combine(a: Exponent, b: Exponent, w: Weight) -> Exponent:
    """The exponent whose reciprocal is (1-w)*a.u + w*b.u, exactly."""
    w = Fraction(w)
    if not 0 <= w <= 1:
        raise ValueError(f"weight must lie in [0, 1], got {w}")
    return Exponent((1 - w) * a.u + w * b.u)


def solve_crossing(a: Exponent, b: Exponent, target: Exponent) -> Optional[Weight]:
    """Weight w with (1-w)*a.u + w*b.u = target.u, if strictly interior.

    Returns None when the segment is degenerate (a.u = b.u), when the first
    endpoint already sits on the target, or when the solution falls outside
    the open interval (0, 1).
    """
    if a.u == b.u or a.u == target.u:
        return None
    w = (target.u - a.u) / (b.u - a.u)
    if 0 < w < 1:
        return w
    return None


@dataclass(frozen=True)
class ReciprocalPoint:
    """A point (1/p, 1/theta) in the unit square of reciprocal exponents."""

    u: Fraction
    v: Fraction

    def __post_init__(self) -> None:
        u, v = Fraction(self.u), Fraction(self.v)
        if not (0 <= u <= 1 and 0 <= v <= 1):
            raise ValueError(f"reciprocal point must lie in [0, 1]^2, got ({u}, {v})")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    @classmethod
    def from_exponents(cls, p: Exponent, theta: Exponent) -> "ReciprocalPoint":
        return cls(p.u, theta.u)


def critical_deviation(pt: ReciprocalPoint, q: Exponent, sigma: Exponent) -> Fraction:
    """Signed deviation of pt from the critical line through (1/q,1/sigma) and (1/2,1/2).

    f(pt) = (pt.u - 1/q)/(1/2 - 1/q) - (pt.v - 1/sigma)/(1/2 - 1/sigma), exact.
    Only defined for q > 2 and sigma > 2.
    """
    if q.u >= HALF or sigma.u >= HALF:
        raise ValueError("critical line undefined: requires q > 2 and sigma > 2")
    return (pt.u - q.u) / (HALF - q.u) - (pt.v - sigma.u) / (HALF - sigma.u)


def solve_critical_crossing(
    a: ReciprocalPoint, b: ReciprocalPoint, q: Exponent, sigma: Exponent
) -> Optional[tuple[Weight, ReciprocalPoint]]:
    """Interior crossing of the segment [a, b] with the critical line.

    Returns (w, crossing) where the crossing point (1-w)*a + w*b has zero
    critical deviation, provided all the strict conditions hold: the first
    endpoint is off the line, w lies in (0, 1), and the crossing sits
    strictly between the target reciprocals and 1/2 in both coordinates.
    Returns None otherwise.
    """
    fa = critical_deviation(a, q, sigma)
    if fa == 0:
        return None
    fb = critical_deviation(b, q, sigma)
    if fa == fb:
        return None
    w = fa / (fa - fb)
    if not 0 < w < 1:
        return None
    cross = ReciprocalPoint((1 - w) * a.u + w * b.u, (1 - w) * a.v + w * b.v)
    if not (q.u < cross.u < HALF and sigma.u < cross.v < HALF):
        return None
    return w, cross


def _cross(ax: Fraction, ay: Fraction, bx: Fraction, by: Fraction) -> Fraction:
    return ax * by - ay * bx


def barycentric(
    a: ReciprocalPoint, b: ReciprocalPoint, c: ReciprocalPoint, target: ReciprocalPoint
) -> Optional[tuple[Weight, Weight, Weight]]:
    """Exact barycentric coordinates of target in triangle (a, b, c).

    Returns (ta, tb, tc) with ta+tb+tc = 1 only when the triangle is
    nondegenerate and all three coordinates are strictly positive (target
    strictly inside); None otherwise.
    """
    det = _cross(b.u - a.u, b.v - a.v, c.u - a.u, c.v - a.v)
    if det == 0:
        return None
    tb = _cross(target.u - a.u, target.v - a.v, c.u - a.u, c.v - a.v) / det
    tc = _cross(b.u - a.u, b.v - a.v, target.u - a.u, target.v - a.v) / det
    ta = 1 - tb - tc
    if ta > 0 and tb > 0 and tc > 0:
        return ta, tb, tc
    return None


def _on_segment(s: ReciprocalPoint, a: ReciprocalPoint, b: ReciprocalPoint) -> bool:
    """True when s lies on the closed segment [a, b] (exact test)."""
    if _cross(b.u - a.u, b.v - a.v, s.u - a.u, s.v - a.v) != 0:
        return False
    return (
        min(a.u, b.u) <= s.u <= max(a.u, b.u)
        and min(a.v, b.v) <= s.v <= max(a.v, b.v)
    )


def is_general_position(
    points: Sequence[ReciprocalPoint], q: Exponent, sigma: Exponent
) -> tuple[bool, list[Violation]]:
    """Check the four non-degeneracy conditions on a family of reciprocal points.

    1. no coordinate equals 1/2, 1/q (u side) or 1/2, 1/sigma (v side), and,
       when q > 2 and sigma > 2, no point lies on the critical line;
    2. all u coordinates distinct and all v coordinates distinct;
    3. none of (1/2,1/2), (1/2,1/sigma), (1/q,1/2), (1/q,1/sigma) lies on a
       segment between two of the points;
    4. no three points collinear.

    Returns (ok, violations) with one entry per violated condition instance.
    Duplicate points are invalid input.
    """
    pts = list(points)
    seen: dict[tuple[Fraction, Fraction], int] = {}
    for i, pt in enumerate(pts):
        key = (pt.u, pt.v)
        if key in seen:
            raise ValueError(f"duplicate points at indices {seen[key]} and {i}")
        seen[key] = i

    critical = q.u < HALF and sigma.u < HALF
    violations: list[Violation] = []

    for i, pt in enumerate(pts):
        if pt.u in (HALF, q.u) or pt.v in (HALF, sigma.u):
            violations.append((1, (i,)))
        elif critical and critical_deviation(pt, q, sigma) == 0:
            violations.append((1, (i,)))

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if pts[i].u == pts[j].u or pts[i].v == pts[j].v:
                violations.append((2, (i, j)))

    specials = (
        ReciprocalPoint(HALF, HALF),
        ReciprocalPoint(HALF, sigma.u),
        ReciprocalPoint(q.u, HALF),
        ReciprocalPoint(q.u, sigma.u),
    )
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            if any(_on_segment(s, pts[i], pts[j]) for s in specials):
                violations.append((3, (i, j)))

    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            for l in range(j + 1, len(pts)):
                if (
                    _cross(
                        pts[j].u - pts[i].u,
                        pts[j].v - pts[i].v,
                        pts[l].u - pts[i].u,
                        pts[l].v - pts[i].v,
                    )
                    == 0
                ):
                    violations.append((4, (i, j, l)))

    return not violations, violations


def perturb_to_general_position(
    points: Sequence[ReciprocalPoint],
    q: Exponent,
    sigma: Exponent,
    m: int,
    k: int,
    seed: int = 0,
) -> list[ReciprocalPoint]:
    """Move the points into general position by tiny rational jitters.

    Every coordinate moves by strictly less than log 2 / log(m*k), the
    magnitude under which each mixed-norm ball changes only by a factor of
    two in either direction.  Points already in general position are
    returned unchanged.  Deterministic for a fixed seed; the jitter step is
    halved on repeated failures.
    """
    if m * k < 2:
        raise ValueError("requires m*k >= 2")
    ok, _ = is_general_position(points, q, sigma)
    if ok:
        return list(points)

    # Rational base step: 1/ceil(2*log2(mk)) <= 1/(2*log2(mk)) < log2/log(mk).
    base = Fraction(1, max(2, math.ceil(2 * math.log2(m * k))))
    rng = random.Random(seed)
    denom = 2**20
    for halving in range(10):
        step = base / 2**halving
        for _ in range(8):
            proposal = []
            for pt in points:
                du = step * Fraction(rng.randint(1, denom - 1), denom)
                dv = step * Fraction(rng.randint(1, denom - 1), denom)
                if rng.random() < 0.5:
                    du = -du
                if rng.random() < 0.5:
                    dv = -dv
                u = pt.u + du
                if not 0 <= u <= 1:
                    u = pt.u - du
                v = pt.v + dv
                if not 0 <= v <= 1:
                    v = pt.v - dv
                proposal.append(ReciprocalPoint(u, v))
            try:
                ok, _ = is_general_position(proposal, q, sigma)
            except ValueError:
                continue
            if ok:
                return proposal
    raise RuntimeError("could not reach general position; input is pathological")
