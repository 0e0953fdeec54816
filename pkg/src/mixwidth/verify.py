"""Randomized invariant suites, shared by the CLI verify mode and the tests.

Each suite draws seeded random inputs, checks one invariant of the library
at its stated tolerance, and reports the trial count, failures and worst
observed slack.  A suite name can be passed as `corrupt` to deliberately
skew its comparison; that is a self-test hook proving the harness detects
real deviations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .exponents import HALF, Exponent
from .norms import (
    corollary_check,
    interpolation_check,
    membership,
    mixed_norm,
)
from .phi import Dimensions, TargetSpace, phi
from .psi import BallSpec, Instance, psi, validate_instance
from .witness import GroupElement, group_apply, v_extreme_point, v_inclusion_scale


@dataclass
class SuiteResult:
    name: str
    trials: int
    failures: int
    worst_slack: float

    @property
    def passed(self) -> bool:
        return self.failures == 0


# ---------------------------------------------------------------------------
# random generators
# ---------------------------------------------------------------------------

_DEN = 1024


def _rand_target(rng) -> TargetSpace:
    uq = Fraction(int(rng.integers(1, _DEN // 2 + 1)), _DEN)
    vs = Fraction(int(rng.integers(1, _DEN // 2 + 1)), _DEN)
    return TargetSpace(Exponent(uq), Exponent(vs))


def _rand_balls(rng, count: int) -> list[BallSpec]:
    balls: list[BallSpec] = []
    seen = set()
    while len(balls) < count:
        u = Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        v = Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        if (u, v) in seen:
            continue
        seen.add((u, v))
        nu = float(np.exp(rng.uniform(-1.5, 1.5)))
        balls.append(BallSpec(Exponent(u), Exponent(v), nu))
    return balls


def _rand_instance(rng, max_balls: int = 4, dim_max: int = 16) -> Instance:
    m = int(rng.integers(1, dim_max + 1))
    k = int(rng.integers(1, dim_max + 1))
    n = int(rng.integers(0, m * k // 2 + 1))
    balls = _rand_balls(rng, int(rng.integers(1, max_balls + 1)))
    return validate_instance(
        Instance(Dimensions(m, k, n), _rand_target(rng), tuple(balls))
    )


def _rand_exponent(rng) -> Exponent:
    return Exponent(Fraction(int(rng.integers(0, _DEN + 1)), _DEN))


def _rel_gap(a: float, b: float) -> float:
    """Relative gap |a - b| / max(|a|, |b|); 0 when both are infinite."""
    if math.isinf(a) and math.isinf(b):
        return 0.0
    if math.isinf(a) or math.isinf(b):
        return math.inf
    hi = max(abs(a), abs(b))
    return abs(a - b) / hi if hi > 0 else 0.0


# ---------------------------------------------------------------------------
# suites
# ---------------------------------------------------------------------------


def _suite_homogeneity(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        inst = _rand_instance(rng)
        c = float(np.exp(rng.uniform(-2.0, 2.0)))
        scaled = Instance(
            inst.dims,
            inst.target,
            tuple(BallSpec(b.p, b.theta, c * b.nu) for b in inst.balls),
        )
        slack = abs(gain * psi(scaled).value / (c * psi(inst).value) - 1.0)
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("psi-homogeneity", trials, failures, worst)


def _suite_monotone_n(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        inst = _rand_instance(rng)
        half = inst.dims.m * inst.dims.k // 2
        n1 = int(rng.integers(0, half + 1))
        n2 = int(rng.integers(n1, half + 1))
        v1 = psi(Instance(Dimensions(inst.dims.m, inst.dims.k, n1), inst.target, inst.balls)).value
        v2 = psi(Instance(Dimensions(inst.dims.m, inst.dims.k, n2), inst.target, inst.balls)).value
        slack = max(0.0, gain * v2 / v1 - 1.0)
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("psi-monotone-n", trials, failures, worst)


def _suite_monotone_radius(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        inst = _rand_instance(rng)
        i = int(rng.integers(0, len(inst.balls)))
        grown = list(inst.balls)
        grown[i] = BallSpec(
            grown[i].p, grown[i].theta, grown[i].nu * float(np.exp(rng.uniform(0.0, 1.0)))
        )
        v0 = psi(inst).value
        v1 = psi(Instance(inst.dims, inst.target, tuple(grown))).value
        slack = max(0.0, gain * v0 / v1 - 1.0)  # v1 >= v0 expected
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("psi-monotone-radius", trials, failures, worst)


def _suite_ball_added(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        inst = _rand_instance(rng, max_balls=3)
        extra = _rand_balls(rng, 1)[0]
        bigger = validate_instance(
            Instance(inst.dims, inst.target, inst.balls + (extra,))
        )
        v0 = psi(inst).value
        v1 = psi(bigger).value
        slack = max(0.0, gain * v1 / v0 - 1.0)  # v1 <= v0 expected
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("psi-ball-added", trials, failures, worst)


_TRANSPOSE_MAP = (0, 2, 1, 4, 3, 5, 6, 7)


def _suite_transpose(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        inst = _rand_instance(rng)
        swapped = Instance(
            Dimensions(inst.dims.k, inst.dims.m, inst.dims.n),
            TargetSpace(inst.target.sigma, inst.target.q),
            tuple(BallSpec(b.theta, b.p, b.nu) for b in inst.balls),
        )
        a, b = psi(inst), psi(swapped)
        slack = abs(gain * b.value / a.value - 1.0)
        for j in range(8):
            slack = max(slack, _rel_gap(a.components[j], b.components[_TRANSPOSE_MAP[j]]))
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("psi-transpose", trials, failures, worst)


def _reference_branches(
    u: Fraction, v: Fraction, target: TargetSpace, dims: Dimensions
) -> dict[int, float]:
    """Straight-line re-evaluation of every applicable branch formula."""
    uq, vs = target.q.u, target.sigma.u
    m, k, n = float(dims.m), float(dims.k), dims.n
    rn = math.inf if n == 0 else 1.0 / math.sqrt(n)

    def om(x: Fraction, lvl: Fraction) -> float:
        if lvl == HALF:
            return 1.0
        return min(float((x - lvl) / (HALF - lvl)), 1.0)

    out: dict[int, float] = {}
    if u <= uq and v <= vs:
        out[1] = m ** float(uq - u) * k ** float(vs - v)
    if u <= uq and v >= vs:
        a = m ** float(uq - u)
        out[2] = min(a, a * (rn * m**0.5 * k ** float(vs)) ** om(v, vs))
    if u >= uq and v <= vs:
        a = k ** float(vs - v)
        out[3] = min(a, a * (rn * m ** float(uq) * k**0.5) ** om(u, uq))
    if uq <= u <= HALF and v >= vs and om(u, uq) <= om(v, vs):
        out[4] = min(
            1.0,
            (rn * m ** float(uq) * k ** float(vs)) ** om(u, uq),
            m ** float(uq - u) * (rn * m**0.5 * k ** float(vs)) ** om(v, vs),
        )
    if vs <= v <= HALF and u >= uq and om(v, vs) <= om(u, uq):
        out[5] = min(
            1.0,
            (rn * m ** float(uq) * k ** float(vs)) ** om(v, vs),
            k ** float(vs - v) * (rn * m ** float(uq) * k**0.5) ** om(u, uq),
        )
    if u >= HALF and v >= HALF:
        out[6] = min(1.0, rn * m ** float(uq) * k ** float(vs))
    return out


def _suite_branch_overlap(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        target = _rand_target(rng)
        uq, vs = target.q.u, target.sigma.u
        m = int(rng.integers(1, 17))
        k = int(rng.integers(1, 17))
        dims = Dimensions(m, k, int(rng.integers(0, m * k // 2 + 1)))
        # Land exactly on a region boundary.
        kind = int(rng.integers(0, 5))
        ur = Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        vr = Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        if kind == 0:
            u, v = uq, vr
        elif kind == 1:
            u, v = ur, vs
        elif kind == 2:
            u, v = HALF, vr
        elif kind == 3:
            u, v = ur, HALF
        else:
            w = Fraction(int(rng.integers(1, _DEN)), _DEN)
            u = uq + w * (HALF - uq)
            v = vs + w * (HALF - vs)
        got = phi(Exponent(u), Exponent(v), target, dims)
        ref = _reference_branches(u, v, target, dims)
        slack = 0.0
        for branch, val in ref.items():
            slack = max(slack, _rel_gap(gain * got.value, val))
            if branch not in got.branches:
                slack = math.inf
        worst = max(worst, slack)
        failures += slack > 1e-9
    return SuiteResult("phi-branch-overlap", trials, failures, worst)


def _rand_weight(rng) -> Fraction:
    return Fraction(int(rng.integers(0, _DEN + 1)), _DEN)


def _suite_interpolation(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 9))
        k = int(rng.integers(1, 9))
        x = rng.standard_normal((m, k))
        s1 = (_rand_exponent(rng), _rand_exponent(rng))
        s2 = (_rand_exponent(rng), _rand_exponent(rng))
        lhs, rhs, _ = interpolation_check(x, s1, s2, _rand_weight(rng))
        slack = max(0.0, gain * lhs / rhs - 1.0) if rhs > 0 else 0.0
        a = Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        b = (1 - a) * Fraction(int(rng.integers(0, _DEN + 1)), _DEN)
        specs = [
            ((_rand_exponent(rng), _rand_exponent(rng)), a),
            ((_rand_exponent(rng), _rand_exponent(rng)), b),
            ((_rand_exponent(rng), _rand_exponent(rng)), 1 - a - b),
        ]
        lhs, rhs, _ = corollary_check(x, specs)
        if rhs > 0:
            slack = max(slack, gain * lhs / rhs - 1.0)
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("interpolation-inequality", trials, failures, worst)


def _suite_gamma_invariance(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 9))
        k = int(rng.integers(1, 9))
        x = rng.standard_normal((m, k))
        g = GroupElement.random(m, k, rng)
        p, theta = _rand_exponent(rng), _rand_exponent(rng)
        a = mixed_norm(x, p, theta)
        b = mixed_norm(group_apply(g, x), p, theta)
        slack = _rel_gap(gain * a, b)
        worst = max(worst, slack)
        failures += slack > 1e-14
    return SuiteResult("gamma-invariance", trials, failures, worst)


def _suite_inclusion_scale(rng, trials: int, gain: float) -> SuiteResult:
    failures, worst = 0, 0.0
    for _ in range(trials):
        m = int(rng.integers(1, 17))
        k = int(rng.integers(1, 17))
        balls = _rand_balls(rng, int(rng.integers(1, 5)))
        r = int(rng.integers(1, m + 1))
        l = int(rng.integers(1, k + 1))
        t = v_inclusion_scale(balls, r, l)
        _, ratio = membership(gain * t * v_extreme_point(m, k, r, l), balls)
        slack = abs(ratio - 1.0)
        worst = max(worst, slack)
        failures += slack > 1e-12
    return SuiteResult("inclusion-scale-tightness", trials, failures, worst)


_SUITES: dict[str, Callable] = {
    "psi-homogeneity": _suite_homogeneity,
    "psi-monotone-n": _suite_monotone_n,
    "psi-monotone-radius": _suite_monotone_radius,
    "psi-ball-added": _suite_ball_added,
    "psi-transpose": _suite_transpose,
    "phi-branch-overlap": _suite_branch_overlap,
    "interpolation-inequality": _suite_interpolation,
    "gamma-invariance": _suite_gamma_invariance,
    "inclusion-scale-tightness": _suite_inclusion_scale,
}

SUITE_NAMES = tuple(_SUITES)

_CORRUPT_GAIN = 1.0 + 5e-3


def run_suites(
    seed: int = 0, trials: int = 500, corrupt: Optional[str] = None
) -> list[SuiteResult]:
    """Run every suite with per-suite seeded generators.

    `corrupt` names a suite whose comparison is deliberately skewed by half
    a percent (harness self-test; the named suite must then fail).
    """
    if corrupt is not None and corrupt not in _SUITES:
        raise ValueError(f"unknown suite {corrupt!r}; choose from {SUITE_NAMES}")
    results = []
    for idx, (name, fn) in enumerate(_SUITES.items()):
        rng = np.random.default_rng([seed, idx])
        gain = _CORRUPT_GAIN if name == corrupt else 1.0
        results.append(fn(rng, trials, gain))
    return results
