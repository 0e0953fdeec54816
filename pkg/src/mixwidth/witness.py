"""Lower-bound witness sets built from signed permutations of a block matrix.

The witness body V_{r,l} is the convex hull of all signed row/column
permutations of the r x l indicator block.  Every mixed norm is invariant
under that group and the ball intersection M is convex, so the largest t
with t*V_{r,l} inside M is found by testing the single extreme point: an
exact reduction, not a sampling approximation.  Combining that scale with
the two-branch width bound for V_{r,l} and maximizing over an (r, l) grid
yields a constructive lower-bound witness for the width of M.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from .exponents import Exponent
from .psi import Instance

_REL_BRANCH_TOL = 1e-9


@dataclass(frozen=True)
class GroupElement:
    """A signed permutation of rows and columns (entries of the symmetry group)."""

    row_perm: tuple[int, ...]
    col_perm: tuple[int, ...]
    row_signs: tuple[int, ...]
    col_signs: tuple[int, ...]

    def __post_init__(self) -> None:
        for perm in (self.row_perm, self.col_perm):
            if sorted(perm) != list(range(len(perm))):
                raise ValueError(f"not a permutation: {perm}")
        for signs in (self.row_signs, self.col_signs):
            if any(s not in (-1, 1) for s in signs):
                raise ValueError(f"signs must be +-1: {signs}")
        if len(self.row_perm) != len(self.row_signs) or len(self.col_perm) != len(
            self.col_signs
        ):
            raise ValueError("permutation and sign lengths must match")

    @classmethod
    def identity(cls, m: int, k: int) -> "GroupElement":
        return cls(tuple(range(m)), tuple(range(k)), (1,) * m, (1,) * k)

    @classmethod
    def random(cls, m: int, k: int, rng: np.random.Generator) -> "GroupElement":
        return cls(
            tuple(rng.permutation(m).tolist()),
            tuple(rng.permutation(k).tolist()),
            tuple(rng.choice((-1, 1), size=m).tolist()),
            tuple(rng.choice((-1, 1), size=k).tolist()),
        )

    def compose(self, other: "GroupElement") -> "GroupElement":
        """The element g with g(x) = self(other(x))."""
        rp = tuple(other.row_perm[i] for i in self.row_perm)
        cp = tuple(other.col_perm[j] for j in self.col_perm)
        rs = tuple(
            self.row_signs[i] * other.row_signs[self.row_perm[i]]
            for i in range(len(self.row_perm))
        )
        cs = tuple(
            self.col_signs[j] * other.col_signs[self.col_perm[j]]
            for j in range(len(self.col_perm))
        )
        return GroupElement(rp, cp, rs, cs)


@dataclass(frozen=True)
class WitnessSpec:
    """Block size (r, l) and a positive scale for one witness body t*V_{r,l}."""

    r: int
    l: int
    t: float

    def __post_init__(self) -> None:
        if self.r < 1 or self.l < 1:
            raise ValueError(f"block sizes must be positive, got ({self.r}, {self.l})")
        if not self.t > 0:
            raise ValueError(f"scale must be positive, got {self.t}")


def v_extreme_point(m: int, k: int, r: int, l: int) -> np.ndarray:
    """The m x k matrix with ones on the leading r x l block and zeros elsewhere."""
    if not (1 <= r <= m and 1 <= l <= k):
        raise ValueError(f"need 1 <= r <= m and 1 <= l <= k, got r={r}, l={l}")
    e = np.zeros((m, k))
    e[:r, :l] = 1.0
    return e


def group_apply(g: GroupElement, x) -> np.ndarray:
    """y[i, j] = row_sign[i] * col_sign[j] * x[row_perm[i], col_perm[j]]."""
    a = np.asarray(x, dtype=float)
    if a.shape != (len(g.row_perm), len(g.col_perm)):
        raise ValueError(
            f"shape mismatch: matrix {a.shape}, element "
            f"({len(g.row_perm)}, {len(g.col_perm)})"
        )
    y = a[np.ix_(g.row_perm, g.col_perm)]
    return np.asarray(g.row_signs, float)[:, None] * np.asarray(g.col_signs, float)[None, :] * y


def v_inclusion_scale(balls: Sequence, r: int, l: int) -> float:
    """Largest t with t*V_{r,l} inside the ball intersection.

    By group invariance and convexity this equals the largest t with the
    single extreme point inside: min over balls of nu * r^{-1/p} * l^{-1/theta}.
    """
    if not balls:
        raise ValueError("need a nonempty ball family")
    if r < 1 or l < 1:
        raise ValueError(f"block sizes must be positive, got ({r}, {l})")
    return min(
        b.nu * r ** -float(b.p.u) * l ** -float(b.theta.u) for b in balls
    )


def v_width_lower_bound(
    m: int, k: int, r: int, l: int, n: int, q: Exponent, sigma: Exponent
) -> float:
    """Two-branch width lower-bound formula for the witness body V_{r,l}.

    Returns r^{1/q} * l^{1/sigma} while n stays below the crossover
    m^{2/q} k^{2/sigma} r^{1-2/q} l^{1-2/sigma}, and
    n^{-1/2} m^{1/q} k^{1/sigma} r^{1/2} l^{1/2} beyond it; both branches
    coincide at the crossover, which is asserted when n lands there.
    """
    if not (1 <= r <= m and 1 <= l <= k):
        raise ValueError(f"need 1 <= r <= m and 1 <= l <= k, got r={r}, l={l}")
    if n < 0 or 2 * n > m * k:
        raise ValueError(f"need 0 <= n <= m*k/2, got n={n}")
    uq, vs = float(q.u), float(sigma.u)
    crossover = m ** (2 * uq) * k ** (2 * vs) * r ** (1 - 2 * uq) * l ** (1 - 2 * vs)
    low = r**uq * l**vs
    high = (
        math.inf
        if n == 0
        else n**-0.5 * m**uq * k**vs * math.sqrt(r) * math.sqrt(l)
    )
    if abs(n - crossover) <= 1e-9 * max(1.0, crossover):
        if abs(low - high) > _REL_BRANCH_TOL * max(low, high):
            raise ArithmeticError(
                f"branch mismatch at the crossover: {low} vs {high}"
            )
    return low if n <= crossover else high


def _axis_grid(limit: int) -> list[int]:
    """All block sizes up to 64, a logarithmic subset beyond."""
    if limit <= 64:
        return list(range(1, limit + 1))
    vals = {1, limit}
    vals.update(
        min(limit, max(1, round(limit ** (i / 128.0)))) for i in range(129)
    )
    return sorted(vals)


def best_witness_lower_bound(inst: Instance) -> tuple[float, int, int]:
    """Best witness lower bound over the (r, l) grid, with its argmax.

    LB(r, l) = v_inclusion_scale(balls, r, l) * v_width_lower_bound(...);
    ties resolve to the smallest r, then the smallest l.
    """
    m, k, n = inst.dims.m, inst.dims.k, inst.dims.n
    q, sigma = inst.target.q, inst.target.sigma
    best, best_r, best_l = -math.inf, 1, 1
    for r in _axis_grid(m):
        for l in _axis_grid(k):
            lb = v_inclusion_scale(inst.balls, r, l) * v_width_lower_bound(
                m, k, r, l, n, q, sigma
            )
            if lb > best:
                best, best_r, best_l = lb, r, l
    return best, best_r, best_l


def solve_rl_loglinear(
    ratio_ab: float,
    ratio_bg: float,
    exps: tuple,
) -> Optional[tuple[float, float]]:
    """Solve ratio_ab = r^e1 * l^e2, ratio_bg = r^e3 * l^e4 for positive (r, l).

    `exps` holds the four reciprocal-exponent differences (e1, e2, e3, e4).
    The rows (e1, e2) and (e3, e4) must be linearly independent; dependence
    is detected exactly and yields None.  The returned (r, l) are positive
    reals, not rounded to block sizes.
    """
    if not (ratio_ab > 0 and ratio_bg > 0):
        raise ValueError("ratios must be positive")
    e1, e2, e3, e4 = (Fraction(e) for e in exps)
    det = e1 * e4 - e2 * e3
    if det == 0:
        return None
    la, lb = math.log(ratio_ab), math.log(ratio_bg)
    fdet = float(det)
    log_r = (la * float(e4) - float(e2) * lb) / fdet
    log_l = (float(e1) * lb - la * float(e3)) / fdet
    return math.exp(log_r), math.exp(log_l)
