"""Independent ground truths for validating the width order estimates.

Two exact classical width formulas cover special cases (the sup-norm ball
and the Euclidean ball), and a seeded two-level heuristic estimates widths
of general ball intersections at desk scale: the outer level minimizes over
n-dimensional subspaces (coordinate and random orthonormal frames refined
by perturbation descent), the inner level maximizes the best-approximation
distance over the body using structured extreme points t*gamma(e_{r,l}),
random boundary samples, and a gradient ascent that rescales back to the
boundary.  The inner maximization can fall short of the true supremum, so
the heuristic value is an upper estimate of the width only up to that
shortfall; it is a consistency oracle, not a certified computation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .exponents import Exponent
from .norms import membership, mixed_norm, sample_boundary
from .witness import GroupElement, group_apply, v_extreme_point, v_inclusion_scale


@dataclass(frozen=True)
class WidthSample:
    """A width value with its provenance (exact formula or stochastic search)."""

    estimate: float
    kind: str  # "exact" | "heuristic"
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.kind not in ("exact", "heuristic"):
            raise ValueError(f"kind must be 'exact' or 'heuristic', got {self.kind!r}")
        if self.kind == "exact" and self.metadata:
            raise ValueError("exact samples carry no stochastic metadata")


def exact_width_linf(N: int, n: int, s: Exponent) -> float:
    """Exact n-width of the unit sup-norm ball in l_s^N: (N - n)^(1/s)."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    if n == N:
        return 0.0
    return float(N - n) ** float(s.u)


def exact_width_euclidean_ball(N: int, n: int) -> float:
    """Exact n-width of the unit Euclidean ball in Euclidean norm: 1 for n < N."""
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= N, got n={n}, N={N}")
    return 1.0 if n < N else 0.0


def sup_norm_over_M(
    balls: Sequence, m: int, k: int, q: Exponent, sigma: Exponent, seed: int = 0,
    samples: int = 64,
) -> float:
    """Largest (q, sigma) norm over the ball intersection (the 0-width).

    Closed form for a single ball; for intersections, a lower estimate from
    the structured points t*e_{r,l} over the full (r, l) grid plus random
    boundary samples.
    """
    if not balls:
        raise ValueError("need a nonempty ball family")
    uq, vs = float(q.u), float(sigma.u)
    if len(balls) == 1:
        b = balls[0]
        return b.nu * m ** max(0.0, uq - float(b.p.u)) * k ** max(
            0.0, vs - float(b.theta.u)
        )
    best = 0.0
    for r in range(1, m + 1):
        for l in range(1, k + 1):
            best = max(best, v_inclusion_scale(balls, r, l) * r**uq * l**vs)
    for i in range(samples):
        x = sample_boundary(balls, m, k, seed=seed + i)
        best = max(best, mixed_norm(x, q, sigma))
    return best


# ---------------------------------------------------------------------------
# heuristic width estimate
# ---------------------------------------------------------------------------


def _cols_norm(R: np.ndarray, m: int, k: int, qf: float, sf: float) -> np.ndarray:
    """(q, sigma) mixed norm of each column of a stack of flattened matrices."""
    A = np.abs(R).reshape(m, k, -1)
    inner = (A**qf).sum(axis=0) ** (1.0 / qf)
    return (inner**sf).sum(axis=0) ** (1.0 / sf)


def _norm_grad(R: np.ndarray, m: int, k: int, qf: float, sf: float):
    """Gradient of the mixed norm at each column, and the norms themselves."""
    A = R.reshape(m, k, -1)
    X = np.abs(A)
    inner = (X**qf).sum(axis=0) ** (1.0 / qf)
    tot = (inner**sf).sum(axis=0) ** (1.0 / sf)
    with np.errstate(divide="ignore", invalid="ignore"):
        G = (
            np.sign(A)
            * X ** (qf - 1.0)
            * inner[None, :, :] ** (sf - qf)
            * tot[None, None, :] ** (1.0 - sf)
        )
    G = np.where(np.isfinite(G), G, 0.0)
    return G.reshape(R.shape), tot


def _dist_to_span(
    B: np.ndarray, X: np.ndarray, m: int, k: int, qf: float, sf: float, iters: int
):
    """Distance of each column of X to span(B) in the mixed norm.

    Exact for the Euclidean case; otherwise a monotone batched descent on
    the coefficients, warm-started at the Euclidean projection, so the
    returned values never undershoot the true distances.
    Returns (distances, residuals).
    """
    if B.shape[1] == 0:
        R = X.copy()
        return _cols_norm(R, m, k, qf, sf), R
    C = B.T @ X
    R = X - B @ C
    if qf == 2.0 and sf == 2.0:
        return np.sqrt((R * R).sum(axis=0)), R
    f = _cols_norm(R, m, k, qf, sf)
    step = np.full(X.shape[1], 0.5)
    for _ in range(iters):
        G, _ = _norm_grad(R, m, k, qf, sf)
        D = B.T @ G  # steepest-descent direction for the coefficients is +D
        gn = (D * D).sum(axis=0)
        Ct = C + step * D
        Rt = X - B @ Ct
        ft = _cols_norm(Rt, m, k, qf, sf)
        ok = ft <= f - 1e-4 * step * gn
        C = np.where(ok, Ct, C)
        R = np.where(ok[None, :], Rt, R)
        f = np.where(ok, ft, f)
        step = np.where(ok, np.minimum(step * 1.25, 4.0), step * 0.5)
    return f, R


def _candidate_points(
    balls: Sequence, m: int, k: int, rng: np.random.Generator, boundary: int = 32
) -> np.ndarray:
    """Structured near-extreme points plus random boundary samples, flattened."""
    pts = []
    for r in range(1, m + 1):
        for l in range(1, k + 1):
            t = v_inclusion_scale(balls, r, l)
            e = v_extreme_point(m, k, r, l)
            pts.append(t * e)
            for _ in range(2):
                g = GroupElement.random(m, k, rng)
                pts.append(t * group_apply(g, e))
    for _ in range(boundary // 2):
        s = rng.choice((-1.0, 1.0), size=(m, k))
        _, ratio = membership(s, balls)
        pts.append(s / ratio)
    for _ in range(boundary):
        pts.append(sample_boundary(balls, m, k, seed=int(rng.integers(0, 2**31))))
    return np.stack([p.reshape(-1) for p in pts], axis=1)


def _linear_maximizer(g: np.ndarray, m: int, k: int, p, theta) -> np.ndarray:
    """argmax of <z, g> over the unit (p, theta) ball (a dual-norm extreme point)."""
    G = g.reshape(m, k)
    A = np.abs(G)
    # inner maximizers per column and their values c_j (the dual column norms)
    if p.u == 1:  # p = 1: concentrate on the largest row
        a = np.zeros_like(G)
        rows = A.argmax(axis=0)
        cols = np.arange(k)
        a[rows, cols] = np.sign(G[rows, cols])
        c = A.max(axis=0)
    elif p.u == 0:  # p = inf: a sign vector
        a = np.sign(G)
        c = A.sum(axis=0)
    else:
        pf = 1.0 / float(p.u)
        pd = pf / (pf - 1.0)
        c = (A**pd).sum(axis=0) ** (1.0 / pd)
        a = np.zeros_like(G)
        nz = c > 0
        a[:, nz] = np.sign(G[:, nz]) * (A[:, nz] / c[nz]) ** (pd - 1.0)
    # outer weights s with ||s||_theta = 1 maximizing <s, c>
    if theta.u == 1:
        s = np.zeros(k)
        s[c.argmax()] = 1.0
    elif theta.u == 0:
        s = np.ones(k)
    else:
        tf = 1.0 / float(theta.u)
        td = tf / (tf - 1.0)
        cd = (c**td).sum() ** (1.0 / td)
        s = (c / cd) ** (td - 1.0) if cd > 0 else np.zeros(k)
    return (a * s[None, :]).reshape(-1)


def _subspace_starts(
    N: int, n: int, restarts: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Coordinate-subspace seeds first, then random orthonormal frames."""
    if n == 0:
        return [np.zeros((N, 0))]
    eye = np.eye(N)
    starts = [eye[:, :n].copy()]
    for _ in range(min(restarts // 2, 16) - 1):
        idx = np.sort(rng.permutation(N)[:n])
        starts.append(eye[:, idx].copy())
    while len(starts) < restarts:
        Q, _ = np.linalg.qr(rng.standard_normal((N, n)))
        starts.append(Q)
    return starts[:restarts]


def _ascend(
    B: np.ndarray,
    X: np.ndarray,
    dists: np.ndarray,
    balls: Sequence,
    m: int,
    k: int,
    qf: float,
    sf: float,
    rng: np.random.Generator,
    gd_iters: int,
    steps: int = 30,
    starts: int = 6,
) -> float:
    """Sharpen the inner maximum by ascent that stays on the boundary.

    Each step proposes a gradient move, a jump along the residual direction,
    and conditional-gradient moves toward each ball's linear maximizer of
    the current distance gradient; proposals are rescaled to the boundary
    and the best improvement is kept.
    """

    def to_boundary(y):
        _, ratio = membership(y.reshape(m, k), balls)
        if not ratio > 0:
            return None
        return y / ratio

    best = float(dists.max())
    for idx in np.argsort(-dists)[:starts]:
        x = X[:, idx].copy()
        d, R = _dist_to_span(B, x[:, None], m, k, qf, sf, gd_iters)
        d, r = float(d[0]), R[:, 0]
        stall = 0
        for t in range(steps):
            g, _ = _norm_grad(r[:, None], m, k, qf, sf)
            g = g[:, 0]
            if not np.any(g):
                g = rng.standard_normal(len(x))
            cands = []
            y = to_boundary(x + 0.5 * 0.9**t * np.linalg.norm(x) * g / np.linalg.norm(g))
            if y is not None:
                cands.append(y)
            y = to_boundary(r)
            if y is not None:
                cands.append(y)
            for b in balls:
                z = to_boundary(b.nu * _linear_maximizer(g, m, k, b.p, b.theta))
                if z is None:
                    continue
                for gamma in (1.0, 0.5, 0.2):
                    y = to_boundary((1.0 - gamma) * x + gamma * z)
                    if y is not None:
                        cands.append(y)
            if not cands:
                break
            Y = np.stack(cands, axis=1)
            dY, RY = _dist_to_span(B, Y, m, k, qf, sf, gd_iters)
            j = int(np.argmax(dY))
            if dY[j] > d * (1.0 + 1e-12):
                d, x, r = float(dY[j]), Y[:, j], RY[:, j]
                stall = 0
            else:
                stall += 1
                if stall >= 4:
                    break
        best = max(best, d)
    return best


def numeric_width_estimate(
    balls: Sequence,
    m: int,
    k: int,
    n: int,
    q: Exponent,
    sigma: Exponent,
    restarts: int = 64,
    iters: int = 200,
    seed: int = 0,
) -> WidthSample:
    """Seeded heuristic estimate of the n-width of the intersection (desk scale).

    Documented bias: the reported value is the sharpened inner maximum for
    the best subspace found, which lower-bounds the supremum over the body
    for that subspace; as an estimate of the width it errs upward only by
    the outer search and downward only by the inner-maximization shortfall.
    """
    if restarts <= 0 or iters <= 0:
        raise ValueError("budget parameters must be positive")
    N = m * k
    if N > 16:
        raise ValueError(f"desk scale only: m*k <= 16, got {N}")
    if not 0 <= n <= N:
        raise ValueError(f"need 0 <= n <= m*k, got n={n}")
    if not balls:
        raise ValueError("need a nonempty ball family")
    qf, sf = q.value, sigma.value
    if not (math.isfinite(qf) and math.isfinite(sf)):
        raise ValueError("q and sigma must be finite")
    meta = {"restarts": restarts, "iterations": iters, "seed": seed}
    if n == N:
        return WidthSample(0.0, "heuristic", meta)

    rng = np.random.default_rng(seed)
    X = _candidate_points(balls, m, k, rng)
    s0 = float(_cols_norm(X, m, k, qf, sf).max())
    if s0 == 0.0:
        return WidthSample(0.0, "heuristic", meta)
    Xn = X / s0  # normalized copy keeps the search scale-equivariant

    euclid = qf == 2.0 and sf == 2.0
    gd_search = 0 if euclid else 25
    gd_final = 0 if euclid else 120

    decay = (1e-3 / 0.5) ** (1.0 / max(iters - 1, 1))
    scored: list[tuple[float, np.ndarray]] = []
    for B in _subspace_starts(N, n, restarts, rng):
        f = float(_dist_to_span(B, Xn, m, k, qf, sf, gd_search)[0].max())
        if B.shape[1] > 0:
            eta = 0.5
            for _ in range(iters):
                Q, _ = np.linalg.qr(B + eta * rng.standard_normal(B.shape))
                ft = float(_dist_to_span(Q, Xn, m, k, qf, sf, gd_search)[0].max())
                if ft < f:
                    B, f = Q, ft
                eta *= decay
        scored.append((f, B))
    scored.sort(key=lambda t: t[0])

    finalists = [B for _, B in scored[:3]]
    if n > 0:
        finalists.append(np.eye(N)[:, :n])  # coordinate frame, always re-checked
    best = math.inf
    for B in finalists:
        d, _ = _dist_to_span(B, X, m, k, qf, sf, gd_final)
        value = _ascend(B, X, d, balls, m, k, qf, sf, rng, gd_final)
        best = min(best, value)
    return WidthSample(best, "heuristic", meta)
