"""Crossings of 3K-blocks by short edges, bridges, and escape events.

A 3K-block B^i (the window [3K(i-1), 3K(i+1))) is K-crossed when some
x < 3Ki - 3K and y >= 3Ki + 3K lie in one cluster of the subgraph of
edges of length at most K.  An open edge is a bridge when, with the edge
itself removed, both endpoints are still locally connected to distance
R.  These predicates combine into scale-coupling diagnostics for the
probability that a block stays uncrossed.

Paths for crossing checks are confined to an explicit window; enlarging
the window can only add crossings, so uncrossed-probability estimates
here are conservative upper bounds for any wider-window reading.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .model import Interval, ModelParams, edge_prob, tail_sum, validate_params
from .sampler import Configuration, sample_config
from .clusters import _uf_roots, clusters_in, connected_to_distance
from .stats import EstimatorResult, bernoulli_result


@dataclass(frozen=True)
class CrossSpec:
    """3K-block index i at inner scale K."""

    K: int
    i: int

    def block(self) -> Interval:
        return Interval(3 * self.K * (self.i - 1), 3 * self.K * (self.i + 1))


@dataclass(frozen=True)
class BridgeVerdict:
    edge: tuple[int, int]
    R: int
    is_bridge: bool
    length_ok: bool


def is_k_crossed(config: Configuration, spec: CrossSpec, window: Interval) -> bool:
    """Whether some x < 3Ki-3K and y >= 3Ki+3K (both in ``window``) are
    joined by open edges of length <= K inside the window."""
    k, c3 = spec.K, 3 * spec.K * spec.i
    need = Interval(c3 - 5 * k, c3 + 5 * k)
    if not window.contains_interval(need):
        raise ValueError(f"window {window} too small: must contain {need}")
    if not config.box.contains_interval(window):
        raise ValueError(f"window {window} exceeds sampled box {config.box}")

    lt, rt = c3 - 3 * k, c3 + 3 * k
    a = window.lo - config.box.lo
    b = window.hi - 1 - config.box.lo
    nn_idx = np.nonzero(config.nn_open[a:b])[0]  # slice-relative = window-local
    le = config.long_edges
    mask = (le[:, 0] >= window.lo) & (le[:, 1] < window.hi) & (le[:, 1] - le[:, 0] <= k)
    eu = np.concatenate([nn_idx, le[mask, 0] - window.lo])
    ev = np.concatenate([nn_idx + 1, le[mask, 1] - window.lo])
    roots = _uf_roots(len(window), eu, ev)

    left_roots = roots[: lt - window.lo]
    right_roots = roots[rt - window.lo :]
    if left_roots.size == 0 or right_roots.size == 0:
        return False
    return np.intersect1d(left_roots, right_roots).size > 0


def estimate_uncrossed(
    k: int, params: ModelParams, window_halfwidth: int, n: int, seed: int
) -> EstimatorResult:
    """Monte Carlo estimate of P[the central 3K-block is NOT K-crossed]."""
    if window_halfwidth < 5 * k:
        raise ValueError("window_halfwidth must be >= 5K")
    if n < 100:
        raise ValueError("need n >= 100 samples for meaningful error bars")
    validate_params(params)
    box = Interval.centered(window_halfwidth)
    spec = CrossSpec(k, 0)
    uncrossed = 0
    for r in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, r))
        if not is_k_crossed(cfg, spec, box):
            uncrossed += 1
    return bernoulli_result(
        uncrossed, n, seed,
        kind="pbar", K=k, window=window_halfwidth,
        beta=params.beta, lam=params.lam, q=params.q, s=params.s,
    )


def is_bridge(
    config: Configuration, edge: tuple[int, int], r: int, k: int, c: int
) -> BridgeVerdict:
    """Bridge verdict for one edge: open, and with the edge removed both
    endpoints remain connected to distance ``r``.  Also reports whether
    the length window K < y-x <= CK holds."""
    x, y = (edge[0], edge[1]) if edge[0] < edge[1] else (edge[1], edge[0])
    for v in (x, y):
        if not config.box.contains_interval(Interval(v - r, v + r)):
            raise ValueError(f"insufficient margin around {v} for distance {r}")
    verdict = (
        config.has_edge(x, y)
        and connected_to_distance(config, x, r, exclude=(x, y))
        and connected_to_distance(config, y, r, exclude=(x, y))
    )
    return BridgeVerdict(
        edge=(x, y), R=r, is_bridge=verdict, length_ok=k < y - x <= c * k
    )


def _candidate_block_indices(c: int) -> list[int]:
    # 3K-blocks contained in the CK-block, index divisible by 3:
    # need 3(i-1) >= -C and 3(i+1) <= C
    i_min = math.ceil(1 - c / 3)
    i_max = math.floor(c / 3 - 1)
    return [i for i in range(i_min, i_max + 1) if i % 3 == 0]


def unbridged_blocks(config: Configuration, k: int, c: int, r: int) -> list[int]:
    """Indices i (divisible by 3, block inside the CK-block) whose
    neighbourhood is touched by no bridge of length in (K, CK].

    A bridge {x, y} touches block i when its span overlaps the block's
    fattened window: x < 3K(i+1) and y >= 3K(i-1).
    """
    margin = 2 * c * k + r
    if config.box.lo > -margin or config.box.hi < margin:
        raise ValueError(f"margin violation: box must cover [-{margin}, {margin})")
    cands = _candidate_block_indices(c)
    if not cands:
        return []
    le = config.long_edges
    length = le[:, 1] - le[:, 0]
    lo_bound = 3 * k * (min(cands) - 1)
    hi_bound = 3 * k * (max(cands) + 1)
    sel = (length > k) & (length <= c * k) & (le[:, 0] < hi_bound) & (le[:, 1] >= lo_bound)
    bridges = []
    for x, y in le[sel]:
        v = is_bridge(config, (int(x), int(y)), r, k, c)
        if v.is_bridge:
            bridges.append((int(x), int(y)))
    out = []
    for i in cands:
        touched = any(
            x < 3 * k * (i + 1) and y >= 3 * k * (i - 1) for x, y in bridges
        )
        if not touched:
            out.append(i)
    return out


def mean_unbridged(
    k: int, c: int, r: int, params: ModelParams, n: int, seed: int
) -> EstimatorResult:
    """Monte Carlo mean of the number of unbridged blocks."""
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    margin = 2 * c * k + r
    box = Interval.centered(margin)
    counts = np.empty(n)
    for rep in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, rep))
        counts[rep] = len(unbridged_blocks(cfg, k, c, r))
    return EstimatorResult(
        mean=float(counts.mean()),
        stderr=float(counts.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0,
        n=n,
        seed=seed,
        metadata=dict(kind="unbridged", K=k, C=c, R=r,
                      beta=params.beta, lam=params.lam),
    )


def _exit_probabilities(box: Interval, params: ModelParams) -> np.ndarray:
    """Per site, the probability of owning at least one open edge leaving
    the box: 1 - exp(-w) with w summing lam on an adjacent exterior bond
    plus beta * sum of 1/d**s over the remaining exterior distances
    (Hurwitz zeta tails).  Exits are independent across sites and of the
    interior edges, so sampling them as indicators is exact in law."""
    sites = np.arange(box.lo, box.hi)

    def side_weight(gap: np.ndarray) -> np.ndarray:
        w = np.empty(gap.size)
        for idx, m in enumerate(gap):
            if m == 1:
                w[idx] = params.lam + params.beta * tail_sum(params.s, 2)
            else:
                w[idx] = params.beta * tail_sum(params.s, int(m))
        return w

    w = side_weight(sites - box.lo + 1) + side_weight(box.hi - sites)
    return -np.expm1(-w)


def escape_probability(r: int, params: ModelParams, n: int, seed: int) -> EstimatorResult:
    """Exact-law Monte Carlo estimate of P[0 is connected to the
    complement of [-R, R)]: the cluster of 0 inside the box contains a
    site with an open edge leaving the box."""
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval.centered(r)
    exit_p = _exit_probabilities(box, params)
    hits = 0
    for rep in range(n):
        rep_seed = rng.mix64(seed, rep)
        cfg = sample_config(box, params, rep_seed)
        g = rng.stream(rng.mix64(rng.TAG_EXIT, rep_seed))
        exits = g.random(len(box)) < exit_p
        part = clusters_in(cfg, box)
        if np.any(exits & (part.roots == part.roots[0 - box.lo])):
            hits += 1
    return bernoulli_result(
        hits, n, seed, kind="escape", R=r,
        beta=params.beta, lam=params.lam, q=params.q, s=params.s,
    )


def local_connectivity_probability(
    r: int, params: ModelParams, n: int, seed: int
) -> EstimatorResult:
    """Exact-law Monte Carlo estimate of P[0 is connected to distance R]
    under the package's reading of that predicate: the cluster of 0 in
    [-R, R) reaches a site with |v| >= R-1 or owns an open edge leaving
    the window.  Exit edges aggregate exactly as in
    :func:`escape_probability`; this dominates the escape event."""
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval.centered(r)
    exit_p = _exit_probabilities(box, params)
    verts = np.arange(box.lo, box.hi)
    far = np.abs(verts) >= r - 1
    hits = 0
    for rep in range(n):
        rep_seed = rng.mix64(seed, rep)
        cfg = sample_config(box, params, rep_seed)
        g = rng.stream(rng.mix64(rng.TAG_EXIT, rep_seed))
        exits = g.random(len(box)) < exit_p
        part = clusters_in(cfg, box)
        cl = part.roots == part.roots[0 - box.lo]
        if np.any(cl & (exits | far)):
            hits += 1
    return bernoulli_result(
        hits, n, seed, kind="local_connectivity", R=r,
        beta=params.beta, lam=params.lam, q=params.q, s=params.s,
    )


def reach_probability(l: int, params: ModelParams, n: int, seed: int) -> EstimatorResult:
    """Monte Carlo estimate of P[0 reaches the boundary of the box
    [-L, L)], the finite-volume stand-in for the percolation probability."""
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval.centered(l)
    hits = 0
    for rep in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, rep))
        if connected_to_distance(cfg, 0, l):
            hits += 1
    return bernoulli_result(
        hits, n, seed, kind="reach", L=l,
        beta=params.beta, lam=params.lam, q=params.q, s=params.s,
    )


def choose_bridge_radius(
    params: ModelParams, theta: float, k: int, n: int = 2000, seed: int = 0
) -> int | None:
    """Smallest R in [2, K/2] whose inflated local-connectivity estimate
    satisfies P[conn to R]^2 + (2R)^2 exp(-beta (K - 2R)) <= theta^2;
    None if no R qualifies.

    The calibration uses the same connected-to-distance predicate the
    bridge definition uses (R = 1 is excluded: the predicate is vacuous
    there).  The caller is responsible for theta exceeding the true
    percolation probability; the inequality only calibrates the
    local-connectivity scale against that theta.
    """
    target = theta * theta
    for r in range(2, k // 2 + 1):
        est = local_connectivity_probability(r, params, n, rng.mix64(seed, r))
        inflated = min(1.0, est.mean + 3.0 * est.stderr)
        lhs = inflated ** 2 + (2 * r) ** 2 * math.exp(-params.beta * (k - 2 * r))
        if lhs <= target:
            return r
    return None


def bridge_probability(
    d: int, r: int, params: ModelParams, n: int, seed: int
) -> EstimatorResult:
    """Estimate of P[{0, d} is a bridge].

    The edge state is independent of the rest of the configuration, so
    the estimate is edge_prob * P-hat[both endpoints connected to
    distance R in the configuration without the edge]; only the
    conditional part is sampled.
    """
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval(-r, d + r)
    hits = 0
    for rep in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, rep))
        if connected_to_distance(cfg, 0, r, exclude=(0, d)) and connected_to_distance(
            cfg, d, r, exclude=(0, d)
        ):
            hits += 1
    cond = bernoulli_result(hits, n, seed)
    p_edge = edge_prob(0, d, params)
    return EstimatorResult(
        mean=p_edge * cond.mean,
        stderr=p_edge * cond.stderr,
        n=n,
        seed=seed,
        metadata=dict(kind="bridge", d=d, R=r, p_edge=p_edge,
                      conditional=cond.mean, conditional_se=cond.stderr,
                      beta=params.beta, lam=params.lam),
    )


@dataclass(frozen=True)
class ScalingReport:
    """Uncrossed-probability comparison across one scale jump: reported,
    never asserted (the closed-form constants assume large scales)."""

    K: int
    C: int
    R: int
    theta: float
    pbar_small: EstimatorResult
    pbar_big: EstimatorResult
    bound: float
    ratio: float
    ratio_lower: float


def check_uncrossed_scaling(
    k: int, c: int, params: ModelParams, theta: float, r: int, n: int, seed: int
) -> ScalingReport:
    """Estimate pbar(K) and pbar(CK) and compare pbar(CK) against
    (C**(1 - beta theta^2) / 9e) * min(pbar(K), 1/C)."""
    bt2 = params.beta * theta * theta
    if bt2 >= 1.0:
        raise ValueError("requires beta * theta^2 < 1")
    small = estimate_uncrossed(k, params, 5 * k, n, rng.mix64(seed, 1))
    big = estimate_uncrossed(c * k, params, 5 * c * k, n, rng.mix64(seed, 2))
    factor = c ** (1.0 - bt2) / (9.0 * math.e)
    bound = factor * min(small.mean, 1.0 / c)
    ratio = big.mean / bound if bound > 0 else math.inf
    denom_hi = factor * min(small.mean + 3 * small.stderr, 1.0 / c)
    ratio_lower = (big.mean - 3 * big.stderr) / denom_hi if denom_hi > 0 else math.inf
    return ScalingReport(
        K=k, C=c, R=r, theta=theta, pbar_small=small, pbar_big=big,
        bound=bound, ratio=ratio, ratio_lower=ratio_lower,
    )


@dataclass(frozen=True)
class BlockingReport:
    """Joint estimates of the escape event, the long-edge blackout event
    and the central uncrossed probability, plus the deterministic
    implication violation count (must be zero)."""

    K: int
    n: int
    seed: int
    p_escape: float
    p_blackout: float
    pbar: float
    lhs: float
    rhs: float
    slack_se: float
    satisfied: bool
    violations: int


def blocking_indicators(cfg: Configuration, k: int) -> tuple[bool, bool, dict[int, bool]]:
    """Per-configuration indicators on the box [-12K, 12K):

    * escape: some x in B_3K connects to some y outside B_9K,
    * blackout: no open edge of length > K has an endpoint in B_9K,
    * crossings of the 3K-blocks at i in {-2, 0, 2} (window = whole box).
    """
    box = cfg.box
    part = clusters_in(cfg, box)
    verts = np.arange(box.lo, box.hi)
    inner = part.roots[(verts >= -3 * k) & (verts < 3 * k)]
    outer = part.roots[(verts < -9 * k) | (verts >= 9 * k)]
    escape = bool(np.intersect1d(inner, outer).size > 0)

    le = cfg.long_edges
    length = le[:, 1] - le[:, 0]
    endpoint_in = ((le[:, 0] >= -9 * k) & (le[:, 0] < 9 * k)) | (
        (le[:, 1] >= -9 * k) & (le[:, 1] < 9 * k)
    )
    blackout = not bool(np.any((length > k) & endpoint_in))
    crossed = {i: is_k_crossed(cfg, CrossSpec(k, i), box) for i in (-2, 0, 2)}
    return escape, blackout, crossed


def check_escape_blocking(k: int, params: ModelParams, n: int, seed: int) -> BlockingReport:
    """Sample the box [-12K, 12K) and measure the blocking indicators.

    Deterministically, blackout and both flanking blocks uncrossed force
    no escape; any violation is a bug witness.  Stochastically the report
    checks P[blackout] * pbar^2 <= 1 - P[escape] within 3 joint standard
    errors (delta method over the indicator covariance).
    """
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval(-12 * k, 12 * k)
    a_ind = np.empty(n)
    b_ind = np.empty(n)
    c_ind = np.empty(n)
    violations = 0
    for rep in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, rep))
        escape, blackout, crossed = blocking_indicators(cfg, k)
        if blackout and not crossed[-2] and not crossed[2] and escape:
            violations += 1
        a_ind[rep] = escape
        b_ind[rep] = blackout
        c_ind[rep] = crossed[0]

    p_a, p_b, p_c = a_ind.mean(), b_ind.mean(), c_ind.mean()
    pbar = 1.0 - p_c
    lhs = p_b * pbar * pbar
    rhs = 1.0 - p_a
    grad = np.array([1.0, pbar * pbar, -2.0 * p_b * pbar])
    cov = np.cov(np.vstack([a_ind, b_ind, c_ind]), ddof=1)
    slack_se = float(np.sqrt(max(0.0, grad @ cov @ grad) / n))
    satisfied = lhs - rhs <= 3.0 * slack_se
    return BlockingReport(
        K=k, n=n, seed=seed, p_escape=float(p_a), p_blackout=float(p_b),
        pbar=float(pbar), lhs=float(lhs), rhs=float(rhs),
        slack_se=slack_se, satisfied=bool(satisfied), violations=violations,
    )
