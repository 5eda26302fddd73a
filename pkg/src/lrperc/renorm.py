"""Block density analysis at one scale and across scales.

A K-block is the length-2K window [K(i-1), K(i+1)); consecutive blocks
overlap on half their length.  A block is theta-good when it contains a
cluster (internal edges only) of at least 2*theta*K sites.  This module
provides the goodness predicate, the Monte Carlo bad-block probability,
the deterministic merge check (all small blocks good implies the big
block carries a dense cluster), isolated-bad-block events, and the
closed-form weight that two dense vertex sets on opposite sides of an
anchor remain mutually unlinked.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .model import Interval, ModelParams, validate_params
from .sampler import Configuration, sample_config
from .clusters import clusters_in, largest_cluster
from .stats import EstimatorResult, bernoulli_result

_EPS = 1e-9


@dataclass(frozen=True)
class BlockSpec:
    """Block index i at scale K."""

    K: int
    i: int

    def __post_init__(self) -> None:
        if self.K < 1:
            raise ValueError("block scale K must be >= 1")

    def interval(self) -> Interval:
        return Interval(self.K * (self.i - 1), self.K * (self.i + 1))


@dataclass(frozen=True)
class BlockReport:
    block: BlockSpec
    theta: float
    good: bool
    largest_size: int


def density_threshold(k: int, theta: float) -> int:
    """Smallest integer cluster size meeting density theta in a 2K block,
    i.e. ceil(2*theta*K) with a guard against float noise."""
    return math.ceil(2.0 * theta * k - _EPS)


def is_theta_good(config: Configuration, block: BlockSpec, theta: float) -> BlockReport:
    """Goodness verdict for one block (internal edges only)."""
    if not 0.0 < theta < 1.0:
        raise ValueError("theta must lie in (0,1)")
    iv = block.interval()
    if not config.box.contains_interval(iv):
        raise ValueError(f"block {iv} outside sampled box {config.box}")
    size, _ = largest_cluster(clusters_in(config, iv))
    return BlockReport(
        block=block,
        theta=theta,
        good=size >= density_threshold(block.K, theta),
        largest_size=size,
    )


def block_reports(config: Configuration, k: int, c: int, theta: float) -> list[BlockReport]:
    """Reports for every K-block B^j with |j| <= C-1 (all blocks inside
    the CK-block)."""
    return [is_theta_good(config, BlockSpec(k, j), theta) for j in range(-c + 1, c)]


def estimate_p_bad(
    k: int, theta: float, params: ModelParams, n: int, seed: int
) -> EstimatorResult:
    """Monte Carlo estimate of P[the K-block is theta-bad].

    Goodness depends only on edges interior to the block, so sampling the
    box [-K, K) is exact in law, not an approximation.
    """
    if n < 100:
        raise ValueError("need n >= 100 samples for meaningful error bars")
    if k < 2:
        raise ValueError("block scale K must be >= 2")
    validate_params(params)
    box = Interval.centered(k)
    block = BlockSpec(k, 0)
    bad = 0
    for r in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, r))
        if not is_theta_good(cfg, block, theta).good:
            bad += 1
    return bernoulli_result(
        bad, n, seed,
        kind="p_bad", K=k, theta=theta,
        beta=params.beta, lam=params.lam, q=params.q, s=params.s,
    )


def verify_block_merge(config: Configuration, k: int, c: int, theta: float) -> bool:
    """Check the merge implication on one configuration.

    If every K-block B^j, |j| <= C-1, is theta-good then the overlapping
    halves force their big clusters into a single cluster of the CK-block
    of size >= 2*theta*C*K.  Returns True when the implication holds
    (vacuously if some block is bad); False is a bug witness.

    theta > 3/4 is required: that is what makes the dense cluster of each
    block unique, hence the chain of merges unambiguous.
    """
    if not theta > 0.75:
        raise ValueError("merge check requires theta > 3/4")
    big = Interval.centered(c * k)
    if not config.box.contains_interval(big):
        raise ValueError(f"box {config.box} does not contain {big}")
    for j in range(-c + 1, c):
        if not is_theta_good(config, BlockSpec(k, j), theta).good:
            return True
    size, _ = largest_cluster(clusters_in(config, big))
    return size >= density_threshold(c * k, theta)


def _complete_range(reports: list[BlockReport]) -> dict[int, BlockReport]:
    by_i = {r.block.i for r in reports}
    if len(by_i) != len(reports):
        raise ValueError("duplicate block indices in report set")
    c = max(by_i) + 1
    if by_i != set(range(-c + 1, c)):
        raise ValueError("incomplete report set: need every index in [-(C-1), C-1]")
    ks = {r.block.K for r in reports}
    thetas = {r.theta for r in reports}
    if len(ks) != 1 or len(thetas) != 1:
        raise ValueError("report set mixes scales or densities")
    return {r.block.i: r for r in reports}


def isolated_bad_block(reports: list[BlockReport], i: int) -> bool:
    """Whether block i is bad while every block outside {i-1, i, i+1}
    is good (the blocks adjacent to i are unconstrained)."""
    by_i = _complete_range(reports)
    if i not in by_i:
        raise ValueError(f"index {i} outside the report range")
    if by_i[i].good:
        return False
    return all(
        r.good for j, r in by_i.items() if j not in (i - 1, i, i + 1)
    )


def isolated_bad_sparse_event(
    config: Configuration, k: int, c: int, i: int, theta: float, theta_prime: float
) -> bool:
    """Isolated bad block i at scale K AND the CK-block fails the weaker
    density theta_prime."""
    if not theta_prime < theta:
        raise ValueError("need theta_prime < theta")
    if not isolated_bad_block(block_reports(config, k, c, theta), i):
        return False
    size, _ = largest_cluster(clusters_in(config, Interval.centered(c * k)))
    return size < density_threshold(c * k, theta_prime)


@dataclass(frozen=True)
class DensitySets:
    """Two vertex sets flanking an anchor with prescribed minimum density.

    ``left`` is ordered x1 > x2 > ... (all < anchor), ``right`` is
    y1 < y2 < ... (all >= anchor).  Density theta at scale K means the
    a-th point can drift at most (a-1)/theta beyond a 3K offset:
    x_a >= K*i - 3K - (a-1)/theta and y_b <= K*i + 3K + (b-1)/theta.
    """

    K: int
    i: int
    theta: float
    left: np.ndarray
    right: np.ndarray

    @property
    def anchor(self) -> int:
        return self.K * self.i

    def __post_init__(self) -> None:
        x, y = self.left, self.right
        if x.size == 0 or y.size == 0:
            raise ValueError("both sides must be nonempty")
        if not (np.diff(x) < 0).all() or not (np.diff(y) > 0).all():
            raise ValueError("left must be strictly decreasing, right strictly increasing")
        if x.max() >= self.anchor or y.min() < self.anchor:
            raise ValueError("sets must sit strictly left / weakly right of the anchor")
        a = np.arange(1, x.size + 1)
        if np.any(x < self.anchor - 3 * self.K - (a - 1) / self.theta - _EPS):
            raise ValueError("left set violates the density spacing bound")
        b = np.arange(1, y.size + 1)
        if np.any(y > self.anchor + 3 * self.K + (b - 1) / self.theta + _EPS):
            raise ValueError("right set violates the density spacing bound")


def spread_density_sets(k: int, c: int, i: int, theta: float) -> DensitySets:
    """Worst-case admissible sets: each point placed at the extreme
    integer allowed by the spacing bound, with the minimum cardinality
    A = ceil(theta*K*(C-|i|-2)) per side."""
    if c - abs(i) - 2 < 1:
        raise ValueError("need C - |i| - 2 >= 1 for a nonempty spread")
    a_count = math.ceil(theta * k * (c - abs(i) - 2) - _EPS)
    a = np.arange(1, a_count + 1, dtype=np.float64)
    anchor = k * i
    left = np.ceil(anchor - 3 * k - (a - 1) / theta).astype(np.int64)
    right = np.floor(anchor + 3 * k + (a - 1) / theta).astype(np.int64)
    return DensitySets(K=k, i=i, theta=theta, left=left, right=right)


def closed_pair_weight(sets: DensitySets, beta: float, s: float = 2.0) -> float:
    """Probability that no pair (x, y) across the two sets is open:
    exp(-beta * sum_{x,y} 1/(y-x)**s).  The exponent is accumulated in
    full before a single exp, so extreme weights underflow cleanly."""
    d = np.subtract.outer(
        sets.right.astype(np.float64), sets.left.astype(np.float64)
    )
    if d.min() <= 0:
        raise ValueError("sets overlap")
    return math.exp(-beta * float(np.sum(d ** (-s))))


def closed_pair_weight_bound(c: int, i: int, beta: float, theta: float) -> float:
    """Closed form (12/(C-|i|))**(beta*theta^2) dominating
    :func:`closed_pair_weight` on every admissible density set."""
    if abs(i) >= c:
        raise ValueError("need |i| < C")
    return (12.0 / (c - abs(i))) ** (beta * theta * theta)
