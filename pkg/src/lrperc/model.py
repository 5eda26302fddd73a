"""Model parameters, couplings and edge probabilities.

Bonds live on the integer line.  A pair {i, j} at distance d = |i - j| is
open with probability

    1 - exp(-lam)            if d == 1,
    1 - exp(-beta / d**s)    if d >= 2,

independently over pairs.  Everything else in the package derives its
probabilities from :func:`edge_prob`, so this module is the single source
of truth for the coupling law.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _hurwitz_zeta


@dataclass(frozen=True)
class ModelParams:
    """Coupling parameters: inverse temperature, nearest-neighbour strength,
    cluster weight and decay exponent."""

    beta: float
    lam: float
    q: float = 1.0
    s: float = 2.0


@dataclass(frozen=True)
class Interval:
    """Half-open integer interval [lo, hi)."""

    lo: int
    hi: int

    def __post_init__(self) -> None:
        if self.lo >= self.hi:
            raise ValueError(f"empty interval: lo={self.lo} must be < hi={self.hi}")

    def __len__(self) -> int:
        return self.hi - self.lo

    def __contains__(self, v: int) -> bool:
        return self.lo <= v < self.hi

    def contains_interval(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    @staticmethod
    def centered(scale: int) -> "Interval":
        """The box [-scale, scale)."""
        return Interval(-scale, scale)


def validate_params(raw: ModelParams) -> ModelParams:
    """Return ``raw`` unchanged if every bound holds, else raise ValueError
    listing all violations."""
    problems = []
    if not raw.beta > 0:
        problems.append(f"beta must be positive (got {raw.beta})")
    if not raw.lam > 0:
        problems.append(f"lambda must be positive (got {raw.lam})")
    if not raw.q > 0:
        problems.append(f"q must be positive (got {raw.q})")
    if not (1.0 < raw.s <= 2.0):
        problems.append(f"s must lie in (1,2] (got {raw.s})")
    if problems:
        raise ValueError("; ".join(problems))
    return raw


def coupling(d: int, s: float = 2.0) -> float:
    """Interaction strength 1/d**s between sites at distance d >= 1."""
    if d == 0:
        raise ValueError("no self-edges: distance must be >= 1")
    if d < 0:
        raise ValueError(f"distance must be >= 1 (got {d})")
    return float(d) ** (-s)


def edge_prob(i: int, j: int, params: ModelParams) -> float:
    """Probability that the pair {i, j} is open.  Symmetric in (i, j)."""
    if i == j:
        raise ValueError("no self-edges: i must differ from j")
    d = abs(i - j)
    if d == 1:
        return -math.expm1(-params.lam)
    # expm1 keeps tiny probabilities at large distance from rounding to 0
    return -math.expm1(-params.beta * coupling(d, params.s))


def edge_prob_array(dists: np.ndarray, params: ModelParams) -> np.ndarray:
    """Vectorised :func:`edge_prob` over an array of distances >= 1."""
    d = np.asarray(dists, dtype=np.float64)
    out = -np.expm1(-params.beta * d ** (-params.s))
    out[d == 1.0] = -math.expm1(-params.lam)
    return out


def tail_sum(s: float, m: int) -> float:
    """Exact value of sum_{d >= m} 1/d**s (Hurwitz zeta)."""
    if m < 1:
        raise ValueError("tail starts at distance >= 1")
    return float(_hurwitz_zeta(s, m))
