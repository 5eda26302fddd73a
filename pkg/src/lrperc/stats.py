"""Monte Carlo result records and error estimation helpers."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EstimatorResult:
    """Universal Monte Carlo output: mean, standard error, sample count,
    master seed, plus kind-specific metadata for reporting."""

    mean: float
    stderr: float
    n: int
    seed: int
    metadata: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.stderr < 0:
            raise ValueError("stderr must be >= 0")
        if self.n < 1:
            raise ValueError("n must be >= 1")


def bernoulli_result(hits: int, n: int, seed: int, **metadata) -> EstimatorResult:
    """Frequency estimate with the binomial standard error."""
    p = hits / n
    se = math.sqrt(p * (1.0 - p) / n)
    return EstimatorResult(mean=p, stderr=se, n=n, seed=seed, metadata=metadata)


def batch_means(x: np.ndarray, n_batches: int = 32) -> tuple[float, float, float]:
    """Mean, autocorrelation-aware standard error and integrated
    autocorrelation time from non-overlapping batch means.

    Returns (mean, stderr, tau_int).  tau_int is reported in units of one
    sample and floors at 0.5 (uncorrelated data).
    """
    x = np.asarray(x, dtype=np.float64)
    n = x.size
    if n < 2 * n_batches:
        n_batches = max(1, n // 2)
    m = n // n_batches
    trimmed = x[: m * n_batches].reshape(n_batches, m)
    bm = trimmed.mean(axis=1)
    mean = float(x.mean())
    if n_batches < 2:
        return mean, 0.0, 0.5
    var_bm = float(bm.var(ddof=1))
    se = math.sqrt(var_bm / n_batches)
    var_x = float(x.var(ddof=1))
    if var_x == 0.0:
        return mean, 0.0, 0.5
    tau = max(0.5, m * var_bm / (2.0 * var_x))
    return mean, se, tau
