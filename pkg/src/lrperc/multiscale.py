"""Scale schedules and the density-recursion experiment.

The induction runs over scales K_1 = C_1, K_{n+1} = C_{n+1} K_n with
C_{n+1} = (n+1)^3 C_1 (so K_n = (n!)^3 C_1^n exactly) and densities
theta_{n+1} = theta_n - C_0 / C_{n+1}, which stay above a floor
theta_inf whenever (C_0/C_1)(zeta(3) - 1) fits in the gap
theta_1 - theta_inf.  Per level the bad-block probability u_n is
estimated and compared against the one-step bound
u_{n+1} <= u_n/100 + 2 C_{n+1}^2 u_n^2 and the closed form
u_n <= C_n^{-2}/400; both comparisons are reported, not asserted,
because the one-step constants only hold for large C.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import zeta as _zeta

from . import rng
from .model import Interval, ModelParams, validate_params
from .sampler import sample_config
from .clusters import clusters_in, largest_cluster
from .renorm import density_threshold, estimate_p_bad
from .stats import EstimatorResult

MAX_LEVEL_SCALE = 10**7  # largest K_n a level may request


class ResourceCapError(RuntimeError):
    """Raised when no requested level fits under MAX_LEVEL_SCALE."""


@dataclass(frozen=True)
class ScaleSchedule:
    """Exact integer scale sequence plus the density ladder."""

    C1: int
    theta1: float
    C0: float
    theta_inf: float
    levels: tuple[tuple[int, int, float, int], ...]  # (n, C_n, theta_n, K_n)


def build_schedule(
    c1: int, theta1: float, c0: float, theta_inf: float, n_max: int
) -> ScaleSchedule:
    """Generate levels 1..n_max; error if the density ladder would sink
    below theta_inf (checked via sum_{n>=2} C0/C_n = (C0/C1)(zeta(3)-1))."""
    if c1 < 2:
        raise ValueError("C1 must be >= 2")
    if not (0.75 < theta_inf < 1.0):
        raise ValueError("theta_inf must lie in (3/4, 1)")
    if not (theta_inf < theta1 < 1.0):
        raise ValueError("theta1 must lie in (theta_inf, 1)")
    if n_max < 1:
        raise ValueError("need n_max >= 1")
    total_drop = (c0 / c1) * (float(_zeta(3.0, 1.0)) - 1.0)
    if total_drop > theta1 - theta_inf:
        raise ValueError(
            f"infeasible schedule: density ladder drops {total_drop:.6g} "
            f"but only {theta1 - theta_inf:.6g} is available above theta_inf"
        )
    levels = [(1, c1, theta1, c1)]
    c_n, theta_n, k_n = c1, theta1, c1
    for n in range(2, n_max + 1):
        c_n = n ** 3 * c1
        theta_n = theta_n - c0 / c_n
        k_n = c_n * k_n
        assert theta_n >= theta_inf  # guaranteed by the feasibility check
        levels.append((n, c_n, theta_n, k_n))
    return ScaleSchedule(C1=c1, theta1=theta1, C0=c0, theta_inf=theta_inf,
                         levels=tuple(levels))


def lambda_seed(c1: int) -> float:
    """Smallest nearest-neighbour strength with
    C1 * exp(-lam) = 1/(400 C1^2), i.e. ln(400 C1^3)."""
    if c1 < 2:
        raise ValueError("C1 must be >= 2")
    return math.log(400.0 * c1 ** 3)


@dataclass(frozen=True)
class TraceRow:
    n: int
    C_n: int
    theta_n: float
    K_n: int
    u_hat: float
    stderr: float
    rhs_bound: float  # bound this level imposes on the next: u/100 + 2 C_{n+1}^2 u^2
    target: float     # closed form C_n^{-2}/400
    recursion_ok: bool | None  # next level's u_hat <= this level's rhs_bound
    target_ok: bool


@dataclass(frozen=True)
class RecursionTrace:
    schedule: ScaleSchedule
    n_samples: int
    seed: int
    truncated: bool
    rows: tuple[TraceRow, ...]


def run_recursion_experiment(
    schedule: ScaleSchedule,
    params: ModelParams,
    n_samples: int,
    max_level: int,
    seed: int,
) -> RecursionTrace:
    """Estimate the bad-block probability level by level and report the
    one-step and closed-form comparisons."""
    validate_params(params)
    requested = schedule.levels[:max_level]
    runnable = [lv for lv in requested if lv[3] <= MAX_LEVEL_SCALE]
    if not runnable:
        raise ResourceCapError(
            f"every requested level exceeds K_n <= {MAX_LEVEL_SCALE}"
        )
    estimates: list[EstimatorResult] = []
    for n, _c, theta_n, k_n in runnable:
        estimates.append(
            estimate_p_bad(k_n, theta_n, params, n_samples, rng.mix64(seed, n))
        )
    rows = []
    for idx, (n, c_n, theta_n, k_n) in enumerate(runnable):
        u = estimates[idx].mean
        c_next = (n + 1) ** 3 * schedule.C1
        rhs = u / 100.0 + 2.0 * c_next ** 2 * u * u
        target = 1.0 / (400.0 * c_n ** 2)
        nxt = estimates[idx + 1].mean if idx + 1 < len(estimates) else None
        rows.append(
            TraceRow(
                n=n, C_n=c_n, theta_n=theta_n, K_n=k_n,
                u_hat=u, stderr=estimates[idx].stderr,
                rhs_bound=rhs, target=target,
                recursion_ok=None if nxt is None else bool(nxt <= rhs),
                target_ok=bool(u <= target),
            )
        )
    return RecursionTrace(
        schedule=schedule, n_samples=n_samples, seed=seed,
        truncated=len(runnable) < len(requested), rows=tuple(rows),
    )


def density_to_percolation(k: int, params: ModelParams, n: int, seed: int) -> EstimatorResult:
    """Estimate of P[0 sits in a cluster of size >= (3/2)K inside the
    K-block], with the frequency-level averaging companion.

    Metadata carries f_hat (frequency of the block being 3/4-good), the
    joint check g_hat >= (3/4) f_hat - 3 se_diff, and, when f_hat >= 1/2,
    whether g_hat >= 3/8 - 3 se.
    """
    if n < 100:
        raise ValueError("need n >= 100 samples")
    validate_params(params)
    box = Interval.centered(k)
    thr = density_threshold(k, 0.75)  # = ceil((3/2) K)
    g_ind = np.empty(n)
    f_ind = np.empty(n)
    for rep in range(n):
        cfg = sample_config(box, params, rng.mix64(seed, rep))
        part = clusters_in(cfg, box)
        g_ind[rep] = part.size_of(0) >= thr
        f_ind[rep] = largest_cluster(part)[0] >= thr
    g_hat = float(g_ind.mean())
    f_hat = float(f_ind.mean())
    se_g = float(g_ind.std(ddof=1) / math.sqrt(n))
    diff = g_ind - 0.75 * f_ind
    se_diff = float(diff.std(ddof=1) / math.sqrt(n))
    chain_ok = g_hat >= 0.75 * f_hat - 3.0 * se_diff
    meta = dict(
        kind="density_to_percolation", K=k, threshold=thr,
        f_hat=f_hat, se_diff=se_diff, chain_ok=bool(chain_ok),
        beta=params.beta, lam=params.lam,
    )
    if f_hat >= 0.5:
        meta["half_good_implies"] = bool(g_hat >= 0.375 - 3.0 * se_g)
    return EstimatorResult(mean=g_hat, stderr=se_g, n=n, seed=seed, metadata=meta)
