"""Random-cluster and Potts machinery.

Swendsen-Wang dynamics for integer q: place bonds between equal spins
with the bond probabilities of the coupling law, cluster, recolor
uniformly.  Wired boundary is realised by a ghost vertex whose coupling
to site x aggregates every exterior pair exactly,
beta * sum_{y outside} 1/|x-y|**s (Hurwitz zeta tails); the ghost cluster
keeps color 1, so spins measure the monochromatic-boundary Potts state
and the bond layer measures the wired random-cluster state.

For tiny edge sets the measure q**k(w) * prod p^w (1-p)^(1-w) / Z is
enumerated exactly (any q > 0, any boundary partition); the enumeration
is the reference every sampler here is tested against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import rng
from .model import Interval, ModelParams, edge_prob, tail_sum, validate_params
from .sampler import Configuration, _draw_long_edges, _EMPTY_EDGES
from .clusters import _uf_roots
from .stats import EstimatorResult, batch_means


@dataclass(frozen=True)
class BoundaryCondition:
    """Partition of exterior vertices identified while counting clusters.

    ``classes`` lists the non-singleton classes; free boundary is the
    empty tuple (singletons change nothing), wired is a single class.
    """

    mode: str
    classes: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self) -> None:
        if self.mode not in ("free", "wired", "partition"):
            raise ValueError(f"unknown boundary mode {self.mode!r}")
        seen: set[int] = set()
        for cls in self.classes:
            for v in cls:
                if v in seen:
                    raise ValueError("boundary classes must be disjoint")
                seen.add(v)

    @staticmethod
    def free() -> "BoundaryCondition":
        return BoundaryCondition("free")

    @staticmethod
    def wired(vertices: tuple[int, ...] = ()) -> "BoundaryCondition":
        cls = (tuple(sorted(vertices)),) if vertices else ()
        return BoundaryCondition("wired", cls)

    @staticmethod
    def partition(classes) -> "BoundaryCondition":
        return BoundaryCondition("partition", tuple(tuple(c) for c in classes))


def ghost_couplings(box: Interval, params: ModelParams) -> np.ndarray:
    """Aggregated exterior coupling per site:
    beta * sum_{y outside box} 1/|x-y|**s, exact via zeta tails."""
    x = np.arange(box.lo, box.hi)
    left_gap = x - box.lo + 1
    right_gap = box.hi - x
    out = np.empty(len(box))
    for idx in range(len(box)):
        out[idx] = params.beta * (
            tail_sum(params.s, int(left_gap[idx])) + tail_sum(params.s, int(right_gap[idx]))
        )
    return out


@dataclass(frozen=True, eq=False)
class PottsState:
    """Spin configuration on a box with free or ghost-wired boundary."""

    box: Interval
    spins: np.ndarray
    q: int
    wired: bool
    ghost_coupling: np.ndarray | None

    def __post_init__(self) -> None:
        if self.q != int(self.q) or self.q < 1:
            raise ValueError("q must be a positive integer for spin dynamics")
        if self.spins.min() < 1 or self.spins.max() > self.q:
            raise ValueError("spins must lie in {1..q}")


def initial_state(box: Interval, q: int, params: ModelParams, wired: bool = True) -> PottsState:
    """All-ones start (the ghost color when wired)."""
    validate_params(params)
    gc = ghost_couplings(box, params) if wired else None
    return PottsState(
        box=box, spins=np.ones(len(box), dtype=np.int64), q=int(q),
        wired=wired, ghost_coupling=gc,
    )


class _BondLayer(NamedTuple):
    nn_open: np.ndarray
    long_edges: np.ndarray
    ghost_open: np.ndarray | None


def _bond_layer(state: PottsState, params: ModelParams, g: np.random.Generator) -> _BondLayer:
    """One bond placement given the current spins.

    Long-range bonds are proposed for all pairs with the per-distance
    binomial scheme and rejected on color mismatch, which realises the
    conditional law exactly while keeping the cost near-linear.
    """
    n = len(state.box)
    spins = state.spins
    p1 = -np.expm1(-params.lam)
    nn_prop = g.random(n - 1) < p1
    nn_open = nn_prop & (spins[:-1] == spins[1:])

    prop = _draw_long_edges(g, state.box, params)
    if prop.shape[0]:
        same = spins[prop[:, 0] - state.box.lo] == spins[prop[:, 1] - state.box.lo]
        long_edges = prop[same]
    else:
        long_edges = _EMPTY_EDGES

    ghost_open = None
    if state.wired:
        u = g.random(n)
        ghost_open = (u < -np.expm1(-state.ghost_coupling)) & (spins == 1)
    return _BondLayer(nn_open, long_edges, ghost_open)


def _layer_roots(state: PottsState, layer: _BondLayer) -> np.ndarray:
    """Cluster roots over the box sites plus, when wired, the ghost at
    local index n."""
    n = len(state.box)
    eu = [np.nonzero(layer.nn_open)[0]]
    ev = [eu[0] + 1]
    if layer.long_edges.shape[0]:
        eu.append(layer.long_edges[:, 0] - state.box.lo)
        ev.append(layer.long_edges[:, 1] - state.box.lo)
    total = n
    if state.wired:
        gsites = np.nonzero(layer.ghost_open)[0]
        eu.append(gsites)
        ev.append(np.full(gsites.size, n, dtype=np.int64))
        total = n + 1
    return _uf_roots(total, np.concatenate(eu), np.concatenate(ev))


def sw_sweep(state: PottsState, params: ModelParams, step_seed: int) -> PottsState:
    """One Swendsen-Wang step: bonds between equal spins, cluster,
    recolor clusters uniformly (the ghost cluster keeps color 1)."""
    validate_params(params)
    if params.q != state.q:
        raise ValueError(f"params.q={params.q} does not match state.q={state.q}")
    g = rng.stream(rng.mix64(rng.TAG_SW, step_seed, state.box.lo, state.box.hi))
    layer = _bond_layer(state, params, g)
    roots = _layer_roots(state, layer)
    return _recolor(state, roots, g)


def _recolor(state: PottsState, roots: np.ndarray, g: np.random.Generator) -> PottsState:
    n = len(state.box)
    colors = g.integers(1, state.q + 1, size=roots.size)
    new_spins = colors[roots[:n]]
    if state.wired:
        new_spins[roots[:n] == roots[n]] = 1
    return PottsState(
        box=state.box, spins=new_spins, q=state.q,
        wired=state.wired, ghost_coupling=state.ghost_coupling,
    )


def fk_from_spins(state: PottsState, params: ModelParams, step_seed: int) -> Configuration:
    """The bond layer given the current spins, as a configuration on the
    box (ghost bonds, if any, are not part of the returned edge set)."""
    validate_params(params)
    g = rng.stream(rng.mix64(rng.TAG_SW, step_seed, state.box.lo, state.box.hi))
    layer = _bond_layer(state, params, g)
    return Configuration(state.box, layer.nn_open, layer.long_edges, step_seed, params)


def _chain(q, params, l, n_sweeps, burn_in, seed):
    """Run a wired SW chain on [-L, L); yield per-sweep
    (ghost_connected_origin, origin_spin_is_one) after bond placement /
    after recoloring respectively."""
    if params.q != q:
        raise ValueError(f"params.q={params.q} does not match q={q}")
    box = Interval.centered(l)
    state = initial_state(box, q, params, wired=True)
    origin = -box.lo
    for t in range(n_sweeps):
        g = rng.stream(rng.mix64(rng.TAG_SW, seed, t, box.lo, box.hi))
        layer = _bond_layer(state, params, g)
        roots = _layer_roots(state, layer)
        ghost_conn = roots[origin] == roots[len(box)]
        state = _recolor(state, roots, g)
        if t >= burn_in:
            yield ghost_conn, state.spins[origin] == 1


def estimate_theta_fk(
    q: int, params: ModelParams, l: int, n_sweeps: int, burn_in: int, seed: int
) -> EstimatorResult:
    """Probability that the origin joins the ghost (wired boundary
    class) in the bond layer at stationarity; finite-L proxy for the
    percolation probability, decreasing in L.

    q = 1 routes to the independent-bond estimator of the same event
    scale (origin reaching the box boundary).
    """
    if burn_in >= n_sweeps:
        raise ValueError("burn_in must be < n_sweeps")
    if q == 1:
        from .crossing import reach_probability

        res = reach_probability(l, params, n_sweeps - burn_in, seed)
        meta = dict(res.metadata)
        meta.update(kind="theta_fk", q=1, bc="wired", route="bernoulli")
        return EstimatorResult(res.mean, res.stderr, res.n, res.seed, meta)
    if q != int(q) or q < 2:
        raise ValueError("dynamics require integer q >= 2 (q = 1 is routed separately)")
    series = np.fromiter(
        (gc for gc, _ in _chain(q, params, l, n_sweeps, burn_in, seed)),
        dtype=np.float64,
    )
    mean, se, tau = batch_means(series)
    return EstimatorResult(
        mean=mean, stderr=se, n=series.size, seed=seed,
        metadata=dict(kind="theta_fk", q=q, L=l, bc="wired",
                      n_sweeps=n_sweeps, burn_in=burn_in, tau_int=tau,
                      beta=params.beta, lam=params.lam, s=params.s),
    )


def estimate_magnetization(
    q: int, params: ModelParams, l: int, n_sweeps: int, burn_in: int, seed: int
) -> EstimatorResult:
    """Magnetization (q P[spin_0 = boundary color] - 1)/(q - 1) under the
    monochromatic boundary, with batch-means error bars."""
    if burn_in >= n_sweeps:
        raise ValueError("burn_in must be < n_sweeps")
    if q != int(q) or q < 2:
        raise ValueError("magnetization requires integer q >= 2")
    vals = np.fromiter(
        ((q * float(s1) - 1.0) / (q - 1.0) for _, s1 in _chain(q, params, l, n_sweeps, burn_in, seed)),
        dtype=np.float64,
    )
    mean, se, tau = batch_means(vals)
    return EstimatorResult(
        mean=mean, stderr=se, n=vals.size, seed=seed,
        metadata=dict(kind="magnetization", q=q, L=l, bc="wired",
                      n_sweeps=n_sweeps, burn_in=burn_in, tau_int=tau,
                      beta=params.beta, lam=params.lam, s=params.s),
    )


@dataclass(frozen=True, eq=False)
class FkWeightTable:
    """Exact normalized random-cluster measure on an explicit edge list.

    ``weights[mask]`` is the probability of the configuration whose open
    edges are the set bits of ``mask`` (bit e = edges[e])."""

    edges: tuple[tuple[int, int], ...]
    probs: tuple[float, ...]
    q: float
    bc: BoundaryCondition
    vertices: tuple[int, ...]
    weights: np.ndarray

    def prob(self, mask: int) -> float:
        return float(self.weights[mask])

    def edge_open_marginal(self, e: int) -> float:
        masks = np.arange(self.weights.size)
        return float(self.weights[(masks >> e) & 1 == 1].sum())

    def closed_given_disconnected(self, e: int) -> float:
        """P[edge e closed | its endpoints not joined by the other open
        edges and the boundary wiring]."""
        u, v = self.edges[e]
        num = den = 0.0
        for mask in range(self.weights.size):
            others = mask & ~(1 << e)
            if _connected_without(self, others, u, v, e):
                continue
            den += self.weights[mask]
            if not (mask >> e) & 1:
                num += self.weights[mask]
        if den == 0.0:
            raise ValueError("conditioning event has probability zero")
        return num / den


def _class_chains(bc: BoundaryCondition):
    for cls in bc.classes:
        for a, b in zip(cls, cls[1:]):
            yield a, b


def _connected_without(table: FkWeightTable, mask: int, u: int, v: int, skip: int) -> bool:
    index = {vv: k for k, vv in enumerate(table.vertices)}
    parent = list(range(len(table.vertices)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[rb] = ra

    for a, b in _class_chains(table.bc):
        union(index[a], index[b])
    for e, (a, b) in enumerate(table.edges):
        if e != skip and (mask >> e) & 1:
            union(index[a], index[b])
    return find(index[u]) == find(index[v])


def exact_fk_distribution(
    edges,
    params: ModelParams,
    q: float,
    bc: BoundaryCondition,
    probs=None,
) -> FkWeightTable:
    """Enumerate the random-cluster measure over all 2**|edges| states.

    Components are counted over every vertex incident to a candidate
    edge plus every boundary-class vertex, after wiring each class.
    ``probs`` overrides the per-edge probabilities (diagnostic hook);
    by default they come from the coupling law.
    """
    edges = [tuple(e) for e in edges]
    m = len(edges)
    if m > 20:
        raise ValueError("too many edges for exact enumeration (limit 20)")
    if q <= 0:
        raise ValueError("q must be positive")
    if probs is None:
        p = [edge_prob(u, v, params) for u, v in edges]
    else:
        p = [float(x) for x in probs]
        if len(p) != m:
            raise ValueError("probs must match the edge list")
        if any(not 0.0 < x < 1.0 for x in p):
            raise ValueError("edge probabilities must lie in (0,1)")
    verts = sorted({v for e in edges for v in e} | {v for c in bc.classes for v in c})
    index = {v: k for k, v in enumerate(verts)}
    nv = len(verts)
    base_parent = list(range(nv))

    def find(par, x):
        while par[x] != x:
            par[x] = par[par[x]]
            x = par[x]
        return x

    for a, b in _class_chains(bc):
        ra, rb = find(base_parent, index[a]), find(base_parent, index[b])
        if ra != rb:
            base_parent[rb] = ra

    weights = np.empty(1 << m)
    log_p = [(math.log(pe), math.log1p(-pe)) for pe in p]
    for mask in range(1 << m):
        par = base_parent.copy()
        for e in range(m):
            if (mask >> e) & 1:
                ra, rb = find(par, index[edges[e][0]]), find(par, index[edges[e][1]])
                if ra != rb:
                    par[rb] = ra
        k = sum(1 for x in range(nv) if find(par, x) == x)
        logw = k * math.log(q)
        for e in range(m):
            logw += log_p[e][0] if (mask >> e) & 1 else log_p[e][1]
        weights[mask] = math.exp(logw)
    weights /= weights.sum()
    return FkWeightTable(
        edges=tuple(edges), probs=tuple(p), q=q, bc=bc,
        vertices=tuple(verts), weights=weights,
    )


def conditional_closed_weight(p: float, q: float) -> float:
    """Probability an edge of bare probability p is closed given its
    endpoints are not otherwise connected: (1-p) q / (p + (1-p) q)."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must lie in (0,1)")
    if q <= 0:
        raise ValueError("q must be positive")
    return (1.0 - p) * q / (p + (1.0 - p) * q)
