"""Sampling long-range bond configurations on a finite box.

The sampler works distance by distance: at distance d there are N - d
candidate pairs, each open independently with the same probability p_d,
so the number of open pairs is Binomial(N - d, p_d) and their positions
are a uniform subset.  Drawing the whole count vector in one vectorised
binomial call and then placing only the open pairs makes the expected
cost O(N + number of open edges); nothing in the law is truncated.

Randomness comes from a single Philox stream keyed by (box, seed) with a
fixed draw order (nearest-neighbour bits, then the count vector for
d = 2..N-1, then positions in ascending d), so a configuration is a pure
function of (box, params, seed).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .model import Interval, ModelParams, edge_prob, validate_params

_EMPTY_EDGES = np.empty((0, 2), dtype=np.int64)


@dataclass(frozen=True, eq=False)
class Configuration:
    """A sampled set of open edges over ``box``.

    ``nn_open[k]`` is the state of the pair {lo+k, lo+k+1}; ``long_edges``
    holds the open pairs at distance >= 2 as rows (i, j) with i < j,
    lexicographically sorted.
    """

    box: Interval
    nn_open: np.ndarray
    long_edges: np.ndarray
    seed: int
    params: ModelParams

    @property
    def n_sites(self) -> int:
        return len(self.box)

    def n_open(self) -> int:
        return int(self.nn_open.sum()) + self.long_edges.shape[0]

    def open_edges(self) -> np.ndarray:
        """All open pairs (nearest-neighbour included), lex sorted."""
        k = np.nonzero(self.nn_open)[0]
        nn = np.empty((k.size, 2), dtype=np.int64)
        nn[:, 0] = k + self.box.lo
        nn[:, 1] = nn[:, 0] + 1
        allp = np.concatenate([nn, self.long_edges])
        return allp[np.lexsort((allp[:, 1], allp[:, 0]))]

    def has_edge(self, i: int, j: int) -> bool:
        if i > j:
            i, j = j, i
        if j - i == 1:
            k = i - self.box.lo
            return 0 <= k < self.nn_open.size and bool(self.nn_open[k])
        le = self.long_edges
        a = np.searchsorted(le[:, 0], i, "left")
        b = np.searchsorted(le[:, 0], i, "right")
        return bool(np.any(le[a:b, 1] == j))

    def check(self) -> None:
        """Assert the structural invariants (test support)."""
        assert self.nn_open.shape == (self.n_sites - 1,)
        le = self.long_edges
        if le.shape[0]:
            assert le[:, 0].min() >= self.box.lo and le[:, 1].max() < self.box.hi
            assert (le[:, 1] - le[:, 0] >= 2).all()
            order = np.lexsort((le[:, 1], le[:, 0]))
            assert (order == np.arange(le.shape[0])).all(), "edges not lex sorted"
            assert np.unique(le, axis=0).shape[0] == le.shape[0], "duplicate edges"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Configuration):
            return NotImplemented
        return (
            self.box == other.box
            and self.seed == other.seed
            and self.params == other.params
            and np.array_equal(self.nn_open, other.nn_open)
            and np.array_equal(self.long_edges, other.long_edges)
        )


def _k_subset(g: np.random.Generator, m: int, k: int) -> np.ndarray:
    """Uniform k-subset of [0, m), sorted.

    Small or dense cases use a partial shuffle; sparse cases keep the
    first k distinct values of an i.i.d. uniform stream (exact, expected
    O(k) when k << m).
    """
    if k == 0:
        return np.empty(0, dtype=np.int64)
    if m <= 128 or 2 * k >= m:
        return np.sort(g.permutation(m)[:k].astype(np.int64))
    kept = np.empty(0, dtype=np.int64)
    while kept.size < k:
        need = k - kept.size
        draw = g.integers(0, m, size=need + (need >> 1) + 8)
        uniq, first = np.unique(draw, return_index=True)
        uniq = uniq[np.argsort(first)]  # restore stream order
        fresh = uniq[~np.isin(uniq, kept)]
        kept = np.concatenate([kept, fresh[:need].astype(np.int64)])
    return np.sort(kept)


def _draw_long_edges(g: np.random.Generator, box: Interval, params: ModelParams) -> np.ndarray:
    """Open pairs at distance >= 2 on ``box``, lex sorted.

    Draw order (fixed for reproducibility): the count vector over
    d = 2..N-1 in one binomial call, then one position per count-1
    distance in a single vectorised call (ascending d), then positions
    for count >= 2 distances in ascending d.
    """
    n = len(box)
    if n <= 2:
        return _EMPTY_EDGES
    d = np.arange(2, n, dtype=np.int64)
    p = -np.expm1(-params.beta * d.astype(np.float64) ** (-params.s))
    m = n - d
    counts = g.binomial(m, p)

    pieces = []
    singles = np.nonzero(counts == 1)[0]
    if singles.size:
        pos = g.integers(0, m[singles])
        e = np.empty((singles.size, 2), dtype=np.int64)
        e[:, 0] = pos + box.lo
        e[:, 1] = e[:, 0] + d[singles]
        pieces.append(e)
    for idx in np.nonzero(counts >= 2)[0]:
        dist = int(d[idx])
        pos = _k_subset(g, int(m[idx]), int(counts[idx]))
        e = np.empty((pos.size, 2), dtype=np.int64)
        e[:, 0] = pos + box.lo
        e[:, 1] = e[:, 0] + dist
        pieces.append(e)
    if not pieces:
        return _EMPTY_EDGES
    long_edges = np.concatenate(pieces)
    return long_edges[np.lexsort((long_edges[:, 1], long_edges[:, 0]))]


def sample_config(box: Interval, params: ModelParams, seed: int) -> Configuration:
    """Draw one configuration on ``box``."""
    validate_params(params)
    n = len(box)
    if n < 2:
        raise ValueError("box too small: need at least 2 sites")
    g = rng.stream(rng.mix64(rng.TAG_SAMPLE, seed, box.lo, box.hi))
    p1 = -np.expm1(-params.lam)
    nn_open = g.random(n - 1) < p1
    long_edges = _draw_long_edges(g, box, params)
    return Configuration(box, nn_open, long_edges, seed, params)


def expected_edge_count(box: Interval, params: ModelParams) -> float:
    """Mean number of open edges on ``box``: (N-1)p_1 + sum_d (N-d)p_d."""
    validate_params(params)
    n = len(box)
    if n < 2:
        raise ValueError("box too small: need at least 2 sites")
    total = (n - 1) * -np.expm1(-params.lam)
    if n > 2:
        d = np.arange(2, n, dtype=np.float64)
        total += np.sum((n - d) * -np.expm1(-params.beta * d ** (-params.s)))
    return float(total)


def sample_config_coupled(
    box: Interval,
    lo: ModelParams,
    hi: ModelParams,
    seed: int,
    max_dist: int,
) -> tuple[Configuration, Configuration]:
    """Monotone-coupled pair of configurations.

    Every candidate edge of length <= max_dist owns one uniform from a
    per-edge hash of (seed, i, j); the edge is open in a configuration iff
    its uniform is below that configuration's edge probability.  With
    lo.beta <= hi.beta and lo.lam <= hi.lam the open set of ``lo`` is
    deterministically contained in the open set of ``hi``.

    Cost is O(N * max_dist); this is a test-scale tool, not the sampler.
    """
    validate_params(lo)
    validate_params(hi)
    if lo.beta > hi.beta or lo.lam > hi.lam or lo.s != hi.s:
        raise ValueError("parameter order violated: need lo.beta <= hi.beta, lo.lam <= hi.lam, same s")
    n = len(box)
    if n < 2:
        raise ValueError("box too small: need at least 2 sites")
    if max_dist < 1:
        raise ValueError("max_dist must be >= 1")
    key = rng.mix64(rng.TAG_COUPLED, seed)

    nn_lo = nn_hi = None
    pieces_lo, pieces_hi = [], []
    for dist in range(1, min(max_dist, n - 1) + 1):
        i = np.arange(box.lo, box.hi - dist, dtype=np.int64)
        u = rng.uniform_hash(key, i, i + dist)
        p_lo = edge_prob(0, dist, lo)
        p_hi = edge_prob(0, dist, hi)
        if dist == 1:
            nn_lo = u < p_lo
            nn_hi = u < p_hi
            continue
        for p, pieces in ((p_lo, pieces_lo), (p_hi, pieces_hi)):
            sel = i[u < p]
            e = np.empty((sel.size, 2), dtype=np.int64)
            e[:, 0] = sel
            e[:, 1] = sel + dist
            pieces.append(e)

    def _assemble(nn, pieces, params):
        if pieces:
            le = np.concatenate(pieces)
            le = le[np.lexsort((le[:, 1], le[:, 0]))]
        else:
            le = _EMPTY_EDGES
        return Configuration(box, nn, le, seed, params)

    return _assemble(nn_lo, pieces_lo, lo), _assemble(nn_hi, pieces_hi, hi)


def dump_config(config: Configuration, path) -> None:
    """Write the line-based text format: one header line, then one open
    edge per line (nearest-neighbour edges included explicitly)."""
    p = config.params
    with open(path, "w") as fh:
        fh.write(
            f"box {config.box.lo} {config.box.hi} seed {config.seed} "
            f"beta {p.beta!r} lambda {p.lam!r} q {p.q!r} s {p.s!r}\n"
        )
        for i, j in config.open_edges():
            fh.write(f"{i} {j}\n")


def load_config(path) -> Configuration:
    """Inverse of :func:`dump_config` (exact round trip)."""
    with open(path) as fh:
        header = fh.readline().split()
        if len(header) != 13 or header[0] != "box":
            raise ValueError(f"malformed configuration header in {path}")
        box = Interval(int(header[1]), int(header[2]))
        seed = int(header[4])
        params = ModelParams(
            beta=float(header[6]), lam=float(header[8]),
            q=float(header[10]), s=float(header[12]),
        )
        nn_open = np.zeros(len(box) - 1, dtype=bool)
        longs = []
        for line in fh:
            if not line.strip():
                continue
            i, j = map(int, line.split())
            if j - i == 1:
                nn_open[i - box.lo] = True
            else:
                longs.append((i, j))
    if longs:
        le = np.array(longs, dtype=np.int64)
        le = le[np.lexsort((le[:, 1], le[:, 0]))]
    else:
        le = _EMPTY_EDGES
    return Configuration(box, nn_open, le, seed, params)
