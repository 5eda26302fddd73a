"""Connectivity queries over configurations.

Clusters "in S" use only open edges with BOTH endpoints in S.  The core
is a union-find forest (union by size, path compression) compiled with
numba; everything else is edge filtering with numpy masks.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numba import njit

from .model import Interval
from .sampler import Configuration


@njit(cache=True)
def _uf_roots(n, eu, ev):
    """Root label per vertex after union(eu[k], ev[k]) for all k.

    Labels are fully flattened: parent[v] is the canonical root of v.
    """
    parent = np.arange(n, dtype=np.int64)
    size = np.ones(n, dtype=np.int64)
    for k in range(eu.shape[0]):
        a = eu[k]
        b = ev[k]
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        while parent[b] != b:
            parent[b] = parent[parent[b]]
            b = parent[b]
        if a != b:
            if size[a] < size[b]:
                a, b = b, a
            parent[b] = a
            size[a] += size[b]
    for v in range(n):
        r = v
        while parent[r] != r:
            r = parent[r]
        w = v
        while parent[w] != r:
            nxt = parent[w]
            parent[w] = r
            w = nxt
    return parent


def _local_edges(config: Configuration, s: Interval) -> tuple[np.ndarray, np.ndarray]:
    """Open edges with both endpoints in ``s``, as S-local index pairs."""
    a = max(s.lo, config.box.lo) - config.box.lo
    b = min(s.hi - 1, config.box.hi) - config.box.lo  # nn edge k joins k, k+1
    nn_idx = np.nonzero(config.nn_open[a:b])[0] + a + config.box.lo - s.lo
    le = config.long_edges
    mask = (le[:, 0] >= s.lo) & (le[:, 1] < s.hi)
    lu = le[mask, 0] - s.lo
    lv = le[mask, 1] - s.lo
    eu = np.concatenate([nn_idx, lu])
    ev = np.concatenate([nn_idx + 1, lv])
    return eu, ev


@dataclass(frozen=True, eq=False)
class ClusterPartition:
    """Union-find decomposition of the sites of ``domain``.

    ``roots[k]`` is the canonical root (local index) of site domain.lo+k;
    ``comp_size[r]`` is the component size for each root label r (zero on
    non-root entries).
    """

    domain: Interval
    roots: np.ndarray
    comp_size: np.ndarray

    @property
    def n_components(self) -> int:
        return int(np.unique(self.roots).size)

    def root_of(self, v: int) -> int:
        return int(self.roots[v - self.domain.lo])

    def size_of(self, v: int) -> int:
        return int(self.comp_size[self.roots[v - self.domain.lo]])

    def members(self, v: int) -> np.ndarray:
        """Global vertices in the component of v."""
        r = self.roots[v - self.domain.lo]
        return np.nonzero(self.roots == r)[0] + self.domain.lo

    def canonical_labels(self) -> np.ndarray:
        """Per site, the smallest global vertex of its component (a
        representation-independent fingerprint of the partition)."""
        uniq, first = np.unique(self.roots, return_index=True)
        relabel = np.empty(len(self.domain), dtype=np.int64)
        relabel[uniq] = first + self.domain.lo  # first occurrence = min member
        return relabel[self.roots]


def clusters_in(config: Configuration, s: Interval) -> ClusterPartition:
    """Cluster decomposition of S using only edges inside S."""
    if not config.box.contains_interval(s):
        raise ValueError(f"S={s} is not contained in the sampled box {config.box}")
    eu, ev = _local_edges(config, s)
    roots = _uf_roots(len(s), eu, ev)
    comp_size = np.bincount(roots, minlength=len(s)).astype(np.int64)
    return ClusterPartition(domain=s, roots=roots, comp_size=comp_size)


def largest_cluster(partition: ClusterPartition) -> tuple[int, int]:
    """(size, representative) of the largest component; ties go to the
    component containing the smallest vertex, which is the representative."""
    if len(partition.domain) < 1:
        raise ValueError("empty domain")
    best = int(partition.comp_size.max())
    uniq, first = np.unique(partition.roots, return_index=True)
    cand = first[partition.comp_size[uniq] == best]
    return best, int(cand.min() + partition.domain.lo)


def connected_to_distance(
    config: Configuration,
    x: int,
    r: int,
    exclude: tuple[int, int] | None = None,
) -> bool:
    """Whether x is locally connected to distance r.

    Definition used throughout the package: in the window [x-r, x+r),
    with ``exclude`` removed, the cluster of x either contains a vertex v
    with |v - x| >= r - 1 or owns an open edge leaving the window.  (For
    r = 1 this is vacuously true.)
    """
    if r < 1:
        raise ValueError("distance must be >= 1")
    window = Interval(x - r, x + r)
    if not config.box.contains_interval(window):
        raise ValueError(f"window {window} exceeds the sampled box {config.box}")
    if exclude is not None and exclude[0] > exclude[1]:
        exclude = (exclude[1], exclude[0])

    eu, ev = _local_edges(config, window)
    if exclude is not None:
        gu, gv = eu + window.lo, ev + window.lo
        keep = ~((gu == exclude[0]) & (gv == exclude[1]))
        eu, ev = eu[keep], ev[keep]
    roots = _uf_roots(len(window), eu, ev)
    in_cluster = roots == roots[x - window.lo]

    verts = np.arange(window.lo, window.hi)
    if np.any(in_cluster & (np.abs(verts - x) >= r - 1)):
        return True

    # open long edges leaving the window from the cluster of x
    le = config.long_edges
    u_in = (le[:, 0] >= window.lo) & (le[:, 0] < window.hi)
    v_in = (le[:, 1] >= window.lo) & (le[:, 1] < window.hi)
    for inside, outside in ((u_in & ~v_in, 0), (v_in & ~u_in, 1)):
        pts = le[inside, outside]
        if exclude is not None and pts.size:
            other = le[inside, 1 - outside]
            drop = ((pts == exclude[0]) & (other == exclude[1])) | (
                (pts == exclude[1]) & (other == exclude[0])
            )
            pts = pts[~drop]
        if pts.size and np.any(in_cluster[pts - window.lo]):
            return True
    return False
