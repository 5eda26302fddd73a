"""Independent reference implementations used only by the tests.

Everything here deliberately avoids the package's union-find kernel and
enumeration code: BFS over adjacency lists, a transfer-matrix crossing
probability for edge lengths <= 2, brute-force Potts and random-cluster
enumerations (the latter via networkx components).
"""

from __future__ import annotations

import itertools
import math
from collections import defaultdict, deque

import networkx as nx
import numpy as np


def bfs_labels(config, s) -> np.ndarray:
    """Per site of the interval ``s``, the smallest vertex of its cluster
    (both-endpoints rule), computed by BFS."""
    adj = defaultdict(list)
    for i, j in config.open_edges():
        if s.lo <= i and j < s.hi:
            adj[i].append(j)
            adj[j].append(i)
    labels = {}
    for start in range(s.lo, s.hi):
        if start in labels:
            continue
        comp = [start]
        seen = {start}
        dq = deque([start])
        while dq:
            v = dq.popleft()
            for w in adj[v]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    dq.append(w)
        mo = min(comp)
        for v in comp:
            labels[v] = mo
    return np.array([labels[v] for v in range(s.lo, s.hi)], dtype=np.int64)


def bfs_cluster_of(config, s, x) -> set[int]:
    labels = bfs_labels(config, s)
    lab = labels[x - s.lo]
    return {s.lo + k for k, v in enumerate(labels) if v == lab}


def bfs_connected_to_distance(config, x, r, exclude=None) -> bool:
    """Reference for the local-connectivity predicate: cluster of x in
    [x-r, x+r) (minus the excluded edge) reaches |v-x| >= r-1 or owns an
    open edge leaving the window."""
    lo, hi = x - r, x + r
    if exclude is not None:
        exclude = tuple(sorted(exclude))
    adj = defaultdict(list)
    exits = defaultdict(bool)
    for i, j in config.open_edges():
        e = (i, j)
        if exclude is not None and e == exclude:
            continue
        iin, jin = lo <= i < hi, lo <= j < hi
        if iin and jin:
            adj[i].append(j)
            adj[j].append(i)
        elif iin:
            exits[i] = True
        elif jin:
            exits[j] = True
    seen = {x}
    dq = deque([x])
    while dq:
        v = dq.popleft()
        if abs(v - x) >= r - 1 or exits[v]:
            return True
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                dq.append(w)
    return False


def bfs_k_crossed(config, k, i, window) -> bool:
    """Reference for K-crossing: BFS over edges of length <= k inside the
    window, looking for a path from {v < 3ki-3k} to {v >= 3ki+3k}."""
    lt, rt = 3 * k * i - 3 * k, 3 * k * i + 3 * k
    adj = defaultdict(list)
    for a, b in config.open_edges():
        if window.lo <= a and b < window.hi and b - a <= k:
            adj[a].append(b)
            adj[b].append(a)
    seen = set()
    dq = deque(v for v in range(window.lo, lt))
    seen.update(dq)
    while dq:
        v = dq.popleft()
        if v >= rt:
            return True
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                dq.append(w)
    return False


# -- exact crossing probability for edge lengths <= 2 (transfer matrix) --

def crossing_prob_len2(n: int, lt: int, rt: int, p1: float, p2: float) -> float:
    """P[some vertex < lt connects to some vertex >= rt] on the path
    0..n-1 with independent edges (v, v+1) ~ p1 and (v, v+2) ~ p2.

    State: the components of the two frontier vertices with per-component
    witness flags (touched-left, touched-right); success absorbs.
    """

    def flags_of(v):
        return (v < lt, v >= rt)

    def norm(state):
        # state: (merged, fa, fb); success handled outside
        return state

    def absorb(fl):
        return fl[0] and fl[1]

    # seed with vertices 0, 1 and the edge between them
    states: dict = defaultdict(float)
    success = 0.0
    f0, f1 = flags_of(0), flags_of(1)
    for e1, w in ((True, p1), (False, 1 - p1)):
        if e1:
            fl = (f0[0] or f1[0], f0[1] or f1[1])
            if absorb(fl):
                success += w
            else:
                states[norm((True, fl, fl))] += w
        else:
            if absorb(f0) or absorb(f1):
                success += w
            else:
                states[norm((False, f0, f1))] += w

    for c in range(2, n):
        fc = flags_of(c)
        nxt: dict = defaultdict(float)
        for (merged, fa, fb), w0 in states.items():
            for e1 in (True, False):
                for e2 in (True, False):
                    w = w0 * (p1 if e1 else 1 - p1) * (p2 if e2 else 1 - p2)
                    if merged:
                        joined = e1 or e2
                        if joined:
                            fl = (fa[0] or fc[0], fa[1] or fc[1])
                            new = (True, fl, fl)
                        else:
                            # old pair survives only through b = c-1
                            new = (False, fb, fc)
                    else:
                        if e1 and e2:
                            fl = (fa[0] or fb[0] or fc[0], fa[1] or fb[1] or fc[1])
                            new = (True, fl, fl)
                        elif e1:
                            fl = (fb[0] or fc[0], fb[1] or fc[1])
                            new = (True, fl, fl)
                        elif e2:
                            # a joins c; b stays separate
                            fl = (fa[0] or fc[0], fa[1] or fc[1])
                            new = (False, fb, fl)
                        else:
                            new = (False, fb, fc)
                    m2, ga, gb = new
                    if absorb(ga) or absorb(gb):
                        success += w
                    else:
                        nxt[norm(new)] += w
        states = nxt
    return success


def crossing_prob_brute(n: int, lt: int, rt: int, p1: float, p2: float) -> float:
    """Enumeration cross-check for :func:`crossing_prob_len2` (small n)."""
    e1 = [(v, v + 1) for v in range(n - 1)]
    e2 = [(v, v + 2) for v in range(n - 2)]
    edges = e1 + e2
    probs = [p1] * len(e1) + [p2] * len(e2)
    total = 0.0
    for mask in range(1 << len(edges)):
        w = 1.0
        adj = defaultdict(list)
        for e, (u, v) in enumerate(edges):
            if (mask >> e) & 1:
                w *= probs[e]
                adj[u].append(v)
                adj[v].append(u)
            else:
                w *= 1 - probs[e]
        seen = set(range(0, lt))
        dq = deque(seen)
        hit = False
        while dq:
            v = dq.popleft()
            if v >= rt:
                hit = True
                break
            for u in adj[v]:
                if u not in seen:
                    seen.add(u)
                    dq.append(u)
        if hit:
            total += w
    return total


# -- exact spin / random-cluster references --

def potts_joint(n: int, couplings: dict, q: int, ghost: np.ndarray | None = None) -> np.ndarray:
    """Exact Potts distribution over the q**n colorings of sites 0..n-1.

    ``couplings[(u, v)]`` is the exponential weight on agreement of the
    pair; ``ghost[x]``, when given, couples site x to a fixed external
    color 1.  Index order: site 0 varies slowest, colors 1..q.
    """
    shape = [q] * n
    out = np.empty(q ** n)
    for idx, colors in enumerate(itertools.product(range(1, q + 1), repeat=n)):
        e = 0.0
        for (u, v), c in couplings.items():
            if colors[u] == colors[v]:
                e += c
        if ghost is not None:
            for x in range(n):
                if colors[x] == 1:
                    e += ghost[x]
        out[idx] = math.exp(e)
    return out / out.sum()


def fk_brute(edges, probs, q, wiring=()) -> np.ndarray:
    """Brute-force random-cluster weights over edge masks, components via
    networkx.  ``wiring`` lists vertex groups identified before counting."""
    verts = sorted({v for e in edges for v in e} | {v for c in wiring for v in c})
    out = np.empty(1 << len(edges))
    for mask in range(1 << len(edges)):
        g = nx.Graph()
        g.add_nodes_from(verts)
        for c in wiring:
            g.add_edges_from(zip(c, c[1:]))
        w = 1.0
        for e, (u, v) in enumerate(edges):
            if (mask >> e) & 1:
                w *= probs[e]
                g.add_edge(u, v)
            else:
                w *= 1 - probs[e]
        out[mask] = w * q ** nx.number_connected_components(g)
    return out / out.sum()


def product_law(probs) -> np.ndarray:
    """Independent-edge mask distribution."""
    m = len(probs)
    out = np.empty(1 << m)
    for mask in range(1 << m):
        w = 1.0
        for e in range(m):
            w *= probs[e] if (mask >> e) & 1 else 1 - probs[e]
        out[mask] = w
    return out


def tv_distance(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


def config_mask(config, edges) -> int:
    """Bitmask of which candidate edges are open in a configuration."""
    open_set = {tuple(e) for e in config.open_edges()}
    mask = 0
    for e, pair in enumerate(edges):
        if tuple(pair) in open_set:
            mask |= 1 << e
    return mask
