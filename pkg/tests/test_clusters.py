import numpy as np
import pytest

from lrperc import (
    Configuration,
    Interval,
    ModelParams,
    clusters_in,
    connected_to_distance,
    largest_cluster,
    sample_config,
)
from lrperc import rng
from oracles import bfs_connected_to_distance, bfs_labels

P = ModelParams(beta=1.0, lam=1.0)


def make_config(box, nn_pairs=(), long_pairs=(), params=P):
    nn = np.zeros(len(box) - 1, dtype=bool)
    for i, j in nn_pairs:
        assert j == i + 1
        nn[i - box.lo] = True
    if long_pairs:
        le = np.array(sorted(long_pairs), dtype=np.int64)
    else:
        le = np.empty((0, 2), dtype=np.int64)
    return Configuration(box, nn, le, seed=0, params=params)


def test_clusters_hand_example():
    box = Interval(0, 8)
    cfg = make_config(box, nn_pairs=[(0, 1), (1, 2), (5, 6)])
    part = clusters_in(cfg, box)
    assert list(part.canonical_labels()) == [0, 0, 0, 3, 4, 5, 5, 7]
    assert part.size_of(1) == 3 and part.size_of(6) == 2


def test_both_endpoints_rule():
    cfg = make_config(Interval(0, 8), nn_pairs=[(0, 1), (1, 2), (5, 6)])
    part = clusters_in(cfg, Interval(1, 6))
    # edge (5,6) dropped: endpoint 6 outside S; edge (0,1) dropped likewise
    assert list(part.canonical_labels()) == [1, 1, 3, 4, 5]


def test_subset_outside_box_rejected():
    cfg = make_config(Interval(0, 8))
    with pytest.raises(ValueError, match="not contained"):
        clusters_in(cfg, Interval(0, 9))


def test_matches_bfs_on_random_configs():
    for trial in range(300):
        g = rng.fresh_stream(rng.mix64(21, trial))
        n = int(g.integers(8, 257))
        params = ModelParams(beta=float(g.uniform(0.3, 2.0)), lam=float(g.uniform(0.3, 2.0)))
        box = Interval(0, n)
        cfg = sample_config(box, params, rng.mix64(22, trial))
        part = clusters_in(cfg, box)
        assert np.array_equal(part.canonical_labels(), bfs_labels(cfg, box))
        # restricted domain too
        sub = Interval(n // 4, 3 * n // 4)
        assert np.array_equal(
            clusters_in(cfg, sub).canonical_labels(), bfs_labels(cfg, sub)
        )


def test_largest_cluster_tie_breaks():
    cfg = make_config(Interval(0, 8), nn_pairs=[(0, 1), (1, 2), (5, 6)])
    assert largest_cluster(clusters_in(cfg, Interval(0, 8))) == (3, 0)
    empty = make_config(Interval(0, 4))
    assert largest_cluster(clusters_in(empty, Interval(0, 4))) == (1, 0)
    two_pairs = make_config(Interval(0, 5), nn_pairs=[(0, 1), (3, 4)])
    assert largest_cluster(clusters_in(two_pairs, Interval(0, 5))) == (2, 0)


def test_largest_cluster_matches_bfs():
    for trial in range(100):
        cfg = sample_config(Interval(-20, 45), P, rng.mix64(31, trial))
        labels = bfs_labels(cfg, cfg.box)
        _, counts = np.unique(labels, return_counts=True)
        assert largest_cluster(clusters_in(cfg, cfg.box))[0] == counts.max()


def test_partition_invariant_under_edge_order():
    cfg = sample_config(Interval(0, 128), ModelParams(beta=2.0, lam=1.0), 7)
    g = rng.fresh_stream(3)
    shuffled = Configuration(
        cfg.box, cfg.nn_open, cfg.long_edges[g.permutation(cfg.long_edges.shape[0])],
        cfg.seed, cfg.params,
    )
    a = clusters_in(cfg, cfg.box).canonical_labels()
    b = clusters_in(shuffled, cfg.box).canonical_labels()
    assert np.array_equal(a, b)


def test_adding_edge_never_shrinks_largest():
    for trial in range(50):
        cfg = sample_config(Interval(0, 64), P, rng.mix64(41, trial))
        base, _ = largest_cluster(clusters_in(cfg, cfg.box))
        g = rng.fresh_stream(rng.mix64(42, trial))
        i = int(g.integers(0, 60))
        j = i + int(g.integers(2, 4))
        le = np.unique(np.vstack([cfg.long_edges, [[i, j]]]), axis=0)
        bigger = Configuration(cfg.box, cfg.nn_open, le, cfg.seed, cfg.params)
        grown, _ = largest_cluster(clusters_in(bigger, cfg.box))
        assert grown >= base


def test_connected_to_distance_basics():
    box = Interval(-16, 16)
    isolated = make_config(box)
    assert not connected_to_distance(isolated, 0, 4)
    path = make_config(box, nn_pairs=[(k, k + 1) for k in range(0, 8)])
    assert connected_to_distance(path, 0, 8)
    # r=1 is vacuously true
    assert connected_to_distance(isolated, 0, 1)


def test_connected_to_distance_exit_edge_counts():
    box = Interval(-16, 16)
    # single long edge jumping out of the window from the cluster of x
    cfg = make_config(box, long_pairs=[(0, 12)])
    assert connected_to_distance(cfg, 0, 8)
    # but not when that edge is excluded
    assert not connected_to_distance(cfg, 0, 8, exclude=(0, 12))


def test_window_exceeding_box_rejected():
    cfg = make_config(Interval(0, 8))
    with pytest.raises(ValueError, match="window"):
        connected_to_distance(cfg, 4, 8)


def test_connected_to_distance_matches_bfs_reference():
    for trial in range(500):
        g = rng.fresh_stream(rng.mix64(51, trial))
        params = ModelParams(beta=float(g.uniform(0.2, 1.5)), lam=float(g.uniform(0.2, 1.5)))
        cfg = sample_config(Interval(-24, 24), params, rng.mix64(52, trial))
        x = int(g.integers(-8, 9))
        exclude = None
        if g.random() < 0.5 and cfg.long_edges.shape[0]:
            e = cfg.long_edges[int(g.integers(0, cfg.long_edges.shape[0]))]
            exclude = (int(e[0]), int(e[1]))
        got = connected_to_distance(cfg, x, 8, exclude=exclude)
        want = bfs_connected_to_distance(cfg, x, 8, exclude=exclude)
        assert got == want
