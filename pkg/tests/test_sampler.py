import math

import numpy as np
import pytest

from lrperc import (
    Interval,
    ModelParams,
    dump_config,
    edge_prob,
    expected_edge_count,
    load_config,
    sample_config,
    sample_config_coupled,
)
from lrperc.sampler import _k_subset
from lrperc import rng

P11 = ModelParams(beta=1.0, lam=1.0)


def test_smallest_box():
    cfg = sample_config(Interval(0, 2), P11, 1)
    assert cfg.nn_open.shape == (1,)
    assert cfg.long_edges.shape == (0, 2)
    cfg.check()


def test_box_too_small():
    with pytest.raises(ValueError, match="too small"):
        sample_config(Interval(0, 1), P11, 0)


def test_degenerate_parameters_give_empty_configs():
    tiny = ModelParams(beta=1e-9, lam=1e-9)
    for seed in range(200):
        cfg = sample_config(Interval(0, 16), tiny, seed)
        assert cfg.n_open() == 0


def test_replay_is_bit_identical():
    box = Interval(-50, 78)
    a = sample_config(box, P11, 987)
    b = sample_config(box, P11, 987)
    assert a == b
    c = sample_config(box, P11, 988)
    assert a != c


def test_structural_invariants_on_random_configs():
    for seed in range(50):
        cfg = sample_config(Interval(-31, 40), ModelParams(beta=2.0, lam=0.5), seed)
        cfg.check()


def test_per_distance_marginals():
    # open fraction at distance d against the closed form, 4 sigma slack
    box = Interval(0, 64)
    n = 20_000
    counts = np.zeros(8)
    for seed in range(n):
        cfg = sample_config(box, P11, rng.mix64(77, seed))
        counts[1] += cfg.nn_open.sum()
        d = cfg.long_edges[:, 1] - cfg.long_edges[:, 0]
        small = d[d < 8]
        counts += np.bincount(small, minlength=8)[:8]
    for d in range(1, 8):
        trials = n * (64 - d)
        p = edge_prob(0, d, P11)
        se = math.sqrt(p * (1 - p) / trials)
        assert abs(counts[d] / trials - p) < 4 * se, f"distance {d}"


def test_expected_edge_count_closed_forms():
    assert expected_edge_count(Interval(0, 2), ModelParams(beta=1, lam=math.log(2))) == pytest.approx(0.5)
    got = expected_edge_count(Interval(0, 3), ModelParams(beta=1.0, lam=math.log(2)))
    assert got == pytest.approx(2 * 0.5 + (1 - math.exp(-0.25)), abs=1e-12)


def test_expected_edge_count_matches_monte_carlo():
    box = Interval(0, 10_000)
    n = 1000
    totals = [sample_config(box, P11, rng.mix64(5, r)).n_open() for r in range(n)]
    mean = np.mean(totals)
    se = np.std(totals, ddof=1) / math.sqrt(n)
    assert abs(mean - expected_edge_count(box, P11)) < 3 * se


def test_coupled_identity_case():
    a, b = sample_config_coupled(Interval(0, 100), P11, P11, 3, 30)
    assert a == b


def test_coupled_subset_property():
    lo = ModelParams(beta=0.5, lam=0.8)
    hi = ModelParams(beta=2.0, lam=1.5)
    box = Interval(0, 200)
    for seed in range(100):
        ca, cb = sample_config_coupled(box, lo, hi, seed, 50)
        assert not np.any(ca.nn_open & ~cb.nn_open)
        sa = {tuple(e) for e in ca.long_edges}
        sb = {tuple(e) for e in cb.long_edges}
        assert sa <= sb


def test_coupled_rejects_unordered_params():
    with pytest.raises(ValueError, match="parameter order"):
        sample_config_coupled(
            Interval(0, 10), ModelParams(beta=2, lam=1), ModelParams(beta=1, lam=1), 0, 5
        )


def test_dump_load_round_trip(tmp_path):
    cfg = sample_config(Interval(-17, 23), ModelParams(beta=1.37, lam=0.9, q=2, s=1.8), 404)
    path = tmp_path / "cfg.txt"
    dump_config(cfg, path)
    back = load_config(path)
    assert back == cfg


def test_k_subset_is_uniform_small():
    g = rng.fresh_stream(12)
    hits = np.zeros(10)
    n = 30_000
    for _ in range(n):
        for v in _k_subset(g, 5, 2):
            hits[v] += 1
    # each of the 5 positions appears in 2/5 of the draws
    freq = hits[:5] / n
    se = math.sqrt(0.4 * 0.6 / n)
    assert np.all(np.abs(freq - 0.4) < 5 * se)


def test_k_subset_rejection_branch():
    g = rng.fresh_stream(13)
    draws = [_k_subset(g, 100_000, 3) for _ in range(2000)]
    flat = np.concatenate(draws)
    assert all(len(np.unique(d)) == 3 for d in draws)
    # mean position of a uniform draw over [0, m)
    m = 100_000
    se = (m / math.sqrt(12)) / math.sqrt(flat.size)
    assert abs(flat.mean() - (m - 1) / 2) < 4 * se


def test_small_box_distribution_tv():
    # quick version of the exact-law check (acceptance runs the full one)
    from oracles import product_law, tv_distance, config_mask

    box = Interval(0, 4)
    edges = [(0, 1), (1, 2), (2, 3), (0, 2), (1, 3), (0, 3)]
    probs = [edge_prob(u, v, P11) for u, v in edges]
    n = 30_000
    counts = np.zeros(64)
    for seed in range(n):
        counts[config_mask(sample_config(box, P11, rng.mix64(8, seed)), edges)] += 1
    assert tv_distance(counts / n, product_law(probs)) < 0.05
