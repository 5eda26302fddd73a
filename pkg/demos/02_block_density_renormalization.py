"""Block density across scales: good blocks, bad-block probability, the
deterministic merge, and the closed-pair weight bound.

A K-block (2K sites, half-overlapping with its neighbours) is theta-good
when it holds a cluster of at least 2*theta*K sites.  Good blocks at one
scale merge into a dense cluster at the next scale; the probability that
two flanking dense sets stay unlinked decays like (12/C)**(beta theta^2).
"""

import lrperc as lp
from lrperc import rng

params = lp.ModelParams(beta=1.5, lam=3.0)
k, c, theta = 16, 8, 0.8

# goodness of the blocks inside one CK-box
cfg = lp.sample_config(lp.Interval.centered(c * k), params, seed=5)
reports = lp.block_reports(cfg, k, c, theta)
bad = [r.block.i for r in reports if not r.good]
print(f"blocks at scale K={k}: {len(reports)} total, bad indices: {bad or 'none'}")

# bad-block probability at two scales
for scale in (k, 2 * k):
    est = lp.estimate_p_bad(scale, theta, params, n=2000, seed=11)
    print(f"P[K={scale} block is {theta}-bad] = {est.mean:.4f} +/- {est.stderr:.4f}")

# the merge is deterministic: all blocks good => the big box is dense
violations = sum(
    not lp.verify_block_merge(
        lp.sample_config(lp.Interval.centered(c * k), params, rng.mix64(3, t)), k, c, theta
    )
    for t in range(2000)
)
print(f"merge implication violations over 2000 configurations: {violations}")

# worst-case spread sets against the closed-form unlinking bound
print("\nweight that two maximally spread dense sets stay unlinked:")
for c_big in (50, 100, 200):
    sets = lp.spread_density_sets(4, c_big, 0, theta)
    w = lp.closed_pair_weight(sets, params.beta)
    b = lp.closed_pair_weight_bound(c_big, 0, params.beta, theta)
    print(f"  C={c_big:4d}: weight {w:.5f} <= bound {b:.5f} (ratio {w / b:.3f})")
