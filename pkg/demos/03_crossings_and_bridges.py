"""Short-edge crossings of 3K-blocks, bridges, and the blocking events.

A 3K-block is K-crossed when strictly-left connects to weakly-right
using only edges of length <= K.  A bridge is an open edge whose
endpoints stay locally connected once the edge is removed; blocks not
touched by any mid-range bridge must be crossed on their own.
"""

import lrperc as lp

params = lp.ModelParams(beta=0.5, lam=1.0)
k = 8

# uncrossed probability grows as couplings weaken
for beta in (0.25, 0.5, 1.0):
    p = lp.ModelParams(beta=beta, lam=1.0)
    est = lp.estimate_uncrossed(k, p, window_halfwidth=5 * k, n=1500, seed=2)
    print(f"beta={beta}: P[central 3K-block not K-crossed] = {est.mean:.3f} +/- {est.stderr:.3f}")

# calibrate the bridge radius: smallest R whose local-connectivity level
# fits under theta, then bridges obey the edge-probability * theta^2 cap
theta = 0.95
r = lp.choose_bridge_radius(params, theta, k=64, n=1500, seed=0)
print(f"\nbridge radius for theta={theta}: R={r}")
bp = lp.bridge_probability(d=70, r=r, params=params, n=2000, seed=1)
cap = bp.metadata["p_edge"] * theta ** 2
print(f"P[edge of length 70 is a bridge] = {bp.mean:.2e} <= cap {cap:.2e}")

# unbridged block counts (diagnostic for the crossing-scale recursion)
mu = lp.mean_unbridged(k, c=24, r=4, params=params, n=400, seed=3)
print(f"mean unbridged blocks (K={k}, C=24): {mu.mean:.2f} +/- {mu.stderr:.2f}")

# the blocking report: long-edge blackout + uncrossed flanks forbid escape
rep = lp.check_escape_blocking(k, lp.ModelParams(beta=0.2, lam=1.0), n=2000, seed=4)
print(
    f"\nblocking events at K={k}, beta=0.2: P[escape]={rep.p_escape:.3f}, "
    f"P[blackout]={rep.p_blackout:.3f}, pbar={rep.pbar:.3f}"
)
print(f"  inequality P[B] pbar^2 = {rep.lhs:.4f} <= 1 - P[A] = {rep.rhs:.4f}: {rep.satisfied}")
print(f"  deterministic implication violations: {rep.violations} (must be 0)")
