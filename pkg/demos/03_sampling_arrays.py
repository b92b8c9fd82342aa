"""
Exchangeable arrays from kernels, graphs, and formulas
======================================================

Every sampler here produces random symmetric multiplicity windows whose law
is invariant under relabeling the vertices.  The statistical tests check
that invariance -- and catch a generator that only pretends to have it.
"""

import numpy as np

from mglimits import (
    FunctionalSampler,
    GraphonSampler,
    Multigraph,
    dissociation_test,
    empirical_density,
    exchangeability_test,
    graphon_density,
    two_block,
)

SEED = 7

W = two_block()
sampler = GraphonSampler(W)

# One sample carries its window and the latent coordinates that produced it.
s = sampler.sample(4, seed=SEED)
print("a 4-window drawn from W:")
print(s.window.adj)
print("vertex types:", np.round(s.latents.u, 3))
print()

# Windows nest: the 3-window of the seed is the top-left of its 4-window.
s3 = sampler.sample(3, seed=SEED)
print("3-window is a prefix of the 4-window:",
      np.array_equal(s3.window.adj, s.window.adj[:3, :3]))
print()

# Empirical densities come with a standard error and match the exact value.
edge = Multigraph(np.array([[0, 1], [1, 0]]))
est, se = empirical_density(sampler, edge, "leq", 20000, seed=SEED)
print(f"edge density: empirical {est:.4f} +- {se:.4f}, exact "
      f"{float(graphon_density(edge, W, 'leq')):.4f}")
print()

# Invariance under vertex permutations, and independence of disjoint windows.
print(exchangeability_test(sampler, 3, 3000, seed=SEED).format())
print(dissociation_test(sampler, ((0, 1), (2, 3)), 3000, seed=SEED).format())
print()


# A mixture is still exchangeable, but its disjoint windows share the hidden
# coin flip, so dissociation fails.
def coin_mixture(a, x, y, b):
    if x == y:
        return 0
    return 0 if a < 0.5 else 1


mix = FunctionalSampler(coin_mixture, mixture=True)
print(dissociation_test(mix, ((0, 1), (2, 3)), 3000, seed=SEED).format())
