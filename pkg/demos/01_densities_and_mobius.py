"""
Counting maps into a multigraph
===============================

Four flavors of density, the window profile behind them, and the
alternating-overlay transform that converts one flavor into another.
"""

import numpy as np

from mglimits import (
    Multigraph,
    density,
    inverse_mobius,
    leq_density_table,
    mobius_transform,
    mobius_transform_table,
    window_profile,
)

# A target with parallel edges and a loop: the loop shows up as 2 on the
# diagonal of the adjacency matrix.
G = Multigraph(np.array([
    [0, 2, 1, 0],
    [2, 0, 1, 0],
    [1, 1, 2, 1],
    [0, 0, 1, 0],
]))
edge = Multigraph(np.array([[0, 1], [1, 0]]))

print("target G:")
print(G.adj)
print()

# "leq" counts maps where every required multiplicity is met or exceeded;
# "eq" requires exact multiplicities; the 0-variants restrict to injective maps.
for variant in ("hom_leq", "hom_eq", "inj_leq", "inj_eq"):
    print(f"t[{variant}](edge, G) = {density(edge, G, variant)}")
print()

# All four are marginals of one object: the distribution of the k-window
# (the submatrix a uniformly random vertex tuple induces).
profile = window_profile(G, 2)
print("2-window law of G (window -> probability):")
for win in sorted(profile.counts, key=lambda m: m.adj.tolist()):
    print(f"  {win.adj.tolist()}  {profile.density(win, 'hom_eq')}")
print()

# The alternating overlay sum turns leq-densities into eq-densities ...
double = Multigraph(np.array([[0, 2], [2, 0]]))
print("mobius transform of t_leq(. , G) at the double edge:",
      mobius_transform(lambda f: density(f, G, "hom_leq"), double))
print("direct eq-density:                                   ",
      density(double, G, "hom_eq"))
print()

# ... and the upward sum inverts it.  Tables make the round trip cheap:
# build leq-densities up to multiplicity 4, transform down to 2, invert.
f4 = leq_density_table(G, 2, 4)
g2 = mobius_transform_table(f4, 2)
probe = Multigraph(np.array([[0, 1], [1, 2]]))
value, residual = inverse_mobius(g2, probe)
print(f"recovered t_leq(probe, G) = {value} (residual {residual})")
print(f"original                  = {f4.get(probe)}")
