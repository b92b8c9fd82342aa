"""
Step multigraphons and exact integration
========================================

A block kernel assigns each pair of blocks a distribution over edge
multiplicities.  Densities against it are finite sums, so everything here
is exact rational arithmetic.
"""

from fractions import Fraction

import numpy as np

from mglimits import (
    Multigraph,
    StepMultigraphon,
    density,
    graphon_density,
    mgw_dumps,
    tightness_tail,
    two_block,
)

F = Fraction

# Two blocks of equal width.  Within block 0 an edge is rare, within block 1
# a double edge appears a quarter of the time, across blocks edges are likely.
W = two_block()
print(W)
print(mgw_dumps(W))

edge = Multigraph(np.array([[0, 1], [1, 0]]))
double = Multigraph(np.array([[0, 2], [2, 0]]))
triangle = Multigraph(np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]]))

for f, name in ((edge, "edge"), (double, "double edge"), (triangle, "triangle")):
    print(f"t_leq({name}, W) = {graphon_density(f, W, 'leq')}")
print()

# A finite multigraph G embeds as a step kernel W_G with point-mass cells,
# and the two density notions agree exactly.
G = Multigraph(np.array([[0, 2, 1], [2, 2, 0], [1, 0, 0]]))
WG = StepMultigraphon.from_graph(G)
print("graph vs kernel on G:",
      density(edge, G, "hom_leq"), "=", graphon_density(edge, WG, "leq"))
print()

# Tail mass beyond each multiplicity level, off-diagonal and diagonal
# separately.  For W_G it hits exactly zero beyond the max multiplicity.
for m in range(4):
    print(f"tail at level {m}: W {tightness_tail(W, m)}   W_G {tightness_tail(WG, m)}")
