"""
Is this parameter a limit?
==========================

A graph parameter that arises as a limit of growing multigraphs is
normalized, multiplicative over disjoint unions, vanishing along edge
inflation, and reflection positive.  Each property is checkable, and
together they let us run the construction backwards: sample a consistent
graph sequence realizing the parameter.
"""

import numpy as np

from mglimits import (
    GraphParameter,
    Multigraph,
    check_limit_candidate,
    connection_matrix,
    density,
    factorization_check,
    graphon_density,
    psd_check,
    sample_consistent_sequence,
    two_block,
)

W = two_block()
f = GraphParameter.from_graphon(W)

# The battery: normalization, multiplicativity, decay, transform sign.
print(check_limit_candidate(f).format())
print()

# A parameter that is NOT multiplicative (eq-densities of a fixed graph)
# fails the battery.
G = Multigraph(np.array([[0, 2], [2, 0]]))
bad = GraphParameter.from_graph(G, mode="eq")
print(check_limit_candidate(bad).format())
print()

# Reflection positivity: the matrix f(F_i F_j) over 2-labeled graphs glued
# along their labels is positive semidefinite.
cm = connection_matrix(f, 2)
ok, eig = psd_check(cm)
print(f"connection matrix: {cm.size}x{cm.size}, psd={ok}, min eigenvalue {eig:.2e}")

# And it factors exactly through the zeta matrix of the overlay order.
print(factorization_check(f.evaluate, 2, 2))
print()

# Run the construction backwards: grow a graph sequence whose densities
# converge to the parameter.  Prefixes nest, so this is one object.
seq = sample_consistent_sequence(f, 120, seed=3, sizes=[30, 60, 120])
edge = Multigraph(np.array([[0, 1], [1, 0]]))
target = float(graphon_density(edge, W, "leq"))
print(f"target edge density {target:.4f}")
for g in seq:
    print(f"  n={g.n:4d}  t0_leq(edge, G_n) = {float(density(edge, g, 'inj_leq')):.4f}")
