"""
Watching a graph sequence converge
==================================

Densities of every small testgraph along a growing sequence, a Cauchy-style
oscillation diagnostic on the trajectories, and the tightness check that
separates honest convergence from mass escaping to infinity.
"""

from fractions import Fraction

from mglimits import (
    GraphonSampler,
    StepMultigraphon,
    cauchy_diagnostic,
    density_trajectory,
    tightness_diagnostic,
    two_block,
)

F = Fraction

# A W-random sequence: samples of growing size from one kernel.
W = two_block()
sampler = GraphonSampler(W)
seq = [sampler.sample(n, seed=11).window for n in (20, 40, 80)]
seq.append(W)  # append the kernel itself as the limit point

traj = density_trajectory(seq, seed=11)
print("trajectory columns: n " + " ".join(str(l) for l in traj.sequence_labels))
for j, f in enumerate(traj.testgraphs[:6]):
    vals, _ = traj.column(j)
    print(f"  {f.adj.tolist()!s:28} " + " ".join(f"{v:.3f}" for v in vals))
print()

print(cauchy_diagnostic(traj, window=3, tol=0.08).format())
print()

# Tightness: tail multiplicity mass must be controlled uniformly along the
# sequence.  Point masses marching upward fail.
escaping = [StepMultigraphon([F(1)], {(0, 0): [F(0)] * j + [F(1)]}, {0: [F(1)]})
            for j in range(1, 5)]
print(tightness_diagnostic([W, W], m_grid=[0, 1, 2]).format())
print(tightness_diagnostic(escaping, m_grid=[0, 1, 2]).format())
