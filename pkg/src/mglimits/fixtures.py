"""Deterministic fixture objects shared by demos, diagnostics, and tests."""

from fractions import Fraction

import numpy as np

from .graphon import StepMultigraphon
from .multigraph import Multigraph, basis_sort_key, canonical_form, iter_multigraphs

F = Fraction


def two_block() -> StepMultigraphon:
    """Half/half two-block kernel: sparse inside blocks, dense across."""
    return StepMultigraphon(
        [F(1, 2), F(1, 2)],
        {(0, 0): [F(7, 8), F(1, 8)],
         (1, 1): [F(3, 4), F(1, 4)],
         (0, 1): [F(1, 4), F(3, 4)]},
        {0: [F(1)], 1: [F(1)]},
    )


def standard_multigraphons() -> list[StepMultigraphon]:
    """Ten fixed, exactly represented step multigraphons of varied shape.

    Index 0 is the two-block fixture; the rest vary block count, multiplicity
    cap, and diagonal (loop) mass.  All distributions are rational, so every
    derived density is exact.
    """
    h = F(1, 2)
    fixtures = [
        two_block(),
        # Bernoulli(1/2) edges, no loops
        StepMultigraphon([F(1)], {(0, 0): [h, h]}, {0: [F(1)]}),
        # empty
        StepMultigraphon([F(1)], {(0, 0): [F(1)]}, {0: [F(1)]}),
        # every pair carries a double edge
        StepMultigraphon([F(1)], {(0, 0): [F(0), F(0), F(1)]}, {0: [F(1)]}),
        # geometric-ish tail up to multiplicity 3
        StepMultigraphon([F(1)], {(0, 0): [h, F(1, 4), F(1, 8), F(1, 8)]},
                         {0: [F(1)]}),
        # uniform on {0,1,2,3}
        StepMultigraphon([F(1)], {(0, 0): [F(1, 4)] * 4}, {0: [F(1)]}),
        # loop mass only
        StepMultigraphon([F(1)], {(0, 0): [F(1)]}, {0: [h, F(0), h]}),
        # two blocks with loops in the small block
        StepMultigraphon(
            [F(1, 3), F(2, 3)],
            {(0, 0): [F(1, 3), F(2, 3)], (0, 1): [h, F(1, 4), F(1, 4)],
             (1, 1): [F(5, 6), F(1, 6)]},
            {0: [F(3, 4), F(0), F(1, 4)], 1: [F(1)]},
        ),
        # three skewed blocks, multiplicity cap 2
        StepMultigraphon(
            [h, F(1, 4), F(1, 4)],
            {(0, 0): [F(1)], (1, 1): [F(0), F(1)], (2, 2): [h, h],
             (0, 1): [F(1, 4), h, F(1, 4)], (0, 2): [F(3, 4), F(1, 4)],
             (1, 2): [F(0), F(0), F(1)]},
            {0: [F(1)], 1: [F(1)], 2: [h, F(0), h]},
        ),
        # the limit object of a fixed finite graph (a triangle)
        StepMultigraphon.from_graph(Multigraph(np.array(
            [[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=np.int64))),
    ]
    return fixtures


def default_testgraphs(max_n: int = 3, max_mult: int = 2) -> list[Multigraph]:
    """Canonical representatives of all multigraphs with <= max_n vertices."""
    seen = {}
    for n in range(1, max_n + 1):
        for g in iter_multigraphs(n, max_mult):
            c = canonical_form(g)
            if c not in seen:
                seen[c] = None
    return sorted(seen, key=lambda g: (g.n,) + basis_sort_key(g))
