"""Shared fixtures and independent oracles for the test suite."""

import itertools
from fractions import Fraction

import numpy as np
from hypothesis import strategies as st

from mglimits import multigraph as mg


def M(rows):
    return mg.Multigraph(np.array(rows))


TRIANGLE = M([[0, 1, 1], [1, 0, 1], [1, 1, 0]])
EDGE = M([[0, 1], [1, 0]])
LOOP = M([[2]])
DOUBLE_EDGE = M([[0, 2], [2, 0]])
PATH2 = M([[0, 1, 0], [1, 0, 1], [0, 1, 0]])
VERTEX = M([[0]])


@st.composite
def multigraphs(draw, min_n=1, max_n=6, max_mult=3):
    n = draw(st.integers(min_n, max_n))
    arr = np.zeros((n, n), dtype=np.int64)
    for i in range(n):
        for j in range(i, n):
            if i == j:
                arr[i, i] = 2 * draw(st.integers(0, max_mult // 2))
            else:
                v = draw(st.integers(0, max_mult))
                arr[i, j] = v
                arr[j, i] = v
    return mg.Multigraph(arr)


def random_multigraph(rng, n, max_mult):
    arr = rng.integers(0, max_mult + 1, size=(n, n))
    arr = np.triu(arr, 1)
    arr = arr + arr.T
    for i in range(n):
        arr[i, i] = 2 * rng.integers(0, max_mult // 2 + 1)
    return mg.Multigraph(arr)


def oracle_density(f, g, variant):
    """Plain odometer oracle, no pruning, no shared code with the library path."""
    k, n = f.n, g.n
    injective = variant.startswith("inj")
    want_leq = variant.endswith("leq")
    if injective and k > n:
        return Fraction(0)
    count = 0
    total = 0
    for phi in itertools.product(range(n), repeat=k):
        if injective and len(set(phi)) < k:
            continue
        total += 1
        good = True
        for i in range(k):
            for j in range(i, k):
                a = int(f.adj[i, j])
                b = int(g.adj[phi[i], phi[j]])
                if want_leq:
                    if b < a:
                        good = False
                else:
                    if b != a:
                        good = False
        if good:
            count += 1
    return Fraction(count, total)


def oracle_mobius(f, a):
    """Overlay alternating sum written directly from the definition."""
    k = a.n
    total = 0
    pairs = [(i, j) for i in range(k) for j in range(i, k)]
    for bits in itertools.product(range(2), repeat=len(pairs)):
        arr = np.zeros((k, k), dtype=np.int64)
        edges = 0
        for bit, (i, j) in zip(bits, pairs):
            if bit:
                v = 2 if i == j else 1
                arr[i, j] = v
                arr[j, i] = v
                edges += 1
        shifted = mg.Multigraph(a.adj + arr)
        total += (-1) ** edges * f(shifted)
    return total
