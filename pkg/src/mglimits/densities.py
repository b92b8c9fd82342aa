"""Exact homomorphism-style densities of one multigraph in another.

Four variants, all exact rationals: vertex maps may be arbitrary (hom) or
injective (inj), and the pattern's multiplicities must be dominated (leq) or
matched exactly (eq) by the target's, at every vertex pair including the
diagonal.  Injective variants are 0 when the pattern has more vertices than
the target.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .errors import BudgetExceeded, MglimitsError, RangeViolation
from .mobius import ParameterTable
from .multigraph import Multigraph, enumerate_multigraphs

VARIANTS = ("hom_leq", "hom_eq", "inj_leq", "inj_eq")

DEFAULT_BUDGET = 10 ** 8
_DFS_CUTOFF = 1 << 16
_CHUNK = 1 << 20


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


def indicator(f: Multigraph, g: Multigraph, phi, mode: str = "leq") -> int:
    """1 if the vertex map phi carries f's multiplicities into g's, else 0.

    Checks every pair (i, j) of pattern vertices, diagonal included; mode
    'leq' requires domination, 'eq' exact equality off the map's image too.
    """
    if mode not in ("leq", "eq"):
        raise ValueError(f"mode must be 'leq' or 'eq', got {mode!r}")
    k, n = f.n, g.n
    phi = tuple(int(v) for v in phi)
    if len(phi) != k:
        raise RangeViolation(f"map has length {len(phi)}, pattern has {k} vertices")
    for v in phi:
        if not 0 <= v < n:
            raise RangeViolation(f"map value {v} outside 0..{n - 1}")
    for i in range(k):
        for j in range(i, k):
            a, b = f.adj[i, j], g.adj[phi[i], phi[j]]
            if (mode == "leq" and b < a) or (mode == "eq" and b != a):
                return 0
    return 1


def _count_dfs(a: np.ndarray, b: np.ndarray, leq: bool, injective: bool) -> int:
    k, n = a.shape[0], b.shape[0]
    count = 0
    phi = [0] * k
    used = [False] * n

    def extend(depth: int):
        nonlocal count
        if depth == k:
            count += 1
            return
        for v in range(n):
            if injective and used[v]:
                continue
            ok = True
            for i in range(depth + 1):
                w = b[phi[i] if i < depth else v, v]
                t = a[i, depth]
                if (leq and w < t) or (not leq and w != t):
                    ok = False
                    break
            if not ok:
                continue
            phi[depth] = v
            if injective:
                used[v] = True
            extend(depth + 1)
            if injective:
                used[v] = False

    extend(0)
    return count


def _maps_chunk(start: int, stop: int, k: int, n: int) -> np.ndarray:
    idx = np.arange(start, stop, dtype=np.int64)
    phi = np.empty((len(idx), k), dtype=np.int64)
    rem = idx
    for pos in range(k - 1, -1, -1):
        phi[:, pos] = rem % n
        rem = rem // n
    return phi


def _count_chunked(a: np.ndarray, b: np.ndarray, leq: bool, injective: bool) -> int:
    k, n = a.shape[0], b.shape[0]
    total = n ** k
    count = 0
    for start in range(0, total, _CHUNK):
        phi = _maps_chunk(start, min(start + _CHUNK, total), k, n)
        ok = np.ones(phi.shape[0], dtype=bool)
        if injective:
            for i in range(k):
                for j in range(i + 1, k):
                    ok &= phi[:, i] != phi[:, j]
        for i in range(k):
            for j in range(i, k):
                vals = b[phi[:, i], phi[:, j]]
                ok &= (vals >= a[i, j]) if leq else (vals == a[i, j])
        count += int(ok.sum())
    return count


def density(f: Multigraph, g: Multigraph, variant: str,
            budget: int = DEFAULT_BUDGET) -> Fraction:
    """Exact density of pattern f in target g for one of the four variants."""
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    injective = variant.startswith("inj")
    leq_mode = variant.endswith("leq")
    k, n = f.n, g.n
    if injective and k > n:
        return Fraction(0)
    if k == 0:
        return Fraction(1)
    work = n ** k
    if work > budget:
        raise BudgetExceeded(f"n^k = {n}^{k} = {work} exceeds budget {budget}")
    if work <= _DFS_CUTOFF:
        count = _count_dfs(f.adj, g.adj, leq_mode, injective)
    else:
        count = _count_chunked(f.adj, g.adj, leq_mode, injective)
    den = _falling(n, k) if injective else work
    return Fraction(count, den)


# -- window profiles ---------------------------------------------------------

class WindowProfile:
    """Exact distribution of k-vertex windows of a target multigraph.

    counts[A] is the number of maps [k] -> [n] whose induced window equals A;
    inj_counts restricts to injective maps.  All four densities read off it.
    """

    def __init__(self, g: Multigraph, k: int, counts: dict, inj_counts: dict):
        self.g = g
        self.k = k
        self.counts = counts
        self.inj_counts = inj_counts
        self.total = g.n ** k
        self.inj_total = _falling(g.n, k)
        self._stack = np.stack([m.adj for m in counts]) if counts else \
            np.zeros((0, k, k), dtype=np.int64)
        self._cvec = np.array([counts[m] for m in counts], dtype=np.int64)
        self._inj_stack = np.stack([m.adj for m in inj_counts]) if inj_counts else \
            np.zeros((0, k, k), dtype=np.int64)
        self._inj_cvec = np.array([inj_counts[m] for m in inj_counts], dtype=np.int64)

    def eq_count(self, a: Multigraph, injective: bool = False) -> int:
        d = self.inj_counts if injective else self.counts
        return d.get(a, 0)

    def leq_count(self, a: Multigraph, injective: bool = False) -> int:
        stack = self._inj_stack if injective else self._stack
        cvec = self._inj_cvec if injective else self._cvec
        if not len(stack):
            return 0
        mask = np.all(stack >= a.adj, axis=(1, 2))
        return int(cvec[mask].sum())

    def density(self, a: Multigraph, variant: str) -> Fraction:
        injective = variant.startswith("inj")
        if injective and self.inj_total == 0:
            return Fraction(0)
        count = (self.leq_count(a, injective) if variant.endswith("leq")
                 else self.eq_count(a, injective))
        return Fraction(count, self.inj_total if injective else self.total)


def window_profile(g: Multigraph, k: int, budget: int = DEFAULT_BUDGET) -> WindowProfile:
    """Tabulate all k-window counts of g in one pass over the n^k maps."""
    n = g.n
    work = n ** k
    if work > budget:
        raise BudgetExceeded(f"n^k = {n}^{k} = {work} exceeds budget {budget}")
    iu = np.triu_indices(k)
    counts: dict[Multigraph, int] = {}
    inj_counts: dict[Multigraph, int] = {}
    for start in range(0, work, _CHUNK):
        phi = _maps_chunk(start, min(start + _CHUNK, work), k, n)
        wins = g.adj[phi[:, :, None], phi[:, None, :]]
        tri = wins[:, iu[0], iu[1]]
        inj = np.ones(phi.shape[0], dtype=bool)
        for i in range(k):
            for j in range(i + 1, k):
                inj &= phi[:, i] != phi[:, j]
        uniq, inverse, ucounts = np.unique(tri, axis=0, return_inverse=True,
                                           return_counts=True)
        inverse = inverse.reshape(-1)
        inj_per = np.bincount(inverse[inj], minlength=len(uniq))
        for row, c, ci in zip(uniq, ucounts, inj_per):
            arr = np.zeros((k, k), dtype=np.int64)
            arr[iu] = row
            arr.T[iu] = row
            m = Multigraph._wrap(arr)
            counts[m] = counts.get(m, 0) + int(c)
            if ci:
                inj_counts[m] = inj_counts.get(m, 0) + int(ci)
    return WindowProfile(g, k, counts, inj_counts)


def leq_density_table(g: Multigraph, k: int, max_mult: int,
                      max_edges: int | None = None,
                      budget: int = DEFAULT_BUDGET) -> ParameterTable:
    """Exact table of leq-densities of every k-vertex pattern in the truncation."""
    prof = window_profile(g, k, budget)
    entries = {}
    for a in enumerate_multigraphs(k, max_mult, max_edges):
        entries[a] = Fraction(prof.leq_count(a), prof.total)
    return ParameterTable(k, entries, max_mult=max_mult, max_edges=max_edges)


# -- density tables and CSV ---------------------------------------------------

class DensityTable:
    """Densities for several patterns and variants; failed cells keep the error."""

    def __init__(self, labels, cells):
        self.labels = list(labels)
        self.cells = cells

    def get(self, label: str, variant: str):
        return self.cells[(label, variant)]

    def to_csv(self) -> str:
        lines = ["F,variant,value_num,value_den,value_float"]
        for (label, variant), val in self.cells.items():
            if isinstance(val, str):
                lines.append(f"{label},{variant},,,error:{val}")
            else:
                fv = Fraction(val)
                lines.append(f"{label},{variant},{fv.numerator},{fv.denominator},"
                             f"{float(fv)!r}")
        return "\n".join(lines) + "\n"


def density_table(patterns, g: Multigraph, variants=VARIANTS,
                  budget: int = DEFAULT_BUDGET, labels=None) -> DensityTable:
    """Densities of each pattern under each variant; budget failures are recorded
    per cell rather than aborting the table."""
    pats = list(patterns)
    if labels is None:
        labels = [f"F{i}" for i in range(len(pats))]
    cells = {}
    for label, f in zip(labels, pats):
        for variant in variants:
            try:
                cells[(label, variant)] = density(f, g, variant, budget)
            except MglimitsError as err:
                cells[(label, variant)] = type(err).__name__
    return DensityTable(labels, cells)
