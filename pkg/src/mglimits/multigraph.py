"""Finite multigraphs as symmetric adjacency matrices with even diagonals.

A multigraph on n vertices is stored as an n x n numpy integer matrix A with
A[i, j] = number of edges between i and j, and A[i, i] = twice the number of
loops at i, so every diagonal entry is even.  Vertices are 0-based in code;
the .mg text format uses 1-based vertex names.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import (
    AsymmetricMatrix,
    DimensionMismatch,
    FormatError,
    LabelCountMismatch,
    NonIntegerClassSize,
    OddDiagonal,
    TooLargeForCanonicalization,
    TruncationTooLarge,
)

ENUMERATION_CAP = 10 ** 6
OVERLAY_MAX_K = 6
CANONICAL_MAX_N = 8


class Multigraph:
    """Immutable multigraph; compares and hashes by adjacency matrix."""

    __slots__ = ("adj",)

    def __init__(self, adj):
        arr = np.asarray(adj)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"adjacency matrix must be square, got shape {arr.shape}")
        if arr.size and not np.issubdtype(arr.dtype, np.integer):
            if not np.all(arr == np.floor(arr)):
                raise ValueError("adjacency entries must be integers")
        arr = arr.astype(np.int64)
        if arr.size and arr.min() < 0:
            raise ValueError("adjacency entries must be nonnegative")
        bad = np.argwhere(arr != arr.T)
        if len(bad):
            i, j = (int(v) for v in bad[0])
            raise AsymmetricMatrix(f"entry ({i}, {j}) != ({j}, {i})", (i, j))
        diag = np.diagonal(arr)
        odd = np.nonzero(diag % 2)[0]
        if len(odd):
            i = int(odd[0])
            raise OddDiagonal(f"diagonal entry at vertex {i} is odd", i)
        arr.setflags(write=False)
        object.__setattr__(self, "adj", arr)

    @classmethod
    def _wrap(cls, arr: np.ndarray) -> "Multigraph":
        # fast path for matrices already known valid (enumerators, samplers)
        obj = object.__new__(cls)
        arr.setflags(write=False)
        object.__setattr__(obj, "adj", arr)
        return obj

    @classmethod
    def empty(cls, n: int) -> "Multigraph":
        return cls._wrap(np.zeros((n, n), dtype=np.int64))

    @property
    def n(self) -> int:
        return self.adj.shape[0]

    def edge_count(self) -> int:
        return int(self.adj.sum()) // 2

    def __setattr__(self, name, value):
        raise AttributeError("Multigraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Multigraph):
            return NotImplemented
        return self.adj.shape == other.adj.shape and np.array_equal(self.adj, other.adj)

    def __hash__(self):
        return hash((self.n, self.adj.tobytes()))

    def __repr__(self):
        return f"Multigraph({self.adj.tolist()})"


def validate(adj) -> Multigraph:
    """Check symmetry, nonnegativity and even diagonal; return the multigraph."""
    return Multigraph(adj)


def edge_count(g: Multigraph) -> int:
    """Edge count e(A) = half the matrix sum; loops count once."""
    return g.edge_count()


def leq(a: Multigraph, b: Multigraph) -> bool:
    """Entrywise partial order on multigraphs of equal vertex count."""
    if a.n != b.n:
        raise DimensionMismatch(f"vertex counts differ: {a.n} vs {b.n}")
    return bool(np.all(a.adj <= b.adj))


class Permutation:
    """Bijection of [n], stored 0-based."""

    __slots__ = ("mapping",)

    def __init__(self, mapping):
        m = tuple(int(v) for v in mapping)
        if sorted(m) != list(range(len(m))):
            raise ValueError(f"not a permutation of range({len(m)}): {m}")
        object.__setattr__(self, "mapping", m)

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(range(n))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.mapping)
        for i, v in enumerate(self.mapping):
            inv[v] = i
        return Permutation(inv)

    def apply(self, g: Multigraph) -> Multigraph:
        """Relabel: result (i, j) entry is g's (mapping[i], mapping[j]) entry."""
        if len(self.mapping) != g.n:
            raise DimensionMismatch(f"permutation of {len(self.mapping)} applied to n={g.n}")
        idx = np.array(self.mapping, dtype=np.intp)
        return Multigraph._wrap(np.ascontiguousarray(g.adj[np.ix_(idx, idx)]))

    def __setattr__(self, name, value):
        raise AttributeError("Permutation is immutable")

    def __eq__(self, other):
        if not isinstance(other, Permutation):
            return NotImplemented
        return self.mapping == other.mapping

    def __hash__(self):
        return hash(self.mapping)

    def __repr__(self):
        return f"Permutation({list(self.mapping)})"


class KLabeledGraph:
    """Multigraph whose first k vertices are distinguished labels."""

    __slots__ = ("k", "graph")

    def __init__(self, k: int, graph: Multigraph):
        if not 0 <= k <= graph.n:
            raise LabelCountMismatch(f"label count {k} outside 0..{graph.n}")
        object.__setattr__(self, "k", int(k))
        object.__setattr__(self, "graph", graph)

    def __setattr__(self, name, value):
        raise AttributeError("KLabeledGraph is immutable")

    def __eq__(self, other):
        if not isinstance(other, KLabeledGraph):
            return NotImplemented
        return self.k == other.k and self.graph == other.graph

    def __hash__(self):
        return hash((self.k, self.graph))

    def __repr__(self):
        return f"KLabeledGraph(k={self.k}, {self.graph!r})"


# -- enumeration -------------------------------------------------------------

def _upper_positions(k: int):
    return [(i, j) for i in range(k) for j in range(i, k)]


def iter_multigraphs(k: int, max_mult: int, max_edges: int | None = None):
    """Yield all k-vertex multigraphs with entries <= max_mult in lexicographic order.

    Diagonal entries range over even values <= max_mult.  The order is
    lexicographic in the upper triangle read row by row.
    """
    if k < 0 or max_mult < 0:
        raise ValueError("k and max_mult must be nonnegative")
    positions = _upper_positions(k)
    choices = []
    for (i, j) in positions:
        if i == j:
            choices.append(range(0, 2 * (max_mult // 2) + 1, 2))
        else:
            choices.append(range(0, max_mult + 1))
    for combo in itertools.product(*choices):
        if max_edges is not None:
            e = sum(v if i == j else 2 * v for v, (i, j) in zip(combo, positions)) // 2
            if e > max_edges:
                continue
        arr = np.zeros((k, k), dtype=np.int64)
        for v, (i, j) in zip(combo, positions):
            arr[i, j] = v
            arr[j, i] = v
        yield Multigraph._wrap(arr)


def enumerate_multigraphs(k: int, max_mult: int, max_edges: int | None = None,
                          cap: int = ENUMERATION_CAP) -> list[Multigraph]:
    """All k-vertex multigraphs within the truncation, or TruncationTooLarge."""
    n_diag = max_mult // 2 + 1
    n_off = max_mult + 1
    total = n_diag ** k * n_off ** (k * (k - 1) // 2)
    if max_edges is None and total > cap:
        raise TruncationTooLarge(f"{total} matrices exceeds cap {cap}")
    out = []
    for g in iter_multigraphs(k, max_mult, max_edges):
        out.append(g)
        if len(out) > cap:
            raise TruncationTooLarge(f"enumeration exceeds cap {cap}")
    return out


def iter_overlays(k: int):
    """Yield the 2^(k(k+1)/2) overlay matrices: off-diagonal 0/1, diagonal 0/2."""
    positions = _upper_positions(k)
    choices = [(0, 2) if i == j else (0, 1) for (i, j) in positions]
    for combo in itertools.product(*choices):
        arr = np.zeros((k, k), dtype=np.int64)
        for v, (i, j) in zip(combo, positions):
            arr[i, j] = v
            arr[j, i] = v
        yield Multigraph._wrap(arr)


def enumerate_overlays(k: int, max_k: int = OVERLAY_MAX_K) -> list[Multigraph]:
    if k > max_k:
        raise TruncationTooLarge(f"overlay enumeration capped at k <= {max_k}, got {k}")
    return list(iter_overlays(k))


def basis_sort_key(g: Multigraph):
    """Sort key (edge count, row-major adjacency) for deterministic bases."""
    return (g.edge_count(), tuple(int(v) for v in g.adj.reshape(-1)))


# -- canonical forms ---------------------------------------------------------

@lru_cache(maxsize=16)
def _perm_index(n: int) -> np.ndarray:
    return np.array(list(itertools.permutations(range(n))), dtype=np.intp)


def _min_row_bytes(flat: np.ndarray) -> bytes:
    # big-endian view so byte order agrees with numeric order on nonnegatives
    be = np.ascontiguousarray(flat).astype(">u8")
    width = be.shape[1] * 8
    buf = be.tobytes()
    return min(buf[i * width:(i + 1) * width] for i in range(be.shape[0]))


def canonical_form(g: Multigraph, max_n: int = CANONICAL_MAX_N) -> Multigraph:
    """Lexicographic minimum of the adjacency matrix over all vertex relabelings."""
    n = g.n
    if n > max_n:
        raise TooLargeForCanonicalization(f"n={n} exceeds cap {max_n}")
    if n <= 1:
        return g
    perms = _perm_index(n)
    mats = g.adj[perms[:, :, None], perms[:, None, :]]
    best = _min_row_bytes(mats.reshape(len(perms), -1))
    arr = np.frombuffer(best, dtype=">u8").astype(np.int64).reshape(n, n)
    return Multigraph._wrap(arr)


def labeled_canonical_form(f: KLabeledGraph, max_n: int = CANONICAL_MAX_N) -> KLabeledGraph:
    """Canonical form under relabelings that fix the k labels pointwise."""
    n, k = f.graph.n, f.k
    if n > max_n:
        raise TooLargeForCanonicalization(f"n={n} exceeds cap {max_n}")
    if n - k <= 1:
        return f
    fixed = tuple(range(k))
    best = None
    for tail in itertools.permutations(range(k, n)):
        idx = np.array(fixed + tail, dtype=np.intp)
        cand = np.ascontiguousarray(f.graph.adj[np.ix_(idx, idx)])
        key = cand.astype(">u8").tobytes()
        if best is None or key < best[0]:
            best = (key, cand)
    return KLabeledGraph(k, Multigraph._wrap(best[1]))


# -- gluing ------------------------------------------------------------------

def glue(f1: KLabeledGraph, f2: KLabeledGraph) -> KLabeledGraph:
    """Gluing product: identify labels (entrywise max there), keep parts disjoint.

    Between two labeled vertices the multiplicity is the max of the two inputs;
    within either part it is copied; between unlabeled vertices of different
    parts it is 0.  With k = 0 this is the disjoint union.
    """
    if f1.k != f2.k:
        raise LabelCountMismatch(f"label counts differ: {f1.k} vs {f2.k}")
    k = f1.k
    a1, a2 = f1.graph.adj, f2.graph.adj
    u1, u2 = f1.graph.n - k, f2.graph.n - k
    n = k + u1 + u2
    arr = np.zeros((n, n), dtype=np.int64)
    arr[:k, :k] = np.maximum(a1[:k, :k], a2[:k, :k])
    arr[:k, k:k + u1] = a1[:k, k:]
    arr[k:k + u1, :k] = a1[k:, :k]
    arr[k:k + u1, k:k + u1] = a1[k:, k:]
    arr[:k, k + u1:] = a2[:k, k:]
    arr[k + u1:, :k] = a2[k:, :k]
    arr[k + u1:, k + u1:] = a2[k:, k:]
    return KLabeledGraph(k, Multigraph._wrap(arr))


def disjoint_union(g1: Multigraph, g2: Multigraph) -> Multigraph:
    return glue(KLabeledGraph(0, g1), KLabeledGraph(0, g2)).graph


# -- quotient by identical rows ----------------------------------------------

class QuotientData:
    """Vertex classes with identical adjacency rows, plus class matrix and weights."""

    __slots__ = ("classes", "matrix", "weights")

    def __init__(self, classes, matrix: Multigraph, weights):
        object.__setattr__(self, "classes", tuple(tuple(c) for c in classes))
        object.__setattr__(self, "matrix", matrix)
        object.__setattr__(self, "weights", tuple(weights))
        if len(self.classes) != matrix.n or len(self.weights) != matrix.n:
            raise DimensionMismatch("class count, matrix size and weights must agree")
        if sum(self.weights, Fraction(0)) != 1:
            raise ValueError("class weights must sum to 1")

    def __setattr__(self, name, value):
        raise AttributeError("QuotientData is immutable")

    def __repr__(self):
        return f"QuotientData(classes={self.classes}, weights={self.weights})"


def quotient(g: Multigraph) -> QuotientData:
    """Group vertices whose adjacency rows are identical, in first-seen order."""
    n = g.n
    seen: dict[bytes, int] = {}
    classes: list[list[int]] = []
    for i in range(n):
        key = g.adj[i].tobytes()
        if key in seen:
            classes[seen[key]].append(i)
        else:
            seen[key] = len(classes)
            classes.append([i])
    reps = np.array([c[0] for c in classes], dtype=np.intp)
    mat = Multigraph(np.ascontiguousarray(g.adj[np.ix_(reps, reps)]))
    weights = [Fraction(len(c), n) for c in classes]
    return QuotientData(classes, mat, weights)


def reconstruct(q: QuotientData, n: int) -> Multigraph:
    """Blow each class up to weight * n vertices; inverse of quotient up to relabeling."""
    sizes = []
    for w in q.weights:
        s = Fraction(w) * n
        if s.denominator != 1 or s <= 0:
            raise NonIntegerClassSize(f"class size {w} * {n} = {s} is not a positive integer")
        sizes.append(int(s))
    reps = np.repeat(np.arange(q.matrix.n, dtype=np.intp), sizes)
    arr = q.matrix.adj[np.ix_(reps, reps)]
    return Multigraph(np.ascontiguousarray(arr))


# -- .mg file format ---------------------------------------------------------

def mg_loads(text: str) -> Multigraph:
    """Parse the .mg format: 'n <count>' then 'i j m' lines, 1-based, i <= j.

    A line with i == j gives the loop count at i (stored internally as 2m).
    Lines starting with '#' and blank lines are ignored.
    """
    n = None
    arr = None
    filled = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise FormatError(f"line {lineno}: expected 'n <count>', got {raw!r}")
            try:
                n = int(parts[1])
            except ValueError:
                raise FormatError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise FormatError(f"line {lineno}: negative vertex count")
            arr = np.zeros((n, n), dtype=np.int64)
            continue
        if len(parts) != 3:
            raise FormatError(f"line {lineno}: expected 'i j m', got {raw!r}")
        try:
            i, j, m = (int(p) for p in parts)
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer token in {raw!r}") from None
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"line {lineno}: vertex out of range 1..{n}")
        if i > j:
            raise FormatError(f"line {lineno}: require i <= j, got {i} > {j}")
        if m < 0:
            raise FormatError(f"line {lineno}: negative multiplicity")
        if (i, j) in filled:
            raise FormatError(f"line {lineno}: duplicate entry for ({i}, {j})")
        filled.add((i, j))
        if i == j:
            arr[i - 1, i - 1] = 2 * m
        else:
            arr[i - 1, j - 1] = m
            arr[j - 1, i - 1] = m
    if n is None:
        raise FormatError("missing 'n <count>' header")
    return Multigraph(arr)


def mg_dumps(g: Multigraph, comment: str | None = None) -> str:
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"n {g.n}")
    for i in range(g.n):
        for j in range(i, g.n):
            v = int(g.adj[i, j])
            if v == 0:
                continue
            if i == j:
                lines.append(f"{i + 1} {j + 1} {v // 2}")
            else:
                lines.append(f"{i + 1} {j + 1} {v}")
    return "\n".join(lines) + "\n"


def read_mg(path) -> Multigraph:
    with open(path, "r", encoding="utf-8") as fh:
        return mg_loads(fh.read())


def write_mg(g: Multigraph, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mg_dumps(g, comment))
