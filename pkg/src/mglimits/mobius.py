"""Mobius transforms of multigraph parameters over the entrywise partial order.

The transform of f at A is the alternating sum of f over all overlays A + E
(off-diagonal 0/1, diagonal 0/2 additions), signed by the overlay's edge
count.  Its inverse is the plain upward sum over the partial order, which is
infinite in general and therefore always truncated here, with the truncation
deficit reported alongside the value.
"""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .errors import (
    BasisNotClosed,
    DimensionMismatch,
    EmptyTruncation,
    FormatError,
    MixedVertexCounts,
    TruncationExceeded,
)
from .multigraph import (
    Multigraph,
    basis_sort_key,
    enumerate_multigraphs,
    enumerate_overlays,
)


def _is_exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


class ParameterTable:
    """Finite table of parameter values keyed by multigraphs on k vertices.

    Values may be exact (Fraction/int) or float; a table is 'exact' only if
    every value is.  Iteration order is the deterministic basis order
    (edge count, then row-major adjacency).
    """

    def __init__(self, k: int, entries: dict, max_mult: int | None = None,
                 max_edges: int | None = None):
        self.k = int(k)
        self.max_edges = max_edges
        items = []
        top = 0
        for g, v in entries.items():
            if not isinstance(g, Multigraph):
                g = Multigraph(g)
            if g.n != self.k:
                raise MixedVertexCounts(f"table key has n={g.n}, expected {self.k}")
            top = max(top, int(g.adj.max()) if g.n else 0)
            items.append((g, v))
        if max_mult is None:
            max_mult = top
        elif top > max_mult:
            raise ValueError(f"entry multiplicity {top} exceeds declared max_mult {max_mult}")
        self.max_mult = max_mult
        items.sort(key=lambda kv: basis_sort_key(kv[0]))
        self.entries = dict(items)
        self._values = [v for _, v in items]
        self._index = {g.adj.tobytes(): i for i, g in enumerate(self.entries)}
        self._stack = None
        self._num = None
        self._den = None

    def __len__(self):
        return len(self.entries)

    def __contains__(self, g: Multigraph):
        return g.adj.tobytes() in self._index

    def get(self, g: Multigraph):
        i = self._index.get(g.adj.tobytes())
        if i is None:
            return None
        return self._values[i]

    @property
    def is_exact(self) -> bool:
        return all(_is_exact(v) for v in self._values)

    def keys(self):
        return list(self.entries.keys())

    def total_mass(self):
        vals = list(self.entries.values())
        if not vals:
            return Fraction(0)
        if self.is_exact:
            return sum((Fraction(v) for v in vals), Fraction(0))
        return float(sum(float(v) for v in vals))

    def key_stack(self) -> np.ndarray:
        """All keys as one (len, k, k) integer array, in table order."""
        if self._stack is None:
            if len(self.entries) == 0:
                self._stack = np.zeros((0, self.k, self.k), dtype=np.int64)
            else:
                self._stack = np.stack([g.adj for g in self.entries])
        return self._stack

    def exact_numerators(self):
        """(numerators, common denominator) when all values are rational, else None."""
        if not self.is_exact or len(self.entries) == 0:
            return None
        if self._num is None:
            vals = [Fraction(v) for v in self.entries.values()]
            den = 1
            for v in vals:
                den = den * v.denominator // math.gcd(den, v.denominator)
            num = np.array([int(v.numerator * (den // v.denominator)) for v in vals],
                           dtype=np.int64)
            self._num, self._den = num, den
        return self._num, self._den


def mobius_transform(f, a: Multigraph):
    """Alternating overlay sum of f at a; exact when f returns exact values.

    f may be a ParameterTable (every overlay of a must be present) or any
    callable on multigraphs.
    """
    k = a.n
    total = None
    for e in enumerate_overlays(k):
        sign = -1 if e.edge_count() % 2 else 1
        shifted = Multigraph._wrap(a.adj + e.adj)
        if isinstance(f, ParameterTable):
            v = f.get(shifted)
            if v is None:
                raise TruncationExceeded(
                    f"table lacks required entry at multiplicities {shifted.adj.tolist()}")
        else:
            v = f(shifted)
        term = sign * v if _is_exact(v) else sign * float(v)
        total = term if total is None else total + term
    return total


def mobius_transform_table(f_table: ParameterTable, max_mult: int,
                           max_edges: int | None = None) -> ParameterTable:
    """Tabulate the Mobius transform on the truncation entries <= max_mult.

    The input table must cover every overlay shift of every output key.
    Uses integer arithmetic on a common denominator when the input is exact.
    """
    k = f_table.k
    overlays = enumerate_overlays(k)
    signs = np.array([-1 if e.edge_count() % 2 else 1 for e in overlays], dtype=np.int64)
    exact = f_table.exact_numerators()
    out = {}
    values = None if exact else list(f_table.entries.values())
    for a in enumerate_multigraphs(k, max_mult, max_edges):
        idx = []
        for e in overlays:
            key = (a.adj + e.adj).tobytes()
            i = f_table._index.get(key)
            if i is None:
                raise TruncationExceeded(
                    f"table lacks overlay shift of {a.adj.tolist()}")
            idx.append(i)
        if exact is not None:
            num, den = exact
            out[a] = Fraction(int((signs * num[np.array(idx)]).sum()), den)
        else:
            out[a] = float(sum(s * float(values[i]) for s, i in zip(signs, idx)))
    return ParameterTable(k, out, max_mult=max_mult, max_edges=max_edges)


def inverse_mobius(g_table: ParameterTable, a: Multigraph):
    """Upward sum of the table above a, plus the truncation residual.

    Returns (value, residual) where residual = |1 - total table mass|, an
    indicator of how much of a probability table the truncation misses.
    """
    if len(g_table) == 0:
        raise EmptyTruncation("inverse transform over an empty table")
    if a.n != g_table.k:
        raise DimensionMismatch(f"argument has n={a.n}, table has k={g_table.k}")
    stack = g_table.key_stack()
    mask = np.all(stack >= a.adj, axis=(1, 2))
    exact = g_table.exact_numerators()
    if exact is not None:
        num, den = exact
        value = Fraction(int(num[mask].sum()), den)
        residual = abs(1 - Fraction(int(num.sum()), den))
    else:
        vals = np.array([float(v) for v in g_table.entries.values()])
        value = float(vals[mask].sum())
        residual = abs(1.0 - float(vals.sum()))
    return value, residual


# -- zeta algebra ------------------------------------------------------------

def sort_basis(graphs) -> list[Multigraph]:
    return sorted(graphs, key=basis_sort_key)


def _check_same_n(basis):
    if not basis:
        raise EmptyTruncation("empty basis")
    n = basis[0].n
    for g in basis:
        if g.n != n:
            raise MixedVertexCounts(f"basis mixes n={n} and n={g.n}")
    return n


def zeta_matrix(basis) -> np.ndarray:
    """0/1 matrix of the partial order: entry (i, j) is 1 iff basis[i] <= basis[j]."""
    _check_same_n(basis)
    m = len(basis)
    z = np.zeros((m, m), dtype=np.int64)
    stack = np.stack([g.adj for g in basis])
    for i in range(m):
        z[i] = np.all(stack >= stack[i], axis=(1, 2))
    return z


def _overlay_sign(diff: np.ndarray):
    """Sign (-1)^edges if diff is an overlay matrix, else 0."""
    d = np.diagonal(diff)
    off = diff[~np.eye(diff.shape[0], dtype=bool)]
    if np.any((d != 0) & (d != 2)) or np.any((off != 0) & (off != 1)):
        return 0
    e = int(diff.sum()) // 2
    return -1 if e % 2 else 1

def zeta_inverse(basis) -> np.ndarray:
    """Closed-form inverse of the zeta matrix; verifies Z Zinv = I on the basis."""
    _check_same_n(basis)
    m = len(basis)
    zi = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(m):
            diff = basis[j].adj - basis[i].adj
            if np.any(diff < 0):
                continue
            zi[i, j] = _overlay_sign(diff)
    z = zeta_matrix(basis)
    if not np.array_equal(z @ zi, np.eye(m, dtype=np.int64)):
        raise BasisNotClosed(
            "zeta inverse does not invert zeta; basis is not downward closed under overlays")
    return zi


class FactorizationReport:
    """Outcome of the connection-matrix factorization M = Z diag(f-transform) Z^T."""

    def __init__(self, k, basis_size, max_deviation, exact, max_abs_entry):
        self.k = k
        self.basis_size = basis_size
        self.max_deviation = max_deviation
        self.exact = exact
        self.max_abs_entry = max_abs_entry

    def __repr__(self):
        return (f"FactorizationReport(k={self.k}, basis_size={self.basis_size}, "
                f"max_deviation={self.max_deviation}, exact={self.exact})")


def factorization_check(f, k: int, max_mult: int, max_edges: int | None = None,
                        cap: int = 4096) -> FactorizationReport:
    """Compare f(max-overlay of pairs) against the zeta factorization.

    Builds the basis of all k-vertex multigraphs in the truncation, the matrix
    M[i, j] = f(entrywise max of basis[i], basis[j]), the diagonal of Mobius
    transforms, and reports max |M - Z D Z^T|.
    """
    basis = sort_basis(enumerate_multigraphs(k, max_mult, max_edges, cap=cap))
    m = len(basis)
    fvals = {}

    def eval_f(g: Multigraph):
        key = g.adj.tobytes()
        if key not in fvals:
            fvals[key] = f.get(g) if isinstance(f, ParameterTable) else f(g)
            if fvals[key] is None:
                raise TruncationExceeded("table lacks entry for glued pair")
        return fvals[key]

    big = [[eval_f(Multigraph._wrap(np.maximum(basis[i].adj, basis[j].adj)))
            for j in range(m)] for i in range(m)]
    d = [mobius_transform(f, g) for g in basis]
    z = zeta_matrix(basis).tolist()
    exact = all(_is_exact(v) for row in big for v in row) and all(_is_exact(v) for v in d)
    max_dev = 0
    max_abs = 0
    if exact:
        for i in range(m):
            supp_i = [t for t in range(m) if z[i][t]]
            for j in range(m):
                recon = sum(d[t] for t in supp_i if z[j][t])
                max_dev = max(max_dev, abs(big[i][j] - recon))
                max_abs = max(max_abs, abs(big[i][j]))
    else:
        zf = np.array(z, dtype=float)
        df = np.array([float(v) for v in d])
        bigf = np.array([[float(v) for v in row] for row in big])
        recon = (zf * df) @ zf.T
        max_dev = float(np.abs(bigf - recon).max())
        max_abs = float(np.abs(bigf).max())
    return FactorizationReport(k, m, max_dev, exact, max_abs)


# -- .ptab file format -------------------------------------------------------

def _parse_value(tok: str):
    if "/" in tok:
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad rational value {tok!r}") from None
    try:
        return Fraction(int(tok))
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"bad value token {tok!r}") from None


def ptab_loads(text: str) -> ParameterTable:
    """Parse a .ptab table: header 'k <k> max_mult <m>', then entry lines.

    Each entry line holds the upper triangle of the key (row-major) followed
    by the value, written as p/q for exact tables.
    """
    header = None
    entries = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if header is None:
            if len(parts) < 4 or parts[0] != "k" or parts[2] != "max_mult":
                raise FormatError(f"line {lineno}: expected 'k <k> max_mult <m>'")
            try:
                header = (int(parts[1]), int(parts[3]))
            except ValueError:
                raise FormatError(f"line {lineno}: bad header numbers") from None
            continue
        k, _ = header
        want = k * (k + 1) // 2
        if len(parts) != want + 1:
            raise FormatError(
                f"line {lineno}: expected {want} entries plus value, got {len(parts)}")
        try:
            tri = [int(p) for p in parts[:want]]
        except ValueError:
            raise FormatError(f"line {lineno}: non-integer multiplicity") from None
        arr = np.zeros((k, k), dtype=np.int64)
        pos = 0
        for i in range(k):
            for j in range(i, k):
                arr[i, j] = tri[pos]
                arr[j, i] = tri[pos]
                pos += 1
        g = Multigraph(arr)
        if g in entries:
            raise FormatError(f"line {lineno}: duplicate key")
        entries[g] = _parse_value(parts[want])
    if header is None:
        raise FormatError("missing .ptab header")
    return ParameterTable(header[0], entries, max_mult=header[1])


def ptab_dumps(table: ParameterTable, comment: str | None = None) -> str:
    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"k {table.k} max_mult {table.max_mult}")
    for g, v in table.entries.items():
        tri = [str(int(g.adj[i, j])) for i in range(table.k) for j in range(i, table.k)]
        if _is_exact(v):
            fv = Fraction(v)
            val = f"{fv.numerator}/{fv.denominator}" if fv.denominator != 1 else str(fv.numerator)
        else:
            val = repr(float(v))
        lines.append(" ".join(tri + [val]))
    return "\n".join(lines) + "\n"


def read_ptab(path) -> ParameterTable:
    with open(path, "r", encoding="utf-8") as fh:
        return ptab_loads(fh.read())


def write_ptab(table: ParameterTable, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(ptab_dumps(table, comment))
