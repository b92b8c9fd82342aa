"""Step multigraphons: cellwise multiplicity distributions on the unit square.

A step multigraphon has m cells with widths summing to 1.  Each unordered
cell pair carries a probability distribution over edge multiplicities, and
each cell carries a separate diagonal distribution supported on even values
(the measure-zero diagonal of the square is where loop counts live, doubled).
Densities integrate a pattern's multiplicity requirements cell by cell and
are exact rationals whenever all widths and probabilities are rational.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .errors import (
    AsymmetricKernel,
    BudgetExceeded,
    DistributionNotNormalized,
    FormatError,
    OddDiagonalMass,
    WidthsNotNormalized,
)
from .multigraph import Multigraph

FLOAT_TOL = 1e-12


def _exact(v) -> bool:
    return isinstance(v, (Fraction, int)) and not isinstance(v, bool)


def _norm_dist(d, cap: int):
    out = list(d) + [0] * (cap + 1 - len(d))
    return tuple(out)


def validate_graphon(widths, pair_dists, diag_dists, tol: float = FLOAT_TOL):
    """Check widths, symmetry, normalization and even diagonal support.

    pair_dists maps unordered cell pairs (a, b), a <= b, to multiplicity
    distributions; diag_dists maps each cell to its loop-side distribution.
    Returns (widths, pairs, diags, cap, exact) in a normalized layout.
    """
    widths = tuple(widths)
    m = len(widths)
    if m == 0:
        raise WidthsNotNormalized("no cells")
    exact = all(_exact(w) for w in widths)
    total = sum(widths)
    if exact:
        if total != 1:
            raise WidthsNotNormalized(f"widths sum to {total}")
    elif abs(float(total) - 1.0) > tol:
        raise WidthsNotNormalized(f"widths sum to {float(total)}")
    if any((w < 0 if _exact(w) else float(w) < 0) for w in widths):
        raise WidthsNotNormalized("negative width")

    pairs = {}
    for (a, b), d in pair_dists.items():
        if not (0 <= a < m and 0 <= b < m):
            raise DistributionNotNormalized(f"cell pair {(a, b)} outside 0..{m - 1}")
        key = (min(a, b), max(a, b))
        d = tuple(d)
        if key in pairs and pairs[key] != d:
            raise AsymmetricKernel(f"pair {key} given twice with different distributions")
        pairs[key] = d
    for a in range(m):
        for b in range(a, m):
            if (a, b) not in pairs:
                raise DistributionNotNormalized(f"missing distribution for cell pair {(a, b)}")
    diags = {}
    for a, d in diag_dists.items():
        if not 0 <= a < m:
            raise DistributionNotNormalized(f"diagonal cell {a} outside 0..{m - 1}")
        diags[a] = tuple(d)
    for a in range(m):
        if a not in diags:
            raise DistributionNotNormalized(f"missing diagonal distribution for cell {a}")

    cap = 0
    for d in itertools.chain(pairs.values(), diags.values()):
        cap = max(cap, len(d) - 1)

    def check_dist(d, where):
        nonlocal exact
        d_exact = all(_exact(v) for v in d)
        exact = exact and d_exact
        if any((v < 0 if _exact(v) else float(v) < 0) for v in d):
            raise DistributionNotNormalized(f"negative probability in {where}")
        s = sum(d)
        if d_exact:
            if s != 1:
                raise DistributionNotNormalized(f"{where} sums to {s}")
        elif abs(float(s) - 1.0) > tol:
            raise DistributionNotNormalized(f"{where} sums to {float(s)}")

    for key, d in pairs.items():
        check_dist(d, f"cell pair {key}")
    for a, d in diags.items():
        check_dist(d, f"diagonal cell {a}")
        for lvl, v in enumerate(d):
            bad = (v != 0) if _exact(v) else (float(v) > tol)
            if lvl % 2 == 1 and bad:
                raise OddDiagonalMass(f"diagonal cell {a} has mass at odd multiplicity {lvl}")

    pairs = {key: _norm_dist(d, cap) for key, d in pairs.items()}
    diags = {a: _norm_dist(d, cap) for a, d in diags.items()}
    return widths, pairs, diags, cap, exact


class StepMultigraphon:
    """Finitely many cells, each pair with its own multiplicity distribution."""

    def __init__(self, widths, pair_dists, diag_dists, tol: float = FLOAT_TOL):
        widths, pairs, diags, cap, exact = validate_graphon(
            widths, pair_dists, diag_dists, tol)
        self.widths = widths
        self.pairs = pairs
        self.diags = diags
        self.cap = cap
        self.is_exact = exact
        self._cache = {}

    @property
    def m(self) -> int:
        return len(self.widths)

    @classmethod
    def from_graph(cls, g: Multigraph) -> "StepMultigraphon":
        """Equal-width cells, one per vertex, with point-mass multiplicities."""
        n = g.n
        if n == 0:
            raise WidthsNotNormalized("empty graph has no cells")
        top = int(g.adj.max()) if n else 0
        widths = [Fraction(1, n)] * n
        pairs = {}
        for a in range(n):
            for b in range(a, n):
                d = [Fraction(0)] * (top + 1)
                d[int(g.adj[a, b])] = Fraction(1)
                pairs[(a, b)] = d
        diags = {}
        for a in range(n):
            d = [Fraction(0)] * (top + 1)
            d[int(g.adj[a, a])] = Fraction(1)
            diags[a] = d
        return cls(widths, pairs, diags)

    def pair(self, a: int, b: int):
        return self.pairs[(min(a, b), max(a, b))]

    def diag(self, a: int):
        return self.diags[a]

    def pair_tail(self, a: int, b: int, level: int):
        """Probability of multiplicity >= level between cells a and b."""
        d = self.pair(a, b)
        if level <= 0:
            return sum(d)
        return sum(d[level:]) if level < len(d) else (Fraction(0) if self.is_exact else 0.0)

    def diag_tail(self, a: int, level: int):
        d = self.diag(a)
        if level <= 0:
            return sum(d)
        return sum(d[level:]) if level < len(d) else (Fraction(0) if self.is_exact else 0.0)

    def pair_point(self, a: int, b: int, level: int):
        d = self.pair(a, b)
        return d[level] if level < len(d) else (Fraction(0) if self.is_exact else 0.0)

    def diag_point(self, a: int, level: int):
        d = self.diag(a)
        return d[level] if level < len(d) else (Fraction(0) if self.is_exact else 0.0)

    # float views for samplers
    def width_array(self) -> np.ndarray:
        if "w" not in self._cache:
            self._cache["w"] = np.array([float(w) for w in self.widths])
        return self._cache["w"]

    def pair_cdf_array(self) -> np.ndarray:
        if "pc" not in self._cache:
            m, L = self.m, self.cap + 1
            arr = np.zeros((m, m, L))
            for a in range(m):
                for b in range(m):
                    arr[a, b] = np.cumsum([float(v) for v in self.pair(a, b)])
            self._cache["pc"] = arr
        return self._cache["pc"]

    def diag_cdf_array(self) -> np.ndarray:
        if "dc" not in self._cache:
            arr = np.zeros((self.m, self.cap + 1))
            for a in range(self.m):
                arr[a] = np.cumsum([float(v) for v in self.diag(a)])
            self._cache["dc"] = arr
        return self._cache["dc"]

    def __repr__(self):
        return f"StepMultigraphon(m={self.m}, cap={self.cap}, exact={self.is_exact})"


class SampledMultigraphon:
    """Multigraphon given by callable kernels; supports sampling, not exact sums.

    kernel(x, y) and diag_kernel(x) must return multiplicity distributions of
    length cap + 1.  Symmetry, normalization and even diagonal support are
    spot-checked on random probes at construction.
    """

    def __init__(self, kernel, diag_kernel, cap: int, probes: int = 64,
                 seed: int = 0, tol: float = 1e-9):
        self.kernel = kernel
        self.diag_kernel = diag_kernel
        self.cap = int(cap)
        rng = np.random.default_rng(seed)
        for _ in range(probes):
            x, y = rng.random(), rng.random()
            dxy = np.asarray(kernel(x, y), dtype=float)
            dyx = np.asarray(kernel(y, x), dtype=float)
            if dxy.shape != (self.cap + 1,):
                raise DistributionNotNormalized(
                    f"kernel returned {dxy.shape}, expected ({self.cap + 1},)")
            if np.max(np.abs(dxy - dyx)) > tol:
                raise AsymmetricKernel(f"kernel asymmetric at ({x}, {y})")
            if abs(dxy.sum() - 1.0) > tol or dxy.min() < -tol:
                raise DistributionNotNormalized(f"kernel not a distribution at ({x}, {y})")
            dd = np.asarray(diag_kernel(x), dtype=float)
            if abs(dd.sum() - 1.0) > tol or dd.min() < -tol:
                raise DistributionNotNormalized(f"diagonal kernel not a distribution at {x}")
            if dd[1::2].max(initial=0.0) > tol:
                raise OddDiagonalMass(f"diagonal kernel has odd mass at {x}")


def graphon_density(f: Multigraph, w: StepMultigraphon, mode: str = "leq",
                    budget: int = 10 ** 8):
    """Density of pattern f in the multigraphon: cell-assignment sum.

    mode 'leq' integrates tail probabilities (multiplicity at least the
    pattern's), 'eq' integrates point probabilities.  Off-diagonal kernels are
    used for distinct pattern vertices even when they land in the same cell;
    diagonal distributions apply only to the pattern's own diagonal.
    """
    if mode not in ("leq", "eq"):
        raise ValueError(f"mode must be 'leq' or 'eq', got {mode!r}")
    if not isinstance(w, StepMultigraphon):
        raise TypeError("exact densities need a StepMultigraphon; sample kernels instead")
    k, m = f.n, w.m
    if k == 0:
        return Fraction(1) if w.is_exact else 1.0
    if m ** k > budget:
        raise BudgetExceeded(f"m^k = {m}^{k} exceeds budget {budget}")
    zero = Fraction(0) if w.is_exact else 0.0
    one = Fraction(1) if w.is_exact else 1.0

    # per pattern pair, the (m, m) table of factors for each cell assignment
    pair_terms = {}
    for i in range(k):
        for j in range(i + 1, k):
            lvl = int(f.adj[i, j])
            pair_terms[(i, j)] = [
                [w.pair_tail(a, b, lvl) if mode == "leq" else w.pair_point(a, b, lvl)
                 for b in range(m)] for a in range(m)]
    diag_terms = []
    for i in range(k):
        lvl = int(f.adj[i, i])
        diag_terms.append(
            [w.diag_tail(a, lvl) if mode == "leq" else w.diag_point(a, lvl)
             for a in range(m)])

    total = zero
    for cells in itertools.product(range(m), repeat=k):
        term = one
        for i in range(k):
            term = term * w.widths[cells[i]] * diag_terms[i][cells[i]]
            if term == zero:
                break
        else:
            for (i, j), tab in pair_terms.items():
                term = term * tab[cells[i]][cells[j]]
                if term == zero:
                    break
        if term != zero:
            total = total + term
    return total


def tightness_tail(w: StepMultigraphon, level: int):
    """(off-diagonal, diagonal) mass at multiplicity >= level; (1, 1) at level 0."""
    zero = Fraction(0) if w.is_exact else 0.0
    off = zero
    diag = zero
    for a in range(w.m):
        diag = diag + w.widths[a] * w.diag_tail(a, level)
        for b in range(w.m):
            off = off + w.widths[a] * w.widths[b] * w.pair_tail(a, b, level)
    return off, diag


# -- .mgw file format --------------------------------------------------------

def _parse_number(tok: str):
    if "/" in tok:
        try:
            return Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise FormatError(f"bad rational {tok!r}") from None
    try:
        return Fraction(int(tok))
    except ValueError:
        pass
    try:
        return float(tok)
    except ValueError:
        raise FormatError(f"bad number {tok!r}") from None


def mgw_loads(text: str) -> StepMultigraphon:
    """Parse the .mgw format: m, cap, widths, cell-pair and diagonal lines.

    Diagonal lines list only even multiplicities (d0 d2 ...); cells are
    1-based in the file.
    """
    m = cap = None
    widths = None
    pairs = {}
    diags = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.replace(":", " : ").split()
        head = parts[0]
        if head == "m":
            m = int(parts[1])
        elif head == "M":
            cap = int(parts[1])
        elif head == "widths":
            widths = [_parse_number(t) for t in parts[1:]]
        elif head == "cell":
            if m is None or cap is None:
                raise FormatError(f"line {lineno}: cell before m/M header")
            if len(parts) < 4 or parts[3] != ":":
                raise FormatError(f"line {lineno}: expected 'cell a b: ...'")
            a, b = int(parts[1]) - 1, int(parts[2]) - 1
            vals = [_parse_number(t) for t in parts[4:]]
            if len(vals) != cap + 1:
                raise FormatError(f"line {lineno}: expected {cap + 1} probabilities")
            if not (0 <= a < m and 0 <= b < m):
                raise FormatError(f"line {lineno}: cell index out of range")
            pairs[(min(a, b), max(a, b))] = vals
        elif head == "diag":
            if m is None or cap is None:
                raise FormatError(f"line {lineno}: diag before m/M header")
            if len(parts) < 3 or parts[2] != ":":
                raise FormatError(f"line {lineno}: expected 'diag a: ...'")
            a = int(parts[1]) - 1
            vals = [_parse_number(t) for t in parts[3:]]
            if len(vals) != cap // 2 + 1:
                raise FormatError(f"line {lineno}: expected {cap // 2 + 1} even-level values")
            if not 0 <= a < m:
                raise FormatError(f"line {lineno}: diag index out of range")
            full = [Fraction(0)] * (cap + 1)
            for pos, v in enumerate(vals):
                full[2 * pos] = v
            diags[a] = full
        else:
            raise FormatError(f"line {lineno}: unrecognized directive {head!r}")
    if m is None or cap is None or widths is None:
        raise FormatError("missing m, M or widths")
    if len(widths) != m:
        raise FormatError(f"expected {m} widths, got {len(widths)}")
    for a in range(m):
        for b in range(a, m):
            if (a, b) not in pairs:
                raise FormatError(f"missing 'cell {a + 1} {b + 1}' line")
        if a not in diags:
            raise FormatError(f"missing 'diag {a + 1}' line")
    return StepMultigraphon(widths, pairs, diags)


def mgw_dumps(w: StepMultigraphon, comment: str | None = None) -> str:
    def fmt(v):
        if _exact(v):
            fv = Fraction(v)
            return f"{fv.numerator}/{fv.denominator}" if fv.denominator != 1 else str(fv.numerator)
        return repr(float(v))

    lines = []
    if comment:
        for c in comment.splitlines():
            lines.append(f"# {c}")
    lines.append(f"m {w.m}")
    lines.append(f"M {w.cap}")
    lines.append("widths " + " ".join(fmt(x) for x in w.widths))
    for a in range(w.m):
        for b in range(a, w.m):
            lines.append(f"cell {a + 1} {b + 1}: " +
                         " ".join(fmt(v) for v in w.pair(a, b)))
    for a in range(w.m):
        evens = w.diag(a)[0::2]
        lines.append(f"diag {a + 1}: " + " ".join(fmt(v) for v in evens))
    return "\n".join(lines) + "\n"


def read_mgw(path) -> StepMultigraphon:
    with open(path, "r", encoding="utf-8") as fh:
        return mgw_loads(fh.read())


def write_mgw(w: StepMultigraphon, path, comment: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(mgw_dumps(w, comment))
