"""Exchangeable random arrays sampled from graphs, multigraphons and functions.

Four window samplers share one latent-variable layout (per-vertex uniforms,
per-pair uniforms in a canonical triangle order, an optional mixture
coordinate), so the k-window of a (k+1)-sample at the same seed equals the
k-sample exactly.  Bulk batches draw the same streams in row-major blocks;
they match the one-window path in distribution and are what the statistical
tests and Monte Carlo estimators consume.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .errors import (
    AsymmetricRepresentation,
    BudgetExceeded,
    OddDiagonalRepresentation,
    OverlappingSplit,
)
from .graphon import SampledMultigraphon, StepMultigraphon
from .multigraph import Multigraph
from .reports import TestReport
from .rng import derive_seeds, pair_order, stream

DEFAULT_PROBES = 1000
_MIN_CELL = 10


class LatentVariables:
    """One draw of the latent uniforms behind a k-window."""

    def __init__(self, u: np.ndarray, beta: np.ndarray, alpha: float | None = None):
        self.u = u
        self.beta = beta
        self.alpha = alpha

    def __repr__(self):
        return f"LatentVariables(k={len(self.u)}, alpha={self.alpha})"


class ArraySample:
    """A sampled k-window with its seed and source description."""

    def __init__(self, window: Multigraph, seed: int, source: str,
                 latents: LatentVariables | None = None):
        self.window = window
        self.seed = seed
        self.source = source
        self.latents = latents

    @property
    def k(self) -> int:
        return self.window.n

    def __repr__(self):
        return f"ArraySample(k={self.k}, seed={self.seed}, source={self.source!r})"


def draw_latents(k: int, seed: int, with_alpha: bool = False) -> LatentVariables:
    """Latent uniforms for a k-window; prefixes agree across window sizes."""
    u = stream(seed, "u").random(k)
    bvals = stream(seed, "beta").random(k * (k + 1) // 2)
    beta = np.zeros((k, k))
    for val, (i, j) in zip(bvals, pair_order(k)):
        beta[i, j] = beta[j, i] = val
    alpha = float(stream(seed, "alpha").random()) if with_alpha else None
    return LatentVariables(u, beta, alpha)


def _invert_cdf(cdf: np.ndarray, b) -> int:
    return int(np.sum(cdf <= b))


class GraphSampler:
    """Windows of a fixed graph at independent uniform vertex picks."""

    def __init__(self, g: Multigraph):
        if g.n == 0:
            raise ValueError("cannot sample windows of an empty graph")
        self.g = g
        self.source = f"graph(n={g.n})"

    def sample(self, k: int, seed: int) -> ArraySample:
        lat = draw_latents(k, seed)
        xi = np.minimum((lat.u * self.g.n).astype(np.intp), self.g.n - 1)
        win = self.g.adj[np.ix_(xi, xi)]
        return ArraySample(Multigraph(win), seed, self.source, lat)

    def sample_windows(self, k: int, count: int, seed: int) -> np.ndarray:
        u = stream(seed, "u").random((count, k))
        xi = np.minimum((u * self.g.n).astype(np.intp), self.g.n - 1)
        return self.g.adj[xi[:, :, None], xi[:, None, :]]


class InjectiveGraphSampler:
    """Windows of a fixed graph at a uniform permutation; zero beyond n."""

    def __init__(self, g: Multigraph):
        if g.n == 0:
            raise ValueError("cannot sample windows of an empty graph")
        self.g = g
        self.source = f"graph-injective(n={g.n})"

    def sample(self, k: int, seed: int) -> ArraySample:
        n = self.g.n
        perm = stream(seed, "perm").permutation(n)
        kk = min(k, n)
        win = np.zeros((k, k), dtype=np.int64)
        idx = perm[:kk]
        win[:kk, :kk] = self.g.adj[np.ix_(idx, idx)]
        return ArraySample(Multigraph(win), seed, self.source)

    def sample_windows(self, k: int, count: int, seed: int) -> np.ndarray:
        n = self.g.n
        u = stream(seed, "perm").random((count, n))
        perms = np.argsort(u, axis=1)[:, :min(k, n)]
        wins = np.zeros((count, k, k), dtype=np.int64)
        kk = min(k, n)
        wins[:, :kk, :kk] = self.g.adj[perms[:, :, None], perms[:, None, :]]
        return wins


class GraphonSampler:
    """Windows of a multigraphon: latent cells, then per-pair multiplicities."""

    def __init__(self, w):
        if not isinstance(w, (StepMultigraphon, SampledMultigraphon)):
            raise TypeError("expected StepMultigraphon or SampledMultigraphon")
        self.w = w
        if isinstance(w, StepMultigraphon):
            self.source = f"graphon(m={w.m}, cap={w.cap})"
        else:
            self.source = f"sampled-graphon(cap={w.cap})"

    def _step_window(self, lat: LatentVariables) -> np.ndarray:
        w = self.w
        cumw = np.cumsum(w.width_array())
        cells = np.searchsorted(cumw, lat.u, side="right")
        cells = np.minimum(cells, w.m - 1)
        pc, dc = w.pair_cdf_array(), w.diag_cdf_array()
        k = len(lat.u)
        win = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            win[i, i] = _invert_cdf(dc[cells[i]], lat.beta[i, i])
            for j in range(i + 1, k):
                lvl = _invert_cdf(pc[cells[i], cells[j]], lat.beta[i, j])
                win[i, j] = win[j, i] = lvl
        return win

    def _kernel_window(self, lat: LatentVariables) -> np.ndarray:
        w = self.w
        k = len(lat.u)
        win = np.zeros((k, k), dtype=np.int64)
        for i in range(k):
            dd = np.cumsum(np.asarray(w.diag_kernel(lat.u[i]), dtype=float))
            win[i, i] = _invert_cdf(dd, lat.beta[i, i])
            for j in range(i + 1, k):
                dp = np.cumsum(np.asarray(w.kernel(lat.u[i], lat.u[j]), dtype=float))
                lvl = _invert_cdf(dp, lat.beta[i, j])
                win[i, j] = win[j, i] = lvl
        return win

    def sample(self, k: int, seed: int) -> ArraySample:
        lat = draw_latents(k, seed)
        if isinstance(self.w, StepMultigraphon):
            win = self._step_window(lat)
        else:
            win = self._kernel_window(lat)
        return ArraySample(Multigraph(win), seed, self.source, lat)

    def sample_windows(self, k: int, count: int, seed: int) -> np.ndarray:
        u = stream(seed, "u").random((count, k))
        bvals = stream(seed, "beta").random((count, k * (k + 1) // 2))
        order = pair_order(k)
        wins = np.zeros((count, k, k), dtype=np.int64)
        if isinstance(self.w, StepMultigraphon):
            w = self.w
            cumw = np.cumsum(w.width_array())
            cells = np.minimum(np.searchsorted(cumw, u, side="right"), w.m - 1)
            pc, dc = w.pair_cdf_array(), w.diag_cdf_array()
            for pos, (i, j) in enumerate(order):
                b = bvals[:, pos]
                if i == j:
                    cdf = dc[cells[:, i]]
                else:
                    cdf = pc[cells[:, i], cells[:, j]]
                lvl = (cdf <= b[:, None]).sum(axis=1)
                wins[:, i, j] = lvl
                wins[:, j, i] = lvl
        else:
            w = self.w
            for r in range(count):
                for pos, (i, j) in enumerate(order):
                    b = bvals[r, pos]
                    if i == j:
                        cdf = np.cumsum(np.asarray(w.diag_kernel(u[r, i]), dtype=float))
                    else:
                        cdf = np.cumsum(np.asarray(w.kernel(u[r, i], u[r, j]), dtype=float))
                    lvl = _invert_cdf(cdf, b)
                    wins[r, i, j] = lvl
                    wins[r, j, i] = lvl
        return wins


class FunctionalSampler:
    """Windows from a functional representation of an exchangeable array.

    fn(u_i, u_j, beta_ij) for the dissociated form, or
    fn(alpha, u_i, u_j, beta_ij) with a shared mixture coordinate.  Symmetry
    in the vertex arguments and even diagonal values are spot-checked on
    random probes at construction.
    """

    def __init__(self, fn, mixture: bool = False, probes: int = DEFAULT_PROBES,
                 probe_seed: int = 0):
        self.fn = fn
        self.mixture = mixture
        self.source = f"functional(mixture={mixture})"
        rng = stream(probe_seed, "mc")
        for _ in range(probes):
            x, y, b = rng.random(3)
            args = (float(rng.random()),) if mixture else ()
            vxy = fn(*args, x, y, b)
            vyx = fn(*args, y, x, b)
            if vxy != vyx:
                raise AsymmetricRepresentation(
                    f"fn({x:.4f}, {y:.4f}) = {vxy} but swapped gives {vyx}")
            vdiag = fn(*args, x, x, b)
            if int(vdiag) % 2:
                raise OddDiagonalRepresentation(
                    f"fn at equal vertex arguments gave odd value {vdiag}")
            if int(vxy) < 0 or int(vdiag) < 0:
                raise ValueError("representation produced a negative multiplicity")

    def sample(self, k: int, seed: int) -> ArraySample:
        lat = draw_latents(k, seed, with_alpha=self.mixture)
        args = (lat.alpha,) if self.mixture else ()
        win = np.zeros((k, k), dtype=np.int64)
        for (i, j) in pair_order(k):
            v = int(self.fn(*args, lat.u[i], lat.u[j], lat.beta[i, j]))
            win[i, j] = win[j, i] = v
        return ArraySample(Multigraph(win), seed, self.source, lat)

    def sample_windows(self, k: int, count: int, seed: int) -> np.ndarray:
        u = stream(seed, "u").random((count, k))
        bvals = stream(seed, "beta").random((count, k * (k + 1) // 2))
        alphas = stream(seed, "alpha").random(count) if self.mixture else None
        order = pair_order(k)
        wins = np.zeros((count, k, k), dtype=np.int64)
        for r in range(count):
            args = (alphas[r],) if self.mixture else ()
            for pos, (i, j) in enumerate(order):
                v = int(self.fn(*args, u[r, i], u[r, j], bvals[r, pos]))
                wins[r, i, j] = v
                wins[r, j, i] = v
        return wins


# one-call convenience wrappers

def sample_from_graph(g: Multigraph, k: int, seed: int) -> ArraySample:
    return GraphSampler(g).sample(k, seed)


def sample_from_graph_injective(g: Multigraph, k: int, seed: int) -> ArraySample:
    return InjectiveGraphSampler(g).sample(k, seed)


def sample_from_graphon(w, k: int, seed: int) -> ArraySample:
    return GraphonSampler(w).sample(k, seed)


def sample_from_functional(fn, k: int, seed: int, mixture: bool = False,
                           probes: int = DEFAULT_PROBES) -> ArraySample:
    return FunctionalSampler(fn, mixture=mixture, probes=probes).sample(k, seed)


# -- estimation --------------------------------------------------------------

def empirical_density(sampler, a: Multigraph, mode: str, n_samples: int,
                      seed: int) -> tuple[float, float]:
    """Frequency of sampled windows that dominate (leq) or equal (eq) a.

    Returns (estimate, stderr) with the binomial standard error
    sqrt(p(1-p)/N).
    """
    if mode not in ("leq", "eq"):
        raise ValueError(f"mode must be 'leq' or 'eq', got {mode!r}")
    wins = sampler.sample_windows(a.n, n_samples, seed)
    if mode == "leq":
        ok = np.all(wins >= a.adj, axis=(1, 2))
    else:
        ok = np.all(wins == a.adj, axis=(1, 2))
    p = float(ok.mean())
    stderr = float(np.sqrt(p * (1.0 - p) / n_samples))
    return p, stderr


# -- statistical checks ------------------------------------------------------

def _window_labels(wins1: np.ndarray, wins2: np.ndarray):
    k = wins1.shape[1]
    iu = np.triu_indices(k)
    rows = np.vstack([wins1[:, iu[0], iu[1]], wins2[:, iu[0], iu[1]]])
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    return inv[:len(wins1)], inv[len(wins1):], int(inv.max()) + 1


def _chi2_homogeneity(lab1, lab2, ncat, min_cell=_MIN_CELL):
    """Two-sample chi-square over categories, pooling rare ones; None if degenerate."""
    c1 = np.bincount(lab1, minlength=ncat).astype(np.int64)
    c2 = np.bincount(lab2, minlength=ncat).astype(np.int64)
    tot = c1 + c2
    keep = tot >= min_cell
    cols1 = list(c1[keep])
    cols2 = list(c2[keep])
    rare1, rare2 = int(c1[~keep].sum()), int(c2[~keep].sum())
    if rare1 + rare2 > 0:
        cols1.append(rare1)
        cols2.append(rare2)
    table = np.array([cols1, cols2], dtype=np.int64)
    if table.shape[1] < 2:
        return None
    chi2, p, dof, _ = stats.chi2_contingency(table, correction=False)
    return float(chi2), float(p), int(dof)


def _default_perms(k: int):
    perms = []
    for i in range(k):
        for j in range(i + 1, k):
            p = list(range(k))
            p[i], p[j] = p[j], p[i]
            perms.append(tuple(p))
    if k >= 3:
        perms.append(tuple(list(range(1, k)) + [0]))
    return perms


def exchangeability_test(sampler, k: int, n_samples: int, seed: int,
                         significance: float = 0.01, perms=None,
                         max_k: int = 4) -> TestReport:
    """Compare window distributions before and after vertex relabelings.

    Two independent batches are drawn; for each permutation the second batch
    is relabeled and tested against the first by a two-sample chi-square over
    observed window types (rare types pooled).  Fails if any permutation's
    p-value drops below the significance level.
    """
    if k > max_k:
        raise BudgetExceeded(f"window size {k} exceeds cap {max_k}")
    if perms is None:
        perms = _default_perms(k)
    if not perms:
        return TestReport("exchangeability", verdict="degenerate",
                          details={"note": "no nontrivial relabelings for k <= 1"})
    s1, s2 = derive_seeds(seed, 2, salt=1)
    wins1 = sampler.sample_windows(k, n_samples, s1)
    wins2 = sampler.sample_windows(k, n_samples, s2)
    details = {}
    worst = (0.0, 1.0, 0)
    verdict = "pass"
    any_valid = False
    for p in perms:
        idx = np.array(p, dtype=np.intp)
        relabeled = wins2[:, idx[:, None], idx[None, :]]
        lab1, lab2, ncat = _window_labels(wins1, relabeled)
        res = _chi2_homogeneity(lab1, lab2, ncat)
        if res is None:
            details[f"perm {p}"] = "degenerate (single window type)"
            continue
        any_valid = True
        chi2, pval, dof = res
        details[f"perm {p}"] = f"chi2={chi2:.4f} dof={dof} p={pval:.4g}"
        if pval < worst[1]:
            worst = (chi2, pval, dof)
        if pval < significance:
            verdict = "fail"
    if not any_valid:
        verdict = "degenerate"
    return TestReport("exchangeability", statistic=worst[0], dof=worst[2],
                      p_value=worst[1], verdict=verdict, details=details)


def dissociation_test(sampler, split, n_samples: int, seed: int,
                      significance: float = 0.01, max_part: int = 2) -> TestReport:
    """Chi-square independence of the subwindows on two disjoint index sets."""
    left, right = (tuple(int(v) for v in part) for part in split)
    if set(left) & set(right):
        raise OverlappingSplit(f"split parts overlap: {left} and {right}")
    if not left or not right:
        raise OverlappingSplit("split parts must be nonempty")
    if len(left) > max_part or len(right) > max_part:
        raise BudgetExceeded(f"split parts capped at {max_part} vertices")
    k = max(left + right) + 1
    (s,) = derive_seeds(seed, 1, salt=2)
    wins = sampler.sample_windows(k, n_samples, s)
    li = np.array(left, dtype=np.intp)
    ri = np.array(right, dtype=np.intp)
    sub1 = wins[:, li[:, None], li[None, :]]
    sub2 = wins[:, ri[:, None], ri[None, :]]

    def labels(sub):
        kk = sub.shape[1]
        iu = np.triu_indices(kk)
        rows = sub[:, iu[0], iu[1]]
        _, inv = np.unique(rows, axis=0, return_inverse=True)
        return inv.reshape(-1)

    l1, l2 = labels(sub1), labels(sub2)
    table = np.zeros((int(l1.max()) + 1, int(l2.max()) + 1), dtype=np.int64)
    np.add.at(table, (l1, l2), 1)
    table = _pool_table(table)
    if table.shape[0] < 2 or table.shape[1] < 2:
        return TestReport("dissociation", verdict="degenerate",
                          details={"note": "a subwindow shows a single type"})
    chi2, pval, dof, _ = stats.chi2_contingency(table, correction=False)
    verdict = "pass" if pval >= significance else "fail"
    return TestReport("dissociation", statistic=float(chi2), dof=int(dof),
                      p_value=float(pval), verdict=verdict,
                      details={"split": f"{left} vs {right}",
                               "table_shape": str(table.shape)})


def _pool_table(table: np.ndarray, min_cell: int = _MIN_CELL) -> np.ndarray:
    """Merge rows/columns with small totals into a single rare bucket each."""
    def pool_axis(t):
        totals = t.sum(axis=1)
        keep = totals >= min_cell
        if keep.all():
            return t
        kept = t[keep]
        rare = t[~keep].sum(axis=0, keepdims=True)
        if kept.shape[0] == 0:
            return rare
        return np.vstack([kept, rare])

    table = pool_axis(table)
    table = pool_axis(table.T).T
    return table
