"""Convergence diagnostics for sequences of multigraphs or step kernels.

Whether a finite prefix "converges" is not decidable, so every verdict here
is a windowed-oscillation heuristic with explicit tolerances, reported as
such.
"""

from .densities import density
from .errors import MglimitsError
from .fixtures import default_testgraphs
from .graphon import graphon_density, tightness_tail
from .multigraph import Multigraph
from .reports import TestReport
from .rng import derive_seeds
from .sampler import GraphSampler, GraphonSampler, empirical_density

DEFAULT_BUDGET = 10 ** 7


class DensityTrajectory:
    """Grid of t<= values: one row per sequence element, one column per testgraph.

    cells[i][j] is (value, stderr, method); method is "exact", "mc", or an
    "error:<Name>" marker, with value None in the error case.
    """

    __slots__ = ("testgraphs", "sequence_labels", "cells")

    def __init__(self, testgraphs, sequence_labels, cells):
        self.testgraphs = list(testgraphs)
        self.sequence_labels = list(sequence_labels)
        self.cells = cells

    def column(self, j):
        """(values, stderrs) down column j, skipping error cells."""
        vals, errs = [], []
        for row in self.cells:
            v, s, method = row[j]
            if v is not None:
                vals.append(float(v))
                errs.append(float(s))
        return vals, errs

    def to_csv(self) -> str:
        lines = ["n,testgraph_id,value,stderr,method"]
        for label, row in zip(self.sequence_labels, self.cells):
            for j, (v, s, method) in enumerate(row):
                vtxt = "" if v is None else repr(float(v))
                stxt = "" if not s else repr(float(s))
                lines.append(f"{label},{j},{vtxt},{stxt},{method}")
        return "\n".join(lines) + "\n"


def _one_cell(x, f, budget, n_samples, seed):
    try:
        if isinstance(x, Multigraph):
            if x.n ** f.n <= budget:
                return density(f, x, "hom_leq"), 0.0, "exact"
            est, se = empirical_density(GraphSampler(x), f, "leq",
                                        n_samples, seed)
            return est, se, "mc"
        if x.m ** f.n <= budget:
            return graphon_density(f, x, "leq"), 0.0, "exact"
        est, se = empirical_density(GraphonSampler(x), f, "leq",
                                    n_samples, seed)
        return est, se, "mc"
    except MglimitsError as exc:
        return None, 0.0, f"error:{type(exc).__name__}"


def density_trajectory(seq, testgraphs=None, budget: int = DEFAULT_BUDGET,
                       n_samples: int = 20000, seed: int = 0) -> DensityTrajectory:
    """Evaluate t<=(F, .) along the sequence; exact when the budget allows.

    Sequence elements may be Multigraph or StepMultigraphon.  Cells priced
    above budget (vertex-count or cell-count to the pattern size) fall back
    to seeded Monte Carlo and carry a standard error.
    """
    if testgraphs is None:
        testgraphs = default_testgraphs()
    seq = list(seq)
    labels = [x.n if isinstance(x, Multigraph) else f"w{i}"
              for i, x in enumerate(seq)]
    seeds = derive_seeds(seed, max(1, len(seq) * max(1, len(testgraphs))),
                         salt=3)
    cells = []
    for i, x in enumerate(seq):
        row = [
            _one_cell(x, f, budget, n_samples,
                      seeds[i * len(testgraphs) + j])
            for j, f in enumerate(testgraphs)
        ]
        cells.append(row)
    return DensityTrajectory(testgraphs, labels, cells)


def _oscillation(vals, window):
    tail = vals[-window:]
    return max(tail) - min(tail) if tail else 0.0


def cauchy_diagnostic(traj: DensityTrajectory, window: int = 5,
                      tol: float = 0.05) -> TestReport:
    """Max oscillation of each column over the trailing window, against tol.

    A small oscillation on a finite prefix never proves convergence; the
    verdict is flagged heuristic accordingly.
    """
    per = []
    usable = 0
    for j in range(len(traj.testgraphs)):
        vals, _ = traj.column(j)
        if len(vals) >= 2:
            usable += 1
            per.append(_oscillation(vals, window))
        else:
            per.append(None)
    finite = [x for x in per if x is not None]
    if not finite:
        return TestReport("cauchy", 0.0, None, None, "degenerate", True,
                          {"oscillations": per, "window": window, "tol": tol})
    worst = max(finite)
    verdict = "pass" if worst <= tol else "fail"
    return TestReport("cauchy", worst, None, None, verdict, True,
                      {"oscillations": per, "window": window, "tol": tol,
                       "usable_columns": usable})


def tightness_diagnostic(seq, m_grid=None, threshold: float = 1e-6) -> TestReport:
    """sup over the sequence of the two tail-mass functionals along m_grid.

    Passes when both tails at the largest grid level are below threshold;
    a sequence whose multiplicity mass escapes every fixed level fails.
    """
    seq = list(seq)
    if not seq:
        raise ValueError("empty sequence")
    if m_grid is None:
        top = max(w.cap for w in seq) + 1
        m_grid = list(range(top + 1))
    rows = []
    for m in m_grid:
        tails = [tightness_tail(w, m) for w in seq]
        rows.append((m, max(float(t[0]) for t in tails),
                     max(float(t[1]) for t in tails)))
    last = rows[-1]
    worst = max(last[1], last[2])
    verdict = "pass" if worst <= threshold else "fail"
    return TestReport("tightness", worst, None, None, verdict, False,
                      {"rows": rows, "threshold": threshold})


def array_density_cross_check(g_seq, testgraphs=None, n_samples: int = 5000,
                              seed: int = 0, tol: float = 0.05,
                              window: int = 3) -> TestReport:
    """Exact density trajectories against empirical window frequencies.

    For each testgraph, the exact t<= trajectory and the sampled-window
    estimate must agree on whether the trailing oscillation is below tol
    (the empirical side gets 4-stderr slack).  Convergent inputs stabilize
    on both sides; oscillating inputs on neither.
    """
    g_seq = list(g_seq)
    if testgraphs is None:
        testgraphs = default_testgraphs(max_n=2)
    if len(g_seq) < 2:
        return TestReport("array-cross-check", 0.0, None, None, "degenerate",
                          True, {"reason": "need at least two elements"})
    seeds = derive_seeds(seed, len(g_seq) * len(testgraphs), salt=4)
    detail = []
    agree = True
    for j, f in enumerate(testgraphs):
        exact = [float(density(f, g, "hom_leq")) for g in g_seq]
        emp, ses = [], []
        for i, g in enumerate(g_seq):
            e, se = empirical_density(GraphSampler(g), f, "leq", n_samples,
                                      seeds[i * len(testgraphs) + j])
            emp.append(e)
            ses.append(se)
        osc_exact = _oscillation(exact, window)
        osc_emp = _oscillation(emp, window)
        slack = 4 * max(ses[-window:] or [0.0])
        stable_exact = osc_exact <= tol
        stable_emp = osc_emp <= tol + slack
        agree = agree and (stable_exact == stable_emp)
        detail.append({"testgraph": j, "osc_exact": osc_exact,
                       "osc_empirical": osc_emp, "slack": slack,
                       "stable_exact": stable_exact,
                       "stable_empirical": stable_emp})
    worst = max(abs(d["osc_exact"] - d["osc_empirical"]) for d in detail)
    return TestReport("array-cross-check", worst, None, None,
                      "pass" if agree else "fail", True,
                      {"columns": detail, "tol": tol, "window": window})
