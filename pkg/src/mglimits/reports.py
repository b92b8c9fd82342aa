"""Structured pass/fail reports for statistical and analytic checks."""

from __future__ import annotations


class TestReport:
    """One named check: statistic, degrees of freedom, p-value and verdict.

    verdict is 'pass', 'fail' or 'degenerate'; heuristic marks checks whose
    failure is advisory rather than a refutation.  details carries per-part
    breakdowns (one entry per permutation, per test graph, and so on).
    """

    def __init__(self, test: str, statistic=None, dof=None, p_value=None,
                 verdict: str = "pass", heuristic: bool = False, details=None):
        self.test = test
        self.statistic = statistic
        self.dof = dof
        self.p_value = p_value
        self.verdict = verdict
        self.heuristic = heuristic
        self.details = details if details is not None else {}

    @property
    def passed(self) -> bool:
        return self.verdict in ("pass", "degenerate")

    def format(self) -> str:
        lines = [f"test: {self.test}"]
        if self.statistic is not None:
            lines.append(f"statistic: {self.statistic:.6g}")
        if self.dof is not None:
            lines.append(f"dof: {self.dof}")
        if self.p_value is not None:
            lines.append(f"p_value: {self.p_value:.6g}")
        lines.append(f"verdict: {self.verdict}" + (" (heuristic)" if self.heuristic else ""))
        for key, val in self.details.items():
            lines.append(f"  {key}: {val}")
        return "\n".join(lines)

    def __repr__(self):
        return f"TestReport({self.test!r}, verdict={self.verdict!r})"
