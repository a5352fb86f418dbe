"""Monte Carlo summaries with normal-approximation confidence intervals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

Z_95 = 1.96


@dataclass(frozen=True)
class EstimateWithCI:
    """Sample mean with standard error and a 95 percent interval."""

    mean: float
    stderr: float
    ci_low: float
    ci_high: float
    trials: int

    def to_dict(self) -> dict:
        return {
            "mean": self.mean,
            "stderr": self.stderr,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "trials": self.trials,
        }


def summarize(values: np.ndarray) -> EstimateWithCI:
    """Summary of per-trial values; the values must arrive in trial order so
    that pairwise summation makes the result schedule-independent."""
    values = np.asarray(values, dtype=float)
    n = len(values)
    if n == 0:
        raise ValueError("cannot summarize zero trials")
    mean = float(np.mean(values))
    if n > 1:
        sd = float(np.std(values, ddof=1))
        stderr = sd / np.sqrt(n)
    else:
        stderr = 0.0
    return EstimateWithCI(mean, float(stderr), mean - Z_95 * stderr, mean + Z_95 * stderr, n)


def classify(lhs: EstimateWithCI, rhs: EstimateWithCI, direction: str) -> str:
    """Ternary verdict for 'lhs <direction> rhs' with direction 'le' or 'ge'.

    consistent: intervals disjoint and ordered as claimed; violated: disjoint
    and ordered the wrong way; inconclusive: overlapping intervals.
    """
    if direction not in ("le", "ge"):
        raise ValueError("direction must be 'le' or 'ge'")
    lo, hi = (lhs, rhs) if direction == "le" else (rhs, lhs)
    if lo.ci_high < hi.ci_low:
        return "consistent"
    if lo.ci_low > hi.ci_high:
        return "violated"
    return "inconclusive"
