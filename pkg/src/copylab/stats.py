"""Wilson intervals and the small estimation-result record.

Wilson score intervals are used for every Monte Carlo frequency in the
package: they stay valid near 0, which is where point probabilities live.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

#: two-sided 95% normal quantile
Z95 = 1.959963984540054


def wilson_interval(successes: int, trials: int, z: float = Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 <= successes <= trials:
        raise ValueError("successes out of range")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    centre = (phat + z * z / (2 * trials)) / denom
    half = (z / denom) * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials))
    return max(0.0, centre - half), min(1.0, centre + half)


@dataclass(frozen=True)
class EstimationResult:
    """A Monte Carlo frequency estimate with its Wilson 95% interval."""

    estimate: float
    ci_low: float
    ci_high: float
    trials: int
    seed: int

    def __post_init__(self) -> None:
        if not 0.0 <= self.estimate <= 1.0:
            raise ValueError("estimate must lie in [0, 1]")
        if not self.ci_low <= self.estimate <= self.ci_high:
            raise ValueError("interval must contain the estimate")

    @classmethod
    def from_counts(cls, successes: int, trials: int, seed: int) -> "EstimationResult":
        low, high = wilson_interval(successes, trials)
        return cls(successes / trials, low, high, trials, seed)

    @property
    def half_width(self) -> float:
        return (self.ci_high - self.ci_low) / 2.0
