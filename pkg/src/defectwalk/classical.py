"""Classical random-walk baseline and the diabatic-transition formula."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import CoinAngle, ValidationError
from .walk import Distribution


@dataclass(frozen=True)
class RWSpec:
    steps: int
    bias: float = 0.5

    def __post_init__(self):
        if self.steps != int(self.steps) or self.steps < 0:
            raise ValidationError(f"steps must be a nonnegative integer, got {self.steps!r}")
        object.__setattr__(self, "steps", int(self.steps))
        if not (0.0 <= self.bias <= 1.0):
            raise ValidationError(f"bias must lie in [0, 1], got {self.bias!r}")


def rw_distribution(spec: RWSpec) -> Distribution:
    """Exact biased random walk on the line, by dynamic programming.

    bias is the probability of stepping right.  After t steps the support
    is {-t, -t+2, ..., t}; odd-parity sites are exactly zero, matching the
    quantum walk's parity structure.
    """
    t, b = spec.steps, spec.bias
    p = np.zeros(2 * t + 1)
    p[t] = 1.0
    for _ in range(t):
        q = np.zeros_like(p)
        q[:-1] += p[1:] * (1.0 - b)   # step left
        q[1:] += p[:-1] * b           # step right
        p = q
    return Distribution(offset=-t, probs=p)


def rw_variance(spec: RWSpec) -> float:
    """Closed form 4*t*b*(1-b); equals t for the fair walk."""
    return 4.0 * spec.steps * spec.bias * (1.0 - spec.bias)


def diabatic_probability(coin: CoinAngle) -> float:
    """cos^2(2*theta): near 1 the walker spreads, near 0 it stays put."""
    return math.cos(2.0 * coin.theta_rad) ** 2
