"""Streaming arm statistics and confidence radii.

Sample moments accumulate via Welford's recurrence (numerically stable,
one pass), and the sample variance uses the unbiased n - 1 denominator.
Radii come in a bounded flavour, where one radius serves both mean and
variance, and a sub-Gaussian flavour with separate mean and variance
radii.  None of the bounds are clamped to [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ArmState",
    "ConfidenceBounds",
    "radius_bounded",
    "radius_subg_mean",
    "radius_subg_var",
    "bounds_from_state",
]


class ArmState:
    """Welford accumulator for one arm.

    Attributes
    ----------
    pulls : number of rewards seen.
    mean : running sample mean (0.0 before any pull).
    m2 : running sum of squared deviations.
    """

    __slots__ = ("pulls", "mean", "m2")

    def __init__(self):
        self.pulls = 0
        self.mean = 0.0
        self.m2 = 0.0

    def update(self, reward: float) -> None:
        """Fold one reward into the running moments."""
        self.pulls += 1
        delta = reward - self.mean
        self.mean += delta / self.pulls
        self.m2 += delta * (reward - self.mean)

    @property
    def variance(self) -> float:
        """Unbiased sample variance; needs at least two pulls."""
        if self.pulls < 2:
            raise ValueError(f"insufficient samples: variance needs >= 2 pulls, have {self.pulls}")
        return self.m2 / (self.pulls - 1.0)

    def __repr__(self):
        return f"ArmState(pulls={self.pulls}, mean={self.mean:.6g}, m2={self.m2:.6g})"


@dataclass(frozen=True)
class ConfidenceBounds:
    """Two-sided bounds on the mean and on the variance of one arm."""

    l_mu: float
    u_mu: float
    l_var: float
    u_var: float

    def __post_init__(self):
        if self.l_mu > self.u_mu or self.l_var > self.u_var:
            raise ValueError(f"inverted bounds: {self}")


def radius_bounded(t: int, pulls: int, n_arms: int, delta: float) -> float:
    """Confidence radius for [0, 1] rewards.

    sqrt( ln(2 N t^4 / delta) / (2 T) ), shared by the mean and the
    variance bounds.  Strictly increasing in t, strictly decreasing in T;
    quadrupling T exactly halves the radius.
    """
    _check_radius_args(t, pulls, n_arms, delta)
    return math.sqrt(math.log(2.0 * n_arms * float(t) ** 4 / delta) / (2.0 * pulls))


def radius_subg_mean(
    t: int, pulls: int, n_arms: int, delta: float, sigma: float, k: float = 2.0
) -> float:
    """Mean radius for sigma-sub-Gaussian rewards.

    sqrt( (2 sigma^2 / T) ln(k N t^4 / delta) ).
    """
    _check_radius_args(t, pulls, n_arms, delta)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    return math.sqrt(2.0 * sigma * sigma / pulls * math.log(k * n_arms * float(t) ** 4 / delta))


def radius_subg_var(
    t: int,
    pulls: int,
    n_arms: int,
    delta: float,
    sigma: float,
    k: float = 2.0,
    c: float = 64.0,
) -> float:
    """Variance radius for sigma-sub-Gaussian rewards.

    sqrt( (2 c sigma^4 / T) ln(k N t^4 / delta) ); with the default
    constants this is exactly 8 sigma times the mean radius.
    """
    _check_radius_args(t, pulls, n_arms, delta)
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    s2 = sigma * sigma
    return math.sqrt(2.0 * c * s2 * s2 / pulls * math.log(k * n_arms * float(t) ** 4 / delta))


def bounds_from_state(state: ArmState, mean_radius: float, var_radius: float) -> ConfidenceBounds:
    """Symmetric bounds around the sample moments, unclamped."""
    if state.pulls < 2:
        raise ValueError(f"insufficient samples: bounds need >= 2 pulls, have {state.pulls}")
    var = state.variance
    return ConfidenceBounds(
        l_mu=state.mean - mean_radius,
        u_mu=state.mean + mean_radius,
        l_var=var - var_radius,
        u_var=var + var_radius,
    )


def _check_radius_args(t: int, pulls: int, n_arms: int, delta: float) -> None:
    if t < 1:
        raise ValueError(f"time step must be >= 1, got {t}")
    if pulls < 1:
        raise ValueError(f"pull count must be >= 1, got {pulls}")
    if n_arms < 2:
        raise ValueError(f"need at least 2 arms, got {n_arms}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
