"""Reward distributions for bandit arms.

Three families are supported: Bernoulli(p) and Beta(alpha, beta) for the
bounded [0, 1] setting, and Gaussian(mu, sigma) for the sub-Gaussian
setting.  Sampling goes through ``numpy.random.Generator`` (PCG64 by
default); Beta draws use numpy's beta routine, so a seeded generator
yields a reproducible stream.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

__all__ = [
    "Bernoulli",
    "Beta",
    "Gaussian",
    "DistributionSpec",
    "moments",
    "is_bounded",
    "sample",
    "sample_many",
    "beta_from_moments",
]


@dataclass(frozen=True)
class Bernoulli:
    """Bernoulli reward with success probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"Bernoulli p must lie in [0, 1], got {self.p}")


@dataclass(frozen=True)
class Beta:
    """Beta reward with shape parameters ``alpha`` and ``beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        if self.alpha <= 0.0 or self.beta <= 0.0:
            raise ValueError(
                f"Beta shapes must be positive, got ({self.alpha}, {self.beta})"
            )


@dataclass(frozen=True)
class Gaussian:
    """Gaussian reward with mean ``mu`` and standard deviation ``sigma``."""

    mu: float
    sigma: float

    def __post_init__(self):
        if self.sigma <= 0.0:
            raise ValueError(f"Gaussian sigma must be positive, got {self.sigma}")


DistributionSpec = Union[Bernoulli, Beta, Gaussian]


def moments(dist: DistributionSpec) -> tuple[float, float]:
    """Analytic (mean, variance) of a reward distribution.

    Bernoulli(p) has variance p(1-p); Beta(a, b) has mean a/(a+b) and
    variance ab / ((a+b)^2 (a+b+1)).
    """
    if isinstance(dist, Bernoulli):
        return dist.p, dist.p * (1.0 - dist.p)
    if isinstance(dist, Beta):
        s = dist.alpha + dist.beta
        mean = dist.alpha / s
        var = dist.alpha * dist.beta / (s * s * (s + 1.0))
        return mean, var
    if isinstance(dist, Gaussian):
        return dist.mu, dist.sigma * dist.sigma
    raise TypeError(f"unknown distribution {dist!r}")


def is_bounded(dist: DistributionSpec) -> bool:
    """True for distributions supported on [0, 1]."""
    return isinstance(dist, (Bernoulli, Beta))


def sample(dist: DistributionSpec, rng: np.random.Generator) -> float:
    """Draw one reward.

    The Bernoulli path consumes exactly one uniform double and compares
    it against p, so p = 0 and p = 1 are degenerate as expected.
    """
    if isinstance(dist, Bernoulli):
        return 1.0 if rng.random() < dist.p else 0.0
    if isinstance(dist, Beta):
        return float(rng.beta(dist.alpha, dist.beta))
    if isinstance(dist, Gaussian):
        return float(rng.normal(dist.mu, dist.sigma))
    raise TypeError(f"unknown distribution {dist!r}")


def sample_many(dist: DistributionSpec, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw ``n`` rewards as a vector.

    Uses numpy's vectorized samplers, so the stream differs from ``n``
    repeated calls to :func:`sample`; intended for bulk statistics, not
    for reproducing engine trajectories.
    """
    if isinstance(dist, Bernoulli):
        return (rng.random(n) < dist.p).astype(np.float64)
    if isinstance(dist, Beta):
        return rng.beta(dist.alpha, dist.beta, size=n)
    if isinstance(dist, Gaussian):
        return rng.normal(dist.mu, dist.sigma, size=n)
    raise TypeError(f"unknown distribution {dist!r}")


def beta_from_moments(mean: float, variance: float) -> Beta:
    """Beta distribution matching a target mean and variance.

    Solves alpha = (mean^2 (1 - mean) - mean * variance) / variance and
    beta = alpha (1 - mean) / mean.  Feasibility requires
    0 < variance < mean (1 - mean).

    Raises
    ------
    ValueError
        If the target pair is moment infeasible.
    """
    if not 0.0 < mean < 1.0:
        raise ValueError(f"mean must lie in (0, 1), got {mean}")
    if variance <= 0.0 or variance >= mean * (1.0 - mean):
        raise ValueError(
            "moment infeasible: need 0 < variance < mean*(1-mean) "
            f"= {mean * (1.0 - mean)}, got variance={variance}"
        )
    alpha = (mean * mean * (1.0 - mean) - mean * variance) / variance
    beta = alpha * (1.0 - mean) / mean
    dist = Beta(alpha, beta)
    m, v = moments(dist)
    if not (math.isclose(m, mean, rel_tol=1e-9) and math.isclose(v, variance, rel_tol=1e-9)):
        raise ValueError(f"moment solve failed for mean={mean}, variance={variance}")
    return dist
