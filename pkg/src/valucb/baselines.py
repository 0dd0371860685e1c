"""Baseline algorithms: VA-Uniform and the oracle-assisted UCB baseline.

VA-Uniform keeps VA-LUCB's statistics, partition, and stopping rule but
replaces arm selection with two distinct arms drawn uniformly from the
possibly-feasible set.  The UCB baseline needs accuracy parameters
(eps_mu, eps_v) that in benchmarks come straight from the instance's
ground-truth gaps, which is why it is called oracle-assisted.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _backend
from .engine import (
    DEFAULT_MAX_TIME_STEPS,
    RunResult,
    _check_run_args,
    encode_arms,
    result_from_raw,
)
from .instance import BanditInstance, GroundTruth

__all__ = [
    "RiskAverseConfig",
    "riskaverse_budget_H",
    "riskaverse_hprime",
    "config_from_ground_truth",
    "run_va_uniform",
    "run_riskaverse_ucb_bai",
]


@dataclass(frozen=True)
class RiskAverseConfig:
    """Accuracy parameters and derived budget for the UCB baseline."""

    eps_mu: float
    eps_v: float
    budget: float

    def __post_init__(self):
        if not math.isfinite(self.eps_mu) or self.eps_mu <= 0.0:
            raise ValueError(f"eps_mu must be finite positive, got {self.eps_mu}")
        if not math.isfinite(self.eps_v) or self.eps_v <= 0.0:
            raise ValueError(f"eps_v must be finite positive, got {self.eps_v}")


def riskaverse_hprime(n_arms: int, eps_mu: float, eps_v: float) -> float:
    """Instance-independent factor H' = 3N (1/(2 eps_mu^2) + 4/eps_v^2)."""
    return 3.0 * n_arms * (1.0 / (2.0 * eps_mu * eps_mu) + 4.0 / (eps_v * eps_v))


def riskaverse_budget_H(n_arms: int, delta: float, eps_mu: float, eps_v: float) -> float:
    """Round budget H = H' ln((6N/delta) (H'/3))."""
    hp = riskaverse_hprime(n_arms, eps_mu, eps_v)
    return hp * math.log(6.0 * n_arms / delta * (hp / 3.0))


def make_config(n_arms: int, delta: float, eps_mu: float, eps_v: float) -> RiskAverseConfig:
    return RiskAverseConfig(
        eps_mu=eps_mu,
        eps_v=eps_v,
        budget=riskaverse_budget_H(n_arms, delta, eps_mu, eps_v),
    )


def config_from_ground_truth(gt: GroundTruth, delta: float) -> RiskAverseConfig:
    """Oracle accuracy parameters from the instance structure.

    eps_mu is the best arm's mean gap and eps_v the smallest variance gap
    over risky non-best arms (falling back to the best arm's own variance
    gap when it is the only risky arm).  Requires a feasible instance
    with a finite best gap.
    """
    if gt.i_star is None:
        raise ValueError("baseline accuracy parameters need a feasible instance")
    eps_mu = gt.best_gap
    if not math.isfinite(eps_mu):
        raise ValueError("baseline accuracy parameters need a competitor arm")
    others = [gt.var_gaps[i] for i in gt.risky if i != gt.i_star]
    eps_v = min(others) if others else gt.var_gaps[gt.i_star]
    return make_config(gt.n_arms, delta, eps_mu, eps_v)


def run_va_uniform(
    instance: BanditInstance,
    delta: float,
    rng: np.random.Generator,
    *,
    max_time_steps: int = DEFAULT_MAX_TIME_STEPS,
    backend: str = "auto",
) -> RunResult:
    """Run one VA-Uniform trial on a bounded instance."""
    _check_run_args(instance, delta, max_time_steps, instance.n_arms + 1)
    if not instance.bounded:
        raise ValueError("run_va_uniform requires bounded (Bernoulli/Beta) arms")
    kinds, pa, pb = encode_arms(instance)
    impl = _backend.resolve(backend)
    args = (
        kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
        max_time_steps, 1.0, None, None, True,
    )
    if impl == "cython":
        raw = _backend.extension().valucb_trial(*args)
    else:
        from . import _pyengine

        raw = _pyengine.valucb_trial(*args)
    return result_from_raw(raw)


def run_riskaverse_ucb_bai(
    instance: BanditInstance,
    delta: float,
    rng: np.random.Generator,
    config: RiskAverseConfig,
    *,
    backend: str = "auto",
) -> RunResult:
    """Run one trial of the oracle-assisted UCB baseline.

    Always reports flag 1 with the last selected arm, unless the
    candidate set empties out, which aborts the trial as unterminated
    (scored as a failure).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if not instance.bounded:
        raise ValueError("run_riskaverse_ucb_bai requires bounded (Bernoulli/Beta) arms")
    kinds, pa, pb = encode_arms(instance)
    impl = _backend.resolve(backend)
    args = (
        kinds, pa, pb, instance.sigma_bar_sq, delta, rng,
        config.eps_mu, config.eps_v, config.budget,
    )
    if impl == "cython":
        raw = _backend.extension().riskaverse_trial(*args)
    else:
        from . import _pyengine

        raw = _pyengine.riskaverse_trial(*args)
    return result_from_raw(raw)
