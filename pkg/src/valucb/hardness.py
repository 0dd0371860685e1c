"""Hardness quantities and the sample-complexity lower bound.

The central quantity ``h_va`` decomposes over four roles an arm can
play: the best feasible arm itself, feasible suboptimal arms, infeasible
risky arms, and infeasible suboptimal arms.  Reciprocals follow the
conventions 1/0 = +inf and 1/inf = 0, so degenerate gaps surface as an
infinite hardness rather than an exception.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .engine import SUBG_C
from .instance import BanditInstance, GroundTruth, derive_ground_truth

__all__ = [
    "h_va",
    "h_va_terms",
    "h1",
    "h_va_sigma",
    "david_ci",
    "lower_bound",
    "scale",
    "HardnessReport",
    "hardness_report",
]


def _inv_sq(x: float) -> float:
    """1 / x^2 with 1/0 = +inf and 1/inf = 0."""
    if x == 0.0:
        return math.inf
    if math.isinf(x):
        return 0.0
    return 1.0 / (x * x)


def h_va_terms(gt: GroundTruth) -> tuple[float, float, float, float]:
    """The four summands of h_va, in role order.

    1. best arm:              min(gap/2, var_gap)^-2
    2. feasible suboptimal:   sum (gap/2)^-2
    3. infeasible risky:      sum var_gap^-2
    4. infeasible suboptimal: sum max(gap/2, var_gap)^-2

    For an infeasible instance only the third term is nonzero and it
    ranges over every arm.
    """
    infeasible = frozenset(range(gt.n_arms)) - gt.feasible
    if gt.i_star is None:
        t3 = sum(_inv_sq(gt.var_gaps[i]) for i in sorted(infeasible & gt.risky))
        return 0.0, 0.0, t3, 0.0
    i_star = gt.i_star
    t1 = _inv_sq(min(gt.best_gap / 2.0, gt.var_gaps[i_star]))
    t2 = sum(_inv_sq(gt.mean_gaps[i] / 2.0) for i in sorted(gt.feasible & gt.suboptimal))
    t3 = sum(_inv_sq(gt.var_gaps[i]) for i in sorted(infeasible & gt.risky))
    t4 = sum(
        _inv_sq(max(gt.mean_gaps[i] / 2.0, gt.var_gaps[i]))
        for i in sorted(infeasible & gt.suboptimal)
    )
    return t1, t2, t3, t4


def h_va(gt: GroundTruth) -> float:
    """Variance-constrained hardness of an instance."""
    t1, t2, t3, t4 = h_va_terms(gt)
    return t1 + t2 + t3 + t4


def h1(gt: GroundTruth) -> float:
    """Classical best-arm-identification hardness sum gap^-2.

    Sums over the suboptimal arms; the best arm's own gap is excluded.
    Defined for feasible instances only.
    """
    if gt.i_star is None:
        raise ValueError("h1 needs a feasible instance")
    return sum(_inv_sq(gt.mean_gaps[i]) for i in sorted(gt.suboptimal))


def h_va_sigma(gt: GroundTruth, sigma: float, c: float = SUBG_C) -> tuple[float, float]:
    """Sub-Gaussian analogue of h_va with proxy sigma.

    Same four roles; mean-gap summands carry weight 2 sigma^2 and
    variance-gap summands 2 c sigma^4, with the best arm taking the max,
    infeasible suboptimal arms the min, of their two routes.

    Returns ``(h, h_with_floor)`` where the second entry is floored at
    the number of arms (the warm-up alone costs that much per step).
    """
    if sigma <= 0.0:
        raise ValueError(f"sigma must be positive, got {sigma}")
    s2 = sigma * sigma
    wm = 2.0 * s2
    wv = 2.0 * c * s2 * s2
    infeasible = frozenset(range(gt.n_arms)) - gt.feasible
    t3 = sum(wv * _inv_sq(gt.var_gaps[i]) for i in sorted(infeasible & gt.risky))
    if gt.i_star is None:
        return t3, max(t3, float(gt.n_arms))
    i_star = gt.i_star
    t1 = max(wm * _inv_sq(gt.best_gap / 2.0), wv * _inv_sq(gt.var_gaps[i_star]))
    t2 = sum(wm * _inv_sq(gt.mean_gaps[i] / 2.0) for i in sorted(gt.feasible & gt.suboptimal))
    t4 = sum(
        min(wm * _inv_sq(gt.mean_gaps[i] / 2.0), wv * _inv_sq(gt.var_gaps[i]))
        for i in sorted(infeasible & gt.suboptimal)
    )
    h = t1 + t2 + t3 + t4
    return h, max(h, float(gt.n_arms))


def david_ci(gt: GroundTruth, eps_mu: float, eps_v: float, i: int) -> float:
    """Per-arm hardness entry of the oracle-assisted UCB baseline.

    min over three resolution routes: mean separation from the best arm,
    confident infeasibility, and eps-approximate acceptance.
    """
    if gt.i_star is None:
        raise ValueError("baseline hardness needs a feasible instance")
    mean_route = _inv_sq(max(0.0, gt.means[gt.i_star] - gt.means[i]))
    excess = gt.variances[i] - gt.sigma_bar_sq
    var_route = 4.0 * _inv_sq(max(0.0, excess))
    accept_route = max(1.0 / (eps_mu * eps_mu), 4.0 * _inv_sq(max(0.0, eps_v - excess)))
    return min(mean_route, var_route, accept_route)


def lower_bound(
    gt: GroundTruth, sigma_bar_sq: float, delta: float
) -> tuple[float, float]:
    """Expected-round lower bound for delta-PAC algorithms.

    Valid for thresholds in (0, 1/4), where Bernoulli means a with
    a(1 - a) = sigma_bar_sq exist.  Returns (constant, bound) with

        constant = min(a_low (1/4 - sigma_bar_sq), a_low / 8,
                       (1 - mu_star) / 8)
        bound    = constant * h_va * ln(1 / (2.4 delta))

    The mu_star entry drops out for infeasible instances, which have no
    best arm.
    """
    if not 0.0 < sigma_bar_sq < 0.25:
        raise ValueError(
            f"lower bound needs sigma_bar_sq in (0, 1/4), got {sigma_bar_sq}"
        )
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    a_low = (1.0 - math.sqrt(1.0 - 4.0 * sigma_bar_sq)) / 2.0
    entries = [a_low * (0.25 - sigma_bar_sq), a_low / 8.0]
    if gt.i_star is not None:
        entries.append((1.0 - gt.means[gt.i_star]) / 8.0)
    constant = min(entries)
    return constant, constant * h_va(gt) * math.log(1.0 / (2.4 * delta))


def scale(h: float, delta: float) -> float:
    """Characteristic time-step scale h ln(h / delta)."""
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if h <= 0.0 or h / delta <= 1.0:
        raise ValueError(f"scale undefined for h={h}, delta={delta}")
    return h * math.log(h / delta)


@dataclass(frozen=True)
class HardnessReport:
    """Bundle of hardness diagnostics for one instance at one delta."""

    delta: float
    flag: int
    h_va: float
    terms: tuple[float, float, float, float]
    scale: Optional[float]
    h1: Optional[float]
    lb_constant: Optional[float]
    lb_value: Optional[float]

    def to_dict(self) -> dict:
        return {
            "delta": self.delta,
            "flag": self.flag,
            "h_va": self.h_va,
            "terms": list(self.terms),
            "scale": self.scale,
            "h1": self.h1,
            "lower_bound_constant": self.lb_constant,
            "lower_bound": self.lb_value,
        }


def hardness_report(
    source: Union[BanditInstance, GroundTruth], delta: float
) -> HardnessReport:
    """Assemble every applicable hardness quantity for an instance."""
    gt = derive_ground_truth(source) if isinstance(source, BanditInstance) else source
    terms = h_va_terms(gt)
    h = terms[0] + terms[1] + terms[2] + terms[3]
    try:
        sc: Optional[float] = scale(h, delta)
    except ValueError:
        sc = None
    h1_val = h1(gt) if gt.i_star is not None else None
    lb_c = lb_v = None
    if 0.0 < gt.sigma_bar_sq < 0.25 and math.isfinite(h):
        lb_c, lb_v = lower_bound(gt, gt.sigma_bar_sq, delta)
    return HardnessReport(
        delta=delta,
        flag=gt.flag,
        h_va=h,
        terms=terms,
        scale=sc,
        h1=h1_val,
        lb_constant=lb_c,
        lb_value=lb_v,
    )
