"""Bandit instances and their ground-truth structure.

An instance is a tuple of arm distributions plus a variance threshold
``sigma_bar_sq``.  Arm i is feasible when its true variance is at most
the threshold; the target arm is the feasible arm with the largest true
mean.  ``derive_ground_truth`` computes the feasible/suboptimal/risky
decomposition and the mean and variance gaps that drive every hardness
quantity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .distributions import DistributionSpec, Gaussian, is_bounded, moments

__all__ = [
    "BanditInstance",
    "GroundTruth",
    "derive_ground_truth",
    "bernoulli_feasibility_roots",
]


@dataclass(frozen=True)
class BanditInstance:
    """Arms, variance threshold, and optional sub-Gaussian metadata.

    Parameters
    ----------
    arms : tuple of DistributionSpec
        At least two reward distributions.
    sigma_bar_sq : float
        Variance threshold defining feasibility, must be positive.
    subg_proxy : float, optional
        Common sub-Gaussian proxy sigma.  Required when any arm is
        Gaussian; every Gaussian standard deviation must be <= sigma.
    eps_v : float
        Feasibility slack.  Zero gives the strict algorithm; a positive
        value relaxes the empirically-feasible test to
        ``U_i^v <= sigma_bar_sq + eps_v``.
    """

    arms: tuple[DistributionSpec, ...]
    sigma_bar_sq: float
    subg_proxy: Optional[float] = None
    eps_v: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "arms", tuple(self.arms))
        if len(self.arms) < 2:
            raise ValueError(f"need at least 2 arms, got {len(self.arms)}")
        if self.sigma_bar_sq <= 0.0:
            raise ValueError(f"sigma_bar_sq must be positive, got {self.sigma_bar_sq}")
        if self.eps_v < 0.0:
            raise ValueError(f"eps_v must be nonnegative, got {self.eps_v}")
        gaussians = [a for a in self.arms if isinstance(a, Gaussian)]
        if gaussians:
            if self.subg_proxy is None:
                raise ValueError("Gaussian arms require a sub-Gaussian proxy")
            bad = [a for a in gaussians if a.sigma > self.subg_proxy]
            if bad:
                raise ValueError(
                    f"Gaussian sigma exceeds sub-Gaussian proxy {self.subg_proxy}: {bad}"
                )
        if self.subg_proxy is not None and self.subg_proxy <= 0.0:
            raise ValueError(f"subg_proxy must be positive, got {self.subg_proxy}")

    @property
    def n_arms(self) -> int:
        return len(self.arms)

    @property
    def bounded(self) -> bool:
        return all(is_bounded(a) for a in self.arms)

    def true_moments(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """Per-arm (means, variances) from the analytic moments."""
        pairs = [moments(a) for a in self.arms]
        return tuple(p[0] for p in pairs), tuple(p[1] for p in pairs)


@dataclass(frozen=True)
class GroundTruth:
    """Oracle decomposition of an instance.

    Attributes
    ----------
    feasible : frozenset of arm indices with variance <= threshold.
    suboptimal : frozenset S of arms with mean below the best feasible
        mean (empty when no arm is feasible).
    risky : frozenset R, the complement of S.
    flag : 1 when a feasible arm exists, else 0.
    i_star : index of the best feasible arm, or None.
    i_star_star : index of the best suboptimal arm, or None.
    mean_gaps : per-arm mean gap.  For the best arm this is the gap to
        the best suboptimal arm (+inf when S is empty); for every other
        arm it is mu_star - mu_i (nonpositive for risky arms, which no
        hardness term reads); +inf everywhere when flag = 0.
    var_gaps : per-arm |variance - threshold|.
    separator : midpoint of the best feasible mean and the best
        suboptimal mean, -inf when either side is missing.
    """

    flag: int
    feasible: frozenset[int]
    suboptimal: frozenset[int]
    risky: frozenset[int]
    i_star: Optional[int]
    i_star_star: Optional[int]
    mean_gaps: tuple[float, ...]
    var_gaps: tuple[float, ...]
    separator: float
    means: tuple[float, ...] = field(repr=False)
    variances: tuple[float, ...] = field(repr=False)
    sigma_bar_sq: float = field(repr=False, default=0.0)

    @property
    def n_arms(self) -> int:
        return len(self.mean_gaps)

    @property
    def best_gap(self) -> float:
        """Mean gap of the best arm, +inf when it has no competitor."""
        if self.i_star is None:
            return math.inf
        return self.mean_gaps[self.i_star]


def derive_ground_truth(instance: BanditInstance) -> GroundTruth:
    """Compute the feasibility decomposition and gap vectors.

    Raises
    ------
    ValueError
        "degenerate best arm" when two feasible arms share the top mean,
        or when ``eps_v`` is zero and the best arm's variance equals the
        threshold exactly (the algorithm cannot separate either case).
    """
    means, variances = instance.true_moments()
    n = instance.n_arms
    sbsq = instance.sigma_bar_sq

    feasible = frozenset(i for i in range(n) if variances[i] <= sbsq)
    flag = 1 if feasible else 0

    if not feasible:
        return GroundTruth(
            flag=0,
            feasible=feasible,
            suboptimal=frozenset(),
            risky=frozenset(range(n)),
            i_star=None,
            i_star_star=None,
            mean_gaps=(math.inf,) * n,
            var_gaps=tuple(abs(v - sbsq) for v in variances),
            separator=-math.inf,
            means=means,
            variances=variances,
            sigma_bar_sq=sbsq,
        )

    best_mean = max(means[i] for i in feasible)
    top = [i for i in feasible if means[i] == best_mean]
    if len(top) > 1:
        raise ValueError(f"degenerate best arm: feasible arms {top} share mean {best_mean}")
    i_star = top[0]
    if instance.eps_v == 0.0 and variances[i_star] == sbsq:
        raise ValueError(
            "degenerate best arm: its variance equals the threshold exactly "
            "and eps_v is zero"
        )

    suboptimal = frozenset(i for i in range(n) if means[i] < best_mean)
    risky = frozenset(range(n)) - suboptimal

    i_star_star = None
    if suboptimal:
        sub_best = max(means[i] for i in suboptimal)
        i_star_star = min(i for i in suboptimal if means[i] == sub_best)

    gaps = [best_mean - means[i] for i in range(n)]
    gaps[i_star] = best_mean - means[i_star_star] if i_star_star is not None else math.inf
    separator = (
        (means[i_star] + means[i_star_star]) / 2.0 if i_star_star is not None else -math.inf
    )

    return GroundTruth(
        flag=flag,
        feasible=feasible,
        suboptimal=suboptimal,
        risky=risky,
        i_star=i_star,
        i_star_star=i_star_star,
        mean_gaps=tuple(gaps),
        var_gaps=tuple(abs(v - sbsq) for v in variances),
        separator=separator,
        means=means,
        variances=variances,
        sigma_bar_sq=sbsq,
    )


def bernoulli_feasibility_roots(sigma_bar_sq: float) -> tuple[float, float]:
    """Bernoulli means whose variance equals the threshold.

    Solves a(1 - a) = sigma_bar_sq for sigma_bar_sq in (0, 1/4); a
    Bernoulli arm is feasible iff its mean lies outside the open
    interval between the two roots.

    Returns
    -------
    (lower, upper) : the roots (1 -+ sqrt(1 - 4 sigma_bar_sq)) / 2.
    """
    if not 0.0 < sigma_bar_sq < 0.25:
        raise ValueError(
            f"roots exist only for sigma_bar_sq in (0, 1/4), got {sigma_bar_sq}"
        )
    disc = math.sqrt(1.0 - 4.0 * sigma_bar_sq)
    return (1.0 - disc) / 2.0, (1.0 + disc) / 2.0
