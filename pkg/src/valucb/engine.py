"""VA-LUCB trial engines and their step-wise building blocks.

The algorithm maintains, for every arm still possibly feasible, two-sided
confidence bounds on the mean and variance.  Each time step it

1. recomputes bounds for the possibly-feasible set only (arms already
   declared infeasible keep their stale bounds and never return),
2. partitions those arms into empirically feasible, almost feasible, and
   newly infeasible,
3. forms the potential set of arms whose mean UCB still reaches the
   empirical best feasible arm's LCB,
4. stops when no possibly-feasible arm remains in the potential set,
   reporting the best possibly-feasible arm (or infeasibility), and
5. otherwise pulls the empirical leader and, when their intervals
   overlap, the strongest challenger.

Two interchangeable backends execute the loop: a compiled Cython kernel
and a pure-Python fallback built on the primitives below.  Both consume
the same random stream, so results are bit-identical across backends.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Optional

import numpy as np

from . import _backend
from .distributions import Bernoulli, Beta, Gaussian
from .instance import BanditInstance
from .stats import ConfidenceBounds

__all__ = [
    "Partition",
    "RunResult",
    "partition_arms",
    "potential_set",
    "check_stop",
    "select_arms",
    "warmup_length_T0",
    "run_valucb",
    "run_valucb_subg",
]

DEFAULT_MAX_TIME_STEPS = 10**9
SUBG_K = 2.0
SUBG_C = 64.0


@dataclass(frozen=True)
class Partition:
    """Classification of the currently active arms by variance bounds.

    ``empirically_feasible`` holds arms whose variance UCB clears the
    threshold (plus slack), ``almost_feasible`` those whose bounds
    straddle it, and ``empirically_infeasible`` those whose variance LCB
    exceeds it.  The three sets are disjoint and cover the active arms.
    """

    empirically_feasible: frozenset[int]
    almost_feasible: frozenset[int]
    empirically_infeasible: frozenset[int]

    @property
    def possibly_feasible(self) -> frozenset[int]:
        return self.empirically_feasible | self.almost_feasible


@dataclass(frozen=True)
class RunResult:
    """Outcome of one trial.

    ``flag`` is the feasibility verdict (1 with a recommended ``arm``,
    0 with none), ``tau`` counts every arm pull including warm-up,
    ``time_steps`` is the index of the last executed time step, and
    ``terminated`` is False when the safety cap (or a baseline budget
    anomaly) cut the run short, in which case the verdict is vacuous.
    """

    flag: int
    arm: Optional[int]
    tau: int
    time_steps: int
    pulls: tuple[int, ...]
    terminated: bool

    def __post_init__(self):
        if self.flag not in (0, 1):
            raise ValueError(f"flag must be 0 or 1, got {self.flag}")
        if self.flag == 1 and self.arm is None:
            raise ValueError("flag 1 requires a recommended arm")
        if self.flag == 0 and self.arm is not None:
            raise ValueError("flag 0 forbids a recommended arm")
        if self.tau != sum(self.pulls):
            raise ValueError(f"tau {self.tau} != total pulls {sum(self.pulls)}")


def partition_arms(
    bounds: Mapping[int, ConfidenceBounds], sigma_bar_sq: float, eps_v: float = 0.0
) -> Partition:
    """Split the active arms by their variance bounds.

    An arm is possibly feasible when its variance LCB is at most the
    threshold, and empirically feasible when additionally its variance
    UCB is at most threshold + eps_v.  With eps_v = 0 the almost-feasible
    set is exactly the arms whose bounds straddle the threshold.
    """
    feasible = []
    almost = []
    infeasible = []
    for i, b in bounds.items():
        if b.l_var > sigma_bar_sq:
            infeasible.append(i)
        elif b.u_var <= sigma_bar_sq + eps_v:
            feasible.append(i)
        else:
            almost.append(i)
    return Partition(
        empirically_feasible=frozenset(feasible),
        almost_feasible=frozenset(almost),
        empirically_infeasible=frozenset(infeasible),
    )


def potential_set(
    bounds: Mapping[int, ConfidenceBounds],
    partition: Partition,
    i_t_star: Optional[int],
) -> frozenset[int]:
    """Arms that could still beat the empirical best feasible arm.

    With an empirical best arm, these are the possibly-feasible arms
    (other than the best itself) whose mean UCB is at least its mean
    LCB; boundary ties count as overlap.  Without one, every active arm
    remains potentially optimal.
    """
    if i_t_star is None:
        return frozenset(bounds)
    floor = bounds[i_t_star].l_mu
    return frozenset(
        i for i in partition.possibly_feasible if i != i_t_star and bounds[i].u_mu >= floor
    )


def check_stop(
    partition: Partition,
    potential: frozenset[int],
    sample_means: Mapping[int, float],
) -> Optional[tuple[int, Optional[int]]]:
    """Stopping rule: fire when no possibly-feasible arm stays potential.

    Returns None to continue, ``(1, arm)`` to report the possibly-feasible
    arm with the highest sample mean, or ``(0, None)`` to report
    infeasibility (no possibly-feasible arm left at all).
    """
    fbar = partition.possibly_feasible
    if fbar & potential:
        return None
    if partition.empirically_feasible:
        return 1, _argmax(fbar, sample_means)
    return 0, None


def select_arms(
    partition: Partition,
    bounds: Mapping[int, ConfidenceBounds],
    sample_means: Mapping[int, float],
) -> tuple[int, ...]:
    """Choose the arms to pull this time step.

    The empirical leader by sample mean among possibly-feasible arms is
    always pulled; the challenger with the highest mean UCB joins it only
    if the challenger's UCB reaches the leader's LCB.  All ties resolve
    to the smallest index.
    """
    fbar = sorted(partition.possibly_feasible)
    if not fbar:
        raise ValueError("no possibly-feasible arms to sample")
    if len(fbar) == 1:
        return (fbar[0],)
    leader = _argmax(fbar, sample_means)
    challenger = _argmax((i for i in fbar if i != leader), {i: bounds[i].u_mu for i in fbar})
    if bounds[challenger].u_mu >= bounds[leader].l_mu:
        return leader, challenger
    return (leader,)


def _argmax(indices, values: Mapping[int, float]) -> int:
    best = None
    best_val = -math.inf
    for i in sorted(indices):
        v = values[i]
        if best is None or v > best_val:
            best, best_val = i, v
    if best is None:
        raise ValueError("argmax over empty index set")
    return best


def warmup_length_T0(n_arms: int, delta: float, k: float = SUBG_K, c: float = SUBG_C) -> int:
    """Smallest t with t >= (128/c) ln(k N t^4 / delta).

    Number of warm-up time steps (each sampling every arm once) needed
    before the sub-Gaussian variance radius obeys its maintained ceiling.
    """
    if n_arms < 2:
        raise ValueError(f"need at least 2 arms, got {n_arms}")
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    t = 1
    while t < (128.0 / c) * math.log(k * n_arms * float(t) ** 4 / delta):
        t += 1
    return t


def run_valucb(
    instance: BanditInstance,
    delta: float,
    rng: np.random.Generator,
    *,
    max_time_steps: int = DEFAULT_MAX_TIME_STEPS,
    backend: str = "auto",
) -> RunResult:
    """Run one VA-LUCB trial on a bounded instance.

    Warm-up pulls every arm twice (arm 0 first), then the LUCB loop runs
    from time step N + 1 until the stopping rule fires or the step cap
    aborts the trial.
    """
    _check_run_args(instance, delta, max_time_steps, instance.n_arms + 1)
    if not instance.bounded:
        raise ValueError("run_valucb requires bounded (Bernoulli/Beta) arms")
    kinds, pa, pb = encode_arms(instance)
    impl = _backend.resolve(backend)
    if impl == "cython":
        raw = _backend.extension().valucb_trial(
            kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
            max_time_steps, 1.0, None, None, False,
        )
    else:
        from . import _pyengine

        raw = _pyengine.valucb_trial(
            kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
            max_time_steps, 1.0, None, None, False,
        )
    return result_from_raw(raw)


def run_valucb_instrumented(
    instance: BanditInstance,
    delta: float,
    rng: np.random.Generator,
    *,
    max_time_steps: int = DEFAULT_MAX_TIME_STEPS,
    backend: str = "auto",
    radius_scale: float = 1.0,
) -> tuple[RunResult, bool]:
    """VA-LUCB trial that also reports confidence-bound coverage.

    Checks, at every time step and for every active arm, whether the true
    mean and variance fall inside the current bounds; the second return
    value is True when any violation occurred anywhere in the trial.
    ``radius_scale`` deliberately rescales the confidence radius and
    exists as a fault-injection hook for validating the coverage test
    itself; leave it at 1.0 for faithful runs.
    """
    _check_run_args(instance, delta, max_time_steps, instance.n_arms + 1)
    if not instance.bounded:
        raise ValueError("run_valucb requires bounded (Bernoulli/Beta) arms")
    means, variances = instance.true_moments()
    tm = np.asarray(means, dtype=np.float64)
    tv = np.asarray(variances, dtype=np.float64)
    kinds, pa, pb = encode_arms(instance)
    impl = _backend.resolve(backend)
    if impl == "cython":
        raw = _backend.extension().valucb_trial(
            kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
            max_time_steps, radius_scale, tm, tv, False,
        )
    else:
        from . import _pyengine

        raw = _pyengine.valucb_trial(
            kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
            max_time_steps, radius_scale, tm, tv, False,
        )
    return result_from_raw(raw), bool(raw[6])


def run_valucb_subg(
    instance: BanditInstance,
    delta: float,
    rng: np.random.Generator,
    *,
    max_time_steps: int = DEFAULT_MAX_TIME_STEPS,
    backend: str = "auto",
    k: float = SUBG_K,
    c: float = SUBG_C,
) -> RunResult:
    """Run one trial of the sub-Gaussian VA-LUCB variant.

    Warm-up occupies T0 time steps, each sampling all arms in index
    order.  After warm-up the loop matches VA-LUCB except for the
    sub-Gaussian radii and a forced-sampling set that keeps every
    possibly-feasible arm's pull count above the level at which the
    variance radius ceiling would be violated at the next step.
    """
    if instance.subg_proxy is None:
        raise ValueError("missing sub-Gaussian proxy: set instance.subg_proxy")
    t0 = warmup_length_T0(instance.n_arms, delta, k, c)
    _check_run_args(instance, delta, max_time_steps, t0 + 1)
    kinds, pa, pb = encode_arms(instance)
    impl = _backend.resolve(backend)
    args = (
        kinds, pa, pb, instance.sigma_bar_sq, instance.eps_v, delta, rng,
        max_time_steps, instance.subg_proxy, k, c, t0,
    )
    if impl == "cython":
        raw = _backend.extension().valucb_subg_trial(*args)
    else:
        from . import _pyengine

        raw = _pyengine.valucb_subg_trial(*args)
    return result_from_raw(raw)


def encode_arms(instance: BanditInstance) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Pack arms into (kind, param, param) arrays for the engines.

    Kind 0 is Bernoulli(p, -), kind 1 is Beta(alpha, beta), kind 2 is
    Gaussian(mu, sigma).
    """
    n = instance.n_arms
    kinds = np.zeros(n, dtype=np.int8)
    pa = np.zeros(n, dtype=np.float64)
    pb = np.zeros(n, dtype=np.float64)
    for i, arm in enumerate(instance.arms):
        if isinstance(arm, Bernoulli):
            kinds[i], pa[i] = 0, arm.p
        elif isinstance(arm, Beta):
            kinds[i], pa[i], pb[i] = 1, arm.alpha, arm.beta
        elif isinstance(arm, Gaussian):
            kinds[i], pa[i], pb[i] = 2, arm.mu, arm.sigma
        else:
            raise TypeError(f"unknown distribution {arm!r}")
    return kinds, pa, pb


def result_from_raw(raw: tuple) -> RunResult:
    """Convert an engine tuple into a RunResult."""
    flag, arm, tau, time_steps, pulls, terminated = raw[:6]
    return RunResult(
        flag=int(flag),
        arm=None if arm < 0 else int(arm),
        tau=int(tau),
        time_steps=int(time_steps),
        pulls=tuple(int(p) for p in pulls),
        terminated=bool(terminated),
    )


def _check_run_args(
    instance: BanditInstance, delta: float, max_time_steps: int, min_steps: int
) -> None:
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta}")
    if max_time_steps < min_steps:
        raise ValueError(
            f"max_time_steps {max_time_steps} leaves no room for a decision "
            f"step (need >= {min_steps})"
        )
