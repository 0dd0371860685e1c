"""Benchmark catalog and the seeded multi-trial runner.

The catalog provides families of 20-arm Beta instances indexed by a
difficulty knob j, plus a 10-arm comparison family for baseline studies.
Every trial derives its random state from a documented mixing of
(master_seed, case code, j, trial index) through ``SeedSequence``, so a
run is reproducible from four integers, and trials are independent of
execution order or parallelism.
"""
from __future__ import annotations

import math
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import baselines, hardness
from .distributions import beta_from_moments
from .engine import (
    DEFAULT_MAX_TIME_STEPS,
    RunResult,
    run_valucb,
    run_valucb_subg,
)
from .instance import BanditInstance, GroundTruth, derive_ground_truth

__all__ = [
    "CatalogEntry",
    "TrialRecord",
    "AggregateResult",
    "ALGORITHMS",
    "catalog_cases",
    "catalog_entry",
    "iter_catalog",
    "inline_entry",
    "trial_seed",
    "score_success",
    "run_trials",
]

ALGORITHMS = ("valucb", "va_uniform", "riskaverse", "valucb_subg")

# Frozen case codes for seed mixing; appending new cases never perturbs
# the streams of existing ones.
CASE_CODES = {
    "inline": 0,
    "1a": 1,
    "1b": 2,
    "1c": 3,
    "1d": 4,
    "2": 5,
    "3": 6,
    "4a": 7,
    "4b": 8,
    "4c": 9,
    "4d": 10,
    "cmp": 11,
}


@dataclass(frozen=True)
class CatalogEntry:
    """One catalog instance with its derived ground truth."""

    case_id: str
    j: int
    instance: BanditInstance
    ground_truth: GroundTruth


@dataclass(frozen=True)
class TrialRecord:
    """One trial's outcome, in CSV row order."""

    algorithm: str
    case_id: str
    j: int
    trial: int
    seed: int
    tau: int
    time_steps: int
    success: bool
    flag: int
    arm: Optional[int]
    terminated: bool


@dataclass(frozen=True)
class AggregateResult:
    """Summary over the trials of one (algorithm, instance) pair."""

    algorithm: str
    case_id: str
    j: int
    delta: float
    master_seed: int
    n_trials: int
    mean_tau: float
    std_tau: float
    mean_time_steps: float
    success_rate: float
    h_va: float
    scale: Optional[float]

    def to_dict(self) -> dict:
        return {
            "algorithm": self.algorithm,
            "case": self.case_id,
            "j": self.j,
            "delta": self.delta,
            "master_seed": self.master_seed,
            "n_trials": self.n_trials,
            "mean_tau": self.mean_tau,
            "std_tau": self.std_tau,
            "mean_time_steps": self.mean_time_steps,
            "success_rate": self.success_rate,
            "h_va": self.h_va,
            "scale": self.scale,
        }


def _means_vars(pairs: Sequence[tuple[float, float]], sigma_bar_sq: float) -> BanditInstance:
    return BanditInstance(
        arms=tuple(beta_from_moments(m, v) for m, v in pairs),
        sigma_bar_sq=sigma_bar_sq,
    )


def _build_case(case_id: str, j: int) -> BanditInstance:
    if case_id == "1a":
        d = 0.01 * 1.2**j
        return _means_vars([(0.7, 0.09), (0.7 - d, 0.09)] + [(0.2, 0.09)] * 18, 0.25)
    if case_id == "1b":
        dv = 0.01 * 1.2**j
        return _means_vars([(0.55, 0.25 - dv), (0.53, 0.09)] + [(0.15, 0.09)] * 18, 0.25)
    if case_id == "1c":
        dv = 0.01 * 1.2**j
        return _means_vars([(0.55, 0.25 - dv)] + [(0.15, 0.09)] * 19, 0.25)
    if case_id == "1d":
        d = 0.02 * 1.1**j
        return _means_vars([(0.7, 0.03), (0.7 - d, 0.03)] + [(0.3, 0.03)] * 18, 0.04)
    if case_id == "2":
        d = 0.02 * 1.2**j
        return _means_vars([(0.7, 0.09)] + [(0.7 - d, 0.09)] * 19, 0.25)
    if case_id == "3":
        dv = 0.01 * 1.2**j
        return _means_vars([(0.55, 0.04 + dv)] * 20, 0.04)
    if case_id == "4a":
        d = 0.02 * 1.2**j
        return _means_vars([(0.7, 0.03)] + [(0.7 - d, 0.2)] * 19, 0.04)
    if case_id == "4b":
        dv = 0.05 * 1.1**j
        return _means_vars([(0.55, 0.03)] + [(0.53, 0.04 + dv)] * 19, 0.04)
    if case_id == "4c":
        d = 0.09 * 1.1**j
        return _means_vars([(0.7, 0.04)] + [(0.7 - d, 0.21)] * 19, 0.2)
    if case_id == "4d":
        dv = 0.01 * 1.2**j
        return _means_vars([(0.7, 0.03)] + [(0.3, 0.04 + dv)] * 19, 0.04)
    if case_id == "cmp":
        ev = 0.233 - 0.003 * j
        fixed = [(0.1, 0.08), (0.15, 0.1), (0.2, 0.12), (0.25, 0.14), (0.3, 0.16)]
        risky = [(m, ev) for m in (0.4, 0.45, 0.5, 0.55, 0.6)]
        return _means_vars(fixed + risky, 0.2)
    raise KeyError(f"unknown catalog case {case_id!r}")


def catalog_cases() -> dict[str, range]:
    """Valid j values per case id."""
    cases = {c: range(0, 11) for c in ("1a", "1b", "1c", "1d", "2", "3", "4a", "4b", "4c", "4d")}
    cases["cmp"] = range(1, 11)
    return cases


def catalog_entry(case_id: str, j: int) -> CatalogEntry:
    """Construct one catalog instance and derive its ground truth."""
    cases = catalog_cases()
    if case_id not in cases:
        raise KeyError(f"unknown catalog case {case_id!r}")
    if j not in cases[case_id]:
        raise ValueError(f"case {case_id} expects j in {cases[case_id]}, got {j}")
    instance = _build_case(case_id, j)
    return CatalogEntry(
        case_id=case_id, j=j, instance=instance, ground_truth=derive_ground_truth(instance)
    )


def iter_catalog():
    """Yield every catalog entry in (case, j) order."""
    for case_id, js in catalog_cases().items():
        for j in js:
            yield catalog_entry(case_id, j)


def inline_entry(instance: BanditInstance, case_id: str = "inline", j: int = 0) -> CatalogEntry:
    """Wrap an ad-hoc instance so the runner can treat it like a case."""
    return CatalogEntry(
        case_id=case_id, j=j, instance=instance, ground_truth=derive_ground_truth(instance)
    )


def _case_code(case_id: str) -> int:
    code = CASE_CODES.get(case_id)
    if code is None:
        # stable fallback for ad-hoc case labels
        code = zlib.crc32(case_id.encode("utf-8"))
    return code


def trial_seed(master_seed: int, case_id: str, j: int, trial: int) -> np.random.SeedSequence:
    """Deterministic per-trial seed sequence.

    Mixes (master_seed, case code, j, trial) as SeedSequence entropy, so
    any single trial is reproducible in isolation.
    """
    if master_seed < 0:
        raise ValueError(f"master seed must be nonnegative, got {master_seed}")
    return np.random.SeedSequence([master_seed, _case_code(case_id), j, trial])


def score_success(gt: GroundTruth, result: RunResult) -> bool:
    """A trial succeeds on exact feasibility verdict and exact best arm."""
    if not result.terminated:
        raise ValueError("score_success expects a terminated run")
    if gt.flag == 1:
        return result.flag == 1 and result.arm == gt.i_star
    return result.flag == 0


def _run_one(
    algorithm: str,
    entry: CatalogEntry,
    delta: float,
    master_seed: int,
    trial: int,
    max_time_steps: int,
    backend: str,
    config: Optional[baselines.RiskAverseConfig],
) -> TrialRecord:
    ss = trial_seed(master_seed, entry.case_id, entry.j, trial)
    seed_value = int(ss.generate_state(1, np.uint64)[0])
    rng = np.random.default_rng(ss)
    if algorithm == "valucb":
        result = run_valucb(
            entry.instance, delta, rng, max_time_steps=max_time_steps, backend=backend
        )
    elif algorithm == "va_uniform":
        result = baselines.run_va_uniform(
            entry.instance, delta, rng, max_time_steps=max_time_steps, backend=backend
        )
    elif algorithm == "riskaverse":
        result = baselines.run_riskaverse_ucb_bai(
            entry.instance, delta, rng, config, backend=backend
        )
    elif algorithm == "valucb_subg":
        result = run_valucb_subg(
            entry.instance, delta, rng, max_time_steps=max_time_steps, backend=backend
        )
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    success = result.terminated and score_success(entry.ground_truth, result)
    return TrialRecord(
        algorithm=algorithm,
        case_id=entry.case_id,
        j=entry.j,
        trial=trial,
        seed=seed_value,
        tau=result.tau,
        time_steps=result.time_steps,
        success=success,
        flag=result.flag,
        arm=result.arm,
        terminated=result.terminated,
    )


def _worker(args) -> TrialRecord:
    return _run_one(*args)


def run_trials(
    algorithm: str,
    entry: CatalogEntry,
    delta: float,
    n_trials: int,
    master_seed: int,
    *,
    max_time_steps: int = DEFAULT_MAX_TIME_STEPS,
    parallel: int = 1,
    backend: str = "auto",
) -> tuple[AggregateResult, list[TrialRecord]]:
    """Run seeded trials of one algorithm on one instance.

    Trials are seeded individually, so the records (and therefore the
    aggregate) do not depend on ``parallel``; workers only change the
    wall-clock cost.  Unterminated trials count as failures.
    """
    if algorithm not in ALGORITHMS:
        raise ValueError(f"unknown algorithm {algorithm!r}, expected one of {ALGORITHMS}")
    if n_trials < 1:
        raise ValueError(f"need at least one trial, got {n_trials}")
    if parallel < 1:
        raise ValueError(f"parallel must be >= 1, got {parallel}")

    config = None
    if algorithm == "riskaverse":
        config = baselines.config_from_ground_truth(entry.ground_truth, delta)

    arg_list = [
        (algorithm, entry, delta, master_seed, trial, max_time_steps, backend, config)
        for trial in range(n_trials)
    ]
    if parallel == 1:
        records = [_run_one(*args) for args in arg_list]
    else:
        with ProcessPoolExecutor(max_workers=parallel) as pool:
            records = list(pool.map(_worker, arg_list))

    taus = [r.tau for r in records]
    mean_tau = sum(taus) / n_trials
    if n_trials > 1:
        std_tau = math.sqrt(sum((x - mean_tau) ** 2 for x in taus) / (n_trials - 1))
    else:
        std_tau = 0.0
    h = hardness.h_va(entry.ground_truth)
    try:
        sc: Optional[float] = hardness.scale(h, delta)
    except ValueError:
        sc = None
    aggregate = AggregateResult(
        algorithm=algorithm,
        case_id=entry.case_id,
        j=entry.j,
        delta=delta,
        master_seed=master_seed,
        n_trials=n_trials,
        mean_tau=mean_tau,
        std_tau=std_tau,
        mean_time_steps=sum(r.time_steps for r in records) / n_trials,
        success_rate=sum(1 for r in records if r.success) / n_trials,
        h_va=h,
        scale=sc,
    )
    return aggregate, records
