"""Self-checking property suite behind the ``verify`` CLI subcommand.

Each check returns a :class:`CheckResult`; ``run_all`` executes the
whole battery.  Checks that validate statistical machinery accept
fault-injection hooks (``hardness_fn``, ``radius_scale``) so the test
suite can confirm they actually detect broken implementations.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _backend
from .baselines import make_config, run_riskaverse_ucb_bai, run_va_uniform
from .distributions import Beta, Gaussian, beta_from_moments
from .engine import (
    run_valucb,
    run_valucb_instrumented,
    run_valucb_subg,
    warmup_length_T0,
)
from .experiments import inline_entry, iter_catalog, run_trials
from .hardness import h_va, lower_bound, scale
from .instance import BanditInstance, GroundTruth, derive_ground_truth

__all__ = [
    "CheckResult",
    "check_catalog",
    "check_hardness_bruteforce",
    "check_inactive_constraint",
    "check_lower_bound",
    "check_warmup_length",
    "check_coverage",
    "check_determinism",
    "check_backend_parity",
    "run_all",
]

HardnessFn = Callable[[GroundTruth], float]


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one verification check."""

    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=passed, detail=detail)


def _rel_err(a: float, b: float) -> float:
    if a == b:
        return 0.0
    if not (math.isfinite(a) and math.isfinite(b)):
        return math.inf
    return abs(a - b) / max(abs(a), abs(b))


def h_va_direct(means, variances, sigma_bar_sq: float) -> float:
    """Brute-force hardness straight from the defining per-arm cases.

    Independent of the role-set decomposition in :mod:`valucb.hardness`;
    used to cross-check it on random instances.
    """
    n = len(means)
    feasible = [i for i in range(n) if variances[i] <= sigma_bar_sq]
    if not feasible:
        return sum(1.0 / (variances[i] - sigma_bar_sq) ** 2 for i in range(n))
    mu_star = max(means[i] for i in feasible)
    i_star = min(i for i in feasible if means[i] == mu_star)
    total = 0.0
    for i in range(n):
        dv = abs(variances[i] - sigma_bar_sq)
        if i == i_star:
            below = [mu_star - means[j] for j in range(n) if means[j] < mu_star]
            half_gap = min(below) / 2.0 if below else math.inf
            g = min(half_gap, dv)
            total += math.inf if g == 0.0 else (0.0 if math.isinf(g) else 1.0 / (g * g))
        elif variances[i] <= sigma_bar_sq:
            g = (mu_star - means[i]) / 2.0
            total += 1.0 / (g * g)
        elif means[i] >= mu_star:
            total += math.inf if dv == 0.0 else 1.0 / (dv * dv)
        else:
            g = max((mu_star - means[i]) / 2.0, dv)
            total += 1.0 / (g * g)
    return total


def _random_instance(rng: np.random.Generator, sigma_bar_sq: Optional[float] = None) -> BanditInstance:
    """Random Beta instance with valid moments and a.s. distinct means."""
    n = int(rng.integers(2, 9))
    means = rng.uniform(0.05, 0.95, size=n)
    caps = means * (1.0 - means)
    variances = rng.uniform(0.2, 0.9, size=n) * caps
    if sigma_bar_sq is None:
        sigma_bar_sq = float(rng.uniform(0.02, 0.24))
    arms = tuple(beta_from_moments(float(m), float(v)) for m, v in zip(means, variances))
    return BanditInstance(arms=arms, sigma_bar_sq=sigma_bar_sq)


def check_catalog(delta: float = 0.05) -> CheckResult:
    """Every catalog entry builds, derives ground truth, and has finite hardness."""
    count = 0
    for entry in iter_catalog():
        count += 1
        gt = entry.ground_truth
        h = h_va(gt)
        if not (math.isfinite(h) and h > 0.0):
            return _result(
                "catalog", False, f"case {entry.case_id} j={entry.j}: h_va={h}"
            )
        sc = scale(h, delta)
        if not math.isfinite(sc) or sc <= 0.0:
            return _result(
                "catalog", False, f"case {entry.case_id} j={entry.j}: scale={sc}"
            )
        if gt.flag == 1 and gt.i_star is None:
            return _result(
                "catalog", False, f"case {entry.case_id} j={entry.j}: flag/i_star mismatch"
            )
    expected = 10 * 11 + 10
    if count != expected:
        return _result("catalog", False, f"expected {expected} entries, found {count}")
    return _result("catalog", True, f"{count} entries, all with finite positive hardness")


def check_hardness_bruteforce(
    n_instances: int = 100,
    master_seed: int = 0,
    hardness_fn: HardnessFn = h_va,
    tol: float = 1e-12,
) -> CheckResult:
    """Role-set hardness equals the brute-force per-arm computation."""
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, 101]))
    worst = 0.0
    for _ in range(n_instances):
        inst = _random_instance(rng)
        gt = derive_ground_truth(inst)
        got = hardness_fn(gt)
        want = h_va_direct(gt.means, gt.variances, inst.sigma_bar_sq)
        err = _rel_err(got, want)
        if err > tol:
            return _result(
                "hardness-bruteforce",
                False,
                f"relative error {err:.3e} > {tol:.0e} on a random instance "
                f"(got {got!r}, want {want!r})",
            )
        worst = max(worst, err)
    return _result(
        "hardness-bruteforce",
        True,
        f"{n_instances} random instances, worst relative error {worst:.3e}",
    )


def check_inactive_constraint(
    n_instances: int = 100,
    master_seed: int = 0,
    hardness_fn: HardnessFn = h_va,
    tol: float = 1e-12,
) -> CheckResult:
    """With a slack threshold, hardness reduces to the plain mean-gap sum.

    A threshold of 0.9 exceeds any variance on [0, 1], so every arm is
    feasible and h_va must equal 4 (gap_best^-2 + sum over suboptimal
    gap_i^-2).
    """
    rng = np.random.default_rng(np.random.SeedSequence([master_seed, 202]))
    worst = 0.0
    for _ in range(n_instances):
        inst = _random_instance(rng, sigma_bar_sq=0.9)
        gt = derive_ground_truth(inst)
        if gt.flag != 1 or gt.feasible != frozenset(range(gt.n_arms)):
            return _result(
                "inactive-constraint", False, "threshold 0.9 left an infeasible arm"
            )
        got = hardness_fn(gt)
        want = 4.0 * (
            1.0 / gt.best_gap**2
            + sum(1.0 / gt.mean_gaps[i] ** 2 for i in sorted(gt.suboptimal))
        )
        err = _rel_err(got, want)
        if err > tol:
            return _result(
                "inactive-constraint",
                False,
                f"relative error {err:.3e} > {tol:.0e} (got {got!r}, want {want!r})",
            )
        worst = max(worst, err)
    return _result(
        "inactive-constraint",
        True,
        f"{n_instances} random instances, worst relative error {worst:.3e}",
    )


def check_lower_bound(delta: float = 0.05) -> CheckResult:
    """Lower bound is positive and below the h ln(h/delta) scale on the catalog."""
    checked = 0
    for entry in iter_catalog():
        sbsq = entry.instance.sigma_bar_sq
        if not 0.0 < sbsq < 0.25:
            continue
        gt = entry.ground_truth
        h = h_va(gt)
        constant, bound = lower_bound(gt, sbsq, delta)
        if not 0.0 < constant <= 0.125:
            return _result(
                "lower-bound",
                False,
                f"case {entry.case_id} j={entry.j}: constant {constant} out of range",
            )
        if not 0.0 < bound < scale(h, delta):
            return _result(
                "lower-bound",
                False,
                f"case {entry.case_id} j={entry.j}: bound {bound} vs scale {scale(h, delta)}",
            )
        checked += 1
    return _result("lower-bound", True, f"{checked} catalog entries bounded below their scale")


def check_warmup_length() -> CheckResult:
    """Spot values of the sub-Gaussian warm-up length T0."""
    got = warmup_length_T0(2, 0.05)
    if got != 38:
        return _result("warmup-length", False, f"T0(N=2, delta=0.05) = {got}, want 38")
    for n, delta in ((2, 0.1), (5, 0.05), (20, 0.01)):
        t0 = warmup_length_T0(n, delta)
        lhs = float(t0)
        rhs = 2.0 * math.log(2.0 * n * float(t0) ** 4 / delta)
        prev = 2.0 * math.log(2.0 * n * float(t0 - 1) ** 4 / delta)
        if not (lhs >= rhs and t0 - 1 < prev):
            return _result(
                "warmup-length", False, f"T0({n}, {delta}) = {t0} is not the minimal solution"
            )
    return _result("warmup-length", True, "T0 matches its defining inequality at spot values")


def _coverage_instance() -> BanditInstance:
    return BanditInstance(
        arms=(
            beta_from_moments(0.7, 0.04),
            beta_from_moments(0.5, 0.04),
            beta_from_moments(0.3, 0.12),
        ),
        sigma_bar_sq=0.09,
    )


def check_coverage(
    n_trials: int = 100,
    master_seed: int = 0,
    delta: float = 0.1,
    radius_scale: float = 1.0,
    backend: str = "auto",
) -> CheckResult:
    """Fraction of trials with any confidence-bound violation stays small.

    The bounds are built to hold for all arms and steps jointly with
    probability at least 1 - delta/2 per trial, so the violated-trial
    rate must stay below delta/2 plus three binomial standard errors.
    ``radius_scale`` shrinks the radius for fault injection.
    """
    inst = _coverage_instance()
    violations = 0
    for trial in range(n_trials):
        rng = np.random.default_rng(np.random.SeedSequence([master_seed, 303, trial]))
        _, violated = run_valucb_instrumented(
            inst, delta, rng, backend=backend, radius_scale=radius_scale
        )
        violations += int(violated)
    rate = violations / n_trials
    p = delta / 2.0
    limit = p + 3.0 * math.sqrt(p * (1.0 - p) / n_trials)
    ok = rate <= limit
    return _result(
        "coverage",
        ok,
        f"violated-trial rate {rate:.3f} (limit {limit:.3f}, {n_trials} trials)",
    )


def check_determinism(
    master_seed: int = 0, n_trials: int = 5, backend: str = "auto"
) -> CheckResult:
    """Rerunning with the same master seed reproduces every record."""
    entry = inline_entry(_coverage_instance())
    agg1, rec1 = run_trials("valucb", entry, 0.1, n_trials, master_seed, backend=backend)
    agg2, rec2 = run_trials("valucb", entry, 0.1, n_trials, master_seed, backend=backend)
    if rec1 != rec2 or agg1 != agg2:
        return _result("determinism", False, "identical seeds produced different records")
    _, rec3 = run_trials("valucb", entry, 0.1, n_trials, master_seed + 1, backend=backend)
    if rec1 == rec3:
        return _result("determinism", False, "different master seeds produced identical records")
    return _result("determinism", True, f"{n_trials} trials reproduced record-for-record")


def check_backend_parity(master_seed: int = 0) -> CheckResult:
    """Compiled and pure-Python backends return identical trials."""
    if not _backend.HAVE_EXTENSION:
        return _result("backend-parity", True, "compiled backend unavailable; check skipped")

    bounded = _coverage_instance()
    gaussian = BanditInstance(
        arms=(Gaussian(0.9, 0.1), Gaussian(0.1, 0.1)),
        sigma_bar_sq=0.04,
        subg_proxy=0.5,
    )
    mixed = BanditInstance(
        arms=(Beta(8.0, 4.0), Beta(4.0, 8.0), Beta(2.0, 2.0)),
        sigma_bar_sq=0.03,
    )
    config = make_config(bounded.n_arms, 0.1, 0.2, 0.05)

    def pair(fn, *args, **kwargs):
        results = []
        for backend in ("python", "cython"):
            rng = np.random.default_rng(np.random.SeedSequence([master_seed, 404]))
            results.append(fn(*args, rng, backend=backend, **kwargs))
        return results

    cases = [
        ("valucb", pair(lambda i, d, r, **kw: run_valucb(i, d, r, **kw), bounded, 0.1)),
        ("valucb/mixed", pair(lambda i, d, r, **kw: run_valucb(i, d, r, **kw), mixed, 0.1)),
        (
            "va_uniform",
            pair(lambda i, d, r, **kw: run_va_uniform(i, d, r, **kw), bounded, 0.1),
        ),
        (
            "riskaverse",
            pair(
                lambda i, d, r, **kw: run_riskaverse_ucb_bai(i, d, r, config, **kw),
                bounded,
                0.1,
            ),
        ),
        (
            "valucb_subg",
            pair(lambda i, d, r, **kw: run_valucb_subg(i, d, r, **kw), gaussian, 0.1),
        ),
        (
            "instrumented",
            pair(
                lambda i, d, r, **kw: run_valucb_instrumented(i, d, r, **kw),
                bounded,
                0.1,
            ),
        ),
    ]
    for name, (py, cy) in cases:
        if py != cy:
            return _result(
                "backend-parity", False, f"{name}: python {py!r} != cython {cy!r}"
            )
    return _result("backend-parity", True, f"{len(cases)} algorithm runs bit-identical")


def run_all(
    master_seed: int = 0,
    n_trials: int = 100,
    n_instances: int = 100,
    backend: str = "auto",
) -> list[CheckResult]:
    """Run the whole battery; order is cheap-to-expensive."""
    return [
        check_catalog(),
        check_warmup_length(),
        check_hardness_bruteforce(n_instances=n_instances, master_seed=master_seed),
        check_inactive_constraint(n_instances=n_instances, master_seed=master_seed),
        check_lower_bound(),
        check_determinism(master_seed=master_seed, backend=backend),
        check_backend_parity(master_seed=master_seed),
        check_coverage(n_trials=n_trials, master_seed=master_seed, backend=backend),
    ]
