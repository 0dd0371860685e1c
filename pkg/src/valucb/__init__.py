"""Variance-constrained best-arm identification under fixed confidence.

Simulation library and benchmark harness for algorithms that must find
the highest-mean arm among those whose reward variance stays below a
threshold, with error probability at most delta.  Provides

- ``run_valucb``: the LUCB-style anytime algorithm for bounded rewards,
- ``run_valucb_subg``: its sub-Gaussian variant,
- ``run_va_uniform`` / ``run_riskaverse_ucb_bai``: baselines,
- hardness quantities and a sample-complexity lower bound,
- a reproducible benchmark catalog plus a seeded multi-trial runner,
- a CLI (``valucb``) wrapping all of the above.

Hot loops run on a compiled Cython kernel when available and fall back
to a pure-Python engine otherwise; both consume the same random stream
and produce bit-identical trials.
"""
from . import _backend
from .baselines import (
    RiskAverseConfig,
    config_from_ground_truth,
    make_config,
    riskaverse_budget_H,
    riskaverse_hprime,
    run_riskaverse_ucb_bai,
    run_va_uniform,
)
from .distributions import Bernoulli, Beta, Gaussian, beta_from_moments, moments
from .engine import (
    DEFAULT_MAX_TIME_STEPS,
    Partition,
    RunResult,
    run_valucb,
    run_valucb_instrumented,
    run_valucb_subg,
    warmup_length_T0,
)
from .experiments import (
    ALGORITHMS,
    AggregateResult,
    CatalogEntry,
    TrialRecord,
    catalog_cases,
    catalog_entry,
    inline_entry,
    iter_catalog,
    run_trials,
    trial_seed,
)
from .hardness import (
    HardnessReport,
    david_ci,
    h1,
    h_va,
    h_va_sigma,
    h_va_terms,
    hardness_report,
    lower_bound,
    scale,
)
from .instance import (
    BanditInstance,
    GroundTruth,
    bernoulli_feasibility_roots,
    derive_ground_truth,
)

__version__ = "0.1.0"

BACKEND = _backend.resolve("auto")
HAVE_EXTENSION = _backend.HAVE_EXTENSION

__all__ = [
    "ALGORITHMS",
    "AggregateResult",
    "BACKEND",
    "BanditInstance",
    "Bernoulli",
    "Beta",
    "CatalogEntry",
    "DEFAULT_MAX_TIME_STEPS",
    "Gaussian",
    "GroundTruth",
    "HAVE_EXTENSION",
    "HardnessReport",
    "Partition",
    "RiskAverseConfig",
    "RunResult",
    "TrialRecord",
    "bernoulli_feasibility_roots",
    "beta_from_moments",
    "catalog_cases",
    "catalog_entry",
    "config_from_ground_truth",
    "david_ci",
    "derive_ground_truth",
    "h1",
    "h_va",
    "h_va_sigma",
    "h_va_terms",
    "hardness_report",
    "inline_entry",
    "iter_catalog",
    "lower_bound",
    "make_config",
    "moments",
    "riskaverse_budget_H",
    "riskaverse_hprime",
    "run_riskaverse_ucb_bai",
    "run_trials",
    "run_va_uniform",
    "run_valucb",
    "run_valucb_instrumented",
    "run_valucb_subg",
    "scale",
    "trial_seed",
    "warmup_length_T0",
]
