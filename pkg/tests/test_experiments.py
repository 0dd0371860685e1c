"""Experiment catalog, seeding, and the multi-trial runner."""
import statistics
import zlib

import numpy as np
import pytest

from valucb.experiments import (
    ALGORITHMS,
    CASE_CODES,
    catalog_cases,
    catalog_entry,
    inline_entry,
    iter_catalog,
    run_trials,
    score_success,
    trial_seed,
)
from valucb.engine import RunResult
from valucb.hardness import h_va, scale


# frozen copy of the catalog definition: (mean, variance) targets per arm
# and the threshold, so drift in the builder is caught here
def _targets(case_id, j):
    if case_id == "1a":
        d = 0.01 * 1.2**j
        return [(0.7, 0.09), (0.7 - d, 0.09)] + [(0.2, 0.09)] * 18, 0.25
    if case_id == "1b":
        dv = 0.01 * 1.2**j
        return [(0.55, 0.25 - dv), (0.53, 0.09)] + [(0.15, 0.09)] * 18, 0.25
    if case_id == "1c":
        dv = 0.01 * 1.2**j
        return [(0.55, 0.25 - dv)] + [(0.15, 0.09)] * 19, 0.25
    if case_id == "1d":
        d = 0.02 * 1.1**j
        return [(0.7, 0.03), (0.7 - d, 0.03)] + [(0.3, 0.03)] * 18, 0.04
    if case_id == "2":
        d = 0.02 * 1.2**j
        return [(0.7, 0.09)] + [(0.7 - d, 0.09)] * 19, 0.25
    if case_id == "3":
        dv = 0.01 * 1.2**j
        return [(0.55, 0.04 + dv)] * 20, 0.04
    if case_id == "4a":
        d = 0.02 * 1.2**j
        return [(0.7, 0.03)] + [(0.7 - d, 0.2)] * 19, 0.04
    if case_id == "4b":
        dv = 0.05 * 1.1**j
        return [(0.55, 0.03)] + [(0.53, 0.04 + dv)] * 19, 0.04
    if case_id == "4c":
        d = 0.09 * 1.1**j
        return [(0.7, 0.04)] + [(0.7 - d, 0.21)] * 19, 0.2
    if case_id == "4d":
        dv = 0.01 * 1.2**j
        return [(0.7, 0.03)] + [(0.3, 0.04 + dv)] * 19, 0.04
    if case_id == "cmp":
        ev = 0.233 - 0.003 * j
        pairs = [(0.1, 0.08), (0.15, 0.1), (0.2, 0.12), (0.25, 0.14), (0.3, 0.16)]
        pairs += [(m, ev) for m in (0.4, 0.45, 0.5, 0.55, 0.6)]
        return pairs, 0.2
    raise KeyError(case_id)


def test_catalog_shape():
    cases = catalog_cases()
    assert set(cases) == set(CASE_CODES) - {"inline"}
    assert all(cases[c] == range(0, 11) for c in cases if c != "cmp")
    assert cases["cmp"] == range(1, 11)
    assert sum(1 for _ in iter_catalog()) == 120


def test_catalog_matches_targets():
    for entry in iter_catalog():
        pairs, sbsq = _targets(entry.case_id, entry.j)
        assert entry.instance.sigma_bar_sq == sbsq
        means, variances = entry.instance.true_moments()
        for i, (m, v) in enumerate(pairs):
            assert means[i] == pytest.approx(m, rel=1e-12)
            assert variances[i] == pytest.approx(v, rel=1e-12)


def test_catalog_structure():
    for entry in iter_catalog():
        gt = entry.ground_truth
        if entry.case_id == "3":
            assert gt.flag == 0
            assert entry.instance.n_arms == 20
        elif entry.case_id == "cmp":
            assert gt.flag == 1 and gt.i_star == 4
            assert entry.instance.n_arms == 10
        else:
            assert gt.flag == 1 and gt.i_star == 0
            assert entry.instance.n_arms == 20


@pytest.mark.parametrize(
    "case_id, j, expected",
    [
        ("1a", 5, 13208.446631187664),
        ("1a", 10, 2374.724264367108),
        ("3", 0, 200000.0),
        ("3", 10, 5216.81066091777),
        ("1d", 0, 20450.0),
        ("cmp", 1, 9433.333333333336),
        ("cmp", 10, 559433.3333333323),
    ],
)
def test_catalog_hardness_spot_values(case_id, j, expected):
    gt = catalog_entry(case_id, j).ground_truth
    assert h_va(gt) == pytest.approx(expected, rel=1e-12)


def test_catalog_1a_hardness_decreases_with_j():
    values = [h_va(catalog_entry("1a", j).ground_truth) for j in range(11)]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_catalog_entry_validation():
    with pytest.raises(KeyError):
        catalog_entry("9z", 0)
    with pytest.raises(ValueError):
        catalog_entry("1a", 11)
    with pytest.raises(ValueError):
        catalog_entry("cmp", 0)


def test_inline_entry(inline_instance):
    entry = inline_entry(inline_instance)
    assert entry.case_id == "inline" and entry.j == 0
    assert entry.ground_truth.i_star == 0


def test_case_codes_frozen():
    assert CASE_CODES == {
        "inline": 0, "1a": 1, "1b": 2, "1c": 3, "1d": 4, "2": 5,
        "3": 6, "4a": 7, "4b": 8, "4c": 9, "4d": 10, "cmp": 11,
    }


def test_trial_seed_reproducible_and_distinct():
    a = trial_seed(7, "1a", 3, 5)
    b = trial_seed(7, "1a", 3, 5)
    assert a.entropy == b.entropy
    assert int(a.generate_state(1, np.uint64)[0]) == int(b.generate_state(1, np.uint64)[0])
    keys = {
        int(trial_seed(7, c, j, t).generate_state(1, np.uint64)[0])
        for c in ("1a", "1b", "cmp")
        for j in (0, 1)
        for t in (0, 1, 2)
    }
    assert len(keys) == 18
    assert trial_seed(8, "1a", 3, 5).entropy != a.entropy


def test_trial_seed_unknown_case_uses_stable_hash():
    ss = trial_seed(3, "adhoc", 1, 2)
    assert ss.entropy == [3, zlib.crc32(b"adhoc"), 1, 2]


def test_trial_seed_rejects_negative_master():
    with pytest.raises(ValueError, match="seed"):
        trial_seed(-1, "1a", 0, 0)


def _result(flag, arm, pulls=(3, 3, 3)):
    return RunResult(
        flag=flag, arm=arm, tau=sum(pulls), time_steps=5, pulls=pulls, terminated=True
    )


def test_score_success(inline_gt):
    assert score_success(inline_gt, _result(1, 0))
    assert not score_success(inline_gt, _result(1, 2))
    assert not score_success(inline_gt, _result(0, None))


def test_score_success_infeasible():
    from valucb.distributions import Bernoulli
    from valucb.instance import BanditInstance, derive_ground_truth

    gt = derive_ground_truth(
        BanditInstance(arms=(Bernoulli(0.5), Bernoulli(0.5)), sigma_bar_sq=0.1)
    )
    assert score_success(gt, _result(0, None))
    assert not score_success(gt, _result(1, 0))


def test_score_success_rejects_unterminated(inline_gt):
    bad = RunResult(flag=0, arm=None, tau=9, time_steps=5, pulls=(3, 3, 3), terminated=False)
    with pytest.raises(ValueError, match="terminated"):
        score_success(inline_gt, bad)


def test_run_trials_validation(inline_instance):
    entry = inline_entry(inline_instance)
    with pytest.raises(ValueError, match="algorithm"):
        run_trials("sgd", entry, 0.1, 2, 0)
    with pytest.raises(ValueError, match="trial"):
        run_trials("valucb", entry, 0.1, 0, 0)
    with pytest.raises(ValueError, match="parallel"):
        run_trials("valucb", entry, 0.1, 2, 0, parallel=0)


def test_run_trials_records_and_aggregate(inline_instance):
    entry = inline_entry(inline_instance)
    agg, records = run_trials("valucb", entry, 0.2, 5, master_seed=42)
    assert len(records) == 5
    assert [r.trial for r in records] == list(range(5))
    for r in records:
        assert r.algorithm == "valucb" and r.case_id == "inline"
        assert r.seed == int(
            trial_seed(42, "inline", 0, r.trial).generate_state(1, np.uint64)[0]
        )
        assert r.terminated
    taus = [r.tau for r in records]
    assert agg.mean_tau == pytest.approx(statistics.mean(taus), rel=1e-12)
    assert agg.std_tau == pytest.approx(statistics.stdev(taus), rel=1e-12)
    assert agg.success_rate == sum(r.success for r in records) / 5
    assert agg.h_va == h_va(entry.ground_truth)
    assert agg.scale == scale(agg.h_va, 0.2)
    assert agg.n_trials == 5 and agg.delta == 0.2 and agg.master_seed == 42
    d = agg.to_dict()
    assert d["case"] == "inline" and d["mean_tau"] == agg.mean_tau


def test_run_trials_deterministic(inline_instance):
    entry = inline_entry(inline_instance)
    _, r1 = run_trials("valucb", entry, 0.2, 4, master_seed=9)
    _, r2 = run_trials("valucb", entry, 0.2, 4, master_seed=9)
    assert r1 == r2
    _, r3 = run_trials("valucb", entry, 0.2, 4, master_seed=10)
    assert [x.tau for x in r1] != [x.tau for x in r3]


def test_run_trials_parallel_matches_serial(inline_instance):
    entry = inline_entry(inline_instance)
    _, serial = run_trials("valucb", entry, 0.2, 4, master_seed=3)
    _, parallel = run_trials("valucb", entry, 0.2, 4, master_seed=3, parallel=2)
    assert serial == parallel


@pytest.mark.parametrize("algorithm", ALGORITHMS)
def test_run_trials_every_algorithm(inline_instance, algorithm):
    inst = inline_instance
    if algorithm == "valucb_subg":
        from dataclasses import replace

        inst = replace(inline_instance, subg_proxy=0.5)
    agg, records = run_trials(algorithm, inline_entry(inst), 0.2, 2, master_seed=1)
    assert agg.algorithm == algorithm
    assert all(r.terminated for r in records)
    assert agg.success_rate == 1.0
