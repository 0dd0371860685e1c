"""Pure-Python trial engines.

Reference implementation of the four trial loops, built on the step
primitives in :mod:`valucb.engine`.  The compiled kernel in
``_engine.pyx`` is a statement-for-statement translation of these loops;
every floating-point expression here is written in the exact shape the
kernel uses so that both backends take identical branches and return
identical results.

All engines return the raw tuple

    (flag, arm_or_minus_1, tau, time_steps, pulls, terminated, coverage_violated)
"""
from __future__ import annotations

from math import ceil, log, sqrt

from .engine import check_stop, partition_arms, potential_set, select_arms
from .stats import ConfidenceBounds


def _draw(rng, kind: int, a: float, b: float) -> float:
    if kind == 0:
        return 1.0 if rng.random() < a else 0.0
    if kind == 1:
        return float(rng.beta(a, b))
    return float(rng.normal(a, b))


def valucb_trial(
    kinds,
    pa,
    pb,
    sigma_bar_sq: float,
    eps_v: float,
    delta: float,
    rng,
    max_time_steps: int,
    radius_scale: float,
    true_means,
    true_vars,
    uniform_sampling: bool,
    trace=None,
):
    """One trial of VA-LUCB (or VA-Uniform when ``uniform_sampling``).

    ``true_means``/``true_vars`` enable per-step coverage checking;
    ``trace``, if a list, receives one record per decision step.
    """
    kinds = [int(x) for x in kinds]
    pa = [float(x) for x in pa]
    pb = [float(x) for x in pb]
    n = len(kinds)
    check_cov = true_means is not None
    if check_cov:
        true_means = [float(x) for x in true_means]
        true_vars = [float(x) for x in true_vars]

    pulls = [0] * n
    mean = [0.0] * n
    m2 = [0.0] * n

    def pull(i: int) -> None:
        x = _draw(rng, kinds[i], pa[i], pb[i])
        pulls[i] += 1
        d = x - mean[i]
        mean[i] += d / pulls[i]
        m2[i] += d * (x - mean[i])

    for i in range(n):
        pull(i)
        pull(i)
    tau = 2 * n

    base = log(2.0 * n / delta)
    active = list(range(n))
    violated = False
    t = n

    while True:
        t += 1
        if t > max_time_steps:
            return (0, -1, tau, t - 1, tuple(pulls), False, violated)

        lt = base + 4.0 * log(float(t))
        bounds = {}
        for i in active:
            r = radius_scale * sqrt(lt / (2.0 * pulls[i]))
            v = m2[i] / (pulls[i] - 1.0)
            b = ConfidenceBounds(mean[i] - r, mean[i] + r, v - r, v + r)
            bounds[i] = b
            if check_cov and not (
                b.l_mu <= true_means[i] <= b.u_mu and b.l_var <= true_vars[i] <= b.u_var
            ):
                violated = True

        part = partition_arms(bounds, sigma_bar_sq, eps_v)
        sample_means = {i: mean[i] for i in active}
        i_t_star = None
        if part.empirically_feasible:
            i_t_star = _argmax_list(sorted(part.empirically_feasible), mean)
        pot = potential_set(bounds, part, i_t_star)
        verdict = check_stop(part, pot, sample_means)

        if trace is not None:
            trace.append(
                {
                    "t": t,
                    "active": tuple(active),
                    "partition": part,
                    "i_t_star": i_t_star,
                    "potential": pot,
                    "bounds": bounds,
                    "verdict": verdict,
                    "pulled": (),
                }
            )

        if verdict is not None:
            flag, arm = verdict
            return (flag, -1 if arm is None else arm, tau, t, tuple(pulls), True, violated)

        active = sorted(part.possibly_feasible)
        if uniform_sampling:
            chosen = _uniform_pair(rng, active)
        else:
            chosen = select_arms(part, bounds, sample_means)
        for i in chosen:
            pull(i)
            tau += 1
        if trace is not None:
            trace[-1]["pulled"] = tuple(chosen)


def _uniform_pair(rng, active: list[int]) -> tuple[int, ...]:
    """Two distinct arms uniformly at random (one if only one remains).

    Draws two uniform doubles and maps them to an ordered pair without
    replacement; pulls happen in index order.  This construction is
    reproducible across both engine backends.
    """
    m = len(active)
    if m == 1:
        return (active[0],)
    u1 = rng.random()
    a = int(u1 * m)
    if a >= m:
        a = m - 1
    u2 = rng.random()
    b = int(u2 * (m - 1))
    if b >= m - 1:
        b = m - 2
    if b >= a:
        b += 1
    i, j = active[a], active[b]
    return (i, j) if i < j else (j, i)


def _argmax_list(indices, values: list[float]) -> int:
    best = indices[0]
    best_val = values[best]
    for i in indices[1:]:
        if values[i] > best_val:
            best, best_val = i, values[i]
    return best


def valucb_subg_trial(
    kinds,
    pa,
    pb,
    sigma_bar_sq: float,
    eps_v: float,
    delta: float,
    rng,
    max_time_steps: int,
    sigma: float,
    k: float,
    c: float,
    t0: int,
    trace=None,
):
    """One trial of the sub-Gaussian VA-LUCB variant.

    Warm-up samples every arm once per time step for ``t0`` steps.  The
    loop then mirrors VA-LUCB with sub-Gaussian mean/variance radii plus
    forced sampling: any possibly-feasible arm not pulled this step whose
    count is below ceil((128/c) ln(k N (t+1)^4 / delta)) is pulled once.
    """
    kinds = [int(x) for x in kinds]
    pa = [float(x) for x in pa]
    pb = [float(x) for x in pb]
    n = len(kinds)

    pulls = [0] * n
    mean = [0.0] * n
    m2 = [0.0] * n

    def pull(i: int) -> None:
        x = _draw(rng, kinds[i], pa[i], pb[i])
        pulls[i] += 1
        d = x - mean[i]
        mean[i] += d / pulls[i]
        m2[i] += d * (x - mean[i])

    for _ in range(t0):
        for i in range(n):
            pull(i)
    tau = n * t0

    base = log(k * n / delta)
    s2 = sigma * sigma
    cm = 2.0 * s2
    cv = 2.0 * c * s2 * s2
    force = 128.0 / c
    active = list(range(n))
    t = t0

    while True:
        t += 1
        if t > max_time_steps:
            return (0, -1, tau, t - 1, tuple(pulls), False, False)

        lt = base + 4.0 * log(float(t))
        bounds = {}
        for i in active:
            am = sqrt(cm * lt / pulls[i])
            av = sqrt(cv * lt / pulls[i])
            v = m2[i] / (pulls[i] - 1.0)
            bounds[i] = ConfidenceBounds(mean[i] - am, mean[i] + am, v - av, v + av)

        part = partition_arms(bounds, sigma_bar_sq, eps_v)
        sample_means = {i: mean[i] for i in active}
        i_t_star = None
        if part.empirically_feasible:
            i_t_star = _argmax_list(sorted(part.empirically_feasible), mean)
        pot = potential_set(bounds, part, i_t_star)
        verdict = check_stop(part, pot, sample_means)

        if trace is not None:
            trace.append(
                {
                    "t": t,
                    "active": tuple(active),
                    "partition": part,
                    "i_t_star": i_t_star,
                    "potential": pot,
                    "bounds": bounds,
                    "verdict": verdict,
                    "pulled": (),
                }
            )

        if verdict is not None:
            flag, arm = verdict
            return (flag, -1 if arm is None else arm, tau, t, tuple(pulls), True, False)

        active = sorted(part.possibly_feasible)
        chosen = select_arms(part, bounds, sample_means)
        for i in chosen:
            pull(i)
            tau += 1

        threshold = ceil(force * (base + 4.0 * log(float(t + 1))))
        forced = []
        for i in active:
            if i not in chosen and pulls[i] < threshold:
                pull(i)
                tau += 1
                forced.append(i)
        if trace is not None:
            trace[-1]["pulled"] = tuple(chosen) + tuple(forced)


def riskaverse_trial(
    kinds,
    pa,
    pb,
    sigma_bar_sq: float,
    delta: float,
    rng,
    eps_mu: float,
    eps_v: float,
    budget: float,
):
    """One trial of the oracle-assisted UCB baseline.

    Pulls each arm twice, then repeatedly pulls the candidate (variance
    LCB at most the threshold) with the highest mean UCB.  Radii depend
    only on the arm's pull count, via the fixed log term ln(6 H N / delta).
    The run accepts the selected arm once its mean radius is at most
    eps_mu / 2 and its variance UCB minus eps_v clears the threshold, or
    gives up and returns it anyway when the round counter reaches the
    budget H.  An empty candidate set aborts the trial as a failure.
    """
    kinds = [int(x) for x in kinds]
    pa = [float(x) for x in pa]
    pb = [float(x) for x in pb]
    n = len(kinds)

    pulls = [0] * n
    mean = [0.0] * n
    m2 = [0.0] * n

    def pull(i: int) -> None:
        x = _draw(rng, kinds[i], pa[i], pb[i])
        pulls[i] += 1
        d = x - mean[i]
        mean[i] += d / pulls[i]
        m2[i] += d * (x - mean[i])

    for i in range(n):
        pull(i)
        pull(i)
    t = 2 * n

    lt = log(6.0 * budget * n / delta)
    var = [0.0] * n
    f_mu = [0.0] * n
    f_v = [0.0] * n
    for i in range(n):
        var[i] = m2[i] / (pulls[i] - 1.0)
        f_mu[i] = sqrt(lt / (2.0 * pulls[i]))
        f_v[i] = sqrt(2.0 * lt / pulls[i])

    while True:
        sel = -1
        best = 0.0
        for i in range(n):
            if var[i] - f_v[i] <= sigma_bar_sq:
                u = mean[i] + f_mu[i]
                if sel < 0 or u > best:
                    sel, best = i, u
        if sel < 0:
            return (0, -1, t, t, tuple(pulls), False, False)

        pull(sel)
        t += 1
        var[sel] = m2[sel] / (pulls[sel] - 1.0)
        f_mu[sel] = sqrt(lt / (2.0 * pulls[sel]))
        f_v[sel] = sqrt(2.0 * lt / pulls[sel])

        if (f_mu[sel] <= eps_mu / 2.0 and var[sel] + f_v[sel] - eps_v <= sigma_bar_sq) or t >= budget:
            return (1, sel, t, t, tuple(pulls), True, False)
