# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled trial engines.

Statement-for-statement translation of :mod:`valucb._pyengine`, which
holds the reference semantics; keep the two in sync.  Random draws go
through numpy's bit-generator C interface with the same per-draw calls
the Generator methods make, so trajectories match the pure-Python
engine bit for bit (the build disables FP contraction for the same
reason).
"""

from libc.math cimport ceil, log, sqrt

from cpython.pycapsule cimport PyCapsule_GetPointer, PyCapsule_IsValid

import numpy as np

cimport numpy as cnp
from numpy.random cimport bitgen_t
from numpy.random.c_distributions cimport (
    random_beta,
    random_normal,
    random_standard_uniform,
)

cnp.import_array()

cdef const char* CAPSULE_NAME = "BitGenerator"


cdef bitgen_t* _bitgen(object rng) except NULL:
    capsule = rng.bit_generator.capsule
    if not PyCapsule_IsValid(capsule, CAPSULE_NAME):
        raise ValueError("rng must be a numpy Generator wrapping a BitGenerator")
    return <bitgen_t*> PyCapsule_GetPointer(capsule, CAPSULE_NAME)


cdef inline double _draw(bitgen_t* bg, signed char kind, double a, double b) noexcept nogil:
    if kind == 0:
        return 1.0 if random_standard_uniform(bg) < a else 0.0
    elif kind == 1:
        return random_beta(bg, a, b)
    else:
        return random_normal(bg, a, b)


cdef inline void _pull(
    bitgen_t* bg,
    signed char[::1] kinds,
    double[::1] pa,
    double[::1] pb,
    long long[::1] T,
    double[::1] mean,
    double[::1] m2,
    Py_ssize_t i,
) noexcept nogil:
    cdef double x = _draw(bg, kinds[i], pa[i], pb[i])
    cdef double d
    T[i] += 1
    d = x - mean[i]
    mean[i] += d / <double>T[i]
    m2[i] += d * (x - mean[i])


def valucb_trial(
    signed char[::1] kinds,
    double[::1] pa,
    double[::1] pb,
    double sigma_bar_sq,
    double eps_v,
    double delta,
    object rng,
    long long max_time_steps,
    double radius_scale,
    object true_means,
    object true_vars,
    bint uniform_sampling,
):
    """VA-LUCB / VA-Uniform trial; see _pyengine.valucb_trial."""
    cdef Py_ssize_t n = kinds.shape[0]
    cdef bitgen_t* bg = _bitgen(rng)

    T_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] T = T_arr
    cdef double[::1] mean = np.zeros(n, dtype=np.float64)
    cdef double[::1] m2 = np.zeros(n, dtype=np.float64)
    cdef double[::1] lmu = np.zeros(n, dtype=np.float64)
    cdef double[::1] umu = np.zeros(n, dtype=np.float64)
    cdef double[::1] lv = np.zeros(n, dtype=np.float64)
    cdef double[::1] uv = np.zeros(n, dtype=np.float64)
    cdef long long[::1] act = np.arange(n, dtype=np.int64)

    cdef bint check_cov = true_means is not None
    cdef double[::1] tm = true_means if check_cov else np.zeros(1, dtype=np.float64)
    cdef double[::1] tv = true_vars if check_cov else np.zeros(1, dtype=np.float64)
    cdef bint violated = 0

    cdef Py_ssize_t idx, i, jj, tmp_i
    cdef long long n_act = n, new_act, tau, t, i_star, best, leader, challenger
    cdef long long a, b
    cdef double lt, r, v, base, lstar, u1, u2
    cdef bint stop

    for i in range(n):
        _pull(bg, kinds, pa, pb, T, mean, m2, i)
        _pull(bg, kinds, pa, pb, T, mean, m2, i)
    tau = 2 * n

    base = log(2.0 * <double>n / delta)
    t = n

    while True:
        t += 1
        if t > max_time_steps:
            return (0, -1, tau, t - 1, T_arr, False, bool(violated))

        lt = base + 4.0 * log(<double>t)
        for idx in range(n_act):
            i = act[idx]
            r = radius_scale * sqrt(lt / (2.0 * <double>T[i]))
            v = m2[i] / (<double>T[i] - 1.0)
            lmu[i] = mean[i] - r
            umu[i] = mean[i] + r
            lv[i] = v - r
            uv[i] = v + r
            if check_cov and not (
                lmu[i] <= tm[i] <= umu[i] and lv[i] <= tv[i] <= uv[i]
            ):
                violated = 1

        # partition: drop newly infeasible arms, flag empirically feasible
        new_act = 0
        i_star = -1
        for idx in range(n_act):
            i = act[idx]
            if lv[i] > sigma_bar_sq:
                continue
            act[new_act] = i
            new_act += 1
            if uv[i] <= sigma_bar_sq + eps_v:
                if i_star < 0 or mean[i] > mean[i_star]:
                    i_star = i

        if i_star >= 0:
            stop = 1
            lstar = lmu[i_star]
            for idx in range(new_act):
                i = act[idx]
                if i != i_star and umu[i] >= lstar:
                    stop = 0
                    break
            if stop:
                best = -1
                for idx in range(new_act):
                    i = act[idx]
                    if best < 0 or mean[i] > mean[best]:
                        best = i
                return (1, best, tau, t, T_arr, True, bool(violated))
        elif new_act == 0:
            return (0, -1, tau, t, T_arr, True, bool(violated))

        n_act = new_act

        if uniform_sampling:
            if n_act == 1:
                _pull(bg, kinds, pa, pb, T, mean, m2, act[0])
                tau += 1
            else:
                u1 = random_standard_uniform(bg)
                a = <long long>(u1 * <double>n_act)
                if a >= n_act:
                    a = n_act - 1
                u2 = random_standard_uniform(bg)
                b = <long long>(u2 * <double>(n_act - 1))
                if b >= n_act - 1:
                    b = n_act - 2
                if b >= a:
                    b += 1
                i = act[a]
                jj = act[b]
                if jj < i:
                    tmp_i = i
                    i = jj
                    jj = tmp_i
                _pull(bg, kinds, pa, pb, T, mean, m2, i)
                _pull(bg, kinds, pa, pb, T, mean, m2, jj)
                tau += 2
        else:
            if n_act == 1:
                _pull(bg, kinds, pa, pb, T, mean, m2, act[0])
                tau += 1
            else:
                leader = -1
                for idx in range(n_act):
                    i = act[idx]
                    if leader < 0 or mean[i] > mean[leader]:
                        leader = i
                challenger = -1
                for idx in range(n_act):
                    i = act[idx]
                    if i == leader:
                        continue
                    if challenger < 0 or umu[i] > umu[challenger]:
                        challenger = i
                _pull(bg, kinds, pa, pb, T, mean, m2, leader)
                tau += 1
                if umu[challenger] >= lmu[leader]:
                    _pull(bg, kinds, pa, pb, T, mean, m2, challenger)
                    tau += 1


def valucb_subg_trial(
    signed char[::1] kinds,
    double[::1] pa,
    double[::1] pb,
    double sigma_bar_sq,
    double eps_v,
    double delta,
    object rng,
    long long max_time_steps,
    double sigma,
    double k,
    double c,
    long long t0,
):
    """Sub-Gaussian VA-LUCB trial; see _pyengine.valucb_subg_trial."""
    cdef Py_ssize_t n = kinds.shape[0]
    cdef bitgen_t* bg = _bitgen(rng)

    T_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] T = T_arr
    cdef double[::1] mean = np.zeros(n, dtype=np.float64)
    cdef double[::1] m2 = np.zeros(n, dtype=np.float64)
    cdef double[::1] lmu = np.zeros(n, dtype=np.float64)
    cdef double[::1] umu = np.zeros(n, dtype=np.float64)
    cdef double[::1] lv = np.zeros(n, dtype=np.float64)
    cdef double[::1] uv = np.zeros(n, dtype=np.float64)
    cdef long long[::1] act = np.arange(n, dtype=np.int64)

    cdef Py_ssize_t idx, i
    cdef long long n_act = n, new_act, tau, t, i_star, best, leader, challenger
    cdef long long step, threshold, p2
    cdef double lt, am, av, v, base, lstar, s2, cm, cv, force
    cdef bint stop

    for step in range(t0):
        for i in range(n):
            _pull(bg, kinds, pa, pb, T, mean, m2, i)
    tau = n * t0

    base = log(k * <double>n / delta)
    s2 = sigma * sigma
    cm = 2.0 * s2
    cv = 2.0 * c * s2 * s2
    force = 128.0 / c
    t = t0

    while True:
        t += 1
        if t > max_time_steps:
            return (0, -1, tau, t - 1, T_arr, False, False)

        lt = base + 4.0 * log(<double>t)
        for idx in range(n_act):
            i = act[idx]
            am = sqrt(cm * lt / <double>T[i])
            av = sqrt(cv * lt / <double>T[i])
            v = m2[i] / (<double>T[i] - 1.0)
            lmu[i] = mean[i] - am
            umu[i] = mean[i] + am
            lv[i] = v - av
            uv[i] = v + av

        new_act = 0
        i_star = -1
        for idx in range(n_act):
            i = act[idx]
            if lv[i] > sigma_bar_sq:
                continue
            act[new_act] = i
            new_act += 1
            if uv[i] <= sigma_bar_sq + eps_v:
                if i_star < 0 or mean[i] > mean[i_star]:
                    i_star = i

        if i_star >= 0:
            stop = 1
            lstar = lmu[i_star]
            for idx in range(new_act):
                i = act[idx]
                if i != i_star and umu[i] >= lstar:
                    stop = 0
                    break
            if stop:
                best = -1
                for idx in range(new_act):
                    i = act[idx]
                    if best < 0 or mean[i] > mean[best]:
                        best = i
                return (1, best, tau, t, T_arr, True, False)
        elif new_act == 0:
            return (0, -1, tau, t, T_arr, True, False)

        n_act = new_act

        if n_act == 1:
            leader = act[0]
            p2 = -1
            _pull(bg, kinds, pa, pb, T, mean, m2, leader)
            tau += 1
        else:
            leader = -1
            for idx in range(n_act):
                i = act[idx]
                if leader < 0 or mean[i] > mean[leader]:
                    leader = i
            challenger = -1
            for idx in range(n_act):
                i = act[idx]
                if i == leader:
                    continue
                if challenger < 0 or umu[i] > umu[challenger]:
                    challenger = i
            p2 = -1
            _pull(bg, kinds, pa, pb, T, mean, m2, leader)
            tau += 1
            if umu[challenger] >= lmu[leader]:
                _pull(bg, kinds, pa, pb, T, mean, m2, challenger)
                tau += 1
                p2 = challenger

        threshold = <long long>ceil(force * (base + 4.0 * log(<double>(t + 1))))
        for idx in range(n_act):
            i = act[idx]
            if i != leader and i != p2 and T[i] < threshold:
                _pull(bg, kinds, pa, pb, T, mean, m2, i)
                tau += 1


def riskaverse_trial(
    signed char[::1] kinds,
    double[::1] pa,
    double[::1] pb,
    double sigma_bar_sq,
    double delta,
    object rng,
    double eps_mu,
    double eps_v,
    double budget,
):
    """Oracle-assisted UCB baseline trial; see _pyengine.riskaverse_trial."""
    cdef Py_ssize_t n = kinds.shape[0]
    cdef bitgen_t* bg = _bitgen(rng)

    T_arr = np.zeros(n, dtype=np.int64)
    cdef long long[::1] T = T_arr
    cdef double[::1] mean = np.zeros(n, dtype=np.float64)
    cdef double[::1] m2 = np.zeros(n, dtype=np.float64)
    cdef double[::1] var = np.zeros(n, dtype=np.float64)
    cdef double[::1] f_mu = np.zeros(n, dtype=np.float64)
    cdef double[::1] f_v = np.zeros(n, dtype=np.float64)

    cdef Py_ssize_t i
    cdef long long t, sel
    cdef double lt, u, best

    for i in range(n):
        _pull(bg, kinds, pa, pb, T, mean, m2, i)
        _pull(bg, kinds, pa, pb, T, mean, m2, i)
    t = 2 * n

    lt = log(6.0 * budget * <double>n / delta)
    for i in range(n):
        var[i] = m2[i] / (<double>T[i] - 1.0)
        f_mu[i] = sqrt(lt / (2.0 * <double>T[i]))
        f_v[i] = sqrt(2.0 * lt / <double>T[i])

    while True:
        sel = -1
        best = 0.0
        for i in range(n):
            if var[i] - f_v[i] <= sigma_bar_sq:
                u = mean[i] + f_mu[i]
                if sel < 0 or u > best:
                    sel = i
                    best = u
        if sel < 0:
            return (0, -1, t, t, T_arr, False, False)

        _pull(bg, kinds, pa, pb, T, mean, m2, sel)
        t += 1
        var[sel] = m2[sel] / (<double>T[sel] - 1.0)
        f_mu[sel] = sqrt(lt / (2.0 * <double>T[sel]))
        f_v[sel] = sqrt(2.0 * lt / <double>T[sel])

        if (
            f_mu[sel] <= eps_mu / 2.0
            and var[sel] + f_v[sel] - eps_v <= sigma_bar_sq
        ) or <double>t >= budget:
            return (1, sel, t, t, T_arr, True, False)
