"""numpy implementation of the Monte Carlo trial loops.

Used when the compiled extension is unavailable or when ``SECNET_BACKEND``
is set to ``python``. Trials are processed as arrays; at loop iteration
``k`` every still-undecided trial consumes draws ``2k + 1`` and ``2k + 2``
of its own stream, exactly as the compiled loop does.
"""

from __future__ import annotations

import numpy as np

from .rng import TAG_EAV_INTERFERENCE, TAG_EAVESDROPPER, keys_from_hash, uniforms_at


def _exp_at(keys: np.ndarray, index: int) -> np.ndarray:
    return -np.log(uniforms_at(keys, index))


def _path_gain(r2, half_alpha):
    # same special case as the compiled kernel, so both round identically
    if half_alpha == 2.0:
        return 1.0 / (r2 * r2)
    return np.power(r2, -half_alpha)


def _hops_succeed(keys, lam, half_alpha, signal_scale, mu):
    """Boolean success mask for one hop per key.

    ``signal_scale`` and ``mu`` are scalars or arrays aligned with ``keys``.
    """
    n = keys.shape[0]
    signal_scale = np.broadcast_to(np.asarray(signal_scale, dtype=float), (n,))
    mu = np.broadcast_to(np.asarray(mu, dtype=float), (n,))
    threshold = _exp_at(keys, 0) * signal_scale
    result = np.zeros(n, dtype=bool)
    active = np.arange(n)
    gamma = np.zeros(n)
    interference = np.zeros(n)
    i = 1
    while active.size:
        k = keys[active]
        gamma[active] += _exp_at(k, i)
        done = gamma[active] > mu[active]
        result[active[done]] = True
        active = active[~done]
        k = k[~done]
        if not active.size:
            break
        r2 = gamma[active] / (lam * np.pi)
        interference[active] += _exp_at(k, i + 1) * _path_gain(r2, half_alpha)
        i += 2
        failed = interference[active] >= threshold[active]
        active = active[~failed]
    return result


def count_hop_successes(seed_hash, start, stop, hops, lam, alpha, d, beta, mu):
    trials = np.arange(start, stop, dtype=np.uint64)
    alive = np.ones(trials.size, dtype=bool)
    signal_scale = d ** -alpha / beta
    for k in range(hops):
        idx = np.flatnonzero(alive)
        if not idx.size:
            break
        keys = keys_from_hash(seed_hash, trials[idx], k)
        alive[idx] = _hops_succeed(keys, lam, 0.5 * alpha, signal_scale, mu)
    return int(alive.sum())


def count_eav_outages(seed_hash, start, stop, lam_int, alpha, lam_eav, beta_eav, tol, fixed_radius):
    trials = np.arange(start, stop, dtype=np.uint64)
    r2 = _exp_at(keys_from_hash(seed_hash, trials, TAG_EAVESDROPPER), 0) / (lam_eav * np.pi)
    r = np.sqrt(r2)
    if fixed_radius > 0:
        radius = np.full(trials.size, float(fixed_radius))
    else:
        far = tol * (alpha - 2.0) / (2.0 * np.pi * lam_int)
        radius = np.maximum(np.power(far * np.power(r, -alpha), 1.0 / (2.0 - alpha)), 10.0 * r)
    scale = _path_gain(r2, 0.5 * alpha) / beta_eav
    keys = keys_from_hash(seed_hash, trials, TAG_EAV_INTERFERENCE)
    ok = _hops_succeed(keys, lam_int, 0.5 * alpha, scale, lam_int * np.pi * radius * radius)
    return int((~ok).sum())
