"""Exact path generation for every model family.

All generators are deterministic functions of (model, n, seed); replications
should vary the seed. Count families return nonnegative int64 arrays.
"""

from __future__ import annotations

import numpy as np
from scipy import signal

from ._util import stream
from .dists import (
    DiscreteStableParams,
    sample_cauchy,
    sample_discrete_stable,
)
from .models import ModelSpec, inar_marginal, ma_gen_psi


def _burn_in(model: ModelSpec) -> int:
    # geometric mixing makes the initialization error negligible well before
    # this for |a|, p <= 0.95
    return 1000 + 20 * model.lmax


def _innovations(model: ModelSpec, count: int, rng: np.random.Generator) -> np.ndarray:
    fam = model.family
    if fam in ("cauchy_ma1", "cauchy_ar1"):
        return sample_cauchy(model.theta[1], count, rng)
    if fam == "cauchy_ma_gen":
        return sample_cauchy(model.theta[-1], count, rng)
    if fam in ("gauss_ma1", "gauss_ar1"):
        return rng.normal(0.0, np.sqrt(model.theta[1]), size=count)
    raise AssertionError(fam)


def _inar_recursion(
    z0: int, eps: np.ndarray, p: float, rng: np.random.Generator
) -> np.ndarray:
    out = np.empty(eps.size, dtype=np.int64)
    z = int(z0)
    for t in range(eps.size):
        z = int(rng.binomial(z, p)) + int(eps[t]) if p > 0 else int(eps[t])
        out[t] = z
    return out


def simulate_path(model: ModelSpec, n: int, seed: int) -> np.ndarray:
    """Length-n strictly stationary draw from the model, deterministic in seed."""
    if n < 8:
        raise ValueError(f"n must be at least 8, got {n}")
    rng = stream(seed)
    fam = model.family
    th = model.theta

    if fam in ("cauchy_ma1", "gauss_ma1"):
        a = th[0]
        eps = _innovations(model, n + 1, rng)
        return eps[1:] - eps[:-1] / a

    if fam == "cauchy_ma_gen":
        psi = ma_gen_psi(model)  # ordered lag -d2..d1
        eps = _innovations(model, n + model.d1 + model.d2, rng)
        # Z_t = sum_k psi_k eps_{t-k}: correlate against the lag-reversed filter
        return np.correlate(eps, psi[::-1], mode="valid")

    if fam in ("cauchy_ar1", "gauss_ar1"):
        a = th[0]
        if abs(a) < 1:
            burn = _burn_in(model)
            eps = _innovations(model, n + burn, rng)
            z = signal.lfilter([1.0], [1.0, -a], eps)
            return z[burn:]
        # non-causal stationary solution: Z_t = -sum_{j>=1} a^{-j} eps_{t+j}
        J = int(np.ceil(np.log(1e-12) / np.log(1 / abs(a))))
        eps = _innovations(model, n + J, rng)
        w = np.concatenate([[0.0], -(float(a) ** -np.arange(1, J + 1))])
        return np.correlate(eps, w, mode="valid")

    if fam == "inma1":
        delta, alpha, p = th
        eps = sample_discrete_stable(DiscreteStableParams(delta, alpha), n + 1, rng)
        thinned = rng.binomial(eps[:-1], p) if p > 0 else np.zeros(n, dtype=np.int64)
        return (eps[1:] + thinned).astype(np.int64)

    if fam == "inar1":
        delta, alpha, p = th
        if p == 0:
            return sample_discrete_stable(DiscreteStableParams(delta, alpha), n, rng)
        burn = _burn_in(model)
        d_marg, a_marg = inar_marginal(delta, alpha, p)
        z0 = int(sample_discrete_stable(DiscreteStableParams(d_marg, a_marg), 1, rng)[0])
        eps = sample_discrete_stable(DiscreteStableParams(delta, alpha), n + burn, rng)
        return _inar_recursion(z0, eps, p, rng)[burn:]

    raise AssertionError(fam)


def simulate_inar_changepoint(
    theta_first: tuple,
    theta_second: tuple,
    n: int,
    seed: int,
    change_at: int | None = None,
) -> np.ndarray:
    """INAR(1) path whose parameters switch at t = change_at (default n//2).

    The chain continues through the break: the first post-break value thins
    the last pre-break one, with no re-initialization.
    """
    if n < 8:
        raise ValueError(f"n must be at least 8, got {n}")
    change_at = n // 2 if change_at is None else int(change_at)
    if not (0 < change_at < n):
        raise ValueError(f"change_at must lie strictly inside 1..n-1, got {change_at}")
    m1 = ModelSpec("inar1", theta_first)
    m2 = ModelSpec("inar1", theta_second)
    rng = stream(seed)
    d1, a1, p1 = m1.theta
    d2, a2, p2 = m2.theta
    burn = _burn_in(m1)
    d_marg, a_marg = inar_marginal(d1, a1, p1)
    z0 = int(sample_discrete_stable(DiscreteStableParams(d_marg, a_marg), 1, rng)[0])
    eps1 = sample_discrete_stable(DiscreteStableParams(d1, a1), burn + change_at, rng)
    first = _inar_recursion(z0, eps1, p1, rng)
    eps2 = sample_discrete_stable(DiscreteStableParams(d2, a2), n - change_at, rng)
    second = _inar_recursion(int(first[-1]), eps2, p2, rng)
    return np.concatenate([first[burn:], second])
