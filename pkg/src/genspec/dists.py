"""Probability primitives: Cauchy and positive-stable samplers, discrete
stable sampling/pmf/quantile, and binomial thinning.

The discrete stable law with scale delta > 0 and exponent alpha in (0, 1] is
the nonnegative-integer law with probability generating function

    E[x^W] = exp{-delta (1 - x)^alpha},

which is Poisson(delta) at alpha = 1 and heavy-tailed (P(W >= k) decaying like
k^{-alpha}) for alpha < 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# numpy's Poisson sampler rejects means this large; switch to a normal
# approximation whose absolute error is far below any statistic we compute
_POISSON_NORMAL_CUTOFF = 1e15
_INT64_MAX = np.iinfo(np.int64).max


class TailCapError(RuntimeError):
    """Requested tail tolerance unreachable within the atom cap."""


@dataclass(frozen=True)
class DiscreteStableParams:
    """Scale/exponent pair (delta, alpha) of a discrete stable law."""

    delta: float
    alpha: float

    def __post_init__(self) -> None:
        if not (self.delta > 0):
            raise ValueError(f"delta must be positive, got {self.delta}")
        if not (0 < self.alpha <= 1):
            raise ValueError(f"alpha must lie in (0, 1], got {self.alpha}")


@dataclass(frozen=True)
class Pmf:
    """Probabilities on 0..k_max plus the mass beyond k_max."""

    probs: np.ndarray
    tail_mass: float

    def __post_init__(self) -> None:
        probs = np.ascontiguousarray(self.probs, dtype=np.float64)
        object.__setattr__(self, "probs", probs)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("probs must be a nonempty 1-D array")
        if np.any(probs < 0):
            raise ValueError("probs must be nonnegative")
        if self.tail_mass < 0:
            raise ValueError("tail_mass must be nonnegative")
        total = float(probs.sum()) + self.tail_mass
        if not (1 - 1e-9 <= total <= 1 + 1e-9):
            raise ValueError(f"probs and tail_mass must sum to 1, got {total}")

    @property
    def k_max(self) -> int:
        return self.probs.size - 1

    def cdf(self) -> np.ndarray:
        return np.cumsum(self.probs)

    def quantile(self, q: float) -> int:
        """Smallest k with CDF(k) >= q; requires q reachable within k_max."""
        if not (0 <= q <= 1):
            raise ValueError(f"q must lie in [0, 1], got {q}")
        cdf = self.cdf()
        k = int(np.searchsorted(cdf, q, side="left"))
        if k >= cdf.size:
            raise TailCapError(f"quantile {q} lies beyond k_max={self.k_max}")
        return k

    def median(self) -> int:
        return self.quantile(0.5)


def sample_cauchy(delta: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Cauchy draws with characteristic function exp(-delta |u|)."""
    if not (delta > 0):
        raise ValueError(f"delta must be positive, got {delta}")
    return delta * rng.standard_cauchy(size)


def sample_positive_stable(alpha: float, size: int, rng: np.random.Generator) -> np.ndarray:
    """Positive alpha-stable draws with Laplace transform exp(-s^alpha).

    Kanter's representation: with U uniform on (0, pi) and E standard
    exponential, independent,

        S = sin(alpha U) * (sin((1-alpha) U) / E)^((1-alpha)/alpha)
            / sin(U)^(1/alpha).

    alpha = 1 degenerates to the point mass at 1.
    """
    if not (0 < alpha <= 1):
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    if alpha == 1:
        return np.ones(size)
    # open interval: u = 0 or pi would hit sin(u) = 0
    u = rng.uniform(np.nextafter(0.0, 1.0), np.pi, size=size)
    e = rng.standard_exponential(size)
    frac = (1 - alpha) / alpha
    return np.sin(alpha * u) * (np.sin((1 - alpha) * u) / e) ** frac / np.sin(u) ** (1 / alpha)


def sample_discrete_stable(
    params: DiscreteStableParams, size: int, rng: np.random.Generator
) -> np.ndarray:
    """Discrete stable draws with pgf exp{-delta (1 - x)^alpha}.

    Mixture construction: W | S ~ Poisson(delta^(1/alpha) S) with S positive
    alpha-stable, so E[x^W] = E exp(-delta^(1/alpha) S (1-x))
    = exp(-delta (1-x)^alpha).
    """
    delta, alpha = params.delta, params.alpha
    if alpha == 1:
        return rng.poisson(delta, size=size).astype(np.int64)
    s = sample_positive_stable(alpha, size, rng)
    lam = delta ** (1 / alpha) * s
    out = np.zeros(size, dtype=np.int64)
    small = lam < _POISSON_NORMAL_CUTOFF
    out[small] = rng.poisson(lam[small])
    big = ~small
    if np.any(big):
        # astronomically rare heavy-tail draws; Poisson ~ Normal(lam, lam)
        approx = lam[big] + np.sqrt(lam[big]) * rng.standard_normal(big.sum())
        out[big] = np.clip(np.rint(approx), 0, _INT64_MAX).astype(np.int64)
    return out


def binomial_thin(count, p: float, rng: np.random.Generator):
    """Binomial thinning p o count: sum of `count` Bernoulli(p) draws.

    Accepts a scalar count or an array of counts (thinned independently).
    """
    if not (0 <= p <= 1):
        raise ValueError(f"p must lie in [0, 1], got {p}")
    counts = np.asarray(count)
    if np.any(counts < 0):
        raise ValueError("count must be nonnegative")
    drawn = rng.binomial(counts, p)
    if np.isscalar(count) or np.ndim(count) == 0:
        return int(drawn)
    return drawn


def ds_pmf_atoms(delta: float, alpha: float, k_max: int) -> np.ndarray:
    """Exact discrete stable probabilities P(W = k) for k = 0..k_max.

    The law is compound Poisson: with Sibuya(alpha) summand pgf
    1 - (1-x)^alpha, exp{-delta(1-x)^alpha} = exp{-delta(1 - g_sib(x))}.
    The compound-Poisson recursion

        p_0 = e^{-delta},  p_k = (delta / k) * sum_{j=1..k} j q_j p_{k-j}

    with Sibuya weights q_1 = alpha, q_j = q_{j-1} (j-1-alpha)/j has only
    nonnegative terms, so every atom is exact to machine rounding. alpha = 1
    collapses to the Poisson recursion (q_j = 0 for j >= 2).
    """
    if not (delta > 0) or not (0 < alpha <= 1):
        raise ValueError("need delta > 0 and alpha in (0, 1]")
    if k_max < 0:
        raise ValueError("k_max must be nonnegative")
    k = k_max + 1
    q = np.zeros(k)
    if k > 1:
        q[1] = alpha
        for j in range(2, k):
            q[j] = q[j - 1] * (j - 1 - alpha) / j
    w = q * np.arange(k)  # w_j = j * q_j
    p = np.zeros(k)
    p[0] = np.exp(-delta)
    for m in range(1, k):
        p[m] = (delta / m) * np.dot(w[1 : m + 1], p[m - 1 :: -1])
    return p


def discrete_stable_pmf(
    params: DiscreteStableParams,
    tail_tolerance: float,
    hard_cap: int = 2**16,
) -> Pmf:
    """Pmf of the discrete stable law out to tail mass <= tail_tolerance.

    Atoms come from the exact compound-Poisson recursion (`ds_pmf_atoms`);
    k_max grows geometrically until the tail bound is met. Raises
    TailCapError when alpha is too small for the requested tolerance to be
    reachable within `hard_cap` atoms (the tail decays like k^{-alpha}).
    """
    if not (0 < tail_tolerance <= 1e-3):
        raise ValueError(f"tail_tolerance must lie in (0, 1e-3], got {tail_tolerance}")
    if hard_cap < 1:
        raise ValueError("hard_cap must be positive")
    k_max = min(256, hard_cap)
    while True:
        probs = ds_pmf_atoms(params.delta, params.alpha, k_max)
        tail = 1.0 - float(probs.sum())
        if tail <= tail_tolerance:
            # trim to the smallest k_max that still meets the tolerance
            cdf = np.cumsum(probs)
            cut = int(np.searchsorted(cdf, 1.0 - tail_tolerance, side="left"))
            probs = probs[: cut + 1]
            return Pmf(probs=probs, tail_mass=max(1.0 - float(probs.sum()), 0.0))
        if k_max >= hard_cap:
            raise TailCapError(
                f"tail mass {tail:.3e} > {tail_tolerance:.3e} at the cap of "
                f"{hard_cap} atoms (alpha={params.alpha} too small for this tolerance)"
            )
        k_max = min(2 * k_max, hard_cap)
