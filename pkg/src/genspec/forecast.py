"""Median forecasting for stationary count models and tail diagnostics.

The one-step predictor is the conditional median of the count transition:
binomial survivors of the previous count plus an independent discrete
stable innovation. The conditional mean is infinite whenever alpha < 1,
so the median is the natural point forecast; it is read off the exact
transition pmf rather than simulated.
"""

import numpy as np
from scipy.stats import binom

from .dists import DiscreteStableParams, TailCapError, discrete_stable_pmf, ds_pmf_atoms

# margin by which the cumulative transition mass must clear one half
# before the median is read off; the atom cap matches the recursion's
# practical range (it costs O(k_max^2))
_MEDIAN_MARGIN = 1e-9
_ATOM_CAP = 2**16


def _check_count(value, name: str) -> int:
    if value < 0 or int(value) != value:
        raise ValueError(f"{name} must be a nonnegative integer, got {value}")
    return int(value)


def _check_prob(p: float) -> float:
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    return float(p)


def _count_series(series) -> np.ndarray:
    z = np.asarray(series, dtype=np.float64)
    if z.ndim != 1 or z.size == 0:
        raise ValueError("series must be a nonempty 1-D array")
    if np.any(z < 0) or np.any(z != np.rint(z)):
        raise ValueError("count series must hold nonnegative integers")
    return z.astype(np.int64)


def _thinning_pmf(z_prev: int, p: float) -> np.ndarray:
    return binom.pmf(np.arange(z_prev + 1), z_prev, p)


class _MedianEngine:
    """Medians of thinning + innovation, growing the support on demand.

    Innovation atoms from the exact recursion are trustworthy everywhere,
    but convolved atoms past the innovation cutoff miss terms, so only the
    head of the convolution up to that cutoff is used. The cutoff doubles
    until the head's cumulative mass provably crosses one half; the median
    read there is exact, with no requirement that the (possibly very heavy)
    tail be summable to any tolerance.
    """

    def __init__(self, delta: float, alpha: float, p: float):
        DiscreteStableParams(delta, alpha)
        self._delta = delta
        self._alpha = alpha
        self._p = _check_prob(p)
        self._innov = ds_pmf_atoms(delta, alpha, 256)

    def median(self, z_prev: int) -> int:
        while True:
            cutoff = self._innov.size - 1
            if z_prev > 0 and self._p > 0.0:
                pmf = np.convolve(_thinning_pmf(z_prev, self._p), self._innov)
            else:
                pmf = self._innov
            head = np.cumsum(pmf[: cutoff + 1])
            if head[-1] >= 0.5 + _MEDIAN_MARGIN:
                return int(np.searchsorted(head, 0.5, side="left"))
            if self._innov.size >= _ATOM_CAP:
                raise TailCapError(
                    f"conditional median not reached within {_ATOM_CAP} atoms"
                )
            k_max = min(2 * self._innov.size, _ATOM_CAP) - 1
            self._innov = ds_pmf_atoms(self._delta, self._alpha, k_max)


def transition_pmf(
    z_prev,
    p: float,
    delta: float,
    alpha: float,
    tail_tolerance: float = 1e-9,
    hard_cap: int = _ATOM_CAP,
) -> np.ndarray:
    """Pmf of the next count given the previous one, to near-total mass.

    Exact atoms on 0..k with total mass short of one by at most
    tail_tolerance. Raises TailCapError when the innovation tail is too
    heavy for the tolerance to be reachable within hard_cap atoms (alpha
    well below 1); the median predictor does not need near-total mass and
    stays available in that regime.
    """
    z_prev = _check_count(z_prev, "z_prev")
    p = _check_prob(p)
    params = DiscreteStableParams(delta, alpha)
    innov = discrete_stable_pmf(params, tail_tolerance, hard_cap=hard_cap).probs
    if z_prev == 0 or p == 0.0:
        return innov
    return np.convolve(_thinning_pmf(z_prev, p), innov)


def median_predict_inar(z_prev, p: float, delta: float, alpha: float) -> int:
    """Conditional median forecast: smallest k with transition CDF >= 1/2.

    The innovation support doubles until the cumulative transition mass
    provably crosses one half, so the result is exact even when alpha < 1
    puts substantial mass beyond any feasible truncation.
    """
    z_prev = _check_count(z_prev, "z_prev")
    return _MedianEngine(delta, alpha, p).median(z_prev)


def predictions_inar(series, split: int, p: float, delta: float, alpha: float) -> np.ndarray:
    """One-step median forecasts of series[split:] from each preceding count.

    The innovation support is shared across the test segment and the median
    cached per distinct previous count, so long segments cost a handful of
    convolutions.
    """
    z = _count_series(series)
    if not 1 <= split < z.size:
        raise ValueError(f"split must lie in [1, {z.size - 1}], got {split}")
    engine = _MedianEngine(delta, alpha, p)
    cache: dict[int, int] = {}
    out = np.empty(z.size - split, dtype=np.int64)
    for j, t in enumerate(range(split, z.size)):
        zp = int(z[t - 1])
        if zp not in cache:
            cache[zp] = engine.median(zp)
        out[j] = cache[zp]
    return out


def evaluate_mspe(series, split: int, p: float, delta: float, alpha: float) -> float:
    """Mean squared one-step error of the median predictor on series[split:]."""
    z = _count_series(series)
    pred = predictions_inar(z, split, p, delta, alpha)
    err = (pred - z[split:]).astype(np.float64)
    return float(np.mean(err**2))


def hill_estimator(series, k: int) -> float:
    """Hill tail-index estimate from the k largest positive observations.

    Averages ln(X_(i) / X_(k+1)) over the k largest order statistics of the
    positive values; roughly 1/alpha for a tail decaying like x^{-alpha}.
    """
    x = np.asarray(series, dtype=np.float64)
    pos = np.sort(x[x > 0])[::-1]
    if int(k) != k or not 1 <= k < pos.size:
        raise ValueError(
            f"k must be an integer in [1, {pos.size - 1}] "
            f"({pos.size} positive observations), got {k}"
        )
    k = int(k)
    return float(np.mean(np.log(pos[:k] / pos[k])))


def hill_sequence(series) -> np.ndarray:
    """Hill estimates for every usable k = 1..m-1, m the positive count."""
    x = np.asarray(series, dtype=np.float64)
    pos = np.sort(x[x > 0])[::-1]
    if pos.size < 2:
        raise ValueError("need at least two positive observations")
    logs = np.log(pos)
    ks = np.arange(1, pos.size)
    return np.cumsum(logs)[:-1] / ks - logs[1:]
