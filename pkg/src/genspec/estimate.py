"""Minimum-distance fitting of spectrum families.

theta_hat minimizes the criterion over a constrained parameter space with
derivative-free search: the Cauchy-family objectives carry |.| kinks, so
Nelder-Mead with box projection replaces anything gradient-based. Discrete
coordinates (the tail exponent alpha) are enumerated exhaustively; excluded
bands split the box into regions searched independently (causal versus
non-causal for cauchy_ar1); quasi-random restarts cover each region.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize
from scipy.stats import qmc

from ._util import child_seed
from .empirical import Grid, dft_kernels, spectral_data, criterion_from_coeffs
from .models import ModelSpec, canonical_family, coeff_tensor, fourier_support


@dataclass(frozen=True)
class ParamSpace:
    """Box bounds plus open excluded bands and discrete coordinate sets.

    bounds: one (lo, hi) per coordinate, finite, lo < hi.
    excluded: (coordinate, band_lo, band_hi) open intervals removed from the
      search; band endpoints stay searchable.
    discrete: (coordinate, values) pairs enumerated instead of searched.
    """

    bounds: tuple
    excluded: tuple = ()
    discrete: tuple = ()

    def __post_init__(self):
        bounds = tuple((float(lo), float(hi)) for lo, hi in self.bounds)
        object.__setattr__(self, "bounds", bounds)
        for lo, hi in bounds:
            if not (np.isfinite(lo) and np.isfinite(hi) and lo < hi):
                raise ValueError(f"bounds must be finite with lo < hi, got ({lo}, {hi})")
        excluded = tuple((int(k), float(lo), float(hi)) for k, lo, hi in self.excluded)
        object.__setattr__(self, "excluded", excluded)
        for k, lo, hi in excluded:
            if not 0 <= k < len(bounds):
                raise ValueError(f"excluded band names coordinate {k} out of range")
            blo, bhi = bounds[k]
            if not (blo < lo < hi < bhi):
                raise ValueError(
                    f"band ({lo}, {hi}) must lie strictly inside bounds {bounds[k]}"
                )
        discrete = tuple(
            (int(k), tuple(float(v) for v in vals)) for k, vals in self.discrete
        )
        object.__setattr__(self, "discrete", discrete)
        seen = set()
        for k, vals in discrete:
            if not 0 <= k < len(bounds):
                raise ValueError(f"discrete set names coordinate {k} out of range")
            if k in seen:
                raise ValueError(f"coordinate {k} has two discrete sets")
            seen.add(k)
            if not vals:
                raise ValueError(f"discrete set for coordinate {k} is empty")
            lo, hi = bounds[k]
            if any(not lo <= v <= hi for v in vals):
                raise ValueError(f"discrete values for coordinate {k} leave {bounds[k]}")

    @property
    def ndim(self) -> int:
        return len(self.bounds)

    def discrete_coords(self) -> tuple:
        return tuple(k for k, _ in self.discrete)

    def continuous_coords(self) -> tuple:
        pinned = set(self.discrete_coords())
        return tuple(k for k in range(self.ndim) if k not in pinned)

    def _coord_intervals(self, k: int) -> list:
        """[lo, hi] minus the open bands of coordinate k, empty pieces dropped."""
        lo, hi = self.bounds[k]
        pieces = [(lo, hi)]
        for kk, blo, bhi in self.excluded:
            if kk != k:
                continue
            nxt = []
            for plo, phi in pieces:
                left = (plo, min(phi, blo))
                right = (max(plo, bhi), phi)
                for cand in (left, right):
                    if cand[0] < cand[1]:
                        nxt.append(cand)
            pieces = nxt
        return pieces

    def regions(self) -> list:
        """Product decomposition of the continuous coordinates into boxes."""
        free = self.continuous_coords()
        per_coord = [self._coord_intervals(k) for k in free]
        return [dict(zip(free, combo)) for combo in itertools.product(*per_coord)]

    def assignments(self) -> list:
        """All discrete-coordinate assignments, as {coordinate: value} dicts."""
        if not self.discrete:
            return [{}]
        keys = [k for k, _ in self.discrete]
        val_sets = [vals for _, vals in self.discrete]
        return [dict(zip(keys, combo)) for combo in itertools.product(*val_sets)]

    def contains(self, theta) -> bool:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.ndim,):
            return False
        for k, (lo, hi) in enumerate(self.bounds):
            if not lo <= theta[k] <= hi:
                return False
        for k, blo, bhi in self.excluded:
            if blo < theta[k] < bhi:
                return False
        for k, vals in self.discrete:
            if not any(theta[k] == v for v in vals):
                return False
        return True


@dataclass(frozen=True)
class SearchConfig:
    restarts: int = 8
    maxiter: int = 500
    fatol: float = 1e-6
    xatol: float = 1e-6
    # relative simplex radius around warm starts; small because a warm start
    # is expected to sit near its basin's bottom
    warm_radius: float = 0.05


@dataclass(frozen=True)
class BranchResult:
    """Best point of one (discrete assignment, continuous region) branch."""

    theta: tuple
    objective: float
    converged: bool
    region: tuple
    n_runs: int


@dataclass(frozen=True)
class Estimate:
    theta_hat: tuple
    objective: float
    n_restarts_used: int
    converged: bool
    branches: tuple
    family: str = ""

    @property
    def region(self) -> tuple:
        best = min(self.branches, key=lambda b: (b.objective, b.theta))
        return best.region

    def report(self) -> dict:
        return {
            "family": self.family,
            "theta_hat": list(self.theta_hat),
            "objective": self.objective,
            "restarts": self.n_restarts_used,
            "region": [list(pair) for pair in self.region],
        }


def _warm_simplex(x0: np.ndarray, box: np.ndarray, radius: float) -> np.ndarray:
    """Small simplex around x0, kept inside the box, never degenerate.

    Steps scale with the start's own magnitude (with a small box-width
    floor), since a warm start is expected to sit close to its basin's
    bottom and box-wide steps would throw the search back out.
    """
    ndim = x0.size
    simplex = np.repeat(x0[None, :], ndim + 1, axis=0)
    for k in range(ndim):
        step = max(radius * abs(x0[k]), 1e-3 * (box[k, 1] - box[k, 0]))
        cand = x0[k] + step
        if cand > box[k, 1]:
            cand = x0[k] - step
        simplex[k + 1, k] = np.clip(cand, box[k, 0], box[k, 1])
    return simplex


def minimize_over_space(
    objective,
    space: ParamSpace,
    config: SearchConfig | None = None,
    seed: int = 0,
    warm_starts=(),
) -> Estimate:
    """Multi-start Nelder-Mead over every branch of the space.

    objective maps a full-length theta to a float; +inf marks infeasible
    points. Warm starts are full theta vectors: each one seeds the branches
    whose discrete coordinates it matches, clipped into the region box, with
    a tight initial simplex. Ties break to the lexicographically smallest
    theta so restart order never matters.
    """
    config = config or SearchConfig()
    warm_starts = [np.asarray(w, dtype=np.float64) for w in warm_starts]
    for w in warm_starts:
        if w.shape != (space.ndim,):
            raise ValueError(f"warm start of shape {w.shape}, expected ({space.ndim},)")
    free = space.continuous_coords()
    branches = []
    total_runs = 0
    branch_idx = 0
    for assign in space.assignments():
        for region in space.regions():
            box = np.array([region[k] for k in free]) if free else np.empty((0, 2))
            theta_full = np.empty(space.ndim)
            for k, v in assign.items():
                theta_full[k] = v

            def run_objective(x, _theta=theta_full.copy()):
                _theta[list(free)] = x
                return objective(_theta)

            starts = []
            if free and config.restarts > 0:
                sob = qmc.Sobol(d=len(free), scramble=True, seed=child_seed(seed, branch_idx))
                with warnings.catch_warnings():
                    warnings.simplefilter("ignore", UserWarning)
                    unit = sob.random(config.restarts)
                starts.extend(
                    [("cold", box[:, 0] + unit[r] * (box[:, 1] - box[:, 0])) for r in range(config.restarts)]
                )
            for w in warm_starts:
                if any(w[k] != v for k, v in assign.items()):
                    continue
                x0 = np.clip(w[list(free)], box[:, 0], box[:, 1]) if free else np.empty(0)
                starts.append(("warm", x0))

            best = None
            n_runs = 0
            if not free:
                val = float(run_objective(np.empty(0)))
                best = (val, theta_full.copy(), np.isfinite(val))
            else:
                for kind, x0 in starts:
                    options = {
                        "maxiter": config.maxiter,
                        "fatol": config.fatol,
                        "xatol": config.xatol,
                    }
                    if kind == "warm":
                        options["initial_simplex"] = _warm_simplex(
                            x0, box, config.warm_radius
                        )
                    res = optimize.minimize(
                        run_objective,
                        x0,
                        method="Nelder-Mead",
                        bounds=[tuple(b) for b in box],
                        options=options,
                    )
                    n_runs += 1
                    x = np.clip(res.x, box[:, 0], box[:, 1])
                    theta = theta_full.copy()
                    theta[list(free)] = x
                    key = (float(res.fun), tuple(theta))
                    if best is None or key < (best[0], tuple(best[1])):
                        best = (float(res.fun), theta, bool(res.success))
            total_runs += n_runs
            if best is not None:
                region_full = []
                for k in range(space.ndim):
                    if k in assign:
                        region_full.append((assign[k], assign[k]))
                    else:
                        region_full.append(tuple(region[k]))
                branches.append(
                    BranchResult(
                        theta=tuple(best[1]),
                        objective=best[0],
                        converged=bool(best[2]),
                        region=tuple(region_full),
                        n_runs=n_runs,
                    )
                )
            branch_idx += 1
    if not branches:
        raise ValueError(
            "no branch received a start: restarts = 0 and no warm start matches"
        )
    winner = min(branches, key=lambda b: (b.objective, b.theta))
    theta_hat = np.asarray(winner.theta)
    if not space.contains(theta_hat):  # post-projection check, must never trip
        raise AssertionError(f"optimizer left the parameter space: {theta_hat}")
    return Estimate(
        theta_hat=tuple(theta_hat),
        objective=winner.objective,
        n_restarts_used=total_runs,
        converged=winner.converged and np.isfinite(winner.objective),
        branches=tuple(branches),
    )


_ALPHA_SET = (0.3, 0.7, 0.9)


def default_space(
    family: str,
    L: float = 3.14,
    d1: int = 0,
    d2: int = 0,
    alpha_set=_ALPHA_SET,
) -> ParamSpace:
    """Documented default search spaces.

    cauchy_ar1 searches a on [-3, 3] minus the open band (0.9, 1.1) in |a|,
    covering causal and non-causal regimes; MA(1) coefficients live in
    [-5, 5] minus (-0.2, 0.2) since psi_1 = -1/a explodes at zero; count
    models take delta in [0.05, 10], p in [0.01, 0.99], and alpha either
    from a discrete set (default {0.3, 0.7, 0.9}) or, with alpha_set=None,
    continuous on [0.05, 0.99]; the general MA family is boxed to
    [1/L, L]^{d1+d2+1}.
    """
    family = canonical_family(family)
    if family in ("cauchy_ma1", "gauss_ma1"):
        return ParamSpace(
            bounds=((-5.0, 5.0), (0.05, 10.0)),
            excluded=((0, -0.2, 0.2),),
        )
    if family == "cauchy_ar1":
        return ParamSpace(
            bounds=((-3.0, 3.0), (0.05, 10.0)),
            excluded=((0, -1.1, -0.9), (0, 0.9, 1.1)),
        )
    if family == "gauss_ar1":
        return ParamSpace(bounds=((-0.95, 0.95), (0.05, 10.0)))
    if family in ("inar1", "inma1"):
        if alpha_set is None:
            return ParamSpace(bounds=((0.05, 10.0), (0.05, 0.99), (0.01, 0.99)))
        return ParamSpace(
            bounds=((0.05, 10.0), (min(alpha_set), max(alpha_set)), (0.01, 0.99)),
            discrete=((1, tuple(alpha_set)),),
        )
    if family == "cauchy_ma_gen":
        if d1 + d2 < 1:
            raise ValueError("cauchy_ma_gen needs d1 + d2 >= 1")
        return ParamSpace(bounds=tuple((1.0 / L, L) for _ in range(d1 + d2 + 1)))
    raise ValueError(f"unknown family {family!r}")


def build_model(family: str, theta, lmax: int = 2, d1: int = 0, d2: int = 0) -> ModelSpec:
    family = canonical_family(family)
    if family == "cauchy_ma_gen":
        return ModelSpec(family, tuple(theta), lmax=lmax, d1=d1, d2=d2)
    return ModelSpec(family, tuple(theta), lmax=lmax)


def _probe_model(family: str, space: ParamSpace, lmax: int, d1: int, d2: int) -> ModelSpec:
    theta = np.empty(space.ndim)
    region = space.regions()[0]
    for k, v in space.assignments()[0].items():
        theta[k] = v
    for k in space.continuous_coords():
        lo, hi = region[k]
        theta[k] = 0.5 * (lo + hi)
    return build_model(family, theta, lmax, d1, d2)


def fit(
    series,
    family: str,
    space: ParamSpace | None = None,
    grid: Grid | None = None,
    search_config: SearchConfig | None = None,
    seed: int = 0,
    lmax: int = 2,
    d1: int = 0,
    d2: int = 0,
    warm_starts=(),
) -> Estimate:
    """theta_hat = argmin of the spectral distance criterion.

    The kernel reductions are built once; each candidate theta costs one
    coefficient-tensor evaluation. Deterministic given seed. Infeasible
    parameter vectors (validation failures at region edges) score +inf.
    """
    z = np.asarray(series, dtype=np.float64)
    if z.size < 8:
        raise ValueError(f"series too short to fit: {z.size} < 8")
    if np.all(z == z[0]):
        raise ValueError("series is constant; the criterion cannot identify anything")
    grid = grid or Grid(L=3.14, M=30, n=z.size)
    if grid.n != z.size:
        raise ValueError(f"grid.n = {grid.n} does not match series length {z.size}")
    space = space or default_space(family, L=grid.L, d1=d1, d2=d2)
    support = fourier_support(_probe_model(family, space, lmax, d1, d2))
    data = spectral_data(dft_kernels(z, grid), support)
    u = grid.u_points

    def objective(theta):
        try:
            model = build_model(family, theta, lmax, d1, d2)
        except ValueError:
            return np.inf
        return criterion_from_coeffs(data, coeff_tensor(model, u))

    est = minimize_over_space(
        objective, space, config=search_config, seed=seed, warm_starts=warm_starts
    )
    return Estimate(
        theta_hat=est.theta_hat,
        objective=est.objective,
        n_restarts_used=est.n_restarts_used,
        converged=est.converged,
        branches=est.branches,
        family=family,
    )
