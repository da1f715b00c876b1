"""Brute-force reference implementations shared across test modules.

Everything here computes definitions literally: O(n^2) double sums for the
DFT kernels and triple loops over (frequency, u, v) for the criterion terms.
No FFT, no algebraic reduction, no shared intermediate caches.
"""

import numpy as np

from genspec.models import ModelSpec, eval_spectrum

TWO_PI = 2.0 * np.pi


def naive_dn(z: np.ndarray, u: float) -> np.ndarray:
    """d_n(lambda_j; u) for j = 0..n-1 by direct double summation."""
    n = z.size
    t = np.arange(1, n + 1)
    out = np.empty(n, dtype=np.complex128)
    for j in range(n):
        out[j] = np.sum(np.exp(1j * u * z) * np.exp(-1j * t * TWO_PI * j / n))
    return out


def naive_periodogram(z: np.ndarray, j: int, u: float, v: float) -> complex:
    n = z.size
    t = np.arange(1, n + 1)
    lam = TWO_PI * j / n
    du = np.sum(np.exp(1j * u * z) * np.exp(-1j * t * lam))
    dv = np.sum(np.exp(1j * v * z) * np.exp(1j * t * lam))
    return du * dv / (TWO_PI * n)


def oracle_criterion_D(z: np.ndarray, model: ModelSpec, grid) -> float:
    n, m = grid.n, grid.M
    total = 0.0
    for j in range(1, n):
        lam = TWO_PI * j / n
        for a in range(m):
            for b in range(m):
                ua, vb = grid.u_points[a], grid.u_points[b]
                f = eval_spectrum(model, lam, ua, vb)
                total += abs(naive_periodogram(z, j, ua, vb) - f) ** 2
    return 8 * np.pi * grid.L**2 / (n * m**2) * total


def oracle_adjustment_A(z: np.ndarray, model: ModelSpec, grid) -> float:
    n, m = grid.n, grid.M
    total = 0.0
    for j in range(1, n):
        lam = TWO_PI * j / n
        for a in range(m):
            for b in range(m):
                ua, vb = grid.u_points[a], grid.u_points[b]
                term = (
                    naive_periodogram(z, j, ua, -ua)
                    - eval_spectrum(model, lam, ua, -ua)
                    + naive_periodogram(z, j, -vb, vb)
                    - eval_spectrum(model, lam, -vb, vb)
                )
                total += abs(term) ** 2
    return 4 * np.pi * grid.L**2 / (n * m**2) * total


def oracle_bias_B(z: np.ndarray, grid) -> float:
    n, m = grid.n, grid.M
    total = 0.0
    for j in range(1, n):
        for a in range(m):
            for b in range(m):
                ua, vb = grid.u_points[a], grid.u_points[b]
                iu = naive_periodogram(z, j, ua, -ua)
                iv = naive_periodogram(z, j, -vb, vb)
                iuv = naive_periodogram(z, j, ua, vb)
                total += (
                    (iu**2 + iv**2) / 4 + (iuv * np.conj(iuv) + iu * iv) / 2
                ).real
    return 8 * np.pi * grid.L**2 / (n * m**2) * total


def random_small_instance(rng: np.random.Generator):
    """One (series, model, grid) triple for the oracle battery, n <= 32, M <= 6."""
    from genspec.empirical import Grid
    from genspec.simulate import simulate_path

    n = int(rng.integers(8, 33))
    m = int(rng.integers(2, 7))
    big_lmax = rng.random() < 0.2  # exercises the 2*support >= n branch
    lmax = int(rng.integers(n // 2, n)) if big_lmax else 2
    family = rng.choice(
        ["inar1", "inma1", "gauss_ar1", "gauss_ma1", "cauchy_ar1", "cauchy_ma1", "cauchy_ma_gen"]
    )
    if family in ("inar1", "inma1"):
        theta = (rng.uniform(0.5, 3.0), rng.uniform(0.3, 0.95), rng.uniform(0.05, 0.9))
    elif family == "gauss_ar1":
        theta = (rng.uniform(-0.8, 0.8), rng.uniform(0.5, 2.0))
    elif family == "cauchy_ar1":
        a = rng.uniform(0.2, 0.85) * rng.choice([-1.0, 1.0])
        theta = (a, rng.uniform(0.5, 2.0))
    elif family == "cauchy_ma_gen":
        theta = (rng.uniform(1.2, 2.5), rng.uniform(0.3, 0.8), rng.uniform(0.5, 2.0))
    else:
        a = rng.uniform(0.4, 3.0) * rng.choice([-1.0, 1.0])
        theta = (a, rng.uniform(0.5, 2.0))
    kwargs = dict(d1=1, d2=1) if family == "cauchy_ma_gen" else {}
    model = ModelSpec(family, theta, lmax=lmax, **kwargs)
    if rng.random() < 0.5:
        series = simulate_path(
            ModelSpec("inar1", (2.0, 0.7, 0.3)), n, seed=int(rng.integers(1 << 30))
        ).astype(np.float64)
    else:
        series = rng.normal(0.0, 1.5, n)
    grid = Grid(L=float(rng.uniform(0.8, 3.2)), M=m, n=n)
    return series, model, grid
