"""Generalized periodogram and the smoothing-free distance criterion.

The kernel d_n(lambda; u) = sum_t e^{iuZ_t} e^{-it lambda} yields the
generalized periodogram I_n(lambda; u, v) = d_n(lambda; u) d_n(-lambda; v)
/ (2 pi n). criterion_D is the squared distance between I_n and a model
spectrum over a finite (u, v) lattice at the Fourier frequencies; it is the
objective minimized in fitting. adjustment_A and bias_B complete the centered
goodness-of-fit statistic T_n = D_n + A_n - B_n.

No smoothing is involved anywhere: all quantities are exact finite sums.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .models import (
    ModelSpec,
    coeff_tensor,
    fourier_coeff,
    fourier_support,
    spectrum_lattice,
)

TWO_PI = 2.0 * np.pi


@dataclass(frozen=True)
class Grid:
    """Evaluation lattice: u_i = -L + 2Li/M for i = 1..M (max is exactly L,
    the lattice is asymmetric), and lambda_j = 2 pi j / n for j = 1..n-1."""

    L: float
    M: int
    n: int
    u_points: np.ndarray = field(init=False, repr=False, compare=False)
    lambda_points: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not (np.isfinite(self.L) and self.L > 0):
            raise ValueError(f"L must be a positive real, got {self.L}")
        if int(self.M) != self.M or self.M < 2:
            raise ValueError(f"M must be an integer >= 2, got {self.M}")
        if int(self.n) != self.n or self.n < 8:
            raise ValueError(f"n must be an integer >= 8, got {self.n}")
        object.__setattr__(self, "M", int(self.M))
        object.__setattr__(self, "n", int(self.n))
        i = np.arange(1, self.M + 1, dtype=np.float64)
        # -L + 2Li/M rearranged so that u[M-2-k] is the exact float negation
        # of u[k] (and the endpoint exactly L): the coefficient kernels rely
        # on that to fill half the lattice by conjugate symmetry.
        u = self.L * (2.0 * i - self.M) / self.M
        object.__setattr__(self, "u_points", u)
        j = np.arange(1, self.n, dtype=np.float64)
        object.__setattr__(self, "lambda_points", TWO_PI * j / self.n)

    @property
    def v_points(self) -> np.ndarray:
        return self.u_points


@dataclass(frozen=True)
class KernelMatrix:
    """values[i, j] = d_n(lambda_j; u_i) for j = 0..n-1.

    Column 0 holds sum_t e^{iu_iZ_t}; d_n(-lambda_j; u_i) is values[i, n-j]
    by 2 pi periodicity, so negative frequencies are never stored.
    """

    values: np.ndarray
    grid: Grid


def dft_kernels(series, grid: Grid) -> KernelMatrix:
    """Exact d_n at all Fourier frequencies, one length-n FFT per grid point.

    The FFT indexes time from 0 while d_n sums t = 1..n, hence the extra
    phase e^{-i lambda_j} per column.
    """
    z = np.asarray(series, dtype=np.float64)
    if z.ndim != 1 or z.size != grid.n:
        raise ValueError(f"series must be 1-d of length {grid.n}, got shape {z.shape}")
    w = np.fft.fft(np.exp(1j * grid.u_points[:, None] * z[None, :]), axis=1)
    w *= np.exp(-2j * np.pi * np.arange(grid.n) / grid.n)[None, :]
    return KernelMatrix(values=w, grid=grid)


def periodogram_value(kernels: KernelMatrix, j: int, u_idx: int, v_idx: int) -> complex:
    """I_n(lambda_j; u, v) = d_n(lambda_j; u) d_n(-lambda_j; v) / (2 pi n)."""
    n = kernels.grid.n
    if not 1 <= j <= n - 1:
        raise ValueError(f"frequency index must lie in 1..{n - 1}, got {j}")
    vals = kernels.values
    return complex(vals[u_idx, j] * vals[v_idx, n - j] / (TWO_PI * n))


@dataclass(frozen=True)
class SpectralData:
    """Model-independent reductions of one series' kernels.

    Fitting evaluates the criterion at many parameter vectors; everything
    that does not depend on theta is collapsed here once, after which each
    evaluation is O(support * M^2) via criterion_from_coeffs.

    t1 = sum_j P_j P_{n-j} / (2 pi n)^2 with P_j = sum_i |d_n(lambda_j;u_i)|^2,
    s_tensors[ell][a, b] = sum_j I_n(lambda_j; u_a, u_b) e^{i ell lambda_j}.
    """

    grid: Grid
    support: int
    t1: float
    s_tensors: np.ndarray
    kappa: float

    @property
    def n(self) -> int:
        return self.grid.n


def spectral_data(kernels: KernelMatrix, support: int) -> SpectralData:
    grid = kernels.grid
    n, m = grid.n, grid.M
    if support < 0:
        raise ValueError(f"support must be nonnegative, got {support}")
    if 2 * support >= n:
        raise ValueError(
            f"spectral reduction needs 2*support < n, got support={support}, n={n}"
        )
    w = kernels.values
    wp = w[:, 1:]
    rev = w[:, :0:-1]  # rev[:, j-1] = values[:, n-j]
    p = (w.real**2 + w.imag**2).sum(axis=0)
    t1 = float((p[1:] * p[:0:-1]).sum() / (TWO_PI * n) ** 2)
    phases = np.exp(
        1j * np.arange(support + 1)[:, None] * grid.lambda_points[None, :]
    )
    s_tensors = np.empty((support + 1, m, m), dtype=np.complex128)
    for ell in range(support + 1):
        s_tensors[ell] = (wp * phases[ell]) @ rev.T / (TWO_PI * n)
    kappa = 8.0 * np.pi * grid.L**2 / (n * m**2)
    return SpectralData(grid=grid, support=support, t1=t1, s_tensors=s_tensors, kappa=kappa)


def criterion_from_coeffs(data: SpectralData, coeffs: np.ndarray) -> float:
    """Assemble the criterion from Fourier coefficients C_0..C_s.

    Expanding |I_n - f|^2 and using sum_{j=1}^{n-1} e^{-im lambda_j}
    = n 1{m = 0} - 1 for |m| < n turns the frequency sum into exact closed
    form; only the I_n f-bar cross term needs the stored S_ell tensors
    (with S_{-ell} = S_ell^T and C_{-ell}(u,v) = C_ell(v,u)).
    """
    s = coeffs.shape[0] - 1
    if s != data.support:
        raise ValueError(f"coeffs support {s} does not match reduction {data.support}")
    n = data.n
    cross = float(np.sum(data.s_tensors[0] * np.conj(coeffs[0])).real)
    norms = float(np.sum(coeffs[0].real ** 2 + coeffs[0].imag ** 2))
    total = coeffs[0].copy()
    for ell in range(1, s + 1):
        cross += 2.0 * float(np.sum(data.s_tensors[ell] * np.conj(coeffs[ell])).real)
        norms += 2.0 * float(np.sum(coeffs[ell].real ** 2 + coeffs[ell].imag ** 2))
        total += coeffs[ell] + coeffs[ell].T
    t3 = (n * norms - float(np.sum(total.real**2 + total.imag**2))) / (4 * np.pi**2)
    value = data.kappa * (data.t1 - cross / np.pi + t3)
    # nonnegative by definition; clamp the roundoff of a near-perfect fit
    return max(value, 0.0)


def criterion_from_kernels(kernels: KernelMatrix, model: ModelSpec) -> float:
    grid = kernels.grid
    s = fourier_support(model)
    if 2 * s < grid.n:
        return criterion_from_coeffs(
            spectral_data(kernels, s), coeff_tensor(model, grid.u_points)
        )
    # truncation order at or beyond the folding limit: no closed-form
    # frequency sum, evaluate the definition frequency by frequency
    w = kernels.values
    i_n = np.einsum("aj,bj->jab", w[:, 1:], w[:, :0:-1]) / (TWO_PI * grid.n)
    f = spectrum_lattice(model, grid.lambda_points, grid.u_points)
    d = i_n - f
    kappa = 8.0 * np.pi * grid.L**2 / (grid.n * grid.M**2)
    return float(kappa * np.sum(d.real**2 + d.imag**2))


def criterion_D(series, model: ModelSpec, grid: Grid) -> float:
    """(8 pi L^2/(n M^2)) sum_{j,i1,i2} |I_n(lambda_j;u_i1,u_i2) - f_theta|^2."""
    return criterion_from_kernels(dft_kernels(series, grid), model)


def _diagonal_slices(kernels: KernelMatrix):
    """g[j-1, i] = I_n(lambda_j; u_i, -u_i), h[j-1, i] = I_n(lambda_j; -u_i, u_i).

    Both are |d_n|^2 slices: the first at +lambda_j, the second at -lambda_j.
    """
    w = kernels.values
    n = kernels.grid.n
    g = (w.real**2 + w.imag**2).T[1:] / (TWO_PI * n)
    h = g[::-1]  # |values[:, n-j]|^2 row for j = 1..n-1
    return g, h


def _diagonal_model(model: ModelSpec, grid: Grid):
    """Real model spectra on the paired diagonals, shapes (n-1, M).

    Returns f(lambda_j; u_i, -u_i) and f(lambda_j; -u_i, u_i). Both are real:
    the ell and -ell Fourier terms are complex conjugates there.
    """
    u = grid.u_points
    s = fourier_support(model)
    c_uv = np.empty((s + 1, grid.M), dtype=np.complex128)
    c_vu = np.empty((s + 1, grid.M), dtype=np.complex128)
    for ell in range(s + 1):
        c_uv[ell] = fourier_coeff(model, ell, u, -u)
        c_vu[ell] = fourier_coeff(model, ell, -u, u)
    if s == 0:
        f_uv = np.broadcast_to(c_uv[0].real / TWO_PI, (grid.n - 1, grid.M)).copy()
        return f_uv, f_uv.copy()
    e = np.exp(-1j * grid.lambda_points[:, None] * np.arange(1, s + 1)[None, :])
    f_uv = (c_uv[0][None, :] + e @ c_uv[1:] + np.conj(e) @ c_vu[1:]).real / TWO_PI
    f_vu = (c_vu[0][None, :] + e @ c_vu[1:] + np.conj(e) @ c_uv[1:]).real / TWO_PI
    return f_uv, f_vu


def adjustment_from_kernels(kernels: KernelMatrix, model: ModelSpec) -> float:
    grid = kernels.grid
    g, h = _diagonal_slices(kernels)
    f_uv, f_vu = _diagonal_model(model, grid)
    x = g - f_uv
    y = h - f_vu
    m = grid.M
    # sum_{i1,i2} (x_{i1} + y_{i2})^2 = M sum x^2 + M sum y^2 + 2 sum x sum y
    per_j = m * ((x**2).sum(axis=1) + (y**2).sum(axis=1))
    per_j += 2.0 * x.sum(axis=1) * y.sum(axis=1)
    return float(4.0 * np.pi * grid.L**2 / (grid.n * m**2) * per_j.sum())


def adjustment_A(series, model: ModelSpec, grid: Grid) -> float:
    """(4 pi L^2/(n M^2)) sum |I_n(u,-u) - f(u,-u) + I_n(-v,v) - f(-v,v)|^2.

    Nonnegative; built from the paired diagonal slices only.
    """
    return adjustment_from_kernels(dft_kernels(series, grid), model)


def bias_from_kernels(kernels: KernelMatrix) -> float:
    grid = kernels.grid
    n, m = grid.n, grid.M
    g, h = _diagonal_slices(kernels)
    w = kernels.values
    p = (w.real**2 + w.imag**2).sum(axis=0)
    cross = p[1:] * p[:0:-1] / (TWO_PI * n) ** 2  # sum_{i1,i2} |I_n(u,v)|^2 at each j
    per_j = m * ((g**2).sum(axis=1) + (h**2).sum(axis=1)) / 4.0
    per_j += (cross + g.sum(axis=1) * h.sum(axis=1)) / 2.0
    return float(8.0 * np.pi * grid.L**2 / (n * m**2) * per_j.sum())


def bias_B(series, grid: Grid) -> float:
    """Model-free bias correction:

    (8 pi L^2/(n M^2)) sum_j sum_{i1,i2} [ (I_n^2(u,-u) + I_n^2(-v,v))/4
      + (|I_n(u,v)|^2 + I_n(u,-u) I_n(-v,v))/2 ].
    """
    return bias_from_kernels(dft_kernels(series, grid))


def gof_statistic(series, model: ModelSpec, grid: Grid) -> float:
    """T_n = D_n + A_n - B_n at the supplied (fitted) model.

    May be negative in finite samples; the subsampling calibration handles
    the centering.
    """
    kernels = dft_kernels(series, grid)
    return (
        criterion_from_kernels(kernels, model)
        + adjustment_from_kernels(kernels, model)
        - bias_from_kernels(kernels)
    )


def spectrum_table(kernels: KernelMatrix, model: ModelSpec) -> np.ndarray:
    """Plot-ready dump: rows (lambda, u, v, re_I, im_I, re_f, im_f)."""
    grid = kernels.grid
    w = kernels.values
    i_n = np.einsum("aj,bj->jab", w[:, 1:], w[:, :0:-1]) / (TWO_PI * grid.n)
    f = spectrum_lattice(model, grid.lambda_points, grid.u_points)
    lam = np.broadcast_to(grid.lambda_points[:, None, None], i_n.shape)
    uu = np.broadcast_to(grid.u_points[None, :, None], i_n.shape)
    vv = np.broadcast_to(grid.u_points[None, None, :], i_n.shape)
    cols = [lam, uu, vv, i_n.real, i_n.imag, f.real, f.imag]
    return np.stack([c.reshape(-1) for c in cols], axis=1)
