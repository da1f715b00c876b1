"""Closed-form generalized spectra and their Fourier coefficients.

For a strictly stationary series Z_t, the order-2 generalized spectrum at
arguments (u, v) is

    f(lambda; u, v) = (1 / 2pi) * sum_ell C_ell(u, v) e^{-i ell lambda},
    C_ell(u, v)     = Cov(e^{i u Z_{t+ell}}, e^{-i v Z_t}),

with C_{-ell}(u, v) = C_ell(v, u). Every family here admits closed-form
C_ell; MA-type families have finite Fourier support, AR-type families decay
geometrically and are truncated at |ell| <= lmax.

Families and parameter layouts (theta):
    cauchy_ma1    (a, delta)      Z_t = eps_t - a^{-1} eps_{t-1}, Cauchy eps
    cauchy_ar1    (a, delta)      Z_t = a Z_{t-1} + eps_t, causal |a| < 1 or
                                  the stationary non-causal solution |a| > 1
    gauss_ma1     (a, sigma2)     Gaussian innovations
    gauss_ar1     (a, sigma2)     |a| < 1
    inma1         (delta, alpha, p)   Z_t = eps_t + p o eps_{t-1}
    inar1         (delta, alpha, p)   Z_t = p o Z_{t-1} + eps_t
    cauchy_ma_gen (xi_1..xi_{d1+d2}, delta)
                                  prod_{i<=d1}(1 - xi_i^{-1} B)
                                  prod_{j<=d2}(1 - xi_{d1+j} B^{-1}) eps_t

Cauchy innovations have characteristic function exp(-delta |u|); discrete
stable innovations have pgf exp{-delta (1 - x)^alpha}.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import _fast

FAMILIES = (
    "cauchy_ma1",
    "cauchy_ar1",
    "gauss_ma1",
    "gauss_ar1",
    "inma1",
    "inar1",
    "cauchy_ma_gen",
)

COUNT_FAMILIES = ("inma1", "inar1")

_LMAX_WARN = 50


def canonical_family(name: str) -> str:
    """Normalize a family tag: case/dash/underscore-insensitive."""
    key = name.strip().lower().replace("-", "").replace("_", "")
    table = {f.replace("_", ""): f for f in FAMILIES}
    if key not in table:
        raise ValueError(f"unknown family {name!r}; expected one of {FAMILIES}")
    return table[key]


@dataclass(frozen=True)
class ModelSpec:
    """A spectrum family tag, its parameter vector, and Fourier truncation.

    `ar_band` is the open band of |a| values excluded for cauchy_ar1 (the
    formulas blow up at |a| = 1); it is configurable and ignored by other
    families. d1/d2 give the causal/anticausal factor counts of
    cauchy_ma_gen.
    """

    family: str
    theta: tuple
    lmax: int = 2
    d1: int = 0
    d2: int = 0
    ar_band: tuple = (0.9, 1.1)

    def __post_init__(self) -> None:
        object.__setattr__(self, "family", canonical_family(self.family))
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))
        th = self.theta
        fam = self.family
        if self.lmax < 0:
            raise ValueError("lmax must be nonnegative")
        if self.lmax > _LMAX_WARN:
            warnings.warn(
                f"lmax={self.lmax}: Fourier coefficients decay geometrically; "
                "orders this high add nothing but cost",
                stacklevel=2,
            )
        if fam in ("cauchy_ma1", "cauchy_ar1", "gauss_ma1", "gauss_ar1"):
            if len(th) != 2:
                raise ValueError(f"{fam} takes theta=(a, scale), got {th}")
            a, scale = th
            if not (scale > 0):
                raise ValueError(f"scale parameter must be positive, got {scale}")
            if fam in ("cauchy_ma1", "gauss_ma1") and a == 0:
                raise ValueError("MA(1) coefficient a must be nonzero")
            if fam == "gauss_ar1" and not abs(a) < 1:
                raise ValueError(f"gauss_ar1 needs |a| < 1, got a={a}")
            if fam == "cauchy_ar1":
                lo, hi = self.ar_band
                if not (0 < lo <= 1 <= hi):
                    raise ValueError(f"ar_band must straddle 1, got {self.ar_band}")
                if lo < abs(a) < hi:
                    raise ValueError(
                        f"cauchy_ar1 |a|={abs(a)} inside the excluded band ({lo}, {hi})"
                    )
                if abs(a) == 1:
                    raise ValueError("cauchy_ar1 is non-stationary at |a| = 1")
            if fam in ("cauchy_ar1", "gauss_ar1") and self.lmax < 1:
                raise ValueError("AR-type families need lmax >= 1")
        elif fam in ("inma1", "inar1"):
            if len(th) != 3:
                raise ValueError(f"{fam} takes theta=(delta, alpha, p), got {th}")
            delta, alpha, p = th
            if not (delta > 0):
                raise ValueError(f"delta must be positive, got {delta}")
            if not (0 < alpha <= 1):
                raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
            # p = 0 is the i.i.d. edge case; p = 1 breaks stationarity
            if not (0 <= p < 1):
                raise ValueError(f"p must lie in [0, 1), got {p}")
            if fam == "inar1" and self.lmax < 1:
                raise ValueError("inar1 needs lmax >= 1")
        else:  # cauchy_ma_gen
            if self.d1 < 0 or self.d2 < 0 or self.d1 + self.d2 < 1:
                raise ValueError(f"cauchy_ma_gen needs d1, d2 >= 0 with d1 + d2 >= 1")
            if len(th) != self.d1 + self.d2 + 1:
                raise ValueError(
                    f"cauchy_ma_gen with d1={self.d1}, d2={self.d2} takes "
                    f"{self.d1 + self.d2 + 1} parameters, got {len(th)}"
                )
            if not (th[-1] > 0):
                raise ValueError(f"delta must be positive, got {th[-1]}")
            if any(x == 0 for x in th[: self.d1]):
                raise ValueError("causal factors need xi != 0")


def fourier_support(model: ModelSpec) -> int:
    """Largest |ell| with (possibly) nonzero C_ell, after truncation."""
    fam = model.family
    if fam in ("cauchy_ma1", "gauss_ma1", "inma1"):
        return 1
    if fam == "cauchy_ma_gen":
        return model.d1 + model.d2
    return model.lmax  # AR-type, truncated


def ma_gen_psi(model: ModelSpec) -> np.ndarray:
    """Two-sided filter coefficients of cauchy_ma_gen, ordered k = -d2..d1.

    Expands prod_i (1 - xi_i^{-1} B) prod_j (1 - xi_j B^{-1}); the causal
    factor has coefficients (1, -1/xi) at lags (0, 1) and the anticausal one
    (-xi, 1) at lags (-1, 0).
    """
    if model.family != "cauchy_ma_gen":
        raise ValueError("ma_gen_psi only applies to cauchy_ma_gen")
    psi = np.array([1.0])
    for xi in model.theta[: model.d1]:
        psi = np.convolve(psi, [1.0, -1.0 / xi])
    for xi in model.theta[model.d1 : model.d1 + model.d2]:
        psi = np.convolve(psi, [-xi, 1.0])
    # arrays are ordered by increasing power of B (= lag); offsets add to -d2
    return psi


def linear_cauchy_coeff(psi, delta: float, ell: int, u, v):
    """C_ell(u, v) of Z_t = sum_k psi_k eps_{t-k} with Cauchy(delta) eps.

    Returns exp(-delta sum_k |u psi_{k+ell} + v psi_k|)
          - exp(-delta (|u| + |v|) sum_k |psi_k|).

    `psi` is the finite coefficient sequence ordered by increasing lag; the
    formula is invariant to the absolute lag offset, so only the ordering
    matters. Scalar or array u/v broadcast to the result shape.
    """
    psi = np.atleast_1d(np.asarray(psi, dtype=np.float64))
    if psi.size == 0:
        raise ValueError("psi must be nonempty")
    if not (delta > 0):
        raise ValueError(f"delta must be positive, got {delta}")
    ell = int(ell)
    if ell < 0:
        return linear_cauchy_coeff(psi, delta, -ell, v, u)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    m = psi.size
    # k = 0..m-1: psi_k from psi, psi_{k+ell} shifted (zeros beyond support)
    shifted = np.zeros(m)
    if ell < m:
        shifted[: m - ell] = psi[ell:]
    # k = -ell..-1: psi_k = 0, psi_{k+ell} covers psi[0:min(ell, m)]
    head = np.abs(psi[: min(ell, m)]).sum()
    paired = np.abs(u[..., None] * shifted + v[..., None] * psi).sum(axis=-1)
    total = paired + np.abs(u) * head
    full = np.abs(psi).sum()
    out = np.exp(-delta * total) - np.exp(-delta * (np.abs(u) + np.abs(v)) * full)
    return out if out.shape else float(out)


def _coeff_cauchy_ar1(a: float, delta: float, ell: int, u, v):
    """Closed-form C_ell for the Cauchy AR(1), ell >= 0, |a| != 1."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if abs(a) < 1:
        r = abs(a)
        base = delta / (1 - r)
        inner = np.abs(u * a**ell + v) + np.abs(u) * (1 - r**ell)
    else:
        # stationary non-causal solution: Z_t = -sum_{j>=1} a^{-j} eps_{t+j}
        r = 1 / abs(a)
        base = delta * r / (1 - r)
        inner = np.abs(v * float(a) ** (-ell) + u) + np.abs(v) * (1 - r**ell)
    return np.exp(-base * inner) - np.exp(-base * (np.abs(u) + np.abs(v)))


def _coeff_gauss(gamma0: float, gamma_ell: float, u, v):
    """C_ell of a stationary Gaussian pair with Var = gamma0, Cov = gamma_ell."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return np.exp(-0.5 * gamma0 * (u**2 + v**2)) * np.expm1(-u * v * gamma_ell)


def _cpow(z, alpha: float):
    """Principal-branch z^alpha with 0^alpha = 0, vectorized."""
    z = np.asarray(z, dtype=np.complex128)
    out = np.zeros_like(z)
    nz = z != 0
    out[nz] = np.exp(alpha * np.log(z[nz]))
    return out


def _coeff_inma1(delta: float, alpha: float, p: float, ell: int, u, v):
    """C_ell for the INMA(1); support |ell| <= 1."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    eiu = np.exp(1j * u)
    eiv = np.exp(1j * v)
    au = _cpow(1 - eiu, alpha)
    av = _cpow(1 - eiv, alpha)
    s = 1 + p**alpha
    prod = np.exp(-delta * s * (au + av))
    if ell == 0:
        # e^{i(u+v)} from the real sum: u + v = 0 must cancel exactly, a
        # complex product would leave ~1e-16 that (.)^alpha blows up to 1e-7
        return np.exp(-delta * s * _cpow(1 - np.exp(1j * (u + v)), alpha)) - prod
    if ell == 1:
        # Z_{t+1}, Z_t share eps_t: thinned into Z_{t+1}, direct in Z_t
        cross = _cpow(1 - eiv * (1 - p + p * eiu), alpha)
        return np.exp(-delta * (au + p**alpha * av + cross)) - prod
    return np.zeros(np.broadcast(u, v).shape, dtype=np.complex128)


def _coeff_inar1(delta: float, alpha: float, p: float, ell: int, u, v):
    """C_ell for the INAR(1), ell >= 0; marginal is DS(delta/(1-p^alpha), alpha).

    From the joint pgf: E[x^{Z_{t+ell}} y^{Z_t}] =
    exp{-c [(1-x)^alpha (1 - p^{alpha ell}) + (1 - y(1 - p^ell + p^ell x))^alpha]}
    with c = delta / (1 - p^alpha); ell = 0 collapses to the marginal at x y.
    """
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    eiu = np.exp(1j * u)
    eiv = np.exp(1j * v)
    au = _cpow(1 - eiu, alpha)
    av = _cpow(1 - eiv, alpha)
    c = delta / (1 - p**alpha)
    if ell == 0:
        # marginal at xy, with e^{i(u+v)} formed from the real sum so the
        # u = -v diagonal cancels exactly before the fractional power
        joint = _cpow(1 - np.exp(1j * (u + v)), alpha)
    else:
        pl = p**ell
        joint = au * (1 - p ** (alpha * ell)) + _cpow(
            1 - eiv * (1 - pl + pl * eiu), alpha
        )
    return np.exp(-c * joint) - np.exp(-c * (au + av))


def _coeff_nonneg_ell(model: ModelSpec, ell: int, u, v):
    """C_ell(u, v) for ell >= 0, vectorized over broadcastable u, v."""
    out = _coeff_nonneg_ell_raw(model, ell, u, v)
    # Cov(e^{i0Z}, .) = Cov(., e^{i0Z}) = 0 exactly: force the zero slices,
    # which float summation order would otherwise miss by ~1e-17
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    zero = (u == 0) | (v == 0)
    if np.any(zero):
        out = np.where(zero, 0.0, out)
    return out


def _coeff_nonneg_ell_raw(model: ModelSpec, ell: int, u, v):
    fam = model.family
    th = model.theta
    if fam == "cauchy_ma1":
        a, delta = th
        return linear_cauchy_coeff(np.array([1.0, -1.0 / a]), delta, ell, u, v)
    if fam == "cauchy_ma_gen":
        return linear_cauchy_coeff(ma_gen_psi(model), th[-1], ell, u, v)
    if fam == "cauchy_ar1":
        a, delta = th
        return _coeff_cauchy_ar1(a, delta, ell, u, v)
    if fam == "gauss_ma1":
        a, sigma2 = th
        gamma0 = sigma2 * (1 + a**-2)
        gamma_ell = {0: gamma0, 1: -sigma2 / a}.get(ell, 0.0)
        return _coeff_gauss(gamma0, gamma_ell, u, v)
    if fam == "gauss_ar1":
        a, sigma2 = th
        gamma0 = sigma2 / (1 - a**2)
        return _coeff_gauss(gamma0, gamma0 * a**ell, u, v)
    if fam == "inma1":
        return _coeff_inma1(*th, ell, u, v)
    if fam == "inar1":
        return _coeff_inar1(*th, ell, u, v)
    raise AssertionError(f"unhandled family {fam}")


def fourier_coeff(model: ModelSpec, ell: int, u, v):
    """C_ell(u, v) = Cov(e^{i u Z_{t+ell}}, e^{-i v Z_t}) in closed form.

    Negative orders via C_{-ell}(u, v) = C_ell(v, u). Complex in general;
    real for the Cauchy and Gaussian families. Accepts scalar or array u/v.
    """
    ell = int(ell)
    if ell < 0:
        out = _coeff_nonneg_ell(model, -ell, v, u)
    else:
        out = _coeff_nonneg_ell(model, ell, u, v)
    out = np.asarray(out, dtype=np.complex128)
    return out if out.shape else complex(out)


def coeff_tensor(model: ModelSpec, u_points: np.ndarray) -> np.ndarray:
    """C_ell(u_i, u_k) for ell = 0..fourier_support, shape (s+1, M, M)."""
    u = np.asarray(u_points, dtype=np.float64)
    s = fourier_support(model)
    if model.family == "inar1" and _fast.HAVE_NUMBA:
        # hot path of the block-resampling tests; equal to the generic
        # route within rounding (see tests)
        return _fast.tensor_inar1(*model.theta, u, s)
    return _coeff_tensor_generic(model, u)


def _coeff_tensor_generic(model: ModelSpec, u_points: np.ndarray) -> np.ndarray:
    u = np.asarray(u_points, dtype=np.float64)
    uu = u[:, None]
    vv = u[None, :]
    s = fourier_support(model)
    out = np.empty((s + 1, u.size, u.size), dtype=np.complex128)
    for ell in range(s + 1):
        out[ell] = _coeff_nonneg_ell(model, ell, uu, vv)
    return out


def eval_spectrum(model: ModelSpec, lam, u, v):
    """f(lambda; u, v) = (1/2pi) sum_{|ell| <= support} C_ell(u, v) e^{-i ell lambda}.

    Exact for MA-type families (finite support); truncated at lmax for
    AR-type ones. lam, u, v broadcast.
    """
    lam = np.asarray(lam, dtype=np.float64)
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    shape = np.broadcast(lam, u, v).shape
    total = np.zeros(shape, dtype=np.complex128)
    s = fourier_support(model)
    for ell in range(-s, s + 1):
        c = fourier_coeff(model, ell, u, v)
        total = total + np.asarray(c) * np.exp(-1j * ell * lam)
    out = total / (2 * np.pi)
    return out if out.shape else complex(out)


def inar_marginal(delta: float, alpha: float, p: float) -> tuple:
    """Marginal law of a stationary INAR(1): DS(delta / (1 - p^alpha), alpha)."""
    if not (delta > 0) or not (0 < alpha <= 1):
        raise ValueError("need delta > 0 and alpha in (0, 1]")
    if not (0 <= p < 1):
        raise ValueError(f"p must lie in [0, 1), got {p}")
    return (delta / (1 - p**alpha), alpha)


@dataclass(frozen=True)
class QuadSpec:
    """Quadrature lattice: (u, v) box half-width L, resolutions in lambda/uv."""

    L: float
    n_lambda: int
    n_uv: int

    def __post_init__(self) -> None:
        if not (self.L > 0):
            raise ValueError(f"L must be positive, got {self.L}")
        if self.n_lambda < 8 or self.n_uv < 8:
            raise ValueError("n_lambda and n_uv must both be >= 8")


def _quad_lattices(quad: QuadSpec):
    # mirrors the estimator grid geometry in u: u_i = -L + 2Li/M, i = 1..M;
    # the lambda rule is the full equispaced lattice on [0, 2pi), which is
    # exact for trigonometric polynomials of degree < n_lambda
    M = quad.n_uv
    u = -quad.L + 2 * quad.L * np.arange(1, M + 1) / M
    lam = 2 * np.pi * np.arange(quad.n_lambda) / quad.n_lambda
    du = 2 * quad.L / M
    dlam = 2 * np.pi / quad.n_lambda
    return lam, u, du, dlam


def _spectrum_fn(model_or_fn):
    if isinstance(model_or_fn, ModelSpec):
        return lambda lam, u, v: eval_spectrum(model_or_fn, lam, u, v)
    if callable(model_or_fn):
        return model_or_fn
    raise TypeError("expected a ModelSpec or a callable spectrum(lambda, u, v)")


def spectrum_lattice(model: ModelSpec, lam: np.ndarray, u_points: np.ndarray) -> np.ndarray:
    """f(lambda_j; u_i, u_k) on the full lattice, shape (len(lam), M, M)."""
    coeffs = coeff_tensor(model, u_points)
    s = coeffs.shape[0] - 1
    lam = np.asarray(lam, dtype=np.float64)
    out = np.zeros((lam.size,) + coeffs.shape[1:], dtype=np.complex128)
    for ell in range(-s, s + 1):
        c = coeffs[ell] if ell >= 0 else coeffs[-ell].T
        out += c[None, :, :] * np.exp(-1j * ell * lam)[:, None, None]
    return out / (2 * np.pi)


def _lattice_values(model_or_fn, lam: np.ndarray, u: np.ndarray) -> np.ndarray:
    if isinstance(model_or_fn, ModelSpec):
        return spectrum_lattice(model_or_fn, lam, u)
    f = _spectrum_fn(model_or_fn)
    return np.asarray(f(lam[:, None, None], u[None, :, None], u[None, None, :]))


def divergence_D(model_a, model_b, quad: QuadSpec) -> float:
    """Riemann quadrature of the L2 divergence
    int_0^{2pi} int_{-L}^{L} int_{-L}^{L} |f_a - f_b|^2 du dv dlambda.
    """
    lam, u, du, dlam = _quad_lattices(quad)
    diff = _lattice_values(model_a, lam, u) - _lattice_values(model_b, lam, u)
    return float(np.sum(np.abs(diff) ** 2) * du * du * dlam)


def bias_term(model_or_fn, quad: QuadSpec) -> float:
    """Quadrature of the diagonal-slice bias integral
    int_0^{2pi} (int f(lambda; u, -u) du) (int f(-lambda; v, -v) dv) dlambda.
    """
    f = _spectrum_fn(model_or_fn)
    lam, u, du, dlam = _quad_lattices(quad)
    ll = lam[:, None]
    uu = u[None, :]
    g_pos = np.asarray(f(ll, uu, -uu)).real.sum(axis=1) * du
    g_neg = np.asarray(f(-ll, uu, -uu)).real.sum(axis=1) * du
    return float(np.sum(g_pos * g_neg) * dlam)
