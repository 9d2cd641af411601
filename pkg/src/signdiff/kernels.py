"""Transition kernels of (pseudo) skew Brownian motion and its killed variants.

All kernels broadcast over array arguments ``x`` and ``y``. Values may be
negative when ``k < 0``: the kernels then define signed measures of total
mass one (whole line) rather than probability densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import MediumParams, quadrature

@dataclass(frozen=True)
class KernelSeriesConfig:
    """Truncation controls for image and eigenfunction series.

    ``n_images`` is a floor: the image window is widened until the first
    omitted Gaussian falls below ``tail_tol``.
    """

    n_images: int = 2
    n_modes: int = 200
    tail_tol: float = 1e-14

    def __post_init__(self):
        if self.n_images < 1 or self.n_modes < 1:
            raise ValueError("truncation orders must be positive")
        if not self.tail_tol > 0:
            raise ValueError("tail_tol must be positive")


DEFAULT_SERIES = KernelSeriesConfig()


def _check_time(t):
    if not np.all(np.asarray(t) > 0):
        raise ValueError(f"kernels need t > 0, got {t!r}")


def gauss(t, x, y):
    """Density of N(x, t) at y."""
    _check_time(t)
    d = np.asarray(y, dtype=float) - np.asarray(x, dtype=float)
    return np.exp(-d * d / (2.0 * t)) / np.sqrt(2.0 * np.pi * t)


def gauss_derivs(t, x, y):
    """First and second x-derivatives of ``gauss``."""
    g = gauss(t, x, y)
    r = (np.asarray(y, dtype=float) - np.asarray(x, dtype=float)) / t
    return r * g, (r * r - 1.0 / t) * g


def _image_window(t: float, length: float, cfg: KernelSeriesConfig) -> int:
    # Every term with |n| >= N + 1 sits at distance >= 2 N L from x.
    # Choose N so that the largest omitted Gaussian is below tail_tol; the
    # remaining tail decays faster than geometrically.
    peak = 1.0 / math.sqrt(2.0 * math.pi * t)
    if peak <= cfg.tail_tol:
        return cfg.n_images
    reach = math.sqrt(2.0 * t * math.log(peak / cfg.tail_tol))
    return max(cfg.n_images, math.ceil(reach / (2.0 * length)) + 1)


def _killed_series(t, x, y, b, c, cfg, derivative=False):
    length = c - b
    n_win = _image_window(float(np.max(t)), length, cfg)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    total = np.zeros(np.broadcast(x, y).shape)
    for n in range(-n_win, n_win + 1):
        shift = 2.0 * n * length
        direct = y - shift
        mirror = 2.0 * b - y - shift
        if derivative:
            total += ((direct - x) * gauss(t, x, direct) - (mirror - x) * gauss(t, x, mirror)) / t
        else:
            total += gauss(t, x, direct) - gauss(t, x, mirror)
    return total


def _check_inside(name, v, b, c):
    v = np.asarray(v, dtype=float)
    if np.any(v < b) or np.any(v > c):
        raise ValueError(f"{name} must lie in [{b}, {c}]")


def killed_bm(t, x, y, b: float, c: float, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """Brownian transition density killed on exiting (b, c), by images.

    Endpoints are accepted and return the boundary limit 0.
    """
    _check_time(t)
    if not b < c:
        raise ValueError("need b < c")
    _check_inside("x", x, b, c)
    _check_inside("y", y, b, c)
    return _killed_series(t, x, y, b, c, cfg)


def killed_bm_dx(t, x, y, b: float, c: float, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """x-derivative of ``killed_bm`` by term-wise differentiation of the image sum."""
    _check_time(t)
    _check_inside("x", x, b, c)
    _check_inside("y", y, b, c)
    return _killed_series(t, x, y, b, c, cfg, derivative=True)


def killed_bm_spectral(t, x, y, b: float, c: float, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """Same kernel as ``killed_bm`` from its Dirichlet sine expansion."""
    _check_time(t)
    _check_inside("x", x, b, c)
    _check_inside("y", y, b, c)
    length = c - b
    n = np.arange(1, cfg.n_modes + 1)
    x = np.asarray(x, dtype=float)[..., None]
    y = np.asarray(y, dtype=float)[..., None]
    w = n * math.pi / length
    terms = np.exp(-0.5 * w * w * t) * np.sin(w * (x - b)) * np.sin(w * (y - b))
    return 2.0 / length * terms.sum(axis=-1)


def halfline_kernels(t, x, y):
    """Reflected and killed Brownian kernels on the half-line (0, inf)."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if np.any(x < 0) or np.any(y < 0):
        raise ValueError("half-line kernels need x >= 0 and y >= 0")
    direct = gauss(t, x, y)
    mirror = gauss(t, x, -y)
    return direct + mirror, direct - mirror


def walsh_sbm(t, x, y, params: MediumParams):
    """Walsh's four-branch kernel of the (pseudo) skew Brownian motion on R.

    y = 0 is assigned to the y > 0 rows.
    """
    if params.bounded:
        raise ValueError("walsh_sbm is the whole-line kernel; use params with a = inf")
    _check_time(t)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    beta = params.beta
    g = gauss(t, x, y)
    g_mirror = gauss(t, x, -y)
    y_pos = y >= 0
    out = np.where(
        y_pos,
        np.where(x > 0, g + beta * g_mirror, (1.0 + beta) * g),
        np.where(x >= 0, (1.0 - beta) * g, g - beta * g_mirror),
    )
    return out[()] if out.ndim == 0 else out


def walsh_sbm_dx(t, x, y, params: MediumParams):
    """Analytic x-derivative of ``walsh_sbm`` (one-sided at x = 0 per branch row)."""
    if params.bounded:
        raise ValueError("walsh_sbm is the whole-line kernel; use params with a = inf")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    beta = params.beta
    dg, _ = gauss_derivs(t, x, y)
    dg_mirror, _ = gauss_derivs(t, x, -y)
    y_pos = y >= 0
    out = np.where(
        y_pos,
        np.where(x > 0, dg + beta * dg_mirror, (1.0 + beta) * dg),
        np.where(x >= 0, (1.0 - beta) * dg, dg - beta * dg_mirror),
    )
    return out[()] if out.ndim == 0 else out


def _killed_sbm_rows(t, x, y, params, cfg, series):
    a = params.a
    beta = params.beta
    x, y = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(y, dtype=float))
    whole = series(t, x, y, -a, a, cfg)
    # The half-interval series are only evaluated where their branch is used.
    right = np.zeros_like(whole)
    left = np.zeros_like(whole)
    both_pos = (x > 0) & (y >= 0)
    both_neg = (x < 0) & (y < 0)
    if np.any(both_pos):
        right[both_pos] = series(t, x[both_pos], y[both_pos], 0.0, a, cfg)
    if np.any(both_neg):
        left[both_neg] = series(t, x[both_neg], y[both_neg], -a, 0.0, cfg)
    out = np.where(
        y >= 0,
        np.where(x > 0, -beta * right + (1.0 + beta) * whole, (1.0 + beta) * whole),
        np.where(x >= 0, (1.0 - beta) * whole, beta * left + (1.0 - beta) * whole),
    )
    return out[()] if out.ndim == 0 else out


def killed_sbm(t, x, y, params: MediumParams, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """Fundamental solution on (-a, a): the skew BM kernel killed at +-a.

    Combines killed Brownian kernels on (-a, a), (0, a) and (-a, 0) with
    weights (1 +- beta, -+beta). For k < 0 this is a signed kernel.
    """
    if not params.bounded:
        raise ValueError("killed_sbm needs a finite half-width")
    _check_time(t)
    _check_inside("x", x, -params.a, params.a)
    _check_inside("y", y, -params.a, params.a)
    return _killed_sbm_rows(t, x, y, params, cfg, _killed_series)


def killed_sbm_dx(t, x, y, params: MediumParams, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """Analytic x-derivative of ``killed_sbm``; at x = 0 it is the one-sided
    derivative of the branch row that owns x = 0 (x >= 0 with y < 0, x <= 0
    with y >= 0)."""
    if not params.bounded:
        raise ValueError("killed_sbm needs a finite half-width")
    _check_time(t)
    _check_inside("x", x, -params.a, params.a)
    _check_inside("y", y, -params.a, params.a)

    def series(t_, x_, y_, b, c, cfg_):
        return _killed_series(t_, x_, y_, b, c, cfg_, derivative=True)

    return _killed_sbm_rows(t, x, y, params, cfg, series)


def interface_derivatives(t, y, params: MediumParams, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """One-sided x-derivatives of ``killed_sbm`` at x = 0- and x = 0+.

    Each side uses the branch row valid on that side, differentiated term by
    term. The transmission condition reads k * left == right.
    """
    if not params.bounded:
        raise ValueError("needs a finite half-width")
    _check_time(t)
    a, beta = params.a, params.beta
    y = np.asarray(y, dtype=float)
    _check_inside("y", y, -a, a)
    zero = np.zeros_like(y)
    whole = _killed_series(t, zero, y, -a, a, cfg, derivative=True)
    right_half = _killed_series(t, zero, np.clip(y, 0.0, a), 0.0, a, cfg, derivative=True)
    left_half = _killed_series(t, zero, np.clip(y, -a, 0.0), -a, 0.0, cfg, derivative=True)
    left = np.where(y >= 0, (1.0 + beta) * whole, beta * left_half + (1.0 - beta) * whole)
    right = np.where(y >= 0, -beta * right_half + (1.0 + beta) * whole, (1.0 - beta) * whole)
    return left, right


def spectral_kernel(t, x, y, params: MediumParams, cfg: KernelSeriesConfig = DEFAULT_SERIES):
    """Fundamental solution on (-a, a) from the eigenfunction expansion."""
    from .spectral import eigenfunction_f, eigenfunction_g, eigenvalues

    if not params.bounded:
        raise ValueError("spectral_kernel needs a finite half-width")
    _check_time(t)
    _check_inside("x", x, -params.a, params.a)
    _check_inside("y", y, -params.a, params.a)
    k, a = params.k, params.a
    n = np.arange(1, cfg.n_modes + 1)
    lam, mu = eigenvalues(n, a)
    xe = np.asarray(x, dtype=float)[..., None]
    ye = np.asarray(y, dtype=float)[..., None]
    even = (2.0 / (a * (k + 1.0))) * eigenfunction_f(n, xe, params) * eigenfunction_f(n, ye, params)
    odd = (2.0 / (a * k * (k + 1.0))) * eigenfunction_g(n, xe, params) * eigenfunction_g(n, ye, params)
    series = (even * np.exp(-0.5 * lam**2 * t) + odd * np.exp(-0.5 * mu**2 * t)).sum(axis=-1)
    a_y = np.where(np.asarray(y) < 0, k, 1.0)
    out = a_y * series
    return out[()] if np.ndim(out) == 0 else out


def _fourier_halfline(kernel_index: int, t: float, x: float, u: float,
                      cfg: KernelSeriesConfig) -> complex:
    # Integral over (0, inf) of exp(iuy) against the reflected (0) or killed (1) kernel.
    upper = 12.0 * math.sqrt(t) + abs(x)

    def re(y):
        return math.cos(u * y) * halfline_kernels(t, x, y)[kernel_index]

    def im(y):
        return math.sin(u * y) * halfline_kernels(t, x, y)[kernel_index]

    tol = min(1e-12, cfg.tail_tol * 100)
    return complex(quadrature(re, 0.0, upper, tol), quadrature(im, 0.0, upper, tol))


def psi_reflected(t: float, x: float, u: float, cfg: KernelSeriesConfig = DEFAULT_SERIES) -> complex:
    """Characteristic function of reflected Brownian motion at time t from x >= 0."""
    _check_time(t)
    return _fourier_halfline(0, t, x, u, cfg)


def psi_killed(t: float, x: float, u: float, cfg: KernelSeriesConfig = DEFAULT_SERIES) -> complex:
    """Fourier transform of the killed-at-zero kernel (mass < 1) from x >= 0."""
    _check_time(t)
    return _fourier_halfline(1, t, x, u, cfg)


def char_fn_H(t: float, x: float, u: float, gamma: float, gamma_prime: float,
              cfg: KernelSeriesConfig = DEFAULT_SERIES) -> complex:
    """Mixture of reflected/killed characteristic functions.

    With ``gamma = gamma_prime = alpha`` and x > 0 this is the characteristic
    function of the (pseudo) skew BM started at x.
    """
    if x < 0:
        raise ValueError("char_fn_H is defined for x >= 0")
    _check_time(t)
    hat_p = psi_reflected(t, x, u, cfg)
    hat_m = psi_reflected(t, x, -u, cfg)
    if x == 0:
        check_diff = 0.0
    else:
        check_diff = psi_killed(t, x, u, cfg) - psi_killed(t, x, -u, cfg)
    return gamma * hat_p + (1.0 - gamma) * hat_m + (1.0 - gamma_prime) * check_diff


def sbm_char_fn(t: float, x: float, u: float, params: MediumParams,
                cfg: KernelSeriesConfig = DEFAULT_SERIES) -> complex:
    """Characteristic function of the whole-line (pseudo) skew BM from any x."""
    alpha = params.alpha
    if x > 0:
        return char_fn_H(t, x, u, alpha, alpha, cfg)
    if x < 0:
        return char_fn_H(t, -x, -u, 1.0 - alpha, 1.0 - alpha, cfg)
    return alpha * psi_reflected(t, 0.0, u, cfg) + (1.0 - alpha) * psi_reflected(t, 0.0, -u, cfg)
