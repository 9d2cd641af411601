"""Eigenfunction expansion of the semigroup (spectral scheme)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError, Grid, InitialCondition, MediumParams, SolutionField

# Gauss-Legendre points per panel and minimum panels per oscillation period.
_GL_ORDER = 10
_PANELS_PER_PERIOD = 8


@dataclass(frozen=True)
class SpectralExpansion:
    """Coefficients of u0 on the (f_n, g_n) basis, n = 1..order."""

    order: int
    a_coeffs: np.ndarray
    b_coeffs: np.ndarray
    lambdas: np.ndarray
    mus: np.ndarray
    params: MediumParams

    def evaluate(self, t: float, x) -> np.ndarray:
        n = np.arange(1, self.order + 1)
        xe = np.asarray(x, dtype=float)[..., None]
        even = self.a_coeffs * np.exp(-0.5 * self.lambdas**2 * t) * eigenfunction_f(n, xe, self.params)
        odd = self.b_coeffs * np.exp(-0.5 * self.mus**2 * t) * eigenfunction_g(n, xe, self.params)
        return (even + odd).sum(axis=-1)

    def advanced(self, t: float) -> SpectralExpansion:
        """Coefficients of the solution at time t (semigroup action)."""
        return SpectralExpansion(
            self.order,
            self.a_coeffs * np.exp(-0.5 * self.lambdas**2 * t),
            self.b_coeffs * np.exp(-0.5 * self.mus**2 * t),
            self.lambdas,
            self.mus,
            self.params,
        )


def eigenvalues(n, a: float):
    """(lambda_n, mu_n) = ((2n - 1) pi / 2a, n pi / a)."""
    n = np.asarray(n)
    return (2 * n - 1) * math.pi / (2.0 * a), n * math.pi / a


def eigenfunction_f(n, x, params: MediumParams):
    lam, _ = eigenvalues(n, params.a)
    return np.cos(lam * np.asarray(x, dtype=float))


def eigenfunction_g(n, x, params: MediumParams):
    _, mu = eigenvalues(n, params.a)
    x = np.asarray(x, dtype=float)
    return np.where(x > 0, params.k, 1.0) * np.sin(mu * x)


def dispersion(lam, params: MediumParams):
    """sin(2 lambda a)(k + 1); vanishes on both eigenvalue families."""
    return np.sin(2.0 * np.asarray(lam) * params.a) * (params.k + 1.0)


def norm_f(params: MediumParams) -> float:
    """Integral of A f_n^2 over (-a, a)."""
    return params.a * (params.k + 1.0) / 2.0


def norm_g(params: MediumParams) -> float:
    """Integral of A g_n^2 over (-a, a)."""
    return params.a * params.k * (params.k + 1.0) / 2.0


def _composite_gauss_legendre(breaks, n_panels: int):
    """Nodes and weights over consecutive intervals given by ``breaks``."""
    breaks = np.asarray(breaks, dtype=float)
    span = breaks[-1] - breaks[0]
    ref_x, ref_w = np.polynomial.legendre.leggauss(_GL_ORDER)
    nodes, weights = [], []
    for left, right in zip(breaks[:-1], breaks[1:]):
        if right <= left:
            continue
        panels = max(1, math.ceil(n_panels * (right - left) / span))
        edges = np.linspace(left, right, panels + 1)
        half = 0.5 * np.diff(edges)[:, None]
        mid = 0.5 * (edges[:-1] + edges[1:])[:, None]
        nodes.append((mid + half * ref_x).ravel())
        weights.append((half * ref_w).ravel())
    return np.concatenate(nodes), np.concatenate(weights)


def _coefficients_by_quadrature(u0: InitialCondition, order: int, params: MediumParams):
    a = params.a
    n = np.arange(1, order + 1)
    lam, mu = eigenvalues(n, a)
    periods = mu[-1] * a / (2.0 * math.pi)
    n_panels = max(16, _PANELS_PER_PERIOD * math.ceil(periods))
    coeff_f = np.zeros(order)
    coeff_g = np.zeros(order)
    for lo, hi, weight in ((-a, 0.0, params.k), (0.0, a, 1.0)):
        inner = [b for b in u0.breakpoints if lo < b < hi]
        x, w = _composite_gauss_legendre([lo, *sorted(inner), hi], n_panels)
        # Gauss points never touch the panel ends, so u0 is sampled from the correct side of 0.
        wu = weight * w * u0(x)
        coeff_f += np.cos(np.outer(x, lam)).T @ wu
        coeff_g += (eigenfunction_g(n[None, :], x[:, None], params)).T @ wu
    return coeff_f / norm_f(params), coeff_g / norm_g(params)


def _closed_form_example1(order: int, params: MediumParams):
    if params.a != 1.0:
        raise ConfigurationError("the closed-form poly-example1 coefficients assume a = 1")
    k = params.k
    n = np.arange(1, order + 1, dtype=float)
    pi = math.pi
    half = n - 0.5
    sign = (-1.0) ** n
    denom = (2 * n - 1) ** 4 * pi**4
    integral_f = (k / denom) * (-528 * half * pi * sign - 480 - 72 * half**2 * pi**2) + (
        1.0 / denom
    ) * (-528 * pi * (half**2 * pi**2 / 33 - 9.0 / 11.0) * half * sign + 480 + 72 * half**2 * pi**2)
    integral_g = -k * sign * (pi**2 * n**2 - 60) / (pi**3 * n**3)
    return integral_f / norm_f(params), integral_g / norm_g(params)


def _closed_form_example2(order: int, params: MediumParams):
    k = params.k
    n = np.arange(1, order + 1, dtype=float)
    a_n = -((-1.0) ** n) * 2.0 * (k - 1.0) / ((2 * n - 1) * math.pi * (k + 1.0))
    # Sign fixed by direct integration: u0 = +1/2 on I- where g_n = sin(n pi x / a) < 0 for n = 1.
    b_n = -4.0 / (n * math.pi * (k + 1.0)) * (n % 2 == 1)
    return a_n, b_n


_CLOSED_FORMS = {
    "poly-example1": _closed_form_example1,
    "step-example2": _closed_form_example2,
}


def compute_coefficients(u0: InitialCondition, order: int, params: MediumParams,
                         mode: str | None = None) -> SpectralExpansion:
    """Expand ``u0`` on the eigenbasis.

    ``mode`` is "closed-form", "quadrature", or None to prefer the closed
    form when one exists for ``u0.kind``.
    """
    if order < 1:
        raise ConfigurationError("spectral order must be >= 1")
    if not params.bounded:
        raise ConfigurationError("spectral expansion needs a finite half-width")
    if mode is None:
        mode = "closed-form" if u0.kind in _CLOSED_FORMS and (
            u0.kind != "poly-example1" or params.a == 1.0) else "quadrature"
    if mode == "closed-form":
        if u0.kind not in _CLOSED_FORMS:
            raise ConfigurationError(f"no closed-form coefficients for datum kind {u0.kind!r}")
        a_n, b_n = _CLOSED_FORMS[u0.kind](order, params)
    elif mode == "quadrature":
        a_n, b_n = _coefficients_by_quadrature(u0, order, params)
    else:
        raise ConfigurationError(f"unknown coefficient mode {mode!r}")
    lam, mu = eigenvalues(np.arange(1, order + 1), params.a)
    return SpectralExpansion(order, np.asarray(a_n), np.asarray(b_n), lam, mu, params)


def solve_spectral(u0: InitialCondition, t: float, order: int, params: MediumParams,
                   grid: Grid, mode: str | None = None,
                   expansion: SpectralExpansion | None = None) -> SolutionField:
    if t < 0:
        raise ConfigurationError("t must be >= 0")
    if expansion is None:
        expansion = compute_coefficients(u0, order, params, mode)
    values = expansion.evaluate(t, grid.nodes)
    # Every basis function vanishes at +-a; remove the rounding residue.
    values[0] = values[-1] = 0.0
    return SolutionField(t=float(t), grid=grid, values=values, scheme="spectral")
