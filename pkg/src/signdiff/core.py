"""Medium parameters, grids, initial data and shared numeric plumbing."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate, linalg


class ConfigurationError(ValueError):
    """Raised for inadmissible physical or discretization parameters."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature failed to reach the requested tolerance."""

    def __init__(self, message: str, estimate: float, error: float):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


@dataclass(frozen=True)
class MediumParams:
    """Two-phase medium: conductivity ``k`` on (-a, 0) and 1 on (0, a).

    ``beta`` is the skewness of the associated (pseudo) skew Brownian motion
    and ``alpha`` the (pseudo) probability of a rightward step at the
    interface. ``a`` may be ``math.inf`` for the whole-line kernels.
    """

    k: float
    beta: float
    alpha: float
    a: float

    @property
    def bounded(self) -> bool:
        return math.isfinite(self.a)

    @property
    def signed(self) -> bool:
        """True when the kernels are signed (k < 0)."""
        return self.k < 0


def derive_params(k: float, a: float = 1.0) -> MediumParams:
    k = float(k)
    a = float(a)
    if not math.isfinite(k):
        raise ConfigurationError(f"k must be finite, got {k}")
    if k == 0.0:
        raise ConfigurationError("k = 0 gives a degenerate medium")
    if k == -1.0:
        raise ConfigurationError("k = -1 is excluded (critical contrast)")
    if not a > 0:
        raise ConfigurationError(f"half-width a must be positive, got {a}")
    beta = (1.0 - k) / (1.0 + k)
    alpha = 1.0 / (1.0 + k)
    return MediumParams(k=k, beta=beta, alpha=alpha, a=a)


def conductivity(x, params: MediumParams):
    """A(x): k on x < 0 and 1 on x >= 0."""
    return np.where(np.asarray(x) < 0, params.k, 1.0)


@dataclass(frozen=True)
class Grid:
    """Uniform grid x_j = j h on [-a, a] with 0 and +-a as exact nodes."""

    n_half: int
    h: float
    a: float

    def __post_init__(self):
        if self.n_half < 1:
            raise ConfigurationError("grid needs at least one cell per half-interval")
        if not self.h > 0:
            raise ConfigurationError("grid spacing must be positive")

    @classmethod
    def from_half_width(cls, a: float, n_half: int) -> Grid:
        if n_half < 1:
            raise ConfigurationError("grid needs at least one cell per half-interval")
        return cls(n_half=int(n_half), h=a / n_half, a=float(a))

    @classmethod
    def from_spacing(cls, a: float, h: float, rtol: float = 1e-9) -> Grid:
        ratio = a / h
        n_half = round(ratio)
        if n_half < 1 or abs(ratio - n_half) > rtol * max(1.0, ratio):
            raise ConfigurationError(f"a/h = {ratio!r} must be a positive integer")
        return cls.from_half_width(a, n_half)

    @property
    def nodes(self) -> np.ndarray:
        half = np.arange(1, self.n_half + 1) * self.h
        half[-1] = self.a
        return np.concatenate([-half[::-1], [0.0], half])

    @property
    def size(self) -> int:
        return 2 * self.n_half + 1

    @property
    def center(self) -> int:
        """Array index of the interface node x = 0."""
        return self.n_half


@dataclass(frozen=True)
class InitialCondition:
    """Initial datum u0 with its one-sided limits at the interface.

    ``left_part`` and ``right_part`` follow the convention u0^- = u0 1_{x<0}
    and u0^+ = u0 1_{x>=0}.
    """

    kind: str
    evaluator: Callable[[np.ndarray], np.ndarray]
    left_limit: float
    right_limit: float
    breakpoints: tuple[float, ...] = ()
    samples: tuple[tuple[float, ...], tuple[float, ...]] | None = field(default=None, repr=False)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return np.asarray(self.evaluator(x), dtype=float) * np.ones_like(x)

    def left_part(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x < 0, self(x), 0.0)

    def right_part(self, x):
        x = np.asarray(x, dtype=float)
        return np.where(x >= 0, self(x), 0.0)

    @property
    def continuous_at_zero(self) -> bool:
        return self.left_limit == self.right_limit


def _poly1(x):
    return (10 * x**3 - 3 * x**2 - 9 * x + 4) / 2


def _step2(x):
    return np.where(x < 0, 1.0, 0.0) - 0.5


def poly_example1() -> InitialCondition:
    return InitialCondition("poly-example1", _poly1, left_limit=2.0, right_limit=2.0)


def step_example2() -> InitialCondition:
    return InitialCondition("step-example2", _step2, left_limit=0.5, right_limit=-0.5)


def tabulated(xs, us) -> InitialCondition:
    """Piecewise-linear interpolant of samples, constant beyond the end samples."""
    xs = np.asarray(xs, dtype=float)
    us = np.asarray(us, dtype=float)
    if xs.ndim != 1 or xs.shape != us.shape or xs.size < 2:
        raise ConfigurationError("tabulated datum needs matching 1D arrays of >= 2 samples")
    order = np.argsort(xs)
    xs, us = xs[order], us[order]
    if np.any(np.diff(xs) <= 0):
        raise ConfigurationError("tabulated sample positions must be distinct")

    def evaluator(x):
        return np.interp(x, xs, us)

    u_at_zero = float(np.interp(0.0, xs, us))
    return InitialCondition(
        "tabulated",
        evaluator,
        left_limit=u_at_zero,
        right_limit=u_at_zero,
        breakpoints=tuple(float(v) for v in xs),
        samples=(tuple(xs), tuple(us)),
    )


def from_function(func: Callable, left_limit: float | None = None,
                  right_limit: float | None = None) -> InitialCondition:
    """Wrap an arbitrary vectorized callable (assumed continuous unless limits are given)."""
    u_at_zero = float(np.asarray(func(np.array([0.0])))[0])
    return InitialCondition(
        "function",
        func,
        left_limit=u_at_zero if left_limit is None else float(left_limit),
        right_limit=u_at_zero if right_limit is None else float(right_limit),
    )


def load_initial_condition(spec: str) -> InitialCondition:
    """Resolve a built-in name or a two-column (x, u) text/CSV file."""
    if spec == "poly-example1":
        return poly_example1()
    if spec == "step-example2":
        return step_example2()
    try:
        data = np.loadtxt(spec, delimiter=",", ndmin=2, comments="#")
    except ValueError:
        data = np.loadtxt(spec, delimiter=",", ndmin=2, skiprows=1)
    except OSError as exc:
        raise ConfigurationError(f"cannot read initial condition file {spec!r}: {exc}") from exc
    if data.shape[1] != 2:
        raise ConfigurationError(f"{spec!r}: expected two columns x,u")
    return tabulated(data[:, 0], data[:, 1])


@dataclass(frozen=True)
class SolutionField:
    """Snapshot u(t, .) on a grid, tagged with the scheme that produced it."""

    t: float
    grid: Grid
    values: np.ndarray
    scheme: str

    @property
    def nodes(self) -> np.ndarray:
        return self.grid.nodes

    def at(self, x):
        """Values at arbitrary points; exact at nodes, linear in between."""
        return np.interp(x, self.nodes, self.values)

    def interior(self):
        return self.nodes[1:-1], self.values[1:-1]


def quadrature(f: Callable[[float], float], lo: float, hi: float, tol: float = 1e-12,
               limit: int = 200) -> float:
    """Adaptive Gauss-Kronrod integral of ``f`` over [lo, hi].

    The panel is split at 0 when it lies inside (lo, hi) since both the
    conductivity and the step datum jump there.
    """
    if not lo < hi:
        raise ValueError(f"need lo < hi, got [{lo}, {hi}]")
    pieces = [lo, 0.0, hi] if lo < 0.0 < hi else [lo, hi]
    total = 0.0
    err_total = 0.0
    failed = False
    for left, right in zip(pieces[:-1], pieces[1:]):
        with warnings.catch_warnings():
            warnings.simplefilter("error", integrate.IntegrationWarning)
            try:
                value, err = integrate.quad(f, left, right, epsabs=tol, epsrel=0.0, limit=limit)
            except integrate.IntegrationWarning:
                warnings.simplefilter("ignore", integrate.IntegrationWarning)
                value, err = integrate.quad(f, left, right, epsabs=tol, epsrel=0.0, limit=limit)
                failed = True
        total += value
        err_total += err
    if failed:
        raise QuadratureError("adaptive quadrature did not converge", total, err_total)
    return total


def tridiag_solve(lower, diag, upper, rhs) -> np.ndarray:
    """Solve a tridiagonal system.

    ``lower`` and ``upper`` have length ``len(diag) - 1``. ``rhs`` may carry
    extra trailing columns for several right-hand sides.
    """
    lower = np.asarray(lower, dtype=float)
    diag = np.asarray(diag, dtype=float)
    upper = np.asarray(upper, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    n = diag.size
    if diag.ndim != 1 or lower.shape != (n - 1,) or upper.shape != (n - 1,):
        raise ValueError(
            f"band lengths mismatch: lower={lower.shape}, diag={diag.shape}, upper={upper.shape}"
        )
    if rhs.shape[0] != n:
        raise ValueError(f"rhs has {rhs.shape[0]} rows, system has {n}")
    if n == 0:
        return rhs.copy()
    bands = np.zeros((3, n))
    bands[0, 1:] = upper
    bands[1] = diag
    bands[2, :-1] = lower
    try:
        return linalg.solve_banded((1, 1), bands, rhs, check_finite=True)
    except linalg.LinAlgError as exc:
        raise ZeroDivisionError(f"zero pivot in tridiagonal solve: {exc}") from exc
