"""Executable invariant checks behind ``signdiff verify`` and the acceptance tests."""

from __future__ import annotations

import math
import time
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate

from .core import derive_params, load_initial_condition
from .fd_fund import interface_slopes, solve_fund
from .harness import TABLE1_PUBLISHED, compare_table1, sup_error
from .kernels import (
    char_fn_H,
    interface_derivatives,
    killed_bm_dx,
    killed_sbm,
    spectral_kernel,
    walsh_sbm,
)
from .pseudo_walk import (
    FREE,
    KILLED_AT_ZERO,
    WalkConfig,
    reflection_identities,
    solve_rw,
    walk_char_fn,
    walk_distribution,
    walk_enumerate,
)
from .spectral import compute_coefficients, solve_spectral

SUITES = ("kernels", "walk", "schemes")


@dataclass
class CheckResult:
    suite: str
    check: str
    measured: float
    tolerance: float
    passed: bool
    seconds: float = 0.0
    detail: str = ""

    def as_record(self) -> dict:
        return asdict(self)


def _result(suite, check, measured, tolerance, started, detail="", passed=None) -> CheckResult:
    measured = float(measured)
    if passed is None:
        passed = measured <= tolerance
    return CheckResult(suite, check, measured, tolerance, bool(passed), time.perf_counter() - started, detail)


def _interval(a: float, points: int):
    return np.linspace(-a, a, points + 2)[1:-1]


# ---- kernels ---------------------------------------------------------------

def kernel_equivalence(ks=(2.0, -0.5), times=(0.1, 0.4, 1.0)) -> float:
    """Max |spectral_kernel - killed_sbm| over a 7x7 interior grid."""
    pts = _interval(1.0, 7)
    x, y = np.meshgrid(pts, pts, indexing="ij")
    worst = 0.0
    for k in ks:
        params = derive_params(k, 1.0)
        for t in times:
            worst = max(worst, float(np.max(np.abs(spectral_kernel(t, x, y, params) - killed_sbm(t, x, y, params)))))
    return worst


def derivative_series_identity(times=(0.1, 0.4), a: float = 1.0) -> float:
    """Max gap between the half-interval slope at 0+ and twice the whole-interval slope at 0."""
    y = np.linspace(0.1, 0.9, 9) * a
    worst = 0.0
    for t in times:
        half = killed_bm_dx(t, 0.0, y, 0.0, a)
        whole = killed_bm_dx(t, 0.0, y, -a, a)
        worst = max(worst, float(np.max(np.abs(half - 2.0 * whole))))
    return worst


def _line_integral(f, centre: float, t: float) -> float:
    reach = 14.0 * math.sqrt(t) + abs(centre)
    cuts = sorted({-reach, 0.0, centre, reach})
    total = 0.0
    for lo, hi in zip(cuts[:-1], cuts[1:]):
        if hi > lo:
            total += integrate.quad(f, lo, hi, epsabs=1e-14, epsrel=1e-13, limit=200)[0]
    return total


def mass_defect(k: float = -0.5, xs=(-0.5, 0.0, 0.7), times=(0.2, 0.8)) -> float:
    params = derive_params(k, math.inf)
    worst = 0.0
    for t in times:
        for x in xs:
            mass = _line_integral(lambda y: walsh_sbm(t, x, y, params), x, t)
            worst = max(worst, abs(mass - 1.0))
    return worst


def chapman_kolmogorov(k: float = -0.5, s: float = 0.2, t: float = 0.2,
                       pairs=((-0.5, 0.3), (0.0, -0.4), (0.7, 0.7), (0.3, 0.0))) -> float:
    params = derive_params(k, math.inf)
    worst = 0.0
    for x, y in pairs:
        composed = _line_integral(lambda z: walsh_sbm(s, x, z, params) * walsh_sbm(t, z, y, params), x, s + t)
        worst = max(worst, abs(composed - walsh_sbm(s + t, x, y, params)))
    return worst


def heat_residual(k: float = -0.5, t: float = 0.3, dt: float = 2e-5, dx: float = 2e-4) -> float:
    """Central-difference residual of d/dt - (1/2) d2/dx2 away from 0 and +-a."""
    x = np.array([-0.6, -0.3, 0.25, 0.55])[:, None]
    y = np.array([-0.5, -0.1, 0.2, 0.6])[None, :]
    worst = 0.0
    for a in (math.inf, 1.0):
        params = derive_params(k, a)

        def kernel(t_, x_):
            return walsh_sbm(t_, x_, y, params) if a == math.inf else killed_sbm(t_, x_, y, params)

        d_t = (kernel(t + dt, x) - kernel(t - dt, x)) / (2 * dt)
        d_xx = (kernel(t, x + dx) - 2 * kernel(t, x) + kernel(t, x - dx)) / dx**2
        worst = max(worst, float(np.max(np.abs(d_t - 0.5 * d_xx))))
    return worst


def transmission_defect(k: float = -0.5, t: float = 0.3, step: float = 1e-3) -> float:
    """Relative defect of k * slope(0-) = slope(0+) using Richardson-extrapolated one-sided differences."""
    params = derive_params(k, 1.0)
    y = np.array([-0.7, -0.2, 0.0, 0.3, 0.8])

    def one_sided(sign, h):
        p0 = killed_sbm(t, 0.0, y, params)
        p1 = killed_sbm(t, sign * h, y, params)
        p2 = killed_sbm(t, sign * 2 * h, y, params)
        return sign * (-3 * p0 + 4 * p1 - p2) / (2 * h)

    def extrapolated(sign):
        return (4 * one_sided(sign, step / 2) - one_sided(sign, step)) / 3

    left, right = extrapolated(-1.0), extrapolated(1.0)
    # Both slopes vanish at y = 0, so the defect is taken relative to the largest slope.
    return float(np.max(np.abs(k * left - right)) / np.max(np.abs(right)))


def analytic_transmission_defect(ks=(2.0, -0.5), times=(0.1, 0.4)) -> float:
    y = np.linspace(-0.9, 0.9, 7)
    worst = 0.0
    for k in ks:
        params = derive_params(k, 1.0)
        for t in times:
            left, right = interface_derivatives(t, y, params)
            worst = max(worst, float(np.max(np.abs(k * left - right))))
    return worst


def continuity_defect(k: float = -0.5, t: float = 0.3, eps: float = 1e-10) -> float:
    params = derive_params(k, 1.0)
    y = np.linspace(-0.9, 0.9, 7)
    return float(np.max(np.abs(killed_sbm(t, -eps, y, params) - killed_sbm(t, eps, y, params))))


def dirichlet_defect(k: float = -0.5, times=(0.1, 0.5)) -> float:
    params = derive_params(k, 1.0)
    y = np.linspace(-0.9, 0.9, 7)
    worst = 0.0
    for t in times:
        for side in (-1.0, 1.0):
            worst = max(worst, float(np.max(np.abs(killed_sbm(t, side * params.a, y, params)))))
    return worst


def submass_range(k: float = 2.0, xs=(-0.5, 0.0, 0.4), t: float = 0.3) -> tuple[float, float]:
    params = derive_params(k, 1.0)
    masses = []
    for x in xs:
        f = lambda y: float(killed_sbm(t, x, y, params))  # noqa: E731
        masses.append(integrate.quad(f, -1.0, 0.0, epsabs=1e-13)[0] + integrate.quad(f, 0.0, 1.0, epsabs=1e-13)[0])
    return min(masses), max(masses)


def run_kernel_checks() -> list[CheckResult]:
    suite = "kernels"
    out = []
    start = time.perf_counter()
    out.append(_result(suite, "spectral-vs-images", kernel_equivalence(), 1e-8, start))
    start = time.perf_counter()
    out.append(_result(suite, "derivative-series-identity", derivative_series_identity(), 1e-8, start))
    start = time.perf_counter()
    out.append(_result(suite, "mass-one", mass_defect(), 1e-8, start))
    for k in (2.0, -0.5):
        start = time.perf_counter()
        out.append(_result(suite, f"chapman-kolmogorov[k={k:g}]", chapman_kolmogorov(k), 1e-6, start))
    start = time.perf_counter()
    out.append(_result(suite, "heat-residual", heat_residual(), 1e-6, start))
    start = time.perf_counter()
    out.append(_result(suite, "transmission-richardson", transmission_defect(), 1e-5, start))
    start = time.perf_counter()
    out.append(_result(suite, "transmission-analytic", analytic_transmission_defect(), 1e-8, start))
    start = time.perf_counter()
    out.append(_result(suite, "continuity-at-interface", continuity_defect(), 1e-6, start))
    start = time.perf_counter()
    out.append(_result(suite, "dirichlet", dirichlet_defect(), 1e-12, start))
    start = time.perf_counter()
    lo, hi = submass_range()
    out.append(_result(suite, "submass[k=2]", hi, 1.0 + 1e-10, start, f"min={lo:.6g}", passed=lo > 0 and hi <= 1 + 1e-10))
    return out


# ---- walk ------------------------------------------------------------------

def reflection_discrepancy(max_steps: int = 14, starts=(-3, 0, 2), alphas=(0.75, 2.0, -1.0)) -> float:
    worst = 0.0
    for steps in range(1, max_steps + 1):
        for start in starts:
            for alpha in alphas:
                for m in range(start - steps, start + steps + 1):
                    if m != 0:
                        worst = max(worst, reflection_identities(steps, m, start, alpha).discrepancy)
    return worst


def propagation_vs_enumeration(max_steps: int = 14, starts=(-3, 0, 2), alphas=(0.5, 0.75, 2.0, -1.0)) -> float:
    worst = 0.0
    for alpha in alphas:
        for start in starts:
            domains = (FREE,) if start == 0 else (FREE, KILLED_AT_ZERO)
            for domain in domains:
                cfg = WalkConfig(alpha, domain, start)
                for steps in range(max_steps + 1):
                    fast = walk_distribution(steps, cfg)
                    slow = walk_enumerate(steps, cfg)
                    sites = range(start - steps - 1, start + steps + 2)
                    worst = max(worst, max(abs(fast[s] - slow[s]) for s in sites))
    return worst


def mass_drift(steps: int = 10_000, alpha: float = 2.0) -> float:
    return abs(walk_distribution(steps, WalkConfig(alpha, FREE, 0)).total() - 1.0)


def char_fn_gaps(ns=(2**8, 2**10, 2**12), k: float = -0.5, t: float = 0.25, x: float = 0.3,
                 u: float = 1.0) -> list[float]:
    params = derive_params(k, math.inf)
    target = char_fn_H(t, x, u, params.alpha, params.alpha)
    return [abs(walk_char_fn(t, x, u, n, params) - target) for n in ns]


def run_walk_checks() -> list[CheckResult]:
    suite = "walk"
    out = []
    start = time.perf_counter()
    out.append(_result(suite, "reflection-principle", reflection_discrepancy(), 1e-12, start))
    start = time.perf_counter()
    out.append(_result(suite, "propagation-vs-enumeration", propagation_vs_enumeration(), 1e-12, start))
    start = time.perf_counter()
    out.append(_result(suite, "signed-mass-conservation", mass_drift(), 1e-10, start))
    start = time.perf_counter()
    gaps = char_fn_gaps()
    decreasing = all(b < a for a, b in zip(gaps, gaps[1:]))
    out.append(_result(suite, "char-fn-convergence", gaps[-1], 5e-2, start,
                       "gaps=" + ",".join(f"{g:.4g}" for g in gaps),
                       passed=decreasing and gaps[-1] <= 5e-2))
    return out


# ---- schemes ---------------------------------------------------------------

TABLE1_TOLERANCE = {100: 0.15, 625: 0.15, 10_000: 0.20, 250_000: 0.20}


def table1_errors(n_list=(100, 625, 10_000)) -> dict[int, float]:
    report = compare_table1(n_list)
    return {n: row.sup_error for n, row in zip(n_list, report.rows)}


def cross_scheme_errors(ic: str, n: int = 10_000, order: int = 200, h: float = 2e-3, steps: int = 500,
                        k: float = -0.5, T: float = 0.4, split: str = "midpoint") -> dict[str, float]:
    """Pairwise sup-differences on the interior nodes of the walk grid."""
    params = derive_params(k, 1.0)
    u0 = load_initial_condition(ic)
    rw = solve_rw(u0, T, n, params)
    spec = solve_spectral(u0, T, order, params, rw.grid, expansion=compute_coefficients(u0, order, params))
    fund = solve_fund(u0, T, h, steps, params, split=split)
    return {
        "spectral-fund": sup_error(spec, fund),
        "spectral-rw": sup_error(rw, spec),
        "rw-fund": sup_error(rw, fund),
    }


def interface_slope_ratio(k: float = -0.5, T: float = 0.4, h: float = 2e-3, steps: int = 500):
    """One-sided slopes of the fundamental-solution scheme at x = 0, Example 1."""
    params = derive_params(k, 1.0)
    field = solve_fund(load_initial_condition("poly-example1"), T, h, steps, params)
    return interface_slopes(field)


CROSS_SCHEME_TOLERANCE = {"spectral-fund": 5e-3, "spectral-rw": 1e-2, "rw-fund": 1e-2}


def run_scheme_checks(include_250k: bool = False) -> list[CheckResult]:
    suite = "schemes"
    out = []
    n_list = (100, 625, 10_000, 250_000) if include_250k else (100, 625, 10_000)
    start = time.perf_counter()
    errors = table1_errors(n_list)
    for n, err in errors.items():
        rel = abs(err - TABLE1_PUBLISHED[n]) / TABLE1_PUBLISHED[n]
        out.append(_result(suite, f"table1[n={n}]", rel, TABLE1_TOLERANCE[n], start,
                           f"sup_error={err:.4g} published={TABLE1_PUBLISHED[n]:.3g}"))
    values = list(errors.values())
    out.append(_result(suite, "table1-monotone", 0.0, 0.0, start,
                       passed=all(b < a for a, b in zip(values, values[1:]))))
    for ic in ("poly-example1", "step-example2"):
        start = time.perf_counter()
        for pair, err in cross_scheme_errors(ic).items():
            out.append(_result(suite, f"cross-scheme[{ic}:{pair}]", err, CROSS_SCHEME_TOLERANCE[pair], start))
    start = time.perf_counter()
    left, right = interface_slope_ratio()
    ratio = abs(left) / abs(right)
    rel = abs(ratio - 2.0) / 2.0
    out.append(_result(suite, "interface-slope-ratio", rel, 0.05, start,
                       f"slope0-={left:.6g} slope0+={right:.6g}",
                       passed=left * right < 0 and rel <= 0.05))
    return out


def run_suite(name: str, include_250k: bool = False) -> list[CheckResult]:
    if name == "kernels":
        return run_kernel_checks()
    if name == "walk":
        return run_walk_checks()
    if name == "schemes":
        return run_scheme_checks(include_250k)
    if name == "all":
        return run_kernel_checks() + run_walk_checks() + run_scheme_checks(include_250k)
    raise ValueError(f"unknown suite {name!r}; expected one of {SUITES + ('all',)}")
