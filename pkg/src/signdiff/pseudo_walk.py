"""Signed (pseudo) asymmetric random walk and the explicit interface scheme.

Distributions are propagated exactly as signed mass vectors; nothing is
ever clipped or renormalized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .core import ConfigurationError, Grid, InitialCondition, MediumParams, SolutionField

FREE = "free"
KILLED_AT_ZERO = "killed-at-zero"
KILLED_AT_BOUNDARY = "killed-at-boundary"

MAX_ENUMERATION_STEPS = 20
MAX_CHAR_FN_STEPS = 10**7


@dataclass(frozen=True)
class WalkConfig:
    """Interface weight, domain and start of the pseudo walk.

    ``boundary`` is the absorbing radius N_a for the killed-at-boundary domain.
    """

    alpha: float
    domain: str = FREE
    start: int = 0
    boundary: int | None = None

    def __post_init__(self):
        if self.domain not in (FREE, KILLED_AT_ZERO, KILLED_AT_BOUNDARY):
            raise ValueError(f"unknown walk domain {self.domain!r}")
        if self.domain == KILLED_AT_BOUNDARY:
            if self.boundary is None or self.boundary < 1:
                raise ValueError("killed-at-boundary walk needs boundary >= 1")
            if abs(self.start) > self.boundary:
                raise ValueError("start lies outside the absorbing boundary")

    def is_killed(self, sites: np.ndarray) -> np.ndarray:
        if self.domain == KILLED_AT_ZERO:
            return sites == 0
        if self.domain == KILLED_AT_BOUNDARY:
            return np.abs(sites) >= self.boundary
        return np.zeros(sites.shape, dtype=bool)


@dataclass(frozen=True)
class SignedDensity:
    """Signed masses on consecutive integer sites ``offset, offset + 1, ...``."""

    offset: int
    mass: np.ndarray

    @classmethod
    def delta(cls, site: int) -> SignedDensity:
        return cls(int(site), np.array([1.0]))

    @property
    def support(self) -> np.ndarray:
        return np.arange(self.offset, self.offset + self.mass.size)

    def total(self) -> float:
        return float(self.mass.sum())

    def __getitem__(self, site: int) -> float:
        i = site - self.offset
        if 0 <= i < self.mass.size:
            return float(self.mass[i])
        return 0.0

    def as_dict(self, atol: float = 0.0) -> dict[int, float]:
        return {int(s): float(m) for s, m in zip(self.support, self.mass) if abs(m) > atol}


def walk_step(density: SignedDensity, cfg: WalkConfig) -> SignedDensity:
    """Push the signed mass one step forward under the pseudo transition weights."""
    sites = density.support
    mass = density.mass
    up = np.where(sites == 0, cfg.alpha, 0.5) * mass
    down = np.where(sites == 0, 1.0 - cfg.alpha, 0.5) * mass
    out = np.zeros(mass.size + 2)
    out[2:] += up
    out[:-2] += down
    result_sites = np.arange(density.offset - 1, density.offset + mass.size + 1)
    out[cfg.is_killed(result_sites)] = 0.0
    return SignedDensity(density.offset - 1, out)


def walk_distribution(steps: int, cfg: WalkConfig) -> SignedDensity:
    """Law of S_steps started at ``cfg.start``."""
    if steps < 0:
        raise ValueError("steps must be >= 0")
    density = SignedDensity.delta(cfg.start)
    for _ in range(steps):
        density = walk_step(density, cfg)
    return density


def walk_enumerate(steps: int, cfg: WalkConfig) -> SignedDensity:
    """Law of S_steps by summing the signed weight of each of the 2^steps paths.

    Independent of ``walk_step``; meant as an oracle for small ``steps``.
    Paths are visited in full even after being killed; their weight is then 0.
    """
    if steps < 0:
        raise ValueError("steps must be >= 0")
    if steps > MAX_ENUMERATION_STEPS:
        raise ValueError(f"enumeration limited to {MAX_ENUMERATION_STEPS} steps")
    lo = cfg.start - steps
    if steps == 0:
        return SignedDensity(cfg.start, np.array([1.0]))
    # Row r of ``moves`` is path r: bit i set means step i goes up.
    paths = np.arange(2**steps)[:, None]
    moves = ((paths >> np.arange(steps)) & 1) * 2 - 1
    after = cfg.start + np.cumsum(moves, axis=1)
    before = np.hstack([np.full((paths.size, 1), cfg.start), after[:, :-1]])
    at_zero = np.where(moves == 1, cfg.alpha, 1.0 - cfg.alpha)
    weight = np.where(before == 0, at_zero, 0.5).prod(axis=1)
    weight[cfg.is_killed(after).any(axis=1)] = 0.0
    mass = np.bincount(after[:, -1] - lo, weights=weight, minlength=2 * steps + 1)
    return SignedDensity(lo, mass)


@lru_cache(maxsize=256)
def _enumerated(steps: int, alpha: float, domain: str, start: int) -> SignedDensity:
    return walk_enumerate(steps, WalkConfig(alpha, domain, start))


@dataclass(frozen=True)
class ReflectionReport:
    identity: str
    lhs: float
    rhs: float

    @property
    def discrepancy(self) -> float:
        return abs(self.lhs - self.rhs)


def reflection_identities(steps: int, m: int, start: int, alpha: float) -> ReflectionReport:
    """Evaluate both sides of the reflection principle for P^start(S_steps = m).

    Every probability is obtained by path enumeration: the law of S under
    the alpha-walk, the law of |S|, and the law of |S| restricted to paths
    that never revisit 0.
    """
    if steps < 1 or m == 0:
        raise ValueError("need steps >= 1 and m != 0")
    walk = _enumerated(steps, alpha, FREE, start)
    lhs = walk[m]

    def abs_law(density: SignedDensity, level: int) -> float:
        return density[level] + density[-level]

    if start == 0:
        reflected = abs_law(walk, abs(m))
        rhs = (alpha if m > 0 else 1.0 - alpha) * reflected
        return ReflectionReport("start=0", lhs, rhs)

    # |S| from |start| does not depend on alpha; the killed walk never meets 0.
    reflected_walk = _enumerated(steps, alpha, FREE, abs(start))
    killed_walk = _enumerated(steps, alpha, KILLED_AT_ZERO, abs(start))
    reflected = abs_law(reflected_walk, abs(m))
    avoiding = abs_law(killed_walk, abs(m))
    same_side = (m > 0) == (start > 0)
    near = alpha if start > 0 else 1.0 - alpha
    if same_side:
        rhs = near * reflected + (1.0 - near) * avoiding
    else:
        rhs = (1.0 - near) * (reflected - avoiding)
    return ReflectionReport("start>0" if start > 0 else "start<0", lhs, rhs)


def walk_char_fn(t: float, x: float, u: float, n: int, params: MediumParams) -> complex:
    """E[exp(iu S_j / sqrt(n))], j = floor(n t), started at floor(sqrt(n) x)."""
    if n < 1 or t < 0:
        raise ValueError("need n >= 1 and t >= 0")
    steps = math.floor(n * t)
    if steps > MAX_CHAR_FN_STEPS:
        raise OverflowError(f"floor(n t) = {steps} exceeds {MAX_CHAR_FN_STEPS}")
    start = math.floor(math.sqrt(n) * x)
    law = walk_distribution(steps, WalkConfig(params.alpha, FREE, start))
    return complex(np.sum(law.mass * np.exp(1j * u * law.support / math.sqrt(n))))


def _backward_free(values: np.ndarray, offset: int, alpha: float) -> np.ndarray:
    # v_{m-1}(z) = E[v_m(S_m) | S_{m-1} = z] on sites offset+1 .. offset+len-2.
    out = 0.5 * (values[2:] + values[:-2])
    z0 = -offset - 1
    if 0 <= z0 < out.size:
        out[z0] = alpha * values[z0 + 2] + (1.0 - alpha) * values[z0]
    return out


def walk_joint_char_fn(t1: float, t2: float, x: float, u1: float, u2: float, n: int,
                       params: MediumParams) -> complex:
    """Two-time characteristic function E[exp(i(u1 X1 + u2 X2))] of the rescaled walk."""
    if not 0 <= t1 <= t2:
        raise ValueError("need 0 <= t1 <= t2")
    j1, j2 = math.floor(n * t1), math.floor(n * t2)
    if j2 > MAX_CHAR_FN_STEPS:
        raise OverflowError(f"floor(n t2) = {j2} exceeds {MAX_CHAR_FN_STEPS}")
    scale = 1.0 / math.sqrt(n)
    start = math.floor(math.sqrt(n) * x)
    first = walk_distribution(j1, WalkConfig(params.alpha, FREE, start))
    # phi(z) = E^z[exp(i u2 S_{j2-j1} / sqrt(n))] for z in the support of the first leg.
    lag = j2 - j1
    offset = first.offset - lag
    values = np.exp(1j * u2 * scale * np.arange(offset, first.offset + first.mass.size + lag))
    for _ in range(lag):
        values = _backward_free(values, offset, params.alpha)
        offset += 1
    return complex(np.sum(first.mass * np.exp(1j * u1 * scale * first.support) * values))


def rw_grid(n: int, a: float) -> Grid:
    root = math.sqrt(n)
    n_half = round(root * a)
    if n_half < 1 or abs(root * a - n_half) > 1e-9 * max(1.0, root * a):
        raise ConfigurationError(f"sqrt(n) a = {root * a!r} must be a positive integer")
    return Grid.from_half_width(a, n_half)


def rw_steps(n: int, T: float) -> int:
    steps = round(n * T)
    if steps < 1 or abs(n * T - steps) > 1e-9 * max(1.0, n * T):
        raise ConfigurationError(f"n T = {n * T!r} must be a positive integer")
    return steps


def solve_rw(u0: InitialCondition, T: float, n: int, params: MediumParams,
             interface: str = "recursion") -> SolutionField:
    """Explicit scheme with h = n^-1/2 and dt = 1/n derived from the pseudo walk.

    ``interface="recursion"`` sets U_0^{m+1} = alpha U_1^m + (1 - alpha) U_-1^m,
    which makes U_j^N the pseudo expectation E^j[u0(S_N / sqrt(n))] of the
    walk killed at +-N_a. ``interface="same-level"`` uses U_+-1^{m+1} instead.
    """
    if interface not in ("recursion", "same-level"):
        raise ValueError(f"unknown interface row {interface!r}")
    grid = rw_grid(n, params.a)
    if T == 0:
        return SolutionField(0.0, grid, u0(grid.nodes), "rw")
    steps = rw_steps(n, T)
    alpha = params.alpha
    c = grid.center
    u = u0(grid.nodes)
    u[0] = u[-1] = 0.0
    nxt = np.zeros_like(u)
    for _ in range(steps):
        nxt[1:-1] = 0.5 * (u[2:] + u[:-2])
        if interface == "recursion":
            nxt[c] = alpha * u[c + 1] + (1.0 - alpha) * u[c - 1]
        else:
            nxt[c] = alpha * nxt[c + 1] + (1.0 - alpha) * nxt[c - 1]
        u, nxt = nxt, u
    return SolutionField(float(T), grid, u.copy(), "rw")
