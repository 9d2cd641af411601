"""Implicit heat solves recombined through the killed skew-BM decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ConfigurationError, Grid, InitialCondition, MediumParams, SolutionField, tridiag_solve


@dataclass(frozen=True)
class HeatSolveSpec:
    """Backward-Euler heat problem u_t = u_xx / 2 on grid indices [lo, hi].

    ``datum`` holds values on the closed index range; the two end values are
    ignored since the end nodes carry homogeneous Dirichlet conditions.
    """

    lo: int
    hi: int
    datum: np.ndarray
    dt: float
    h: float
    steps: int

    def __post_init__(self):
        if self.hi - self.lo < 2:
            raise ConfigurationError("heat solve needs at least one interior node")
        if self.datum.shape != (self.hi - self.lo + 1,):
            raise ConfigurationError("datum length does not match the index range")
        if not (self.dt > 0 and self.h > 0) or self.steps < 0:
            raise ConfigurationError("need dt > 0, h > 0 and steps >= 0")

    @property
    def ratio(self) -> float:
        return self.dt / (2.0 * self.h * self.h)


def heat_implicit(spec: HeatSolveSpec, history: bool = False) -> np.ndarray:
    """Run the implicit scheme; returns the final state, or all levels if ``history``."""
    lam = spec.ratio
    m = spec.datum.size - 2
    lower = np.full(m - 1, -lam)
    diag = np.full(m, 1.0 + 2.0 * lam)
    state = np.zeros(spec.datum.size)
    state[1:-1] = spec.datum[1:-1]
    levels = [state.copy()] if history else None
    for _ in range(spec.steps):
        state[1:-1] = tridiag_solve(lower, diag, lower, state[1:-1])
        if history:
            levels.append(state.copy())
    return np.array(levels) if history else state


def split_datum(u0: InitialCondition, grid: Grid, split: str = "midpoint"):
    """Node values of u0^- and u0^+.

    ``split="indicator"`` uses u0^-(0) = 0 and u0^+(0) = u0(0). ``"midpoint"``
    gives each part half of its one-sided limit at the node x = 0, which is
    the second-order sampling of a jump sitting on a node.
    """
    x = grid.nodes
    c = grid.center
    values = u0(x)
    left = np.where(x < 0, values, 0.0)
    right = np.where(x >= 0, values, 0.0)
    if split == "midpoint":
        left[c] = 0.5 * u0.left_limit
        right[c] = 0.5 * u0.right_limit
    elif split != "indicator":
        raise ConfigurationError(f"unknown interface split {split!r}")
    return left, right


def solve_fund(u0: InitialCondition, T: float, h: float, steps: int, params: MediumParams,
               split: str = "midpoint") -> SolutionField:
    """Combine four Dirichlet heat solves into the solution at time T.

    u1 and u2 evolve u0^- and u0^+ on (-a, a); u3+ and u3- evolve u0^+ on
    (0, a) and u0^- on (-a, 0). Then u = (1-beta) u1 + (1+beta) u2 - beta u3+
    for x > 0 and + beta u3- for x < 0.
    """
    grid = Grid.from_spacing(params.a, h)
    if T < 0 or steps < 1:
        raise ConfigurationError("need T >= 0 and steps >= 1")
    if T == 0:
        return SolutionField(0.0, grid, u0(grid.nodes), "fund")
    parts = fund_components(u0, T, grid, steps, params, split)
    return SolutionField(float(T), grid, recombine(parts, grid, params), "fund")


def fund_components(u0: InitialCondition, T: float, grid: Grid, steps: int,
                    params: MediumParams, split: str = "midpoint") -> dict[str, np.ndarray]:
    dt = T / steps
    last = grid.size - 1
    c = grid.center
    left, right = split_datum(u0, grid, split)
    solves = {
        "u1": (0, last, left),
        "u2": (0, last, right),
        "u3+": (c, last, right[c:]),
        "u3-": (0, c, left[: c + 1]),
    }
    out = {}
    for name, (lo, hi, datum) in solves.items():
        full = np.zeros(grid.size)
        full[lo : hi + 1] = heat_implicit(HeatSolveSpec(lo, hi, np.array(datum, dtype=float), dt, grid.h, steps))
        out[name] = full
    return out


def recombine(parts: dict[str, np.ndarray], grid: Grid, params: MediumParams) -> np.ndarray:
    beta = params.beta
    x = grid.nodes
    base = (1.0 - beta) * parts["u1"] + (1.0 + beta) * parts["u2"]
    values = np.where(x > 0, base - beta * parts["u3+"], np.where(x < 0, base + beta * parts["u3-"], base))
    values[0] = values[-1] = 0.0
    return values


def interface_slopes(field: SolutionField, order: int = 2) -> tuple[float, float]:
    """One-sided slopes at x = 0 from the left and from the right."""
    u = field.values
    c = field.grid.center
    h = field.grid.h
    if order == 1:
        return (u[c] - u[c - 1]) / h, (u[c + 1] - u[c]) / h
    if order == 2:
        return (3 * u[c] - 4 * u[c - 1] + u[c - 2]) / (2 * h), (-3 * u[c] + 4 * u[c + 1] - u[c + 2]) / (2 * h)
    raise ValueError("order must be 1 or 2")
