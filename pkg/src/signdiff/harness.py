"""Batch runs, scheme comparisons and CSV/JSON-lines artifacts."""

from __future__ import annotations

import json
import math
import os
import tempfile
import time
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

import numpy as np

from .core import ConfigurationError, Grid, InitialCondition, SolutionField, derive_params, load_initial_condition
from .fd_fund import solve_fund
from .pseudo_walk import rw_grid, rw_steps, solve_rw
from .spectral import compute_coefficients, solve_spectral

SCHEMES = ("spectral", "rw", "fund")

# Sup-errors between the order-200 spectral and the walk scheme, Example 1.
TABLE1_PUBLISHED = {100: 4.56e-2, 625: 9.53e-3, 10_000: 4.4e-4, 250_000: 1.7e-5}
TABLE1_DEFAULT_N = (100, 625, 10_000)


@dataclass
class RunConfig:
    k: float = -0.5
    a: float = 1.0
    T: tuple[float, ...] = (0.4,)
    scheme: str = "spectral"
    N: int = 200
    n: int = 10_000
    h: float = 2e-3
    steps: int = 500
    ic: str = "poly-example1"
    out: str = "out"
    split: str = "midpoint"

    def validate(self) -> None:
        """Raise ConfigurationError naming the first offending key."""
        try:
            derive_params(self.k, self.a)
        except ConfigurationError as exc:
            raise ConfigurationError(f"k/a: {exc}") from None
        if not math.isfinite(self.a):
            raise ConfigurationError("a: the schemes need a finite half-width")
        if self.scheme not in (*SCHEMES, "all"):
            raise ConfigurationError(f"scheme: expected one of {SCHEMES + ('all',)}, got {self.scheme!r}")
        if not self.T or any(t < 0 for t in self.T):
            raise ConfigurationError("T: need one or more times >= 0")
        schemes = self.schemes()
        if "spectral" in schemes and self.N < 1:
            raise ConfigurationError("N: spectral order must be >= 1")
        if "rw" in schemes:
            if self.n < 1:
                raise ConfigurationError("n: must be >= 1")
            try:
                rw_grid(self.n, self.a)
            except ConfigurationError as exc:
                raise ConfigurationError(f"n: {exc}") from None
            for t in self.T:
                if t > 0:
                    try:
                        rw_steps(self.n, t)
                    except ConfigurationError as exc:
                        raise ConfigurationError(f"n/T: {exc}") from None
        if "fund" in schemes and self.steps < 1:
            raise ConfigurationError("steps: must be >= 1")
        if "fund" in schemes or self.scheme == "spectral":
            ratio = self.a / self.h if self.h > 0 else float("nan")
            if not (ratio >= 1 and abs(ratio - round(ratio)) <= 1e-9 * ratio):
                raise ConfigurationError(f"h: a/h = {ratio!r} must be a positive integer")
        if self.split not in ("midpoint", "indicator"):
            raise ConfigurationError(f"split: expected 'midpoint' or 'indicator', got {self.split!r}")

    def schemes(self) -> tuple[str, ...]:
        return SCHEMES if self.scheme == "all" else (self.scheme,)


_CONFIG_TYPES = {f.name: f.type for f in fields(RunConfig)}


def parse_config_text(text: str) -> dict:
    """Parse flat ``key = value`` lines (``#`` starts a comment)."""
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            key, _, value = line.partition(" ")
        key = key.strip().replace("-", "_")
        value = value.strip()
        if key not in _CONFIG_TYPES:
            raise ConfigurationError(f"{key}: unknown config key (line {lineno})")
        values[key] = coerce_config_value(key, value)
    return values


def coerce_config_value(key: str, value):
    kind = _CONFIG_TYPES[key]
    try:
        if key == "T":
            if isinstance(value, str):
                value = value.replace(",", " ").split()
            return tuple(float(v) for v in value)
        if kind == "float":
            return float(value)
        if kind == "int":
            as_float = float(value)
            if as_float != int(as_float):
                raise ValueError("not an integer")
            return int(as_float)
    except (TypeError, ValueError) as exc:
        raise ConfigurationError(f"{key}: cannot parse {value!r} ({exc})") from None
    return str(value)


def build_config(file_values: dict | None = None, overrides: dict | None = None) -> RunConfig:
    """Defaults, then file values, then explicit overrides (flags win)."""
    merged = dict(file_values or {})
    merged.update({k: v for k, v in (overrides or {}).items() if v is not None})
    cfg = RunConfig(**merged)
    cfg.validate()
    return cfg


@dataclass
class ComparisonRow:
    scheme_a: str
    scheme_b: str
    parameter: str
    sup_error: float
    wall_time: float


@dataclass
class ComparisonReport:
    rows: list[ComparisonRow] = field(default_factory=list)

    def to_csv(self) -> str:
        lines = ["scheme_a,scheme_b,parameter,sup_error,wall_time"]
        for r in self.rows:
            lines.append(f"{r.scheme_a},{r.scheme_b},{r.parameter},{r.sup_error:.17g},{r.wall_time:.6f}")
        return "\n".join(lines) + "\n"


def sup_error(coarse: SolutionField, other: SolutionField) -> float:
    """Max difference over the interior nodes of ``coarse``."""
    x, u = coarse.interior()
    return float(np.max(np.abs(u - other.at(x))))


def format_csv(field_: SolutionField) -> str:
    lines = ["x,u"]
    lines.extend(f"{x:.17g},{u:.17g}" for x, u in zip(field_.nodes, field_.values))
    return "\n".join(lines) + "\n"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w", newline="\n") as fh:
        fh.write(text)
    os.replace(tmp, path)


def solve_scheme(scheme: str, u0: InitialCondition, t: float, cfg: RunConfig, expansion=None):
    params = derive_params(cfg.k, cfg.a)
    if scheme == "spectral":
        # Spectral values are evaluated on the walk grid so comparisons need no interpolation.
        grid = rw_grid(cfg.n, cfg.a) if cfg.scheme == "all" else _spectral_grid(cfg)
        return solve_spectral(u0, t, cfg.N, params, grid, expansion=expansion)
    if scheme == "rw":
        return solve_rw(u0, t, cfg.n, params)
    if scheme == "fund":
        return solve_fund(u0, t, cfg.h, cfg.steps, params, split=cfg.split)
    raise ConfigurationError(f"scheme: unknown {scheme!r}")


def _spectral_grid(cfg: RunConfig) -> Grid:
    return Grid.from_spacing(cfg.a, cfg.h)


def _time_tag(t: float) -> str:
    return f"{t:g}"


@dataclass
class RunResult:
    fields: dict[tuple[str, float], SolutionField]
    files: list[Path]
    report: ComparisonReport | None


def run(cfg: RunConfig) -> RunResult:
    """Solve with every requested scheme and time and write the artifacts."""
    cfg.validate()
    u0 = load_initial_condition(cfg.ic)
    params = derive_params(cfg.k, cfg.a)
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    solved: dict[tuple[str, float], SolutionField] = {}
    timings: dict[tuple[str, float], float] = {}
    files: list[Path] = []
    records: list[str] = []
    expansion = None
    for scheme in cfg.schemes():
        for t in cfg.T:
            start = time.perf_counter()
            if scheme == "spectral" and expansion is None:
                expansion = compute_coefficients(u0, cfg.N, params)
            result = solve_scheme(scheme, u0, t, cfg, expansion=expansion)
            elapsed = time.perf_counter() - start
            solved[(scheme, t)] = result
            timings[(scheme, t)] = elapsed
            path = out / f"{scheme}_T{_time_tag(t)}.csv"
            _atomic_write(path, format_csv(result))
            files.append(path)
            records.append(json.dumps({
                "scheme": scheme,
                "t": t,
                "file": path.name,
                "k": cfg.k,
                "a": cfg.a,
                "ic": cfg.ic,
                "parameters": _scheme_parameters(scheme, cfg),
                "wall_time": elapsed,
            }, sort_keys=True))
    _atomic_write(out / "metadata.jsonl", "\n".join(records) + "\n")
    files.append(out / "metadata.jsonl")

    report = None
    if cfg.scheme == "all":
        report = ComparisonReport()
        for t in cfg.T:
            if t == 0:
                continue
            for a_name, b_name in (("spectral", "rw"), ("spectral", "fund"), ("rw", "fund")):
                a_field, b_field = solved[(a_name, t)], solved[(b_name, t)]
                coarse, fine = sorted((a_field, b_field), key=lambda f: f.grid.size)
                report.rows.append(ComparisonRow(
                    a_name, b_name, f"T={_time_tag(t)}",
                    sup_error(coarse, fine),
                    timings[(a_name, t)] + timings[(b_name, t)],
                ))
        path = out / "comparison.csv"
        _atomic_write(path, report.to_csv())
        files.append(path)
    return RunResult(solved, files, report)


def _scheme_parameters(scheme: str, cfg: RunConfig) -> dict:
    if scheme == "spectral":
        return {"N": cfg.N}
    if scheme == "rw":
        return {"n": cfg.n}
    return {"h": cfg.h, "steps": cfg.steps, "split": cfg.split}


def compare_table1(n_list=TABLE1_DEFAULT_N, k: float = -0.5, a: float = 1.0, T: float = 0.4,
                   ic: str = "poly-example1", order: int = 200) -> ComparisonReport:
    """Sup-distance between the walk scheme and the order-200 spectral reference."""
    params = derive_params(k, a)
    u0 = load_initial_condition(ic)
    expansion = compute_coefficients(u0, order, params)
    report = ComparisonReport()
    for n in n_list:
        start = time.perf_counter()
        rw = solve_rw(u0, T, n, params)
        reference = solve_spectral(u0, T, order, params, rw.grid, expansion=expansion)
        report.rows.append(ComparisonRow(
            "spectral", "rw", f"n={n}", sup_error(rw, reference), time.perf_counter() - start))
    return report


def config_summary(cfg: RunConfig) -> dict:
    data = asdict(cfg)
    data["T"] = list(cfg.T)
    return data

