"""Command line entry point: ``signdiff run | table1 | verify``."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .core import ConfigurationError
from .harness import TABLE1_DEFAULT_N, TABLE1_PUBLISHED, build_config, compare_table1, parse_config_text, run

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_CONFIG = 2


def _add_run(sub):
    p = sub.add_parser("run", help="solve with one or all schemes and write CSV artifacts")
    p.add_argument("--config", help="flat key = value file; flags override its entries")
    p.add_argument("--k", type=float)
    p.add_argument("--a", type=float)
    p.add_argument("--T", type=float, nargs="+", help="one or more output times")
    p.add_argument("--scheme", choices=("spectral", "rw", "fund", "all"))
    p.add_argument("--N", type=int, help="spectral truncation order")
    p.add_argument("--n", type=int, help="walk scale: h = n^-1/2, dt = 1/n")
    p.add_argument("--h", type=float, help="spatial step of the implicit scheme")
    p.add_argument("--steps", type=int, help="time steps of the implicit scheme")
    p.add_argument("--ic", help="poly-example1, step-example2 or a two-column x,u file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--split", choices=("midpoint", "indicator"), help="node value of the split datum at x = 0")


def _add_table1(sub):
    p = sub.add_parser("table1", help="sup-error of the walk scheme against the order-200 spectral solution")
    p.add_argument("--n-list", type=int, nargs="+", default=list(TABLE1_DEFAULT_N))
    p.add_argument("--include-250k", action="store_true", help="append n = 250000 (slower)")
    p.add_argument("--k", type=float, default=-0.5)
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--T", type=float, default=0.4)
    p.add_argument("--ic", default="poly-example1")
    p.add_argument("--out", help="also write the report as CSV here")


def _add_verify(sub):
    p = sub.add_parser("verify", help="run invariant checks and print a JSON-lines report")
    p.add_argument("--suite", choices=("kernels", "walk", "schemes", "all"), default="all")
    p.add_argument("--include-250k", action="store_true", help="add the n = 250000 table row")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signdiff", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    _add_run(sub)
    _add_table1(sub)
    _add_verify(sub)
    return parser


def _cmd_run(args) -> int:
    file_values = {}
    if args.config:
        try:
            file_values = parse_config_text(Path(args.config).read_text())
        except OSError as exc:
            raise ConfigurationError(f"config: cannot read {args.config!r}: {exc}") from None
    overrides = {
        "k": args.k, "a": args.a, "scheme": args.scheme, "N": args.N, "n": args.n,
        "h": args.h, "steps": args.steps, "ic": args.ic, "out": args.out, "split": args.split,
        "T": tuple(args.T) if args.T else None,
    }
    cfg = build_config(file_values, overrides)
    result = run(cfg)
    for path in result.files:
        print(path)
    if result.report is not None:
        sys.stdout.write(result.report.to_csv())
    return EXIT_OK


def _cmd_table1(args) -> int:
    n_list = list(args.n_list)
    if args.include_250k and 250_000 not in n_list:
        n_list.append(250_000)
    report = compare_table1(n_list, k=args.k, a=args.a, T=args.T, ic=args.ic)
    print("n,sup_error,published,wall_time")
    for n, row in zip(n_list, report.rows):
        published = TABLE1_PUBLISHED.get(n)
        shown = "" if published is None else f"{published:.3g}"
        print(f"{n},{row.sup_error:.6e},{shown},{row.wall_time:.3f}")
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        (out / "table1.csv").write_text(report.to_csv())
    return EXIT_OK


def _cmd_verify(args) -> int:
    from .verification import run_suite

    results = run_suite(args.suite, include_250k=args.include_250k)
    for r in results:
        print(json.dumps(r.as_record(), sort_keys=True))
    failed = [r.check for r in results if not r.passed]
    print(json.dumps({"summary": True, "checks": len(results), "failed": failed}, sort_keys=True))
    return EXIT_VERIFY_FAILED if failed else EXIT_OK


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "table1": _cmd_table1, "verify": _cmd_verify}[args.command]
    try:
        return handler(args)
    except ConfigurationError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
