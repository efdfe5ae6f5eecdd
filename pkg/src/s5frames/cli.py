"""Command-line driver.

Subcommands: ``analyze`` (curvature invariants over a chart grid),
``polar`` (hypersurface certificate over the unit normal bundle),
``structure`` (derivative-identity residuals), ``all``.

Exit codes: 0 PASS, 1 FAIL, 2 NOT-APPLICABLE, 3 usage/config error.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import catalog
from .errors import S5FramesError
from .polar import GridSpec
from .report import EXIT_CODES, SUITES, RunConfig, run

_SUBCOMMAND_SUITES = {
    "analyze": ("invariants",),
    "polar": ("polar",),
    "structure": ("structure",),
    "all": SUITES,
}


def _parse_grid(text: str) -> GridSpec:
    parts = text.lower().split("x")
    if len(parts) == 2:
        nu, nv = (int(p) for p in parts)
        return GridSpec(nu=nu, nv=nv)
    if len(parts) == 4:
        nu, nv, nt, np_ = (int(p) for p in parts)
        return GridSpec(nu=nu, nv=nv, ntheta=nt, nphi=np_)
    raise argparse.ArgumentTypeError(
        f"grid must be NUxNV or NUxNVxNTHETAxNPHI, got {text!r}")


def _parse_tol(pairs) -> dict:
    out = {}
    for item in pairs or ():
        if "=" not in item:
            raise argparse.ArgumentTypeError(
                f"--tol expects name=value, got {item!r}")
        name, value = item.split("=", 1)
        out[name] = float(value)
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="s5frames",
        description="Verification suites for minimal surfaces in the "
                    "5-sphere and their polar hypersurfaces.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
            ("analyze", "curvature invariants over a chart grid"),
            ("polar", "certificate for the unit-normal-bundle hypersurface"),
            ("structure", "derivative-identity residual suite"),
            ("all", "every suite")):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="JSON config file (flags override)")
        p.add_argument("--surface", choices=catalog.names())
        p.add_argument("--grid", type=_parse_grid,
                       help="NUxNV or NUxNVxNTHETAxNPHI")
        p.add_argument("--tol", action="append", metavar="NAME=VALUE",
                       help="tolerance override (repeatable)")
        p.add_argument("--mode", choices=("analytic", "fd"),
                       help="surface derivative mode")
        p.add_argument("--samples", type=int,
                       help="fiber sample count for the structure suite")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", help="report output path")
        p.add_argument("--format", choices=("json", "csv"))
        p.add_argument("--quiet", action="store_true")
    return parser


def config_from_args(args) -> RunConfig:
    if args.config:
        cfg = RunConfig.from_json(args.config)
    else:
        if not args.surface:
            raise ValueError("--surface is required without --config")
        cfg = RunConfig(surface=args.surface)
    cfg = replace(cfg, suites=_SUBCOMMAND_SUITES[args.command])
    if args.surface:
        cfg = replace(cfg, surface=args.surface)
    if args.grid:
        cfg = replace(cfg, grid=args.grid)
    if args.tol:
        cfg = replace(cfg, tolerances={**cfg.tolerances, **_parse_tol(args.tol)})
    if args.mode:
        cfg = replace(cfg, derivative_mode=args.mode)
    if args.samples:
        cfg = replace(cfg, structure_samples=args.samples)
    if args.seed is not None:
        cfg = replace(cfg, seed=args.seed)
    if args.out:
        cfg = replace(cfg, output=args.out)
    if args.format:
        cfg = replace(cfg, format=args.format)
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = config_from_args(args)
    except (ValueError, OSError, KeyError, TypeError) as exc:
        parser.exit(3, f"config error: {exc}\n")
    try:
        report = run(cfg)
    except S5FramesError as exc:
        parser.exit(3, f"error: {exc}\n")
    if not args.quiet:
        for name, suite in report.suites.items():
            print(f"[{suite.verdict}] {name}")
            for check, data in suite.checks.items():
                mark = "ok " if data["pass"] else "BAD"
                print(f"    {mark} {check}: max {data['max']:.3e} "
                      f"(tol {data['tol']:.3e})")
            counts = suite.counts
            print(f"    points: {counts.get('evaluated', 0)} evaluated, "
                  f"{counts.get('excluded', 0)} excluded, "
                  f"{counts.get('failed', 0)} failed")
        print(f"verdict: {report.verdict} "
              f"({report.wall_time_seconds:.2f}s)")
        if cfg.output:
            print(f"report written to {cfg.output}")
    return EXIT_CODES[report.verdict]


if __name__ == "__main__":
    sys.exit(main())
