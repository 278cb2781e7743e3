"""Command-line front end.

Subcommands: ``basis-info``, ``run``, ``verify``, ``figure3``, ``figure4``.
Shared flags (``--out``, ``--format``, ``--threads``, ``--cap``) can also be
supplied through ``DWMETRO_*`` environment variables; explicit flags win.

Exit codes: 0 success, 1 usage error, 2 verification failure, 3 infeasible
scenario.
"""

from __future__ import annotations

import argparse
import dataclasses
import math
import sys
from importlib import resources

from .fock import DEFAULT_CAP, BasisTooLargeError, FockBasis
from .harness import (
    InfeasibleError,
    UsageError,
    env_override,
    load_config,
    run_scenario,
    write_rows,
)
from .verify import run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFY = 2
EXIT_INFEASIBLE = 3


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; we reserve 2 for verification."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _add_output_flags(p):
    p.add_argument("--out", help="output file path (default: stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")
    p.add_argument("--threads", type=int, help="worker threads for sweeps")
    p.add_argument("--cap", type=int, help="basis-dimension cap for exact engines")


def build_parser() -> _Parser:
    parser = _Parser(prog="dwmetro", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND")

    p_info = sub.add_parser("basis-info", help="show the enumerated basis for a well array")
    p_info.add_argument("-M", "--wells", type=int, required=True, help="number of double wells")
    group = p_info.add_mutually_exclusive_group(required=True)
    group.add_argument("-n", "--per-well", type=int, help="bosons per well")
    group.add_argument("-N", "--total", type=int, help="total boson number")
    p_info.add_argument("--cap", type=int, help="basis-dimension cap")

    p_run = sub.add_parser("run", help="evaluate a scenario config")
    p_run.add_argument("--config", help="scenario config file (YAML)")
    _add_output_flags(p_run)

    p_verify = sub.add_parser("verify", help="run cross-method verification suites")
    p_verify.add_argument(
        "--suite",
        default="all",
        help="operators | fisher-cross | formulas-vs-oracle | all (default)",
    )

    for name in ("figure3", "figure4"):
        p_fig = sub.add_parser(name, help=f"run the shipped {name} preset")
        _add_output_flags(p_fig)

    return parser


def _resolved(args, attr: str, env_name: str, cast=str):
    val = getattr(args, attr, None)
    if val is not None:
        return val
    raw = env_override(env_name)
    if raw is None:
        return None
    try:
        return cast(raw)
    except (TypeError, ValueError):
        raise UsageError(f"environment override DWMETRO_{env_name.upper()} "
                         f"has an invalid value: {raw!r}") from None


def _apply_overrides(cfg, args):
    updates = {}
    out = _resolved(args, "out", "out")
    if out is not None:
        updates["out_path"] = out
    fmt = _resolved(args, "format", "format")
    if fmt is not None:
        if fmt not in ("csv", "json"):
            raise UsageError(f"invalid format {fmt!r}")
        updates["out_format"] = fmt
    threads = _resolved(args, "threads", "threads", int)
    if threads is not None:
        if threads < 1:
            raise UsageError("threads must be positive")
        updates["threads"] = threads
    cap = _resolved(args, "cap", "cap", int)
    if cap is not None:
        if cap < 1:
            raise UsageError("cap must be positive")
        updates["cap"] = cap
    return dataclasses.replace(cfg, **updates) if updates else cfg


def _cmd_basis_info(args) -> int:
    cap = _resolved(args, "cap", "cap", int) or DEFAULT_CAP
    m = args.wells
    if m < 1:
        raise UsageError("need at least one well")
    total = args.total if args.total is not None else m * args.per_well
    if total < 0:
        raise UsageError("boson number must be non-negative")
    n_modes = 2 * m
    dim = math.comb(total + n_modes - 1, n_modes - 1)
    print(f"wells:      {m}")
    print(f"modes:      {n_modes}  (l_1, r_1, ..., l_{m}, r_{m})")
    print(f"bosons:     {total}")
    print(f"dimension:  {dim}")
    print(f"cap:        {cap}  ({'within cap' if dim <= cap else 'exceeds cap'})")
    first = (total,) + (0,) * (n_modes - 1)
    last = (0,) * (n_modes - 1) + (total,)
    print(f"first:      {first}")
    print(f"last:       {last}")
    if dim <= cap:
        basis = FockBasis(m, total, cap=cap)
        print(f"check:      enumerated {basis.dim} states")
    return EXIT_OK


def _run_config(cfg, args) -> int:
    cfg = _apply_overrides(cfg, args)
    rows = run_scenario(cfg)
    text = write_rows(rows, cfg.out_path, cfg.out_format)
    if cfg.out_path:
        print(f"wrote {len(rows)} row(s) to {cfg.out_path}")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_run(args) -> int:
    path = _resolved(args, "config", "config")
    if not path:
        raise UsageError("run needs --config (or DWMETRO_CONFIG)")
    return _run_config(load_config(path), args)


def _cmd_verify(args) -> int:
    try:
        report = run_suite(args.suite)
    except KeyError as exc:
        raise UsageError(str(exc.args[0])) from None
    for line in report.lines():
        print(line)
    return EXIT_OK if report.passed else EXIT_VERIFY


def _cmd_figure(args, name: str) -> int:
    preset = resources.files("dwmetro").joinpath(f"configs/{name}.yaml")
    with resources.as_file(preset) as path:
        cfg = load_config(str(path))
    return _run_config(cfg, args)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        parser.print_help()
        return EXIT_USAGE
    try:
        if args.command == "basis-info":
            return _cmd_basis_info(args)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        if args.command in ("figure3", "figure4"):
            return _cmd_figure(args, args.command)
        raise UsageError(f"unknown command {args.command!r}")
    except UsageError as exc:
        print(f"dwmetro: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleError, BasisTooLargeError) as exc:
        print(f"dwmetro: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE


if __name__ == "__main__":
    sys.exit(main())
