"""Batch command-line front end.

Exit codes: 0 success, 2 configuration error, 3 convergence failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import analysis
from .config import FORMATS, load_config
from .errors import ConvergenceFailure, InvalidConfig
from .protocol import ProtocolConfig, run_protocol
from .serialize import dumps_json, result_to_csv, result_to_dict, sweep_to_csv, sweep_to_json

EXIT_OK, EXIT_CONFIG, EXIT_CONVERGENCE = 0, 2, 3
DEFAULT_CAVITY_LENGTH = 0.0275

DEFAULT_GRIDS = {
    "timing": [0.0, 0.01, 0.05, 0.1],
    "detuning": [5.0, 10.0, 20.0, 40.0],
    "kappa": [0.0, 1e2, 1e3, 1e4],
    "convergence": [2, 3, 4],
}
FIELD_BACKENDS = ("full_unitary", "full_lindblad")


def _grid(args, kind: str) -> list[float]:
    if args.values:
        try:
            grid = [float(v) for v in args.values.split(",") if v.strip()]
        except ValueError:
            raise InvalidConfig(f"--values must be comma-separated numbers, got {args.values!r}") from None
    elif args.start is not None or args.stop is not None or args.points is not None:
        if args.start is None or args.stop is None or args.points is None:
            raise InvalidConfig("--start, --stop and --points must be given together")
        if args.points < 1:
            raise InvalidConfig("--points must be >= 1")
        grid = np.linspace(args.start, args.stop, args.points).tolist()
    else:
        grid = list(DEFAULT_GRIDS[kind])
    if not grid:
        raise InvalidConfig("empty grid")
    if kind == "convergence":
        if any(abs(v - round(v)) > 1e-9 or v < 1 for v in grid):
            raise InvalidConfig("convergence grid must hold integers n_max >= 1")
        grid = [int(round(v)) for v in grid]
    return grid


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(Path(path), "w", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_run(args, cfg) -> None:
    res = run_protocol(cfg.protocol)
    report = analysis.physical_report(cfg.protocol.params, args.cavity_length,
                                      cfg.protocol.lambda_t1, cfg.protocol.lambda_t2)
    fmt = args.format or cfg.output_format or "json"
    text = dumps_json(result_to_dict(res, report)) if fmt == "json" else result_to_csv(res, report)
    _emit(text, args.out or cfg.output_path)


def _cmd_sweep(args, cfg, kind: str) -> None:
    grid = _grid(args, kind)
    pc: ProtocolConfig = cfg.protocol
    field_backend = pc.backend if pc.backend in FIELD_BACKENDS else "full_unitary"
    if kind == "timing":
        rows = analysis.timing_sweep(grid, pc, model=pc.timing_model)
    elif kind == "detuning":
        rows = analysis.detuning_sweep(grid, pc, backend=field_backend)
    elif kind == "kappa":
        rows = analysis.kappa_sweep(grid, pc)
    else:
        rows = analysis.fock_convergence(grid, pc, backend=field_backend)
    fmt = args.format or cfg.output_format or "csv"
    text = sweep_to_csv(kind, rows) if fmt == "csv" else sweep_to_json(kind, rows)
    _emit(text, args.out or cfg.output_path)


def _cmd_params(args, cfg) -> None:
    report = analysis.physical_report(cfg.protocol.params, args.cavity_length,
                                      cfg.protocol.lambda_t1, cfg.protocol.lambda_t2)
    _emit(dumps_json(report), args.out)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cavity-qutrits",
        description="Two-qutrit entanglement via dispersive cavity-assisted collisions.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_format=True):
        p.add_argument("--config", help="INI run configuration (defaults used when omitted)")
        p.add_argument("--out", help="output file (default: [output] path, else stdout)")
        if with_format:
            p.add_argument("--format", choices=FORMATS, help="output format")

    p = sub.add_parser("run", help="execute the protocol once")
    common(p)
    p.add_argument("--cavity-length", type=float, default=DEFAULT_CAVITY_LENGTH, metavar="METERS")

    for kind, help_ in (("timing", "fidelity versus early-entry fraction"),
                        ("detuning", "fidelity versus delta_eg/g"),
                        ("kappa", "fidelity versus cavity decay rate (1/s)")):
        p = sub.add_parser(f"sweep-{kind}", help=help_)
        common(p)
        _grid_flags(p)
    p = sub.add_parser("convergence", help="fidelity versus Fock truncation n_max")
    common(p)
    _grid_flags(p)

    p = sub.add_parser("params", help="physical timings and atom velocity as JSON")
    common(p, with_format=False)
    p.add_argument("--cavity-length", type=float, default=DEFAULT_CAVITY_LENGTH, metavar="METERS")
    return parser


def _grid_flags(p) -> None:
    p.add_argument("--start", type=float)
    p.add_argument("--stop", type=float)
    p.add_argument("--points", type=int)
    p.add_argument("--values", help="explicit comma-separated grid, overrides start/stop/points")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
        if getattr(args, "cavity_length", 1.0) <= 0:
            raise InvalidConfig("--cavity-length must be positive")
        if args.command == "run":
            _cmd_run(args, cfg)
        elif args.command == "params":
            _cmd_params(args, cfg)
        elif args.command == "convergence":
            _cmd_sweep(args, cfg, "convergence")
        else:
            _cmd_sweep(args, cfg, args.command.removeprefix("sweep-"))
    except (InvalidConfig, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceFailure as exc:
        print(f"convergence failure: {exc}", file=sys.stderr)
        return EXIT_CONVERGENCE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
