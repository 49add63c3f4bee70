"""Command line front end: ``polariton-gyro {phase,sweep,design,oracle-check,presets,config}``."""
from __future__ import annotations

import argparse
import sys
from dataclasses import replace

from . import model
from .config import PRESETS, ConfigError, RunConfig, dump_config, load_config, preset
from .envelope import ConvergenceError, SingularCoherenceError
from .sweep import InvariantViolation, design_point, oracle_check, rows_to_csv, run_sweep, _fmt


def _common(parser):
    parser.add_argument("--config", help="TOML run configuration")
    parser.add_argument("--preset", choices=sorted(PRESETS), help="built-in configuration")
    parser.add_argument("--output", help="write the table here instead of standard output")
    parser.add_argument("--mode", choices=("analytic", "oracle", "both"))
    parser.add_argument("--absorption", choices=model.ABSORPTION_MODES)
    parser.add_argument("--quadrature-order", type=int)
    parser.add_argument("--tolerance", type=float, help="relative phase tolerance of the oracle check")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="polariton-gyro", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name, text in (
        ("phase", "closed-form Sagnac report as key=value lines"),
        ("sweep", "CSV table of the configured sweep"),
        ("design", "minimal group velocity and resulting enhancement"),
        ("oracle-check", "compare closed forms with the envelope-equation oracle"),
        ("config", "echo the resolved configuration as TOML"),
    ):
        p = sub.add_parser(name, help=text)
        _common(p)
        if name == "design":
            p.add_argument("--budget", type=float, help="allowed kappa L (default from config)")
    sub.add_parser("presets", help="list built-in configurations")
    return parser


def resolve_config(args) -> RunConfig:
    base = preset(args.preset) if args.preset else None
    if args.config:
        config = load_config(args.config, base)
    elif base is not None:
        config = base
    else:
        config = preset("fig2")
    overrides = {}
    for attr, key in (
        ("output", "output"),
        ("mode", "mode"),
        ("absorption", "absorption"),
        ("quadrature_order", "quadrature_order"),
        ("tolerance", "tolerance"),
    ):
        value = getattr(args, attr, None)
        if value is not None:
            overrides[key] = value
    return replace(config, **overrides) if overrides else config


def _emit(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _phase_lines(config: RunConfig) -> list[str]:
    loop = config.build_loop()
    report = model.sagnac_report(loop, config.omega, config.probe, config.species, config.absorption, config.epsilon)
    lines = [
        f"phase_optical_rad={_fmt(report.phase_optical)}",
        f"phase_hybrid_rad={_fmt(report.phase_hybrid)}",
        f"enhancement={_fmt(report.enhancement)}",
        f"kappa_L_total={_fmt(report.kappa_L_total)}",
        f"valid={'true' if report.valid else 'false'}",
    ]
    lines += [f"flag.{k}={'true' if v else 'false'}" for k, v in report.validity_flags.items()]
    return lines


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "presets":
        for name in sorted(PRESETS):
            summary = PRESETS[name].splitlines()[0].lstrip("# ")
            print(f"{name}\t{summary}")
        return 0
    try:
        config = resolve_config(args)
        if args.command == "config":
            _emit(dump_config(config), config.output)
        elif args.command == "phase":
            _emit("\n".join(_phase_lines(config)) + "\n", config.output)
        elif args.command == "sweep":
            _emit(rows_to_csv(run_sweep(config)), config.output)
        elif args.command == "design":
            report = design_point(config, args.budget)
            _emit("\n".join(report.lines()) + "\n", config.output)
            return 0 if report.feasible else 3
        elif args.command == "oracle-check":
            ok, rows = oracle_check(config)
            _emit(rows_to_csv(rows), config.output)
            for i, row in enumerate(rows):
                if row.oracle_status == "fail":
                    o = row.oracle
                    print(
                        f"row {i}: {row.swept_name}={row.swept_value:.6g} T/T_rec={row.temperature_ratio:.6g} "
                        f"phase deviation {o.phase_deviation:.3e}, kappa deviation {o.kappa_deviation:.3e}",
                        file=sys.stderr,
                    )
            return 0 if ok else 1
    except (ConfigError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConvergenceError, SingularCoherenceError, InvariantViolation) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    return 0


if __name__ == "__main__":
    sys.exit(main())
