"""Command-line driver.

    verify --suite all --format json --out report.json
    verify --suite clifford --suite krein --signature 1 3 --seed 7
    verify --suite geometry --metric lorentz4d --param amp=0.05 --fd-step 1e-3
    verify --config run.cfg

Exit codes: 0 all checks passed, 1 at least one check failed, 2 bad
configuration or unwritable output.  A default config file can be pointed
to by the KREINTWIST_CONFIG environment variable; command-line flags
override file values.
"""

from __future__ import annotations

import argparse
import os
import sys

from .report import (
    ConfigError,
    ReportIOError,
    SuiteConfig,
    SUITE_ORDER,
    emit,
    parse_config_file,
)
from .suites import run

ENV_CONFIG = "KREINTWIST_CONFIG"


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="verify",
        description="Run residual verification suites for twisted Clifford / Krein operator identities.",
    )
    p.add_argument(
        "--suite",
        action="append",
        dest="suites",
        metavar="NAME",
        help=f"suite to run ({', '.join(SUITE_ORDER)} or 'all'); repeatable",
    )
    p.add_argument(
        "--signature",
        action="append",
        dest="signatures",
        nargs=2,
        type=int,
        metavar=("P", "Q"),
        help="metric signature as plus/minus counts; repeatable",
    )
    p.add_argument("--metric", dest="metric", metavar="NAME", help="metric family name")
    p.add_argument(
        "--param",
        action="append",
        dest="params",
        metavar="K=V",
        help="metric family parameter; repeatable",
    )
    p.add_argument("--fd-step", dest="fd_step", type=float, metavar="H")
    p.add_argument("--seed", dest="seed", type=int, metavar="N")
    p.add_argument(
        "--tol",
        action="append",
        dest="tols",
        metavar="CLASS=EPS",
        help="tolerance override per check class; repeatable",
    )
    p.add_argument("--format", dest="fmt", choices=("text", "json"))
    p.add_argument("--out", dest="out", metavar="PATH")
    p.add_argument("--config", dest="config", metavar="PATH", help="flat key=value config file")
    return p


def _parse_kv(items, caster, what: str) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise ConfigError(f"{what} must look like NAME=VALUE, got '{item}'")
        k, v = item.split("=", 1)
        try:
            out[k.strip()] = caster(v.strip())
        except ValueError as exc:
            raise ConfigError(f"bad {what} value '{item}': {exc}") from exc
    return out


def config_from_args(argv) -> SuiteConfig:
    args = build_parser().parse_args(argv)
    values: dict = {"metric_params": {}, "tolerances": {}}

    path = args.config or os.environ.get(ENV_CONFIG)
    if path:
        values.update(parse_config_file(path))

    if args.suites:
        values["suites"] = tuple(args.suites)
    if args.signatures:
        values["signatures"] = tuple((p, q) for p, q in args.signatures)
    if args.metric:
        values["metric_family"] = args.metric
    if args.params:
        values["metric_params"] = {
            **values.get("metric_params", {}),
            **_parse_kv(args.params, float, "--param"),
        }
    if args.fd_step is not None:
        values["fd_step"] = args.fd_step
    if args.seed is not None:
        values["seed"] = args.seed
    if args.tols:
        values["tolerances"] = {
            **values.get("tolerances", {}),
            **_parse_kv(args.tols, float, "--tol"),
        }
    if args.fmt:
        values["output_format"] = args.fmt
    if args.out:
        values["output_path"] = args.out

    cfg = SuiteConfig(**values)
    cfg.validate()
    return cfg


def main(argv=None) -> int:
    try:
        cfg = config_from_args(sys.argv[1:] if argv is None else argv)
        report = run(cfg)
        emit(report, cfg.output_format, cfg.output_path)
    except (ConfigError, ReportIOError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0 if report.all_passed else 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
