"""Run configuration, check records and report emission (text / json)."""

from __future__ import annotations

import json
import os
import sys
from dataclasses import dataclass, field, asdict
from typing import Optional

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ReportIOError",
    "SUITE_ORDER",
    "DEFAULT_TOLERANCES",
    "DEFAULT_SIGNATURES",
    "SuiteConfig",
    "CheckRecord",
    "Report",
    "parse_config_file",
    "emit",
]

SUITE_ORDER = ("clifford", "krein", "morphism", "geometry", "product", "emergence")

# Tolerance classes, tightest first: exact algebra at build scale, chained
# products, norm-amplified sampled checks, and the FD-limited geometry ones.
DEFAULT_TOLERANCES = {
    "involution": 1e-13,
    "build": 1e-12,
    "chain": 1e-11,
    "sampled": 1e-10,
    "fd_fine": 1e-6,
    "fd": 1e-5,
    "fd_coarse": 1e-4,
    "ratio": 0.5,
}

DEFAULT_SIGNATURES = tuple(
    (p, n - p) for n in (2, 4, 6) for p in range(n, -1, -1)
)


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2)."""


class ReportIOError(OSError):
    """Report could not be written (exit code 2)."""


@dataclass
class SuiteConfig:
    suites: tuple = ("all",)
    signatures: tuple = DEFAULT_SIGNATURES
    metric_family: str = "lorentz4d"
    metric_params: dict = field(default_factory=dict)
    fd_step: float = 1e-3
    seed: int = 1234
    tolerances: dict = field(default_factory=dict)
    output_format: str = "text"
    output_path: Optional[str] = None

    def resolved_suites(self) -> tuple:
        out = []
        for s in self.suites:
            if s == "all":
                out.extend(SUITE_ORDER)
            else:
                out.append(s)
        return tuple(out)

    def tol(self, cls: str) -> float:
        if cls not in DEFAULT_TOLERANCES:
            raise ConfigError(f"unknown tolerance class '{cls}'")
        return float(self.tolerances.get(cls, DEFAULT_TOLERANCES[cls]))

    def validate(self) -> None:
        for s in self.suites:
            if s != "all" and s not in SUITE_ORDER:
                raise ConfigError(f"unknown suite '{s}'")
        if not self.signatures:
            raise ConfigError("at least one signature is required")
        for p, q in self.signatures:
            if p < 0 or q < 0 or (p + q) % 2 != 0 or (p + q) < 2:
                raise ConfigError(f"signature ({p},{q}) is not even-dimensional")
        if not (1e-6 < self.fd_step < 1e-1):
            raise ConfigError("fd_step must lie in (1e-6, 1e-1)")
        from .geometry import METRIC_FAMILY_NAMES

        if self.metric_family not in METRIC_FAMILY_NAMES:
            raise ConfigError(
                f"unknown metric family '{self.metric_family}' "
                f"(choose from {', '.join(METRIC_FAMILY_NAMES)})"
            )
        for cls in self.tolerances:
            if cls not in DEFAULT_TOLERANCES:
                raise ConfigError(f"unknown tolerance class '{cls}'")
        if self.output_format not in ("text", "json"):
            raise ConfigError(f"unknown output format '{self.output_format}'")

    def echo(self) -> dict:
        return {
            "suites": list(self.resolved_suites()),
            "signatures": [list(s) for s in self.signatures],
            "metric_family": self.metric_family,
            "metric_params": dict(sorted(self.metric_params.items())),
            "fd_step": self.fd_step,
            "seed": self.seed,
            "tolerances": {
                k: self.tol(k) for k in sorted(DEFAULT_TOLERANCES)
            },
            "output_format": self.output_format,
        }


@dataclass(frozen=True)
class CheckRecord:
    """One verified identity: residual vs tolerance plus its formula anchor."""

    suite: str
    check_id: str
    anchor: str
    residual: float
    tolerance: float
    passed: bool
    runtime_ms: float


@dataclass
class Report:
    tool_version: str
    config: dict
    records: list
    summary: dict

    @classmethod
    def from_records(cls, config: SuiteConfig, records: list) -> "Report":
        passed = sum(1 for r in records if r.passed)
        return cls(
            tool_version=__version__,
            config=config.echo(),
            records=list(records),
            summary={
                "total": len(records),
                "passed": passed,
                "failed": len(records) - passed,
            },
        )

    @property
    def all_passed(self) -> bool:
        return self.summary["failed"] == 0

    def to_json_dict(self) -> dict:
        return {
            "tool_version": self.tool_version,
            "config": self.config,
            "records": [asdict(r) for r in self.records],
            "summary": dict(self.summary),
        }


def parse_config_file(path: str) -> dict:
    """Flat key = value config file.

    Recognized keys: suites (comma list), signatures (semicolon list of
    "p,q" pairs), metric, param.NAME, fd_step, seed, tol.CLASS, format, out.
    Blank lines and '#' comments are skipped.
    """
    values: dict = {"metric_params": {}, "tolerances": {}}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, val = (part.strip() for part in line.split("=", 1))
        try:
            if key == "suites":
                values["suites"] = tuple(s.strip() for s in val.split(",") if s.strip())
            elif key == "signatures":
                sigs = []
                for item in val.split(";"):
                    item = item.strip()
                    if not item:
                        continue
                    p, q = (int(t) for t in item.split(","))
                    sigs.append((p, q))
                values["signatures"] = tuple(sigs)
            elif key == "metric":
                values["metric_family"] = val
            elif key.startswith("param."):
                values["metric_params"][key[len("param."):]] = float(val)
            elif key == "fd_step":
                values["fd_step"] = float(val)
            elif key == "seed":
                values["seed"] = int(val)
            elif key.startswith("tol."):
                values["tolerances"][key[len("tol."):]] = float(val)
            elif key == "format":
                values["output_format"] = val
            elif key == "out":
                values["output_path"] = val
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key '{key}'")
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(f"{path}:{lineno}: bad value for '{key}': {exc}") from exc
    return values


def _text_lines(report: Report) -> list:
    header = (
        f"{'suite':<10} {'check':<46} {'anchor':<34} "
        f"{'residual':>12} {'tol':>9} {'status':<6}"
    )
    lines = [header]
    for r in report.records:
        lines.append(
            f"{r.suite:<10} {r.check_id:<46} {r.anchor:<34} "
            f"{r.residual:>12.3e} {r.tolerance:>9.1e} "
            f"{'pass' if r.passed else 'FAIL':<6}"
        )
    s = report.summary
    lines.append(
        f"summary: {s['passed']}/{s['total']} passed, {s['failed']} failed "
        f"(tool {report.tool_version})"
    )
    return lines


def emit(report: Report, fmt: str, path: Optional[str] = None) -> None:
    """Write the report as an aligned text table or a stable-keyed json object."""
    if fmt == "json":
        payload = json.dumps(report.to_json_dict(), indent=2, sort_keys=False)
        payload += "\n"
    elif fmt == "text":
        payload = "\n".join(_text_lines(report)) + "\n"
    else:
        raise ConfigError(f"unknown output format '{fmt}'")
    if path is None:
        sys.stdout.write(payload)
        return
    try:
        tmp = f"{path}.tmp.{os.getpid()}"
        with open(tmp, "w", encoding="utf-8") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except OSError as exc:
        raise ReportIOError(f"cannot write report to {path}: {exc}") from exc
