import json
import re
import subprocess

import pytest

from kreintwist.report import (
    ConfigError,
    SuiteConfig,
    emit,
    parse_config_file,
)
from kreintwist.suites import run
from kreintwist.cli import config_from_args, main

QUICK = ["--suite", "clifford", "--signature", "2", "0"]


def _strip_runtime(text: str) -> str:
    return re.sub(r'"runtime_ms": [0-9.]+', '"runtime_ms": 0', text)


def test_exit_zero_on_quick_pass(capsys):
    assert main(QUICK) == 0
    out = capsys.readouterr().out
    assert "summary:" in out


def test_text_table_line_count(capsys):
    assert main(QUICK) == 0
    lines = capsys.readouterr().out.strip().split("\n")
    cfg = config_from_args(QUICK)
    n_records = len(run(cfg).records)
    assert len(lines) == n_records + 2  # header + records + summary
    assert n_records >= 6


def test_exit_one_on_forced_failure(capsys):
    code = main(["--suite", "geometry", "--tol", "fd=0"])
    assert code == 1
    assert "FAIL" in capsys.readouterr().out


def test_exit_two_on_config_errors(capsys):
    assert main(["--suite", "nosuch"]) == 2
    assert main(["--suite", "clifford", "--signature", "1", "2"]) == 2
    assert main(["--suite", "clifford", "--fd-step", "1"]) == 2
    assert main(["--suite", "clifford", "--tol", "nosuchclass=1"]) == 2
    assert main(["--suite", "clifford", "--format", "json",
                 "--out", "/nonexistent-dir/r.json", "--signature", "2", "0"]) == 2


def test_json_deterministic_modulo_runtime(tmp_path):
    args = ["--suite", "clifford", "--suite", "krein", "--signature", "1", "3",
            "--format", "json", "--seed", "9"]
    p1 = tmp_path / "a.json"
    p2 = tmp_path / "b.json"
    assert main(args + ["--out", str(p1)]) == 0
    assert main(args + ["--out", str(p2)]) == 0
    assert _strip_runtime(p1.read_text()) == _strip_runtime(p2.read_text())


def test_json_round_trip(tmp_path):
    cfg = config_from_args(QUICK + ["--format", "json"])
    report = run(cfg)
    path = tmp_path / "r.json"
    emit(report, "json", str(path))
    parsed = json.loads(path.read_text())
    direct = report.to_json_dict()
    for rec_a, rec_b in zip(parsed["records"], direct["records"]):
        rec_a.pop("runtime_ms")
        rec_b.pop("runtime_ms")
    assert parsed["records"] == direct["records"]
    assert parsed["summary"] == direct["summary"]
    assert parsed["config"] == direct["config"]


def test_empty_suite_list_gives_empty_report():
    cfg = SuiteConfig(suites=())
    report = run(cfg)
    assert report.records == []
    assert report.summary == {"total": 0, "passed": 0, "failed": 0}
    assert report.all_passed


def test_records_follow_declared_suite_order():
    cfg = config_from_args(
        ["--suite", "emergence", "--suite", "clifford", "--signature", "2", "0"]
    )
    report = run(cfg)
    suites_seen = [r.suite for r in report.records]
    first_clifford = suites_seen.index("clifford")
    assert all(s == "emergence" for s in suites_seen[:first_clifford])
    assert all(s == "clifford" for s in suites_seen[first_clifford:])


def test_record_fields_and_anchors():
    cfg = config_from_args(QUICK)
    report = run(cfg)
    for rec in report.records:
        assert rec.suite == "clifford"
        assert rec.check_id.startswith("clifford.")
        assert rec.anchor
        assert rec.residual >= 0.0
        assert rec.passed == (rec.residual <= rec.tolerance)
    assert report.summary["passed"] == sum(1 for r in report.records if r.passed)


def test_config_file_and_overrides(tmp_path, monkeypatch):
    cfg_file = tmp_path / "run.cfg"
    cfg_file.write_text(
        "# comment\n"
        "suites = clifford, emergence\n"
        "signatures = 2,0; 1,3\n"
        "seed = 5\n"
        "tol.fd = 2e-5\n"
        "metric = lorentz4d\n"
        "param.amp = 0.05\n"
        "format = json\n"
    )
    cfg = config_from_args(["--config", str(cfg_file)])
    assert cfg.resolved_suites() == ("clifford", "emergence")
    assert cfg.signatures == ((2, 0), (1, 3))
    assert cfg.seed == 5
    assert cfg.tol("fd") == 2e-5
    assert cfg.metric_params == {"amp": 0.05}
    # CLI flags override file values
    cfg2 = config_from_args(["--config", str(cfg_file), "--seed", "11", "--suite", "krein"])
    assert cfg2.seed == 11
    assert cfg2.resolved_suites() == ("krein",)
    # environment variable names the default config
    monkeypatch.setenv("KREINTWIST_CONFIG", str(cfg_file))
    cfg3 = config_from_args([])
    assert cfg3.seed == 5


def test_config_file_errors(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("nonsense line\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(bad))
    bad.write_text("seed = notanint\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(bad))
    bad.write_text("unknownkey = 1\n")
    with pytest.raises(ConfigError):
        parse_config_file(str(bad))
    with pytest.raises(ConfigError):
        parse_config_file(str(tmp_path / "missing.cfg"))


def test_installed_entry_point():
    proc = subprocess.run(
        ["verify", "--suite", "emergence"],
        capture_output=True,
        text=True,
        timeout=120,
    )
    assert proc.returncode == 0
    assert "emergence" in proc.stdout
