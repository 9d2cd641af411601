from __future__ import annotations

import json
import subprocess
import sys

import pytest

from signdiff import cli, verification
from signdiff.cli import EXIT_CONFIG, EXIT_OK, EXIT_VERIFY_FAILED, main


def test_run_writes_artifacts(tmp_path, capsys):
    code = main(["run", "--scheme", "rw", "--n", "400", "--T", "0.1", "0.4", "--out", str(tmp_path)])
    assert code == EXIT_OK
    assert (tmp_path / "rw_T0.1.csv").exists() and (tmp_path / "rw_T0.4.csv").exists()
    assert "metadata.jsonl" in capsys.readouterr().out


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text(f"scheme = fund\nh = 0.01\nsteps = 20\nk = 2\nout = {tmp_path / 'from_file'}\n")
    code = main(["run", "--config", str(config), "--k", "-0.5", "--out", str(tmp_path / "flag")])
    assert code == EXIT_OK
    record = json.loads((tmp_path / "flag" / "metadata.jsonl").read_text())
    assert record["k"] == -0.5 and record["parameters"]["h"] == 0.01
    assert not (tmp_path / "from_file").exists()


def test_config_errors_exit_with_config_code(tmp_path, capsys):
    assert main(["run", "--k", "0", "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "k/a:" in capsys.readouterr().err
    assert main(["run", "--config", str(tmp_path / "missing.cfg")]) == EXIT_CONFIG
    assert main(["run", "--scheme", "rw", "--n", "50", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_argparse_rejects_unknown_scheme():
    with pytest.raises(SystemExit) as info:
        main(["run", "--scheme", "montecarlo"])
    assert info.value.code == 2


def test_table1_command(tmp_path, capsys):
    assert main(["table1", "--n-list", "100", "625", "--out", str(tmp_path)]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "n,sup_error,published,wall_time"
    assert lines[1].startswith("100,4.43") and lines[2].startswith("625,9.53")
    assert (tmp_path / "table1.csv").exists()


def test_verify_reports_json_lines_and_passes(capsys):
    assert main(["verify", "--suite", "walk"]) == EXIT_OK
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    assert records[-1] == {"summary": True, "checks": len(records) - 1, "failed": []}
    assert all({"suite", "check", "measured", "tolerance", "passed"} <= set(r) for r in records[:-1])


def test_verify_all_suites_emit_valid_json(capsys):
    code = main(["verify", "--suite", "all"])
    records = [json.loads(line) for line in capsys.readouterr().out.splitlines()]
    summary = records[-1]
    assert {r["suite"] for r in records[:-1]} == {"kernels", "walk", "schemes"}
    assert all(isinstance(r["passed"], bool) for r in records[:-1])
    assert code == (EXIT_VERIFY_FAILED if summary["failed"] else EXIT_OK)


def test_verify_failure_exit_code(monkeypatch, capsys):
    failing = verification.CheckResult("walk", "synthetic", 1.0, 0.5, False)
    monkeypatch.setattr(verification, "run_suite", lambda name, include_250k=False: [failing])
    assert main(["verify", "--suite", "walk"]) == EXIT_VERIFY_FAILED
    assert json.loads(capsys.readouterr().out.splitlines()[-1])["failed"] == ["synthetic"]


def test_exit_codes_are_distinct():
    assert len({EXIT_OK, EXIT_CONFIG, EXIT_VERIFY_FAILED}) == 3
    assert cli.build_parser().prog == "signdiff"


def test_module_entry_point(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "signdiff", "run", "--k", "-1", "--out", str(tmp_path)],
                          capture_output=True, text=True)
    assert proc.returncode == EXIT_CONFIG
