"""CLI surface: suites, exit codes, reports, determinism across job counts."""

import pytest

from engelfit.cli import main
from engelfit.report import parse_report


def test_run_single_builtin_suite(tmp_path, capsys):
    report_path = tmp_path / "out.txt"
    code = main(["run", "--suite", "baer", "--corpus", "builtin:symmetric(4)",
                 "--report", str(report_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "suite baer: pass" in out
    report = parse_report(report_path.read_text())
    assert report.suites[0].cases == 24
    assert report.status == "pass"


def test_run_reports_to_directory_with_convention(tmp_path):
    code = main(["run", "--suite", "thmJ", "--corpus", "builtin:alternating(5)",
                 "--report", str(tmp_path)])
    assert code == 0
    target = tmp_path / "alternating(5)-thmJ-report.txt"
    assert target.exists()


def test_exit_code_two_on_resource_limit(tmp_path):
    # k-cap of 1 exhausts before any commutator cycle is found
    code = main(["run", "--suite", "baer", "--corpus", "builtin:symmetric(3)",
                 "--k-cap", "1", "--report", str(tmp_path / "r.txt")])
    assert code == 2
    report = parse_report((tmp_path / "r.txt").read_text())
    assert report.status == "partial"


def test_analyze_s4(capsys):
    code = main(["analyze", "--corpus", "builtin:symmetric(4)",
                 "--group", "symmetric(4)"])
    assert code == 0
    out = capsys.readouterr().out
    assert "fitting-order 4" in out
    assert "generalized-fitting-height 3" in out
    assert "insoluble-length 0" in out


def test_analyze_unknown_group():
    assert main(["analyze", "--corpus", "builtin:symmetric(4)",
                 "--group", "nope"]) == 2


def test_determinism_across_runs_and_jobs(tmp_path):
    """Byte-identical reports for repeated runs and different job counts."""
    paths = [tmp_path / f"r{i}.txt" for i in range(3)]
    corpus = "builtin:small-std"
    args = ["run", "--suite", "thmJ", "--corpus", corpus, "--max-order", "200"]
    assert main(args + ["--report", str(paths[0]), "--jobs", "1"]) == 0
    assert main(args + ["--report", str(paths[1]), "--jobs", "1"]) == 0
    assert main(args + ["--report", str(paths[2]), "--jobs", "3"]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]


def test_module_entry_point():
    import subprocess
    import sys
    proc = subprocess.run(
        [sys.executable, "-m", "engelfit", "run", "--suite", "baer",
         "--corpus", "builtin:cyclic(6)"],
        capture_output=True, text=True)
    assert proc.returncode == 0
    assert "suite baer: pass" in proc.stdout


def test_console_script_version():
    import subprocess
    proc = subprocess.run(["engelfit", "--version"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert "engelfit" in proc.stdout
