"""Report determinism, golden machinery, and the command-line contract."""

import json
import os
import subprocess
import sys

import pytest

from vermalab.report import GoldenMismatch, VerificationReport, golden_diff
from vermalab.suites import (
    ZeroDecider,
    patterns_listing,
    suite_gt_spectrum,
    suite_ktheory,
    suite_qc,
    suite_verify_gl,
    suite_whittaker,
)


def test_report_requires_witness_on_fail():
    rep = VerificationReport("demo", {})
    with pytest.raises(Exception):
        rep.add("x", "y", "fail")


def test_reports_are_byte_identical_across_runs():
    a = suite_verify_gl(2, 2).to_json()
    b = suite_verify_gl(2, 2).to_json()
    assert a == b
    c = suite_qc(3, "1,1").to_json()
    d = suite_qc(3, "1,1").to_json()
    assert c == d


def test_exact_mode_is_seed_independent():
    a = suite_verify_gl(2, 2, ZeroDecider("exact", seed=1)).to_json()
    b = suite_verify_gl(2, 2, ZeroDecider("exact", seed=999)).to_json()
    assert a == b


def test_random_eval_mode_agrees_with_exact_here():
    a = suite_qc(3, "1,0", ZeroDecider("random-eval", trials=8, seed=5))
    b = suite_qc(3, "1,0", ZeroDecider("exact"))
    assert [i.status for i in a.items] == [i.status for i in b.items]


def test_golden_roundtrip(tmp_path):
    text = suite_verify_gl(2, 1).to_json()
    with pytest.raises(GoldenMismatch):
        golden_diff(text, str(tmp_path), "r.json", bless=False)
    assert golden_diff(text, str(tmp_path), "r.json", bless=True)["status"] == "blessed"
    assert golden_diff(text, str(tmp_path), "r.json")["status"] == "match"
    mutated = text.replace('"pass"', '"fail"', 1)
    res = golden_diff(mutated, str(tmp_path), "r.json")
    assert res["status"] == "mismatch" and res["mismatches"]


def test_patterns_listing_counts():
    blob = patterns_listing(3, "1,1")
    assert blob["count"] == 2
    blob = patterns_listing(2, "1", include_global=True)
    assert blob["global_count"] == 4


def test_suite_statuses():
    rep, table = suite_gt_spectrum(3, "1,1")
    assert rep.ok()
    assert table["generators"] == ["tildeCas2"]
    rep, comp = suite_whittaker(2, "1")
    assert rep.ok() and comp["degree"] == [1]
    rep, table = suite_ktheory(3, 2)
    assert rep.ok()
    statuses = {i.label: i.status for i in rep.items}
    assert statuses["determinant class inverts the corrected Casimir"] == "pass"
    assert statuses["squared determinant class inverts the corrected Casimir"] == "finding"


def test_qc_suite_findings_do_not_fail():
    # rank 3 has a single deformed element: commutativity is vacuous and
    # the quadratic-space probe lands as a finding, which never gates
    rep = suite_qc(3, "1,1")
    assert rep.ok()
    statuses = {i.label: i.status for i in rep.items}
    assert statuses["family commutativity"] == "vacuous"
    assert statuses["QC2 matches quadratic-space element"] == "finding"
    assert statuses["QC2 at q=0 equals tildeCas2"] == "pass"


def _run_cli(*argv):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.pathsep.join(
        [os.path.join(os.path.dirname(__file__), "..", "src")]
        + env.get("PYTHONPATH", "").split(os.pathsep)
    )
    return subprocess.run(
        [sys.executable, "-m", "vermalab.cli", *argv],
        capture_output=True,
        text=True,
        env=env,
    )


def test_cli_patterns_and_exit_codes(tmp_path):
    out = tmp_path / "patterns.json"
    res = _run_cli("patterns", "--n", "3", "--degree", "1,1", "--out", str(out))
    assert res.returncode == 0
    blob = json.loads(out.read_text())
    assert blob["count"] == 2
    assert out.read_text().endswith("\n")


def test_cli_verify_gl_green():
    res = _run_cli("verify-gl", "--n", "2", "--max-degree", "2")
    assert res.returncode == 0
    assert "fail" in res.stdout or "pass" in res.stdout


def test_cli_usage_error():
    res = _run_cli("verify-gl", "--n", "2")
    assert res.returncode == 2


def test_cli_bad_flag():
    res = _run_cli("verify-gl", "--n", "2", "--max-degree", "1", "--format", "xml")
    assert res.returncode == 2


def test_cli_qc_spec_example():
    res = _run_cli("qc-check", "--n", "3", "--degree", "1,1")
    assert res.returncode == 0


def test_cli_deterministic_files(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    for target in (a, b):
        res = _run_cli(
            "whittaker", "--n", "2", "--degree", "2", "--format", "json", "--out", str(target)
        )
        assert res.returncode == 0
    assert a.read_text() == b.read_text()


def test_cli_golden_flow(tmp_path):
    golden = tmp_path / "goldens"
    res = _run_cli(
        "verify-gl", "--n", "2", "--max-degree", "1", "--out", str(tmp_path / "r.json"),
        "--golden", str(golden), "--bless",
    )
    assert res.returncode == 0
    res = _run_cli(
        "verify-gl", "--n", "2", "--max-degree", "1", "--out", str(tmp_path / "r.json"),
        "--golden", str(golden),
    )
    assert res.returncode == 0
    assert "golden: match" in res.stderr


def test_cli_threads_env_validation(tmp_path):
    env = dict(os.environ)
    env["PYTHONPATH"] = os.path.join(os.path.dirname(__file__), "..", "src")
    env["VERMALAB_THREADS"] = "zero"
    res = subprocess.run(
        [sys.executable, "-m", "vermalab.cli", "patterns", "--n", "2", "--degree", "1"],
        capture_output=True,
        text=True,
        env=env,
    )
    assert res.returncode == 1
    assert "VERMALAB_THREADS" in res.stderr
