import json
import subprocess
import sys

import pytest

from clutch.cli import main


def run(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


class TestExitCodes:
    def test_passing_suite(self, capsys):
        status, out, _ = run(capsys, "verify", "group", "-N", "2", "-K", "4")
        report = json.loads(out)
        assert status == 0
        assert report["failed"] == 0 and report["passed"] == len(report["checks"])
        assert "wall_time" not in report

    def test_failing_suite_reports_only_the_known_discrepancy(self, capsys):
        status, out, _ = run(capsys, "verify", "periods")
        report = json.loads(out)
        assert status == 1
        failed = {c["id"] for c in report["checks"] if c["status"] == "fail"}
        assert failed == {"periods.higher-vanish", "periods.pi-display"}
        assert all("witness" in c for c in report["checks"] if c["status"] == "fail")

    @pytest.mark.parametrize("argv", [
        ["verify", "bogus"],
        ["emit", "nothing"],
        ["emit", "witt", "-i", "1"],
        ["emit", "fdiff", "--n", "1"],
        ["emit", "period", "--g1", "1"],
        ["verify", "group", "-K", "0"],
        [],
    ])
    def test_usage_errors(self, capsys, argv):
        status, _, _ = run(capsys, *argv)
        assert status == 2


class TestEmit:
    def test_witt_text(self, capsys):
        status, out, _ = run(capsys, "emit", "witt", "-i", "1", "-j", "-1")
        assert status == 0 and out.strip() == "2·q·M_0"

    def test_recursion_json(self, capsys):
        _, out, _ = run(capsys, "emit", "recursion", "--format", "json")
        doc = json.loads(out)
        assert doc["kind"] == "recursion" and doc["N"] == 11
        a4 = doc["a"]["4"]
        assert a4[4] == [{"den": "1", "mono": {"c2_t2": 1}, "num": "1"}]
        assert all(not a4[k] for k in range(4))

    def test_wp_latex(self, capsys):
        status, out, _ = run(capsys, "emit", "wp", "--format", "latex")
        assert status == 0
        assert out.startswith(r"\wp(z) = z^{-2} + c_{2}z^{2}")

    def test_period_latex_uses_fractions(self, capsys):
        _, out, _ = run(capsys, "emit", "period", "-N", "4", "--format", "latex")
        assert r"\frac{1}{3}" in out and r"c_{2}(\tau_1)" in out

    def test_symbolic_period(self, capsys):
        status, out, _ = run(capsys, "emit", "period", "--g1", "1", "--g2", "2", "-N", "3", "--format", "json")
        doc = json.loads(out)
        assert status == 0 and (doc["g1"], doc["g2"]) == (1, 2)

    @pytest.mark.parametrize("argv", [
        ["emit", "recursion", "--format", "json"],
        ["emit", "period", "-N", "6", "--format", "latex"],
        ["verify", "series"],
    ])
    def test_output_is_deterministic(self, capsys, argv):
        _, first, _ = run(capsys, *argv)
        _, second, _ = run(capsys, *argv)
        assert first == second

    def test_out_file(self, capsys, tmp_path):
        target = tmp_path / "report.json"
        status, out, _ = run(capsys, "verify", "node", "--out", str(target))
        assert status == 0
        assert target.read_text(encoding="utf-8") == out

    def test_timing_flag(self, capsys):
        _, out, _ = run(capsys, "verify", "node", "--timing")
        assert json.loads(out)["wall_time"] >= 0


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "clutch", "emit", "witt", "-i", "2", "-j", "3"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and proc.stdout.strip() == "-M_5"
