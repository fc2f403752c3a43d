import json
import math

import pytest

from hccm.cli import main

TINY = """
# small end-to-end configuration
squeezing_db = -2.7
antisqueezing_db = 5.5
squeeze_angle_rad = {half_pi}
alpha_re = 3.0
alpha_im = 0.0
lo_field_strength = 2.8
n_phases = 16
samples_per_phase = 3000
blocked_samples = 9000
seed = 42
drift_rate = 0.0
splitter_ts2 = 0.86
splitter_tl2 = 0.86
splitter_rs2 = 0.14
splitter_rl2 = 0.14
visibility = 0.96
eta1 = 0.94
eta2 = 0.94
lo_scan_field_strengths = 0.0,1.4,2.0,2.8
lo_scan_phase_rad = {three_quarter_pi}
""".format(half_pi=repr(math.pi / 2), three_quarter_pi=repr(0.75 * math.pi))


@pytest.fixture
def tiny_config_path(tmp_path):
    path = tmp_path / "tiny.cfg"
    path.write_text(TINY)
    return str(path)


class TestChain:
    def test_simulate_analyze_test(self, tmp_path, tiny_config_path, capsys):
        out = str(tmp_path / "run")
        assert main(["simulate", "--config", tiny_config_path, "--out", out]) == 0
        assert (tmp_path / "run" / "phase_scan.txt").exists()
        assert (tmp_path / "run" / "lo_scan.txt").exists()

        assert main(["analyze", "--out", out]) == 0
        assert (tmp_path / "run" / "fit_report.txt").exists()
        assert (tmp_path / "run" / "phase_table.txt").exists()
        assert (tmp_path / "run" / "lo_table.txt").exists()
        assert (tmp_path / "run" / "separation.json").exists()

        assert main(["test", "--out", out]) == 0
        assert (tmp_path / "run" / "det_table.txt").exists()
        text = (tmp_path / "run" / "det_table.txt").read_text()
        assert "nonclassical" in text
        captured = capsys.readouterr()
        assert "fraction" in captured.out

    def test_structured_output(self, tmp_path, tiny_config_path):
        out = str(tmp_path / "run")
        assert main(["simulate", "--config", tiny_config_path, "--out", out]) == 0
        assert main(["analyze", "--out", out, "--format", "structured"]) == 0
        doc = json.loads((tmp_path / "run" / "analyze_report.json").read_text())
        assert "fit" in doc and "phase_table" in doc
        assert main(["test", "--out", out, "--format", "structured"]) == 0
        det = json.loads((tmp_path / "run" / "det_report.json").read_text())
        assert "det_table" in det and "summary" in det


class TestDeterminism:
    def test_reproduce_quick_byte_identical(self, tmp_path):
        out1, out2 = str(tmp_path / "a"), str(tmp_path / "b")
        for out in (out1, out2):
            code = main(
                [
                    "reproduce-paper",
                    "--preset",
                    "paper-quick",
                    "--out",
                    out,
                    "--seed",
                    "7",
                    "--format",
                    "structured",
                ]
            )
            assert code == 0
        r1 = (tmp_path / "a" / "report.json").read_bytes()
        r2 = (tmp_path / "b" / "report.json").read_bytes()
        assert r1 == r2

    def test_reproduce_writes_all_tables(self, tmp_path):
        out = str(tmp_path / "rep")
        assert main(["reproduce-paper", "--preset", "paper-quick", "--out", out]) == 0
        for name in ("fit_report.txt", "phase_table.txt", "det_table.txt", "lo_table.txt"):
            assert (tmp_path / "rep" / name).exists()

    def test_seed_override_changes_report(self, tmp_path):
        outs = []
        for name, seed in (("a", "7"), ("b", "8")):
            out = str(tmp_path / name)
            main(
                [
                    "reproduce-paper",
                    "--preset",
                    "paper-quick",
                    "--out",
                    out,
                    "--seed",
                    seed,
                    "--format",
                    "structured",
                ]
            )
            outs.append((tmp_path / name / "report.json").read_bytes())
        assert outs[0] != outs[1]


class TestExitCodes:
    def test_unphysical_config(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("squeezing_db = -3.0\nantisqueezing_db = -3.0\n")
        code = main(["simulate", "--config", str(bad), "--out", str(tmp_path)])
        assert code == 2
        err = capsys.readouterr().err
        assert "uncertainty" in err or "variance product" in err

    def test_unknown_key(self, tmp_path, capsys):
        bad = tmp_path / "bad.cfg"
        bad.write_text("totally_unknown = 1\n")
        assert main(["simulate", "--config", str(bad), "--out", str(tmp_path)]) == 2
        assert "unknown key" in capsys.readouterr().err

    def test_missing_record(self, tmp_path, capsys):
        assert main(["analyze", "--out", str(tmp_path / "empty")]) == 3
        assert "data error" in capsys.readouterr().err

    def test_test_requires_analyze_output(self, tmp_path, capsys):
        assert main(["test", "--out", str(tmp_path)]) == 3
        assert "analyze" in capsys.readouterr().err

    def test_balanced_splitter_precondition(self, tmp_path, capsys):
        cfg = tmp_path / "balanced.cfg"
        cfg.write_text(
            TINY.replace("splitter_ts2 = 0.86", "splitter_ts2 = 0.5")
            .replace("splitter_tl2 = 0.86", "splitter_tl2 = 0.5")
            .replace("splitter_rs2 = 0.14", "splitter_rs2 = 0.5")
            .replace("splitter_rl2 = 0.14", "splitter_rl2 = 0.5")
        )
        out = str(tmp_path / "run")
        assert main(["simulate", "--config", str(cfg), "--out", out]) == 0
        assert main(["analyze", "--out", out]) == 0
        code = main(["test", "--out", out])
        assert code == 4
        err = capsys.readouterr().err
        assert "unbalanced" in err
