import json
import subprocess
import sys

from qplatesim.cli import main
from qplatesim.fieldio import read_field

FAST = ["--set", "grid.n=128", "--set", "grid.half_width=96", "--set", "beam.w0=24", "--set", "plate.q=1"]


def test_single(tmp_path, capsys):
    assert main(["single", *FAST, "--out", str(tmp_path)]) == 0
    assert read_field(tmp_path / "field_in.qpsf").grid.n == 128
    assert (tmp_path / "field_out.qpsf").exists()
    assert "delta" in capsys.readouterr().out


def test_scan(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"scan": {"param": "d", "steps": 3}}))
    assert main(["scan", "--config", str(cfg), *FAST, "--out", str(tmp_path)]) == 0
    assert len((tmp_path / "scan.csv").read_text().splitlines()) == 4
    assert "prefactor" in capsys.readouterr().out


def test_verify_pass_and_fail(tmp_path):
    assert main(["verify", *FAST, "--out", str(tmp_path / "ok")]) == 0
    assert "FAIL" not in (tmp_path / "ok" / "verify.txt").read_text()
    assert main(["verify", *FAST, "--set", "tolerances.energy=1e-15", "--out", str(tmp_path / "bad")]) == 1
    assert "output.energy" in (tmp_path / "bad" / "verify.txt").read_text()


def test_config_errors(tmp_path, capsys):
    assert main(["single", "--set", "beam.w0=1"]) == 2
    assert "resolution" in capsys.readouterr().err
    assert main(["single", "--config", str(tmp_path / "none.json")]) == 2
    assert main(["scan", *FAST]) == 2
    assert main(["single", "--set", "nonsense"]) == 2


def test_entry_point_module():
    r = subprocess.run([sys.executable, "-m", "qplatesim.cli", "single", "--set", "grid.n=7"],
                       capture_output=True, text=True)
    assert r.returncode == 2
