import json
import subprocess
import sys

import pytest

from kernel_unitroot.cli import main
from kernel_unitroot.series import ingest_csv


@pytest.fixture
def rw_csv(tmp_path):
    path = tmp_path / "rw.csv"
    assert main(["simulate", "--dgp", "rw", "--T", "200", "--seed", "3", "--out", str(path)]) == 0
    return path


class TestSimulate:
    def test_writes_csv(self, rw_csv):
        s = ingest_csv(rw_csv)
        assert s.T == 200 and s.values[0] == 0.0

    def test_stdout(self, capsys):
        assert main(["simulate", "--dgp", "nonlinear", "--beta", "-0.1", "--T", "5"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out[0] == "value" and len(out) == 7

    def test_beta_required(self, capsys):
        assert main(["simulate", "--dgp", "linear", "--T", "5"]) == 5
        assert "beta" in capsys.readouterr().err

    @pytest.mark.filterwarnings("ignore::kernel_unitroot.errors.StationarityWarning")
    def test_explosion_is_config_error(self):
        assert main(["simulate", "--dgp", "linear", "--beta", "1e300", "--T", "50"]) == 5


class TestTest:
    def test_json_report(self, rw_csv, capsys):
        assert main(["test", "--input", str(rw_csv), "--h", "0.15", "--B", "20", "--seed", "1"]) == 0
        rep = json.loads(capsys.readouterr().out)
        assert rep["h"] == 0.15 and rep["bootstrap"]["seed"] == 1

    def test_markdown_to_file(self, rw_csv, tmp_path):
        out = tmp_path / "r.md"
        code = main(["test", "--input", str(rw_csv), "--h", "0.15", "--B", "20", "--format", "markdown", "--report", str(out)])
        assert code == 0 and "p-value" in out.read_text()

    def test_calibrated(self, rw_csv, capsys):
        code = main(["test", "--input", str(rw_csv), "--calibrate", "--B", "20", "--M", "10", "--alt", "linear:beta=-0.3"])
        assert code in (0, 3)

    def test_missing_input(self, tmp_path):
        assert main(["test", "--input", str(tmp_path / "none.csv"), "--h", "0.1"]) == 4

    def test_parse_error(self, tmp_path, capsys):
        bad = tmp_path / "bad.csv"
        bad.write_text("1\n2\nabc\n")
        assert main(["test", "--input", str(bad), "--h", "0.1"]) == 4
        assert "line 3" in capsys.readouterr().err

    def test_degenerate(self, tmp_path):
        flat = tmp_path / "flat.csv"
        flat.write_text("0\n1\n3\n6\n10\n")
        assert main(["test", "--input", str(flat), "--h", "0.01", "--B", "20"]) == 2

    def test_h_and_calibrate(self, rw_csv):
        assert main(["test", "--input", str(rw_csv), "--h", "0.1", "--calibrate"]) == 5

    def test_bad_kernel(self, rw_csv):
        assert main(["test", "--input", str(rw_csv), "--h", "0.1", "--kernel", "gaussian"]) == 5


class TestCalibrate:
    def test_csv_curve(self, tmp_path, capsys):
        out = tmp_path / "curve.csv"
        code = main(["calibrate", "--T", "100", "--alt", "linear:beta=-0.3", "--grid", "0.2:0.8:3",
                     "--M", "10", "--B", "20", "--sigma2", "1", "--alpha", "0.95", "--out", str(out)])
        assert code == 0
        assert out.read_text().splitlines()[0] == "h,size,power,se_size,se_power,degenerate"
        assert "h_test" in json.loads(capsys.readouterr().out)

    def test_no_admissible(self):
        # a stationary "null" over-rejects against the random-walk bootstrap at every h
        code = main(["calibrate", "--T", "300", "--null", "linear:beta=-0.5", "--alt", "rw",
                     "--grid", "0.05:0.1:2", "--M", "10", "--B", "20", "--alpha", "0.05"])
        assert code == 3

    def test_bad_grid(self):
        assert main(["calibrate", "--T", "100", "--alt", "rw", "--grid", "1:2"]) == 5

    def test_unknown_dgp(self):
        assert main(["calibrate", "--T", "100", "--alt", "garch"]) == 5


class TestTables:
    def test_power_table_files(self, tmp_path, capsys):
        code = main(["power-table", "--alt", "linear", "--T", "100", "--beta", "-0.2", "--h-test", "100:0.4",
                     "--M", "4", "--B", "20", "--out", str(tmp_path)])
        assert code == 0
        names = sorted(p.name for p in tmp_path.iterdir())
        assert names == ["power_T100_linear.csv", "power_T100_linear.md", "power_T100_linear.plot.csv"]
        assert "| β | L1" in capsys.readouterr().out

    def test_config_file_and_override(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text(f"T = 100\nbeta = -0.2\nh_test = 100:0.4\nM = 4\nB = 20\nout = {tmp_path / 'a'}\n")
        assert main(["power-table", "--config", str(cfg), "--out", str(tmp_path / "b")]) == 0
        assert (tmp_path / "b" / "power_T100_nonlinear.csv").exists()
        assert not (tmp_path / "a").exists()

    def test_size_table(self, tmp_path):
        code = main(["size-table", "--T", "100", "--h-test", "100:0.4", "--M", "4", "--B", "20", "--out", str(tmp_path)])
        assert code == 0 and (tmp_path / "size.csv").exists()

    def test_bad_config_key(self, tmp_path):
        cfg = tmp_path / "c.cfg"
        cfg.write_text("colour = red\n")
        assert main(["size-table", "--config", str(cfg)]) == 5

    def test_unwritable_out(self, tmp_path):
        blocker = tmp_path / "f"
        blocker.write_text("")
        code = main(["size-table", "--T", "100", "--h-test", "100:0.4", "--M", "2", "--B", "20", "--out", str(blocker / "x")])
        assert code == 4


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "kernel_unitroot", "--help"], capture_output=True, text=True)
    assert r.returncode == 0 and "power-table" in r.stdout
