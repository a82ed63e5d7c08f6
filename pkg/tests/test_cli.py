import json
from fractions import Fraction

import pytest

from hardrods import __version__
from hardrods.cli import main, parse_fraction
from hardrods.errors import ConfigError


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_exact_command(tmp_path, capsys):
    assert run(tmp_path, "exact", "--k", "2", "--region", "2x2", "--bc", "open") == 0
    doc = json.loads((tmp_path / "exact.json").read_text())
    assert doc["polynomial"] == ["1", "4", "2"]
    assert doc["run_config"]["version"] == __version__
    assert doc["run_config"]["options"]["k"] == 2
    assert "[1, 4, 2]" in capsys.readouterr().out


def test_ratio_command(tmp_path):
    assert run(tmp_path, "ratio", "--square", "8x8-tiles", "--k", "4", "--z", "1/8") == 0
    doc = json.loads((tmp_path / "ratio.json").read_text())
    assert doc["certificate"]["extras"]["ratio"] == "1"


def test_series_command(tmp_path):
    assert run(tmp_path, "series", "--k", "4", "--region", "2x1", "--mmax", "3") == 0
    lines = (tmp_path / "series.csv").read_text().splitlines()
    assert lines[0].startswith("# run_config:")
    assert lines[1] == "order,cluster_sum,log_exact,match"
    assert all(line.endswith("True") for line in lines[2:])


def test_peierls_command(tmp_path):
    assert run(tmp_path, "peierls", "--k", "40", "--z", "1/400", "--witness", "zero") == 0
    lines = (tmp_path / "peierls.csv").read_text().splitlines()
    assert len(lines) == 2 + 4 and all(",True," in ln for ln in lines[2:])


def test_mc_byte_identical(tmp_path):
    args = ["mc", "--k", "2", "--L", "4", "--z", "0.3", "--sweeps", "3000", "--burn-in", "100",
            "--seed", "7"]
    names = ("estimators.csv", "samples.csv")
    assert run(tmp_path, *args) == 0
    first = [(tmp_path / n).read_bytes() for n in names]
    assert run(tmp_path, *args) == 0
    assert first == [(tmp_path / n).read_bytes() for n in names]
    assert run(tmp_path, *args[:-1], "8") == 0
    assert first[1] != (tmp_path / names[1]).read_bytes()


def test_mc_snapshot_to_contours(tmp_path):
    args = ["--k", "2", "--L", "16", "--z", "0.3", "--bc", "plus", "--sweeps", "2000",
            "--burn-in", "100", "--snapshots", "1"]
    assert run(tmp_path, "mc", *args) == 0
    snap = tmp_path / "snapshots" / "r0_s0.rle"
    assert snap.exists()
    assert main(["contours", "--snapshot", str(snap), "--out", str(tmp_path / "c")]) == 0
    doc = json.loads((tmp_path / "c" / "contours.json").read_text())
    assert doc["q"] == 1 and isinstance(doc["contours"], list)


def test_config_file_and_flag_precedence(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# toy\nk = 3\nregion = 3x3\n")
    assert main(["exact", "--config", str(cfg), "--k", "2", "--out", str(tmp_path)]) == 0
    doc = json.loads((tmp_path / "exact.json").read_text())
    assert doc["run_config"]["options"]["k"] == 2
    assert doc["run_config"]["options"]["region"] == "3x3"


def test_exit_codes(tmp_path):
    assert run(tmp_path, "exact", "--region", "banana") == 2
    assert run(tmp_path, "exact", "--z", "abc") == 2
    assert run(tmp_path, "exact", "--k", "2", "--L", "6", "--budget", "10") == 3
    assert run(tmp_path, "exact", "--k", "3", "--L", "5", "--bc", "plus") == 4
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["exact", "--config", str(bad), "--out", str(tmp_path)]) == 2


def test_check_subset(tmp_path, capsys):
    assert run(tmp_path, "check", "--names", "box-oracle,ratio-symmetry") == 0
    out = capsys.readouterr().out
    assert "PASS  box-oracle" in out and "2/2 checks passed" in out
    assert run(tmp_path, "check", "--names", "nope") == 2


def test_parse_fraction():
    assert parse_fraction("0.0625") == Fraction(1, 16)
    assert parse_fraction("1/16") == Fraction(1, 16)
    assert parse_fraction("0.1") == Fraction(1, 10)
    with pytest.raises(ConfigError):
        parse_fraction("1/0")
