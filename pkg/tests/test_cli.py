import os

import pytest

from fcsim import cli


def test_heff_report_writes_outputs(tmp_path, capsys):
    rc = cli.main(["run", "--experiment", "heff_report",
                   "--out", str(tmp_path)])
    assert rc == 0
    out = capsys.readouterr().out
    assert "kappa" in out
    names = os.listdir(tmp_path)
    assert any(n.endswith(".csv") for n in names)
    assert any(n.endswith(".svg") for n in names)


def test_unknown_experiment_exits_one(capsys):
    rc = cli.main(["run", "--experiment", "nonsense"])
    assert rc == 1
    err = capsys.readouterr().err
    assert "scan_dphi" in err  # lists the valid names


def test_missing_device_file_exits_one(tmp_path, capsys):
    rc = cli.main(["run", "--experiment", "heff_report",
                   "--device", str(tmp_path / "absent.json"),
                   "--out", str(tmp_path)])
    assert rc == 1


def test_resonance_guard_exits_two(tmp_path, capsys):
    # at nu = 118.6 the n = 2 harmonic lands on the anharmonicity (eta = -237)
    rc = cli.main(["run", "--experiment", "heff_report",
                   "--nu", "118.6", "--out", str(tmp_path)])
    assert rc == 2
    assert "resonant" in capsys.readouterr().err


def test_verify_filter(capsys):
    rc = cli.main(["verify", "--filter", "chirality"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "chirality-permutation" in out


def test_verify_unknown_filter(capsys):
    rc = cli.main(["verify", "--filter", "bogus"])
    assert rc == 1
    assert "no criteria match" in capsys.readouterr().out


def test_chiral_csv_is_deterministic(tmp_path):
    dirs = []
    for k in range(2):
        d = tmp_path / f"run{k}"
        rc = cli.main(["run", "--experiment", "chiral_single",
                       "--shots", "200", "--seed", "3", "--out", str(d)])
        assert rc == 0
        dirs.append(d)
    a = (dirs[0] / "chiral_single.csv").read_bytes()
    b = (dirs[1] / "chiral_single.csv").read_bytes()
    assert a == b
    # metadata header records the settings
    head = a.decode().splitlines()[:6]
    assert any("shots=200" in ln for ln in head)
