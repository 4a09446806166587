import math

import numpy as np
import pytest

from solwave.cli import main, scan_roots, scan_row
from solwave.core import ModelParams, equilibria
from solwave.io import read_csv
from solwave.melnikov import KS, ME


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def parse(stdout):
    return dict(line.split("=", 1) for line in stdout.splitlines() if "=" in line)


def column(rows, j):
    return np.array([np.nan if r[j] is None else r[j] for r in rows])


def test_wave(tmp_path, capsys):
    code, out, _ = run(capsys, "wave", "--c", "0.5", "--g", "0", "--out", str(tmp_path))
    assert code == 0
    header, rows = read_csv(tmp_path / "wave.csv")
    assert header == ["xi", "phi", "y"] and len(rows) == 801
    xi, phi = column(rows, 0), column(rows, 1)
    assert xi[400] == 0.0 and phi[400] == pytest.approx(0.5, abs=1e-15)
    phi1 = equilibria(ModelParams(0.5, 0.0)).phi1
    assert abs(phi[0] - phi1) <= 1e-6 and abs(phi[-1] - phi1) <= 1e-6
    assert (tmp_path / "wave_profile.svg").stat().st_size > 0
    assert (tmp_path / "wave_phase.svg").exists()
    assert float(parse(out)["h1"]) == pytest.approx(1 / 6, abs=1e-15)


def test_wave_csv_only(tmp_path, capsys):
    assert run(capsys, "wave", "--format", "csv", "--samples", "11", "--out", str(tmp_path))[0] == 0
    assert sorted(p.name for p in tmp_path.iterdir()) == ["wave.csv"]


def test_wave_degenerate_is_argument_error(tmp_path, capsys):
    code, _, err = run(capsys, "wave", "--c", "1", "--g", "0", "--out", str(tmp_path))
    assert code == 3 and "error" in err


def test_scan_finds_ks_root(tmp_path, capsys):
    code, out, _ = run(capsys, "melnikov-scan", "--kind", "ks", "--g", "0", "--out", str(tmp_path))
    assert code == 0
    roots = [float(r) for r in parse(out)["roots"].split()]
    assert any(abs(r - 5 / 12) <= 1e-9 for r in roots)
    header, rows = read_csv(tmp_path / "melnikov_scan.csv")
    assert header == ["c", "M_star", "M", "dM_star_dc"] and len(rows) == 300
    assert (tmp_path / "melnikov_mstar.svg").exists() and (tmp_path / "melnikov_m.svg").exists()


def test_scan_ks_high_branch_negative(tmp_path, capsys):
    run(capsys, "melnikov-scan", "--g", "-0.2", "--c-min", "1.7", "--c-max", "10", "--out", str(tmp_path))
    _, rows = read_csv(tmp_path / "melnikov_scan.csv")
    ms = column(rows, 1)
    assert np.all(ms[np.isfinite(ms)] < 0)


def test_scan_leaves_inadmissible_rows_empty(tmp_path, capsys):
    run(capsys, "melnikov-scan", "--g", "-0.2", "--c-min", "0.5", "--c-max", "1.5", "--samples", "11", "--out", str(tmp_path))
    _, rows = read_csv(tmp_path / "melnikov_scan.csv")
    assert rows[5][1:] == [None, None, None]


def test_scan_me_single_sign_change():
    rows = [scan_row(ME, c, 2.0) for c in np.linspace(0.01, 0.99, 99)]
    roots = scan_roots(ME, 2.0, rows)
    assert len(roots) == 1 and abs(roots[0] - 0.6801960271) <= 1e-9


def test_scan_threads_match_serial(tmp_path, capsys, monkeypatch):
    run(capsys, "melnikov-scan", "--format", "csv", "--out", str(tmp_path / "a"))
    monkeypatch.setenv("SOLWAVE_THREADS", "4")
    run(capsys, "melnikov-scan", "--format", "csv", "--out", str(tmp_path / "b"))
    assert (tmp_path / "a/melnikov_scan.csv").read_bytes() == (tmp_path / "b/melnikov_scan.csv").read_bytes()


def test_root(capsys, tmp_path):
    code, out, _ = run(capsys, "melnikov-root", "--kind", "me", "--g", "0", "--out", str(tmp_path))
    assert code == 0
    vals = parse(out)
    c = float(vals["c_star"])
    assert abs(c - math.sqrt(5) / (math.sqrt(5) + math.sqrt(7))) <= 1e-12
    assert float(vals["residual"]) <= 1e-12
    header, rows = read_csv(tmp_path / "melnikov_root.csv")
    assert header[2] == "c_star" and rows[0][2] == c


def test_root_without_out_writes_nothing(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert run(capsys, "melnikov-root")[0] == 0
    assert list(tmp_path.iterdir()) == []


def test_root_no_zero(capsys):
    code, _, err = run(capsys, "melnikov-root", "--g", "-0.2", "--branch", "high")
    assert code == 2 and err.startswith("NoZero")


def test_simulate(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--kind", "ks", "--g", "0", "--out", str(tmp_path))
    assert code == 0
    vals = parse(out)
    assert float(vals["c"]) == pytest.approx(5 / 12 + 1e-4, abs=1e-12)
    assert vals["near_closed"] == "yes"
    _, phase = read_csv(tmp_path / "phase.csv")
    _, hist = read_csv(tmp_path / "history.csv")
    assert len(phase) == len(hist) > 10
    assert np.all(np.diff(column(hist, 0)) > 0)
    assert (tmp_path / "phase.svg").exists() and (tmp_path / "history.svg").exists()


def test_simulate_control_not_closed(tmp_path, capsys):
    code, out, _ = run(capsys, "simulate", "--c", "0.8", "--format", "csv", "--out", str(tmp_path))
    assert code == 0 and parse(out)["near_closed"] == "no"


@pytest.mark.parametrize("tau", ["0.5", "-0.01"])
def test_simulate_rejects_tau(tmp_path, capsys, tau):
    assert run(capsys, "simulate", "--tau", tau, "--out", str(tmp_path))[0] == 3


def test_verify(capsys):
    code, out, _ = run(capsys, "verify")
    assert code == 0 and "FAIL" not in out and "all 9 checks passed" in out


def test_verify_detects_injected_fault(capsys):
    code, out, _ = run(capsys, "verify", "--inject-fault", "i2-sign")
    assert code == 1 and "FAIL" in out


def test_bad_arguments(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["wave", "--samples", "1"])
    assert exc.value.code == 3
    with pytest.raises(SystemExit) as exc:
        main(["melnikov-root", "--kind", "kdv"])
    assert exc.value.code == 3


@pytest.mark.parametrize(
    "argv,names",
    [
        (["wave"], ["wave.csv", "wave_phase.svg", "wave_profile.svg"]),
        (["melnikov-scan", "--samples", "50"], ["melnikov_m.svg", "melnikov_mstar.svg", "melnikov_scan.csv"]),
        (["simulate"], ["history.csv", "history.svg", "phase.csv", "phase.svg"]),
    ],
)
def test_outputs_are_byte_deterministic(tmp_path, capsys, argv, names):
    for sub in ("a", "b"):
        assert main(argv + ["--out", str(tmp_path / sub)]) == 0
    capsys.readouterr()
    assert sorted(p.name for p in (tmp_path / "a").iterdir()) == names
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
