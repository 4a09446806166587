import math

from solwave.io import fmt, read_csv, write_csv


def test_fmt():
    assert fmt(None) == "" and fmt(math.nan) == "" and fmt(math.inf) == ""
    assert fmt(3) == "3" and fmt("ks") == "ks"
    assert fmt(0.1) == "0.10000000000000001"


def test_round_trip_is_exact(tmp_path):
    values = [0.1, 1 / 3, -2.5e-300, 5 / 12]
    path = write_csv(tmp_path / "sub" / "t.csv", ("name", "x", "gap"), [("a", v, None) for v in values])
    header, rows = read_csv(path)
    assert header == ["name", "x", "gap"]
    assert [r[1] for r in rows] == values
    assert all(r[0] == "a" and r[2] is None for r in rows)
