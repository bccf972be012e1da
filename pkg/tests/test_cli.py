import csv
import io
import json
import math
import subprocess
import sys

import pytest

from disentangle.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, fmt, main, parse_angle


def run(argv, capsys):
    rc = main(argv)
    out = capsys.readouterr()
    return rc, out.out, out.err


@pytest.mark.parametrize(
    "text, value",
    [("pi/8", math.pi / 8), ("3pi/8", 3 * math.pi / 8), ("-0.5*pi", -math.pi / 2), ("0.25", 0.25), ("pi", math.pi)],
)
def test_parse_angle(text, value):
    assert parse_angle(text) == pytest.approx(value, abs=1e-15)


@pytest.mark.parametrize("text", ["pie", "pi/0", "nan", ""])
def test_parse_angle_rejects(text):
    with pytest.raises(Exception):
        parse_angle(text)


def test_fmt_round_trips():
    x = 0.1 + 0.2
    assert float(fmt(x)) == x
    assert fmt(True) == "true" and fmt(False) == "false"


def test_pe_text(capsys):
    rc, out, _ = run(["pe"], capsys)
    assert rc == EXIT_OK
    fields = dict(line.split() for line in out.splitlines())
    assert float(fields["pe_ent"]) == pytest.approx(0.2394973083600065, abs=1e-12)
    assert float(fields["pe_disent"]) == pytest.approx(0.22049150281252627, abs=1e-12)
    assert fields["violation"] == "true"


def test_pe_csv_and_json_agree(capsys):
    _, c, _ = run(["pe", "--theta", "pi/8", "--phi", "pi/6", "--format", "csv"], capsys)
    _, j, _ = run(["pe", "--theta", "pi/8", "--phi", "pi/6", "--format", "json"], capsys)
    row = next(csv.DictReader(io.StringIO(c)))
    rec = json.loads(j)
    assert set(row) == set(rec)
    for k, v in rec.items():
        if isinstance(v, bool):
            assert row[k] == ("true" if v else "false")
        else:
            assert float(row[k]) == v


def test_scan_small_grid(capsys):
    rc, out, err = run(["scan", "--grid-n", "2"], capsys)
    assert rc == EXIT_OK
    rows = list(csv.DictReader(io.StringIO(out)))
    assert len(rows) == 4
    assert list(rows[0]) == ["theta", "phi", "pe_ent", "pe_disent", "violation"]
    assert "violating cells: 4 of 4" in err


def test_scan_full_grid_to_file(tmp_path, capsys):
    path = tmp_path / "scan.csv"
    rc, out, _ = run(["scan", "--out", str(path)], capsys)
    assert rc == EXIT_OK
    lines = path.read_text().splitlines()
    assert len(lines) == 1 + 64 * 64
    assert "violating cells: 4096 of 4096" in out


def test_scan_is_byte_identical(tmp_path, capsys):
    for name in ("a", "b"):
        main(["scan", "--grid-n", "8", "--format", "json", "--out", str(tmp_path / name)])
    assert (tmp_path / "a").read_bytes() == (tmp_path / "b").read_bytes()


def test_scan_json_matches_csv(capsys):
    _, c, _ = run(["scan", "--grid-n", "3"], capsys)
    _, j, _ = run(["scan", "--grid-n", "3", "--format", "json"], capsys)
    rows, recs = list(csv.DictReader(io.StringIO(c))), json.loads(j)
    assert len(rows) == len(recs) == 9
    for row, rec in zip(rows, recs):
        assert float(row["pe_ent"]) == rec["pe_ent"]
        assert float(row["theta"]) == rec["theta"]


@pytest.mark.parametrize("target", ["swap-bell", "three-state"])
def test_verify_targets(target, capsys):
    rc, out, _ = run(["verify", target], capsys)
    assert rc == EXIT_OK
    assert out.strip().endswith("PASS")
    assert "[FAIL]" not in out


def test_verify_four_state(capsys):
    rc, out, _ = run(["verify", "four-state"], capsys)
    assert rc == EXIT_OK
    assert "0.17157288" in out and "0.13928139" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--grid-n", "1"],
        ["pe", "--theta", "abc"],
        ["search", "--set", "bell", "--ancilla-dim", "9"],
        ["search", "--set", "nope"],
        ["verify", "everything"],
        [],
    ],
)
def test_usage_errors(argv, capsys):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == EXIT_USAGE


def test_io_error(tmp_path, capsys):
    rc, _, err = run(["pe", "--out", str(tmp_path / "missing" / "x.txt")], capsys)
    assert rc == EXIT_IO
    assert "disentangle:" in err


def test_search_writes_json(tmp_path, capsys):
    path = tmp_path / "search.json"
    rc, out, _ = run(
        ["search", "--set", "bell", "--ancilla-dim", "2", "--restarts", "1", "--out", str(path)], capsys
    )
    assert rc == EXIT_OK
    d = json.loads(path.read_text())
    assert d["set"] == "bell" and d["ancilla_dim"] == 2
    assert "best objective" in out


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "disentangle", "pe", "--format", "json"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["violation"] is True
