import csv
import json
import math

import pytest

from polydiam import bounds, cli


def run(argv, capsys):
    code = cli.main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_csv(capsys):
    code, out, _ = run(["enumerate", "--q", "2", "--d", "3"], capsys)
    assert code == 0
    assert list(csv.reader(out.splitlines())) == [["poly"], ["1,1,0,1"], ["1,0,1,1"]]


def test_enumerate_prime_powers_json(capsys):
    code, out, _ = run(["enumerate", "--q", "2", "--d", "2", "--prime-powers", "--format", "json"], capsys)
    rows = json.loads(out)
    assert code == 0 and sum(r["lambda"] for r in rows) == 4


def test_diameter_json(capsys):
    code, out, _ = run(["diameter", "--q", "2", "--n", "3", "--d", "1"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["diameter"] == 3 and payload["f"] == "1,1,0,1" and payload["conventions_agree"]


def test_bounds_with_bfs(capsys):
    code, out, _ = run(["bounds", "--q", "5", "--n", "5", "--d", "2", "--with-bfs"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["exact_diameter"] <= payload["bound_lwwz_floor"] == 37
    assert payload["bound_thm2"] is None and payload["runtime_ms"] is None


def test_bounds_csv_uses_na(capsys):
    code, out, _ = run(["bounds", "--q", "5", "--n", "5", "--d", "2", "--format", "csv"], capsys)
    row = next(csv.DictReader(out.splitlines()))
    assert code == 0 and row["bound_thm2"] == "NA"


@pytest.mark.parametrize("check", ["weil", "moment", "orthogonality", "spectrum"])
def test_charsums(check, capsys):
    code, out, _ = run(["charsums", "--q", "3", "--n", "4", "--d", "2", "--check", check, "--exact"], capsys)
    assert code == 0 and json.loads(out)["passed"] is True


def test_repcount(capsys):
    code, out, _ = run(["repcount", "--q", "11", "--n", "3", "--d", "1", "--k", "10"], capsys)
    payload = json.loads(out)
    assert code == 0
    assert payload["all_positive"] and payload["total_matches"] and payload["deviation_within_bound"]
    code, out, _ = run(["repcount", "--q", "5", "--n", "5", "--d", "2", "--k", "38", "--weighted"], capsys)
    assert code == 0 and json.loads(out)["all_positive"]


def test_duplicate_flag_exit_2(tmp_path, capsys):
    out = tmp_path / "r.json"
    code, _, err = run(["diameter", "--q", "2", "--q", "3", "--n", "3", "--d", "1", "--out", str(out)], capsys)
    assert code == 2 and "more than once" in err
    assert not out.exists()


@pytest.mark.parametrize(
    "argv",
    [
        ["diameter", "--q", "2", "--n", "3"],
        ["sweep", "--q-list", "2", "--n-range", "5..2", "--d-range", "1..1"],
        ["bounds", "--q", "5", "--n", "5", "--d", "2", "--bogus"],
        ["repcount", "--q", "5", "--n", "5", "--d", "2", "--k", "9"],
        ["diameter", "--q", "6", "--n", "3", "--d", "1"],
    ],
)
def test_usage_errors(argv, capsys):
    code, _, _ = run(argv, capsys)
    assert code == 2


def test_resource_cap_exit_1(capsys):
    code, _, err = run(["diameter", "--q", "5", "--n", "8", "--d", "2", "--max-order", "1000"], capsys)
    assert code == 1 and "max_order" in err


def test_sweep_one_row_per_cell(tmp_path):
    argv = ["sweep", "--q-list", "2,3,5", "--n-range", "2..8", "--d-range", "1..3", "--max-order", "100000",
            "--jobs", "1"]
    a = tmp_path / "a.csv"
    assert cli.main(argv + ["--out", str(a)]) == 0
    rows = list(csv.DictReader(a.read_text().splitlines()))
    assert list(rows[0].keys()) == cli.REPORT_COLUMNS
    want = [(q, n, d) for q in (2, 3, 5) for n in range(2, 9) for d in range(1, 4) if d < n]
    assert [(int(r["q"]), int(r["n"]), int(r["d"])) for r in rows] == want
    skipped = {(int(r["q"]), int(r["n"])) for r in rows if r["status"] == "skipped"}
    assert skipped == {(5, 8)}
    assert all(r["runtime_ms"] == "NA" for r in rows)


def test_sweep_byte_identical_and_parallel(tmp_path):
    base = ["sweep", "--q-list", "2,3", "--n-range", "2..6", "--d-range", "1..2"]
    paths = [tmp_path / f"{i}.csv" for i in range(3)]
    assert cli.main(base + ["--jobs", "1", "--out", str(paths[0])]) == 0
    assert cli.main(base + ["--jobs", "1", "--out", str(paths[1])]) == 0
    assert cli.main(base + ["--jobs", "2", "--out", str(paths[2])]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes() == paths[2].read_bytes()


def test_sweep_row_rederivable(tmp_path, capsys):
    out = tmp_path / "s.json"
    assert cli.main(["sweep", "--q-list", "3", "--n-range", "4..4", "--d-range", "1..2", "--format", "json",
                     "--jobs", "1", "--out", str(out)]) == 0
    for row in json.loads(out.read_text()):
        code, text, _ = run(["bounds", "--q", "3", "--n", "4", "--d", str(row["d"]), "--with-bfs"], capsys)
        single = json.loads(text)
        assert single["exact_diameter"] == row["diameter"]
        for name in ("bound_lwwz", "bound_thm1", "bound_thm2", "theta"):
            assert single[name] == row[name]
        code, text, _ = run(["charsums", "--q", "3", "--n", "4", "--d", str(row["d"]), "--check", "weil"], capsys)
        assert math.isclose(json.loads(text)["ratio"], row["max_weil_ratio"], rel_tol=0, abs_tol=0)


def test_sweep_flags_violation(monkeypatch, tmp_path):
    monkeypatch.setattr(bounds, "bound_lwwz", lambda q, n, d: 0.0)
    out = tmp_path / "v.csv"
    assert cli.main(["sweep", "--q-list", "5", "--n-range", "3..3", "--d-range", "2..2", "--jobs", "1",
                     "--out", str(out)]) == 1
