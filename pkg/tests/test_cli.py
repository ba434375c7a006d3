import json

import pytest

from lmspectra.cli import build_parser, main, read_config


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_markov_tree(capsys, tmp_path):
    code, out, _ = run(capsys, "markov", "tree", "--bound", "30")
    assert code == 0
    assert out.splitlines() == ["x,y,z", "1,1,1", "1,1,2", "1,2,5", "1,5,13", "2,5,29"]
    path = tmp_path / "t.csv"
    assert run(capsys, "markov", "tree", "--bound", "30", "--out", str(path))[0] == 0
    assert path.read_text() == out


def test_constants(capsys):
    code, out, _ = run(capsys, "constants")
    assert code == 0
    line = next(l for l in out.splitlines() if l.startswith("c_F"))
    assert line.split("= ")[-1].startswith("4.527829566")


def test_dim_bowen(capsys):
    code, out, _ = run(capsys, "dim", "bowen", "--set", "1,2", "--order", "10", "--bits", "256")
    assert code == 0
    rep = json.loads(out)
    assert rep["s_M"].startswith("0.5312805062")
    assert rep["order"] == 10 and rep["bits"] == 256


def test_bits_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("SPECTRA_BITS", "128")
    code, out, _ = run(capsys, "dim", "bowen", "--set", "1,2", "--order", "6")
    assert code == 0 and json.loads(out)["bits"] == 128
    monkeypatch.setenv("SPECTRA_BITS", "32")
    assert run(capsys, "constants")[0] == 2


def test_dim_cover_and_bounds(capsys):
    code, out, _ = run(capsys, "dim", "cover", "--set", "1,2", "--level", "1")
    assert code == 0 and out.splitlines() == ["level,word,lo_num,lo_den,hi_num,hi_den", "1,2,1,3,1,2", "1,1,1,2,1,1"]
    code, out, _ = run(capsys, "dim", "bounds", "--set", "1,2", "--level", "4")
    rows = [r.split(",") for r in out.splitlines()[1:]]
    assert code == 0 and len(rows) == 4
    assert all(float(a) <= 0.5312805 <= float(b) for _, a, b in rows)


def test_gapcheck(capsys):
    code, out, _ = run(capsys, "dim", "gapcheck")
    rep = json.loads(out)
    assert code == 0 and rep["passed"] and rep["upper_bound"] == "0.706094"


def test_spectra_commands(capsys, tmp_path):
    csv_path, svg_path = tmp_path / "c.csv", tmp_path / "p.svg"
    code, out, _ = run(capsys, "spectra", "approx", "--range", "2.2,3", "--Q", "100", "--alphabet", "2",
                       "--out", str(csv_path), "--svg", str(svg_path))
    assert code == 0 and "outer intervals: 4" in out
    assert csv_path.read_text().startswith("kind,lo,hi,word\nouter,")
    assert svg_path.read_text().startswith("<svg")
    code, out, _ = run(capsys, "spectra", "gaps", "--range", "3.46,3.61", "--Q", "1e4", "--alphabet", "3",
                       "--min-width", "1e-3")
    gaps = [tuple(map(float, r.split(","))) for r in out.splitlines()[1:]]
    assert code == 0 and any(lo < 3.4642 and 3.6055 < hi for lo, hi in gaps)


def test_spectra_default_alphabet(capsys):
    code, out, _ = run(capsys, "spectra", "approx", "--range", "2.2,2.9", "--Q", "100")
    assert code == 0 and out.count("outer,") == 2


def test_hall(capsys):
    code, out, _ = run(capsys, "hall", "--target", "6.25")
    rep = json.loads(out)
    assert code == 0 and rep["c0"] == 5 and float(rep["error"]) < 1e-8
    assert set(rep["x_digits"].split(",")) <= set("1234")


def test_modp_threads_deterministic(capsys):
    one = run(capsys, "markov", "modp", "--pmax", "40")
    two = run(capsys, "--threads", "2", "markov", "modp", "--pmax", "40")
    assert one[0] == two[0] == 0 and one[1] == two[1]
    assert all(r.split(",")[2] == "1" for r in one[1].splitlines()[1:])


def test_deterministic_csv(capsys):
    a = run(capsys, "spectra", "approx", "--range", "3,3.3", "--Q", "200", "--alphabet", "3")
    b = run(capsys, "spectra", "approx", "--range", "3,3.3", "--Q", "200", "--alphabet", "3")
    assert a == b


@pytest.mark.parametrize("argv", [
    ["dim", "bowen", "--set", "1,(1,2)"],
    ["dim", "bowen", "--set", "2", "--order", "4"],
    ["markov", "modp", "--primes", "9"],
    ["spectra", "approx", "--range", "3,2"],
    ["spectra", "approx", "--range", "3,3.7", "--alphabet", "2"],
    ["hall", "--target", "5"],
    ["constants", "--bits", "32"],
    ["nonsense"],
    ["markov", "tree", "--bound", "10", "--bogus"],
])
def test_validation_errors(capsys, argv):
    assert run(capsys, *argv)[0] == 2


def test_budget_exhaustion(capsys):
    assert run(capsys, "--budget", "100", "spectra", "approx", "--range", "3,3.9", "--Q", "1e4")[0] == 3
    assert run(capsys, "dim", "cover", "--set", "1,2,3,4", "--level", "12", "--budget", "1000")[0] == 3
    assert run(capsys, "dim", "bowen", "--set", "1,2,3", "--order", "12", "--budget", "1000")[0] == 3


def test_config_file(capsys, tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# resolution and alphabet\nQ = 100\nalphabet = 2\n")
    assert read_config(str(cfg)) == {"Q": "100", "alphabet": "2"}
    code, out, _ = run(capsys, "--config", str(cfg), "spectra", "approx", "--range", "2.2,3")
    assert code == 0 and out.count("outer,") == 4
    cfg.write_text("colour = blue\n")
    assert run(capsys, "--config", str(cfg), "constants")[0] == 2


def test_help_for_every_subcommand(capsys):
    commands = [["spectra", "approx"], ["spectra", "gaps"], ["markov", "tree"], ["markov", "modp"],
                ["dim", "bowen"], ["dim", "cover"], ["dim", "bounds"], ["dim", "gapcheck"],
                ["hall"], ["constants"]]
    for cmd in commands:
        code, out, _ = run(capsys, *cmd, "--help")
        assert code == 0 and "usage: lmspectra" in out and "--out" in out
    assert build_parser().prog == "lmspectra"
