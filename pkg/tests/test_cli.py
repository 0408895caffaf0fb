import json
import subprocess
import sys

import pytest

from graphlim.cli import main, parse_range


def run(*args):
    return subprocess.run([sys.executable, "-m", "graphlim", *args], capture_output=True, text=True)


def test_parse_range():
    assert parse_range("4..7") == [4, 5, 6, 7]
    assert parse_range("2,3,5") == [2, 3, 5]
    assert parse_range("4..12..4") == [4, 8, 12]
    assert parse_range(6) == [6]


def test_density_table(tmp_path, capsys):
    assert main(["density", "--family", "hypercube", "--d", "4..6", "--patterns", "K2,P3,C4,C6"]) == 0
    out = capsys.readouterr().out
    lines = [ln for ln in out.splitlines() if not ln.startswith("#")]
    assert lines[0] == "graph,d,K2,K2_exact,P3,P3_exact,C4,C4_exact,C6,C6_exact"
    assert lines[1].startswith("Q4,4,1.0,1/1,1.0,1/1,0.625,5/8")
    assert '# caps={"canonical_vertices"' in out


def test_outputs_are_byte_identical(tmp_path):
    args = ["gen", "--family", "config", "--n", "20..22..2", "--d", "3", "--seed", "11"]
    assert main(args + ["--out", str(tmp_path / "a")]) == 0
    assert main(args + ["--out", str(tmp_path / "b")]) == 0
    for name in ("manifest.json", "CM20_3.edgelist", "CM22_3.edgelist"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_graphoning_reproducible_across_workers(tmp_path):
    base = ["graphoning", "--mc-pattern", "P3", "--alpha", "0.5", "--samples", "900", "--seed", "4"]
    assert main(base + ["--workers", "3", "--out", str(tmp_path / "a")]) == 0
    assert main(base + ["--workers", "3", "--out", str(tmp_path / "b")]) == 0
    a = (tmp_path / "a" / "graphoning.json").read_bytes()
    assert a == (tmp_path / "b" / "graphoning.json").read_bytes()
    assert json.loads(a)["mc"]["per_worker"] == [300, 300, 300]


def test_exit_codes(tmp_path):
    assert main(["gen", "--family", "config", "--n", "10", "--d", "3"]) == 2  # seed missing
    assert main(["density", "--family", "nosuch", "--d", "3"]) == 2
    assert main(["density", "--family", "hypercube", "--d", "4", "--patterns", "X3"]) == 2
    assert main(["density", "--family", "hypercube", "--d", "4", "--caps", '{"max_vertices": 8}']) == 3
    assert main(["density", "--family", "hypercube", "--d", "4", "--caps", '{"bogus": 1}']) == 2
    assert main(["chromatic", "--family", "hypercube", "--d", "5"]) == 3
    with pytest.raises(SystemExit) as exc:
        main(["density", "--no-such-flag"])
    assert exc.value.code == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "exp.json"
    cfg.write_text(json.dumps({"command": "density", "family": "kdd", "d": "2..3", "patterns": "C4", "kind": "t_inj"}))
    assert main(["density", "--config", str(cfg)]) == 0
    assert '"K3,3",3,1.0,1/1' in capsys.readouterr().out
    cfg.write_text(json.dumps({"command": "spectra"}))
    assert main(["density", "--config", str(cfg)]) == 2


def test_reports_for_each_analysis(tmp_path):
    out = tmp_path / "r"
    assert main(["spectra", "--family", "hypercube", "--d", "3..5", "--top", "2", "--out", str(out)]) == 0
    rep = json.loads((out / "spectra.json").read_text())
    assert rep["caps"]["max_vertices"] == 2**21 and len(rep["graphs"]) == 3
    assert (out / "measures" / "Q3_sigma_top.csv").exists()
    assert main(["matching", "--family", "cycle", "--n", "4..6", "--out", str(out)]) == 0
    rep = json.loads((out / "matching.json").read_text())
    assert rep["graphs"][0]["M"] == 7 and rep["graphs"][0]["Pm"] == 2
    assert main(["chromatic", "--family", "cycle", "--n", "5", "--stars", "4,8", "--out", str(out)]) == 0
    rep = json.loads((out / "chromatic.json").read_text())
    assert rep["graphs"][0]["identity_residual"] <= 1e-8 and len(rep["stars"]) == 2
    assert main(["converge", "--family", "projective", "--q", "2,3", "--out", str(out)]) == 0
    rep = json.loads((out / "converge.json").read_text())
    assert all(rep["essential_girth"]["nonincreasing"].values())
    assert main(["graphoning", "--set", "proj", "--covering", "1..5", "--growth", "2,3,5", "--out", str(out)]) == 0
    rep = json.loads((out / "graphoning.json").read_text())
    assert set(rep["covering"].values()) == {"1/1"}


def test_graph_file_input(tmp_path, capsys):
    f = tmp_path / "tri.edgelist"
    assert main(["gen", "--family", "complete", "--n", "3", "--out", str(tmp_path)]) == 0
    (tmp_path / "K3.edgelist").rename(f)
    assert main(["density", "--graph-file", str(f), "--patterns", "C3"]) == 0
    assert "tri,2,0.5,1/2" in capsys.readouterr().out


def test_module_entry_point():
    res = run("verify", "--only", "7")
    assert res.returncode == 1
    assert "criterion 7: FAIL" in res.stderr
    assert json.loads(res.stdout)["criteria"][0]["number"] == 7
