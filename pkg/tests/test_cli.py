import csv
import json

import pytest

from hubres.cli import EXIT_INPUT, EXIT_OK, fmt, main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_fmt_twelve_significant_digits():
    assert fmt(20 / 3) == 6.66666666667
    assert fmt(1.28) == 1.28
    assert fmt({"a": [1 / 3]}) == {"a": [0.333333333333]}


def test_analyze_p3(capsys):
    code, rep = run_json(capsys, "analyze", "--graph6", "Bg")
    assert code == EXIT_OK
    assert rep["schema"] == "hubres.analysis/1"
    assert rep["kirchhoff"] == {"1": 6.66666666667, "0": 4.0, "-1": 2.5}
    assert rep["E1"] == 0.48 and rep["Em1"] == 1.28
    assert rep["spectra"]["1"][1:] == [0.5, 4.5]
    assert rep["conjecture"]["ok"]
    assert rep["bounds"]["proved_failures"] == []


def test_analyze_k3_all_efficiencies_one(capsys):
    code, rep = run_json(capsys, "analyze", "--graph6", "Bw")
    assert code == EXIT_OK
    assert rep["E1"] == 1.0 and rep["Em1"] == 1.0


def test_analyze_edges_single_alpha(capsys, tmp_path):
    f = tmp_path / "net.txt"
    f.write_text("0 1\n1 2\n")
    code, rep = run_json(capsys, "analyze", "--edges", str(f), "--alpha", "-1")
    assert code == EXIT_OK
    assert rep["alphas"] == [-1]
    assert list(rep["kirchhoff"]) == ["-1"]


def test_analyze_is_byte_identical(capsys, tmp_path):
    outs = []
    for name in ("a.json", "b.json"):
        assert main(["analyze", "--graph6", "G?B@dW", "--out", str(tmp_path / name)]) in (0, 2)
        outs.append((tmp_path / name).read_bytes())
    assert outs[0] == outs[1]


@pytest.mark.parametrize("argv", [
    ["analyze", "--graph6", "B!"],
    ["analyze", "--graph6", "B_"],
    ["analyze", "--edges", "/nonexistent/file"],
    ["walk", "--graph6", "Bg", "--v", "0", "--w", "7"],
])
def test_input_errors_exit_one(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == EXIT_INPUT
    assert err.strip()


def test_analyze_disconnected_needs_lcc(capsys, tmp_path):
    f = tmp_path / "two.txt"
    f.write_text("0 1\n1 2\n3 4\n")
    code, _, _ = run(capsys, "analyze", "--edges", str(f))
    assert code == EXIT_INPUT
    code, rep = run_json(capsys, "analyze", "--edges", str(f), "--lcc")
    assert code == EXIT_OK and rep["largest_component"] and rep["stats"]["n"] == 3


def test_sweep_n5(capsys, tmp_path):
    code, _, _ = run(capsys, "sweep", "--n", "5", "--out", str(tmp_path))
    assert code == EXIT_OK
    rows = list(csv.reader((tmp_path / "records.csv").open()))
    assert len(rows) == 1 + 21
    summary = json.loads((tmp_path / "summary.json").read_text())
    assert summary["total"] == 21 and summary["conjecture_failures"] == 0
    scatter = (tmp_path / "scatter.csv").read_text().splitlines()
    assert scatter[0] == "graph6,E_repelling,E_attracting" and len(scatter) == 22


def test_sweep_n6_and_corpus(capsys, tmp_path):
    assert main(["sweep", "--n", "6", "--out", str(tmp_path / "a")]) == EXIT_OK
    rows = (tmp_path / "a" / "records.csv").read_text().splitlines()
    assert len(rows) == 113
    corpus = tmp_path / "c.g6"
    corpus.write_text("\n".join(r.split(",")[0] for r in rows[1:]) + "\n")
    assert main(["sweep", "--corpus", str(corpus), "--out", str(tmp_path / "b")]) == EXIT_OK
    assert (tmp_path / "b" / "records.csv").read_text() == "\n".join(rows) + "\n"


def test_sweep_corpus_warnings_and_errors(capsys, tmp_path):
    corpus = tmp_path / "dup.g6"
    corpus.write_text("Bg\nBg\nBw\n")
    code, _, err = run(capsys, "sweep", "--corpus", str(corpus), "--out", str(tmp_path / "o"))
    assert code == EXIT_OK
    assert "duplicate" in err and "expected 2 for n=3" in err
    corpus.write_text("Bg\nC`\n")
    code, _, err = run(capsys, "sweep", "--corpus", str(corpus))
    assert code == EXIT_INPUT and "disconnected" in err


def test_report_p3_and_classes(capsys, tmp_path):
    d = tmp_path / "nets"
    d.mkdir()
    (d / "p3.txt").write_text("0 1\n1 2\n")
    (d / "c5.txt").write_text("0 1\n1 2\n2 3\n3 4\n4 0\n")
    (d / "k4.txt").write_text("0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n")
    cm = tmp_path / "classes.json"
    cm.write_text(json.dumps({"c5.txt": "regular", "k4.txt": "regular", "p3.txt": "path"}))
    table = tmp_path / "table.csv"
    code, rep = run_json(capsys, "report", str(d), "--classmap", str(cm), "--table", str(table))
    assert code == EXIT_OK
    p3 = next(r for r in rep["networks"] if r["file"] == "p3.txt")
    assert p3["E1"] == 0.48 and p3["Em1"] == 1.28
    reg = next(c for c in rep["classes"] if c["type"] == "regular")
    assert reg["number"] == 2 and reg["E1_mean"] == 1.0 and reg["E1_std"] == 0.0
    path = next(c for c in rep["classes"] if c["type"] == "path")
    assert path["E1_std"] is None
    lines = table.read_text().splitlines()
    assert lines[0] == "type,number,E1_mean,E1_std,Em1_mean,Em1_std"
    assert lines[1] == "path,1,0.48,,1.28,"


def test_report_unclassified_and_exceptions(capsys, tmp_path):
    d = tmp_path / "nets"
    d.mkdir()
    (d / "p3.txt").write_text("0 1\n1 2\n")
    (d / "split.txt").write_text("0 1\n1 2\n3 4\n")
    (d / "broken.txt").write_text("0 0\n")
    code, rep = run_json(capsys, "report", str(d))
    assert code == EXIT_OK
    assert {r["class"] for r in rep["networks"]} == {"unclassified"}
    files = {e["file"] for e in rep["exceptions"]}
    assert files == {"split.txt", "broken.txt"}


def test_walk_standard(capsys):
    code, rep = run_json(capsys, "walk", "--graph6", "Bg", "--alpha", "0", "--v", "0", "--w", "2",
                         "--trials", "100000", "--seed", "7")
    assert code == EXIT_OK
    q = rep["query"]
    assert q["exact"] == 8.0
    mc = q["monte_carlo"]
    assert abs(mc["mean"] - 8.0) <= 3 * mc["stderr"]


def test_walk_attracting_ratio(capsys):
    code, rep = run_json(capsys, "walk", "--graph6", "Bg", "--alpha", "-1", "--v", "0", "--w", "2",
                         "--trials", "0")
    assert code == EXIT_OK
    q = rep["query"]
    assert (q["exact"], q["predicted"], q["ratio"]) == (8.0, 5.0, 1.6)


def test_walk_deterministic(capsys):
    argv = ["walk", "--graph6", "Dhc", "--alpha", "1", "--v", "0", "--w", "3", "--trials", "3000",
            "--seed", "11"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv)
    assert a == b


def test_config_file_supplies_flags(capsys, tmp_path):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"graph6": "Bg", "v": 0, "w": 2, "trials": 0, "alpha": -1}))
    code, rep = run_json(capsys, "--config", str(cfg), "walk")
    assert code == EXIT_OK and rep["query"]["ratio"] == 1.6
