import json
from pathlib import Path

import pytest

from lslab.cli import EXIT_INDETERMINATE, EXIT_INPUT, EXIT_OK, main

LINKS = Path(__file__).resolve().parent.parent / "links"
TWO = str(LINKS / "two_trefoils.json")

E8 = {
    "vertices": [{"id": str(i), "e": -2} for i in range(8)],
    "edges": [["0", "1"], ["1", "2"], ["2", "3"], ["3", "4"], ["4", "5"], ["5", "6"], ["2", "7"]],
}


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_report_json(capsys):
    code, out, _ = run(capsys, "report", "--link", TWO, "--format", "json")
    data = json.loads(out)
    assert code == EXIT_OK
    assert data["l"] == 4 and data["c"] == [6, 6] and data["boundedness"] == "BoundedBelow"


def test_report_ascii_mentions_invariants(capsys):
    code, out, _ = run(capsys, "report", "--link", str(LINKS / "trefoil_cable_3_20.json"))
    assert code == EXIT_OK
    assert "m1 = 6, m2 = 60" in out and "UnboundedBelow" in out


def test_scan_csv_with_negative_box(capsys):
    code, out, _ = run(capsys, "scan", "--link", TWO, "--box", "-1:1,3:4", "--format", "csv")
    rows = out.strip().splitlines()
    assert len(rows) == 1 + 6
    # d1 <= 0 with d2 > 0 lies outside both testers
    assert code in (EXIT_OK, EXIT_INDETERMINATE)


def test_scan_exit_code_reflects_indeterminate(capsys):
    assert run(capsys, "scan", "--link", TWO, "--box", "3:5,3:5")[0] == EXIT_OK


def test_scan_writes_figure(capsys, tmp_path):
    pytest.importorskip("matplotlib")
    png = tmp_path / "grid.png"
    code, _, _ = run(capsys, "scan", "--link", TWO, "--box", "1:4,1:4", "--figure", str(png))
    assert code == EXIT_OK
    assert png.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"


def test_classify_explain(capsys):
    code, out, _ = run(capsys, "classify", "--link", str(LINKS / "L7.json"), "--explain")
    assert code == EXIT_OK and out.startswith("BoundedBelow") and "(15, 7)" in out


def test_hgrid_and_alexander(capsys):
    code, out, _ = run(capsys, "hgrid", "--link", TWO, "--box", "0:1,0:1", "--format", "json")
    assert code == EXIT_OK and json.loads(out)
    code, out, _ = run(capsys, "alexander", "--link", TWO, "--format", "csv")
    assert code == EXIT_OK and out.strip()


def test_graph_commands(capsys, tmp_path):
    path = tmp_path / "e8.json"
    path.write_text(json.dumps(E8))
    assert run(capsys, "graph", "det", "--graph", str(path), "--format", "json")[1] == '{"det":1}\n'
    code, out, _ = run(capsys, "graph", "rational", "--graph", str(path))
    assert code == EXIT_OK and out.startswith("LSpace")
    code, out, _ = run(capsys, "graph", "zmin", "--graph", str(path), "--format", "json")
    assert json.loads(out)["result"]["2"] == 6


def test_malformed_json_exits_2_without_output(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"branch1": [[2,3]],\n  "branch2": }')
    code, out, err = run(capsys, "report", "--link", str(bad))
    assert code == EXIT_INPUT and out == ""
    assert "line 2" in err


@pytest.mark.parametrize(
    "argv",
    [
        ["scan", "--link", "/nonexistent.json"],
        ["scan", "--link", TWO, "--box", "3:1"],
        ["scan", "--link", TWO, "--jobs", "0"],
        ["scan", "--link", TWO, "--trunc-n", "0"],
        ["frobnicate"],
        ["graph", "simple", "--graph", "/nonexistent.json"],
    ],
)
def test_input_errors(capsys, argv):
    code, out, _ = run(capsys, *argv)
    assert code == EXIT_INPUT and out == ""


def test_unknown_vertex(capsys, tmp_path):
    path = tmp_path / "e8.json"
    path.write_text(json.dumps(E8))
    assert run(capsys, "graph", "simple", "--graph", str(path), "--vertex", "x")[0] == EXIT_INPUT
