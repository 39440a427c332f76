import json

import pytest

from tiltwalls import nl
from tiltwalls.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_first_wall_json(capsys):
    code, out, _ = run(capsys, "first-wall", "--n", "10", "--h3", "1", "--l2", "-15", "--mode", "ii", "--json")
    assert code == 0
    data = json.loads(out)
    assert data["conclusion"] == "FirstWallThroughOrigin"
    assert [w["heightAtB0"] for w in data["walls"]] == ["25", "24", "23"]
    assert nl.AnalysisReport.from_json(data).to_json() == data


def test_first_wall_sweep_csv(capsys):
    code, out, _ = run(capsys, "first-wall", "--n", "10..11", "--h3", "1,5", "--l2", "auto", "--mode", "ii")
    lines = out.splitlines()
    assert code == 0
    assert lines[0] == ",".join(nl.CSV_COLUMNS)
    # L^2 runs from -2n+5 to 0 in steps of 1/2, for two values of H^3
    assert len(lines) == 1 + 2 * 31 + 2 * 35
    assert all(line.endswith("FirstWallThroughOrigin") for line in lines[1:])


def test_first_wall_hypothesis_error(capsys):
    code, _, err = run(capsys, "first-wall", "--n", "9", "--h3", "1", "--l2", "-13", "--mode", "ii")
    assert code == 1 and "n ≥ 10 required" in err


def test_inconclusive_exit_code(capsys):
    code, out, _ = run(capsys, "first-wall", "--n", "10", "--h3", "1", "--l2", "-15", "--mode", "ii",
                       "--box", "1,2,2", "--json")
    assert code == 2 and json.loads(out)["conclusion"] == "Inconclusive"


def test_usage_error_exits_one(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["first-wall", "--mode", "iii", "--n", "10"])
    assert exc.value.code == 1


def test_walls_command(capsys):
    code, out, _ = run(capsys, "walls", "--ch", "0,4,-8", "--b0", "-2", "--w-floor", "13/4", "--w-ceil", "4")
    assert code == 0
    walls = json.loads(out)["walls"]
    assert len(walls) == 1 and walls[0]["candidates"] == [["1", "0", "0"]]


def test_bg_check_point(capsys):
    code, out, _ = run(capsys, "bg-check", "--ch", "0,4,-8,29/3", "--b", "-2", "--w", "13/4")
    assert code == 0 and json.loads(out)["holds"] is True
    code, out, _ = run(capsys, "bg-check", "--ch", "0,4,-8,29/3", "--b", "-2", "--w", "3")
    assert code == 2 and json.loads(out)["holds"] is False


def test_bg_check_params(capsys):
    code, out, _ = run(capsys, "bg-check", "--params", "BG1", "--n", "4", "--h3", "5")
    assert code == 0 and json.loads(out)["passed"] is True
    code, _, err = run(capsys, "bg-check", "--params", "BG1", "--n", "3", "--h3", "5")
    assert code == 1 and "outside theorem hypotheses" in err


def test_bounds(capsys):
    code, out, _ = run(capsys, "bounds", "--mode", "B", "--n", "10..11")
    assert code == 0
    assert out.splitlines()[1] == "10,-16,7,-10,-20,-16"
    code, out, _ = run(capsys, "bounds", "--mode", "A", "--n", "6", "--markdown")
    assert out.splitlines()[2] == "| 6 | -4 | 1 | -6 | -12 |"


def test_appendix_verify(capsys):
    code, out, _ = run(capsys, "appendix-verify", "--n", "5..50")
    assert code == 0 and out.strip() == "46/46 verified"


def test_config(tmp_path, capsys):
    good = tmp_path / "good.json"
    good.write_text(json.dumps({"polarization": {"h3": "5"}, "searchBox": {"rMax": "3", "c1Span": "60",
                                                                           "c2Span": "600"}}))
    code, out, _ = run(capsys, "--config", str(good), "first-wall", "--n", "10", "--l2", "-15",
                       "--mode", "ii", "--json")
    data = json.loads(out)
    assert code == 0 and data["input"]["h3"] == "5" and data["box"]["rMax"] == "3"

    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"polarization": {"h3": "1", "volume": "2"}}))
    code, _, err = run(capsys, "--config", str(bad), "bounds", "--mode", "A", "--n", "4")
    assert code == 1 and "unknown config key" in err


def test_render(tmp_path, capsys):
    report = tmp_path / "n4.json"
    code, out, _ = run(capsys, "first-wall", "--n", "4", "--h3", "1", "--l2", "-2", "--mode", "i", "--json")
    report.write_text(out, encoding="utf-8")
    svg_path = tmp_path / "n4.svg"
    code, _, _ = run(capsys, "render", str(report), "--out", str(svg_path))
    svg = svg_path.read_text(encoding="utf-8")
    assert code == 0 and "<svg" in svg and svg.rstrip().endswith("</svg>")
    assert 'data-slope="-2" data-intercept="0"' in svg
    assert "Π(O(−4))" in svg and 'data-b="-4" data-w="8"' in svg

    code, _, err = run(capsys, "render", str(report), "--viewport", "100,101,100,101")
    assert code == 1 and err.startswith("error:")
