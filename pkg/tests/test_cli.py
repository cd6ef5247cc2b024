from __future__ import annotations

import json
import os
from pathlib import Path

import pytest

from kvisloc.cli import TABLE_COLUMNS, main

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("KVISLOC_REGEN_GOLDEN") == "1"

INPUTS = {
    "star5": ["--family", "star", "5"],
    "c4": ["--family", "cycle", "4"],
    "p3": ["--family", "path", "3"],
    "p7": ["--family", "path", "7"],
    "spider222": ["--family", "spider", "2", "2", "2"],
    "grid3": ["--family", "grid", "3"],
}


@pytest.fixture(scope="module")
def inputs(tmp_path_factory):
    d = tmp_path_factory.mktemp("graphs")
    out = {}
    for name, args in INPUTS.items():
        p = d / f"{name}.json"
        assert main(["gen", *args, "-o", str(p)]) == 0
        out[name] = str(p)
    return out


def run(capsys, argv):
    code = main(argv)
    cap = capsys.readouterr()
    return code, cap.out, cap.err


def check_golden(name: str, text: str) -> None:
    path = GOLDEN / name
    if REGEN:
        path.write_text(text)
    assert path.exists(), f"missing golden file {name}"
    assert text == path.read_text()


GOLDEN_CASES = [
    ("gen_spider.json", ["gen", "--family", "spider", "2", "3", "4"], 0),
    ("gen_grid.json", ["gen", "--family", "grid", "2"], 0),
    ("gen_random_tree.json", ["gen", "--family", "random_tree", "9", "--seed", "4"], 0),
    ("gen_prox1.json", ["gen", "--family", "star", "3", "--subdivide", "prox1", "--k", "1"], 0),
    ("gen_lower_bound.json", ["gen", "--family", "lower_bound_tree", "3", "4", "1"], 0),
    ("solve_c4.json", ["solve", "@c4", "--game", "loc", "--k", "1", "--cops", "1"], 1),
    ("solve_star.json", ["solve", "@star5", "--game", "prox", "--k", "1", "--cops", "1", "--witness"], 0),
    ("exact_star.json", ["exact", "@star5", "--game", "loc", "--k", "1"], 0),
    ("bounds_p7.json", ["bounds", "@p7", "--k", "1", "--exact"], 0),
    ("simulate_5_1.json", ["simulate", "--grid", "5", "--k", "1"], 0),
    ("verify_spider.json", ["verify", "@spider222", "--strategy", "spider", "--k", "2", "--witness"], 0),
    ("verify_endgame.json", ["verify", "@grid3", "--strategy", "grid-endgame", "--k", "1", "--cops", "3"], 0),
    ("table_k1.csv", ["table", "--grid", "--k", "1", "--n-min", "25", "--n-max", "29"], 0),
    ("table_k2.csv", ["table", "--grid", "--k", "2", "--n-min", "13", "--n-max", "16"], 0),
    ("export_p3.edges", ["export", "@p3", "--format", "edgelist"], 0),
    ("export_p3.dot", ["export", "@p3", "--format", "dot"], 0),
    ("export_grid.json", ["export", "@grid3", "--format", "json"], 0),
]


@pytest.mark.parametrize("name,argv,code", GOLDEN_CASES, ids=[c[0] for c in GOLDEN_CASES])
def test_golden(name, argv, code, inputs, capsys):
    argv = [inputs[a[1:]] if a.startswith("@") else a for a in argv]
    got, out, err = run(capsys, argv)
    assert got == code, err
    check_golden(name, out)
    # identical invocations give identical bytes
    again, out2, _ = run(capsys, argv)
    assert (again, out2) == (got, out)


def test_exact_star_prints_one(inputs, capsys):
    code, out, _ = run(capsys, ["exact", inputs["star5"], "--game", "loc", "--k", "1"])
    assert code == 0 and out.strip() == "1"


def test_table_row_26(capsys):
    code, out, _ = run(capsys, ["table", "--grid", "--k", "1", "--n-min", "26", "--n-max", "26"])
    header, row = out.strip().splitlines()
    assert header.split(",") == list(TABLE_COLUMNS)
    vals = dict(zip(TABLE_COLUMNS, row.split(",")))
    assert vals["lower"] == "6" and vals["upper"] == "6"


def test_export_edgelist(inputs, capsys):
    assert run(capsys, ["export", inputs["p3"], "--format", "edgelist"])[1] == "0 1\n1 2\n"


def test_json_roundtrip(inputs, capsys, tmp_path):
    src = Path(inputs["grid3"]).read_text()
    _, out, _ = run(capsys, ["export", inputs["grid3"], "--format", "json"])
    assert out == src


def test_gen_to_stdout_matches_file(inputs, capsys):
    _, out, _ = run(capsys, ["gen", "--family", "path", "3"])
    assert out == Path(inputs["p3"]).read_text()


@pytest.mark.parametrize("argv", [
    ["export", "@p3", "--format", "png"],
    ["solve", "/nonexistent/graph.json", "--game", "loc", "--k", "1", "--cops", "1"],
    ["gen", "--family", "spider", "1", "1"],
    ["gen", "--family", "random_tree", "5"],
    ["solve", "@p3", "--game", "chess", "--k", "1", "--cops", "1"],
    ["exact", "@grid3", "--game", "loc", "--k", "1", "--max-n", "4"],
    ["verify", "@p7", "--strategy", "spider", "--k", "2"],
])
def test_errors_exit_two(argv, inputs, capsys):
    argv = [inputs[a[1:]] if a.startswith("@") else a for a in argv]
    code, out, err = run(capsys, argv)
    assert code == 2 and out == ""
    payload = json.loads(err.strip().splitlines()[-1])
    assert "error" in payload or "type" in payload


def test_simulate_failure_exit_one(capsys):
    code, out, _ = run(capsys, ["simulate", "--grid", "25", "--k", "1", "--cops", "5", "--max-rounds", "400"])
    assert code == 1 and json.loads(out)["cleared"] is False


def test_figures(tmp_path, capsys):
    figs = tmp_path / "figs"
    assert main(["simulate", "--grid", "6", "--k", "1", "--figures", str(figs)]) == 0
    assert main(["table", "--grid", "--k", "2", "--n-min", "13", "--n-max", "14", "--figures", str(figs)]) == 0
    capsys.readouterr()
    names = sorted(p.name for p in figs.iterdir())
    assert names == ["bracket_k2.svg", "infection_n6_k1.svg", "tiling_k2_n13.svg"]
    for p in figs.iterdir():
        assert p.read_text().lstrip().startswith("<?xml")
    first = (figs / "bracket_k2.svg").read_bytes()
    main(["table", "--grid", "--k", "2", "--n-min", "13", "--n-max", "14", "--figures", str(figs)])
    capsys.readouterr()
    assert (figs / "bracket_k2.svg").read_bytes() == first


def test_help_lists_columns(capsys):
    with pytest.raises(SystemExit):
        main(["table", "--help"])
    out = capsys.readouterr().out
    for col in TABLE_COLUMNS:
        assert col in out
