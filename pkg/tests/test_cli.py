import io
import json

import pytest

from app.cli import build_parser, run
from magic.errors import EXIT_INFEASIBLE, EXIT_OK, EXIT_PARTIAL, EXIT_USAGE, EXIT_VALIDATION


def invoke(*argv):
    out = io.StringIO()
    code = run(list(argv), stdout=out)
    return code, out.getvalue()


def test_every_command_is_registered():
    parser = build_parser()
    for command in ("validate", "feasible", "count", "enumerate", "orbits", "aut", "pca", "report"):
        args = parser.parse_args([command, "--builtin", "c24"])
        assert args.command == command
    args = parser.parse_args(["scan"])
    assert (args.command, args.start, args.stop) == ("scan", 20, 200)


def test_scan_takes_no_graph():
    assert invoke("scan", "--builtin", "c24")[0] == EXIT_USAGE


def test_validate_builtin():
    code, out = invoke("validate", "--builtin", "C24")
    assert code == EXIT_OK
    summary = json.loads(out)
    assert summary["n"] == 24 and summary["hexagons"] == 2 and summary["edges"] == 36


def test_validate_bad_graph_file(tmp_path, c20_faces):
    path = tmp_path / "broken.json"
    path.write_text(json.dumps({"n": 20, "faces": c20_faces[:-1]}))
    code, _ = invoke("validate", "--graph", str(path))
    assert code == EXIT_VALIDATION


def test_malformed_graph_file_is_a_usage_error(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{")
    assert invoke("validate", "--graph", str(path))[0] == EXIT_USAGE


@pytest.mark.parametrize("argv", [
    (),
    ("validate",),
    ("validate", "--builtin", "c60"),
    ("validate", "--builtin", "c24", "--graph", "x.json"),
    ("enumerate", "--builtin", "c24", "--sp", "57"),
])
def test_usage_errors(argv):
    assert invoke(*argv)[0] == EXIT_USAGE


def test_help_exits_cleanly(capsys):
    assert invoke("--help")[0] == EXIT_OK


def test_infeasible_pair():
    code, _ = invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "107", "--workers", "1")
    assert code == EXIT_INFEASIBLE


def test_feasible_csv():
    code, out = invoke("feasible", "--builtin", "c24", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "sp,sh"
    assert len(lines) == 13
    assert "57,108" in lines and "68,42" in lines


def test_dodecahedron_count_is_empty():
    code, out = invoke("count", "--builtin", "c20", "--workers", "1")
    table = json.loads(out)
    assert code == EXIT_OK
    assert table["rows"] == []
    assert table["reason"] == "relation has no integer solution"


def test_aut_reports_group_order():
    code, out = invoke("aut", "--builtin", "c26")
    assert code == EXIT_OK
    assert json.loads(out)["order"] == 12


def test_enumerate_writes_stream_file_and_manifest(tmp_path):
    code, out = invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "108",
                       "--sorted", "--workers", "1", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert out == ""
    lines = (tmp_path / "solutions-57-108.txt").read_text().splitlines()
    assert len(lines) == 576
    assert lines == sorted(lines, key=lambda line: tuple(int(x) for x in line.split(",")))

    manifest = json.loads((tmp_path / "run-manifest.json").read_text())
    assert manifest["command"] == "enumerate"
    assert manifest["graph_source"] == "builtin:C24"
    assert manifest["exit_code"] == EXIT_OK
    assert manifest["summary"]["count"] == 576
    assert manifest["parameters"]["sp"] == 57
    assert str(tmp_path / "solutions-57-108.txt") in manifest["outputs"]


def test_node_budget_exit_code(tmp_path):
    code, _ = invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "108",
                     "--workers", "1", "--node-budget", "20", "--out", str(tmp_path))
    manifest = json.loads((tmp_path / "run-manifest.json").read_text())
    assert code == EXIT_PARTIAL
    assert manifest["partial"] is True
    assert manifest["exit_code"] == EXIT_PARTIAL


def test_orbits_need_solutions():
    code, _ = invoke("orbits", "--builtin", "c24", "--sp", "57", "--sh", "108", "--workers", "1")
    assert code == EXIT_USAGE


def test_orbits_with_stored_solutions():
    code, out = invoke("orbits", "--builtin", "c24", "--sp", "57", "--sh", "108",
                       "--store-solutions", "--workers", "1")
    document = json.loads(out)
    assert code == EXIT_OK
    assert document["group_order"] == 24
    assert document["free_action"] is True
    assert document["orbits"]["orbit_count"] == 24
    assert document["cross_pair"]["orbit_size"] == 48


def test_pca_from_stream_file(tmp_path):
    invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "108",
           "--workers", "1", "--out", str(tmp_path / "enum"))
    stream = tmp_path / "enum" / "solutions-57-108.txt"
    code, out = invoke("pca", "--builtin", "c24", "--sp", "57", "--sh", "108", "--k", "3",
                       "--input", str(stream), "--out", str(tmp_path / "pca"))
    assert code == EXIT_OK
    assert json.loads(out)["N"] == 576
    header = (tmp_path / "pca" / "pca-57-108.csv").read_text().splitlines()[0]
    assert header == "x,y,z"


def test_pca_rejects_foreign_rows(tmp_path):
    stream = tmp_path / "solutions.txt"
    stream.write_text(",".join(str(x) for x in range(1, 25)) + "\n")
    code, _ = invoke("pca", "--builtin", "c24", "--sp", "57", "--sh", "108",
                     "--input", str(stream), "--out", str(tmp_path))
    assert code == EXIT_USAGE


def test_scan_json_lists_every_even_order():
    code, out = invoke("scan", "--from", "20", "--to", "200")
    document = json.loads(out)
    rows = {row["n"]: row for row in document["orders"]}
    assert code == EXIT_OK
    assert sorted(rows) == list(range(20, 201, 2))
    assert rows[60]["excluded"] is True and rows[60]["mod8_ok"] is False
    assert rows[24]["relation"] == "6·S_p + S_h = 450"
    assert all(rows[n]["excluded"] for n in rows if n % 8 == 4)


def test_scan_csv_with_manifest(tmp_path):
    code, out = invoke("scan", "--from", "24", "--to", "30", "--format", "csv", "--out", str(tmp_path))
    lines = out.strip().splitlines()
    assert code == EXIT_OK
    assert lines[0] == "n,excluded,mod8_ok,relation,residues,reason"
    assert lines[1] == "24,false,true,6·S_p + S_h = 450,S_h ≡ 0 (mod 2);S_h ≡ 0 (mod 3),"
    assert lines[3].startswith("28,true,false,")
    assert (tmp_path / "scan.csv").read_text(encoding="utf-8") == out
    manifest = json.loads((tmp_path / "run-manifest.json").read_text())
    assert manifest["graph_source"] == "none"
    assert manifest["summary"] == {"orders": 4, "excluded": 1}


def test_scan_rejects_reversed_range():
    assert invoke("scan", "--from", "60", "--to", "20")[0] == EXIT_USAGE


@pytest.mark.parametrize("flag", ["--workers", "--node-budget"])
def test_zero_search_limits_are_usage_errors(flag):
    code, _ = invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "108", flag, "0")
    assert code == EXIT_USAGE


def test_infeasible_pair_leaves_no_solution_file(tmp_path):
    code, _ = invoke("enumerate", "--builtin", "c24", "--sp", "57", "--sh", "107",
                     "--workers", "1", "--out", str(tmp_path))
    assert code == EXIT_INFEASIBLE
    assert not (tmp_path / "solutions-57-107.txt").exists()
    manifest = json.loads((tmp_path / "run-manifest.json").read_text())
    assert manifest["outputs"] == []


def test_pca_all_pairs_on_dodecahedron_is_empty(tmp_path):
    code, out = invoke("pca", "--builtin", "c20", "--all-pairs", "--workers", "1", "--out", str(tmp_path))
    assert code == EXIT_OK
    assert json.loads(out) == {"graph_id": "C20", "spectra": []}


def test_pca_all_pairs_refuses_a_single_pair():
    code, _ = invoke("pca", "--builtin", "c24", "--all-pairs", "--sp", "57", "--sh", "108")
    assert code == EXIT_USAGE


@pytest.mark.slow
def test_pca_all_pairs_projects_every_c24_pair(tmp_path):
    code, out = invoke("pca", "--builtin", "c24", "--all-pairs", "--workers", "4", "--out", str(tmp_path))
    spectra = json.loads(out)["spectra"]
    assert code == EXIT_OK
    assert len(spectra) == 12
    assert len(list(tmp_path.glob("pca-*.csv"))) == 12
    by_pair = {(s["pair"]["sp"], s["pair"]["sh"]): s["N"] for s in spectra}
    assert by_pair[(57, 108)] == by_pair[(68, 42)] == 576
