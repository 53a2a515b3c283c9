import io
import json

import pytest

from vhsquare.cli import main


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), stream=out)
    return code, out.getvalue()


def test_check_leary1():
    code, text = run("check", "--builtin", "leary1")
    assert code == 0
    assert text.count(": pass  r=3") == 6
    assert "no repeated VH-corners" in text and "every 1-cell doubled" in text
    assert "result: PASS" in text


def test_check_leary1_json():
    code, text = run("check", "--builtin", "leary1", "--format", "json")
    report = json.loads(text)
    assert code == report["exit_code"] == 0
    for stage in ("triangle", "corners", "subdivision", "gauss_bonnet", "npc", "hyperbolicity"):
        assert report["stages"][stage]["status"] == "pass"
    assert report["stages"]["parity"]["odd_polygons"] == [0, 1, 2, 3, 4, 5]
    assert report["counts"]["euler_characteristic"] == 1


def test_check_counterexample4():
    code, text = run("check", "--builtin", "counterexample4", "--format", "json")
    report = json.loads(text)
    assert code == 1 and report["failed"] == ["triangle"]
    assert report["stages"]["triangle"]["polygons"][0]["vertical"] == [1, 2]


def test_check_file_triangle_failure(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("vertical: v\nhorizontal: h\nrelator: v^3 h\n")
    code, text = run("check", str(f))
    assert code == 1
    assert "relator 1: FAIL  r=1" in text


@pytest.mark.parametrize("m, n, expected", [(2, 2, 0), (2, 3, 1), (1, 1, 0), (3, 1, 1)])
def test_counterexample3(m, n, expected):
    assert run("check", "--builtin", "counterexample3", "--m", str(m), "--n", str(n))[0] == expected


def test_repeated_corner_fails_npc(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("vertical: v\nhorizontal: h\nrelator: v h v h\n")
    code, text = run("check", str(f), "--format", "json")
    report = json.loads(text)
    assert code == 1 and report["failed"] == ["corners", "npc"]


def test_subdivide_torus_and_leary(tmp_path):
    code, text = run("subdivide", "--builtin", "torus")
    assert code == 0 and len(json.loads(text)["squares"]) == 1
    code, _ = run("subdivide", "--builtin", "leary1", "--out", str(tmp_path))
    data = json.loads((tmp_path / "complex.json").read_text())
    report = json.loads((tmp_path / "report.json").read_text())
    crossings = sum(d["crossings"] for d in report["stages"]["subdivision"]["disks"])
    assert code == 0
    assert data["meta"]["euler_characteristic"] == 1 and len(data["squares"]) == crossings


def test_subdivide_counterexample2(capsys):
    assert run("subdivide", "--builtin", "counterexample2")[0] == 1
    assert "triangle" in capsys.readouterr().err


def test_fixtures_listing():
    code, text = run("fixtures")
    assert code == 0
    assert "counterexample3 m n" in text and "leary-family n" in text and "torus" in text


def test_pairing_command():
    code, text = run("pairing", "--lengths", "2", "1", "1", "--oracle")
    assert code == 0 and "0-3 1-2" in text and "agrees" in text
    assert run("pairing", "--lengths", "3", "1")[0] == 1


def test_link_command():
    code, text = run("link", "--builtin", "torus", "--dot")
    assert code == 0 and text.count(" -- ") == 4
    assert "girth 4" in run("link", "--builtin", "leary1", "--vertex", "0")[1]
    assert run("link", "--builtin", "torus", "--vertex", "7")[0] == 2


def test_check_outputs(tmp_path):
    code, _ = run("check", "--builtin", "torus", "--out", str(tmp_path), "--dot-links", "--oracle")
    assert code == 0
    assert {p.name for p in tmp_path.iterdir()} == {"report.json", "complex.json", "bicomplex.json", "links"}
    assert (tmp_path / "links" / "link_0.dot").exists()
    report = json.loads((tmp_path / "report.json").read_text())
    assert report["stages"]["pairing_oracle"]["status"] == "pass"


def test_skip_assembly():
    code, text = run("check", "--builtin", "leary1", "--skip-assembly", "--format", "json")
    report = json.loads(text)
    assert code == 0 and report["stages"]["npc"]["status"] == "n/a"


def test_pairing_file(tmp_path):
    f = tmp_path / "pairs.json"
    f.write_text(json.dumps({"0": {"V": [[0, 5], [1, 4]], "H": [[2, 7], [3, 6]]}}))
    g = tmp_path / "p.txt"
    g.write_text("vertical: a b\nhorizontal: c d\nrelator: a b c d b^-1 a^-1 d^-1 c^-1\n")
    code, text = run("check", str(g), "--pairing-file", str(f), "--format", "json")
    report = json.loads(text)
    assert report["stages"]["subdivision"]["disks"][0]["squares"] == 4
    f.write_text(json.dumps({"0": {"V": [[0, 1]], "H": []}}))
    code, text = run("check", str(g), "--pairing-file", str(f), "--format", "json")
    assert code == 1 and json.loads(text)["stages"]["subdivision"]["status"] == "fail"


def test_text_and_json_agree():
    _, text = run("check", "--builtin", "counterexample3")
    _, js = run("check", "--builtin", "counterexample3", "--format", "json")
    for name, stage in json.loads(js)["stages"].items():
        assert any(line.startswith(name) and stage["status"] in line for line in text.splitlines())


@pytest.mark.parametrize("argv", [["check"], ["check", "--builtin", "nope"], ["bogus"], ["check", "/no/such/file"],
                                  ["check", "--builtin", "leary-family", "--n", "3"]])
def test_usage_errors(argv):
    assert run(*argv)[0] == 2


def test_parse_error_exit(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("vertical: v\nrelator: v x\n")
    assert run("check", str(f))[0] == 2


def test_json_report_deterministic():
    assert run("check", "--builtin", "leary1", "--format", "json") == run("check", "--builtin", "leary1", "--format", "json")


def test_proper_power_and_free_edge_flags(tmp_path):
    f = tmp_path / "p.txt"
    f.write_text("vertical: v w\nhorizontal: h\nrelator: v h v h\n")
    code, text = run("check", str(f))
    assert "proper powers: relators 1" in text
    assert "edges on no polygon: 1" in text
