import csv
import io
import json
import xml.etree.ElementTree as ET

import pytest

from coxconf import export
from coxconf.axioms import revalidate
from coxconf.builders import STEINER_MIQUEL_MATRIX, cox, hypercube, levi_graph
from coxconf.cli import main
from coxconf.core import FiniteSubset
from coxconf.realization import line_cross_ratio, realize, stereographic, verify


def run(capsys, *argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        monkeypatch.setattr("sys.stdin", io.StringIO(stdin))
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def rows(text):
    return list(csv.reader(io.StringIO(text)))


def test_realization_json_roundtrip():
    R = realize(6)
    text = export.realization_to_json(R)
    data = json.loads(text)
    assert data["n"] == 6 and data["seed"] == 1
    assert {"label": "{}", "inf": True} in data["points"]
    assert all(isinstance(c[k], str) for c in data["circles"] for k in "abcd")
    back = export.realization_from_json(text)
    assert back.point_map == R.point_map and back.circle_map == R.circle_map
    assert verify(back).ok
    assert export.realization_to_json(back).replace('"verified": false', '"verified": true') == text


def test_structure_json_roundtrip():
    S = cox(4)
    T = export.structure_from_json(export.structure_to_json(S))
    assert list(T.points) == [str(p) for p in S.points]
    assert set(T.flags) == set(S.flags)


def test_csv_canonical_order():
    r = rows(export.incidence_csv(cox(3)))
    assert r[0] == ["", "{}", "{1,2}", "{1,3}", "{2,3}"]
    assert [x[0] for x in r[1:]] == ["{1}", "{2}", "{3}", "{1,2,3}"]
    assert r[1][1:] == ["1", "1", "1", "0"]


def test_dot_exports():
    dot = export.graph_to_dot(levi_graph(cox(3)), "Levi")
    assert dot.startswith("graph Levi {") and dot.count(" -- ") == 12
    dot = export.structure_to_dot(cox(4))
    assert dot.count(" -- ") == 32 and dot.count("shape=box") == 8
    assert export.graph_to_dot(hypercube(3)).count(" -- ") == 12


def test_svg_export():
    svg = export.realization_to_svg(realize(4))
    root = ET.fromstring(svg)
    ns = "{http://www.w3.org/2000/svg}"
    groups = [g for g in root.iter(ns + "g") if g.get("id", "").startswith("circle-")]
    assert len(groups) == 8
    assert {g.get("id") for g in groups} >= {"circle-1", "circle-1-2-3"}
    assert root.get("version") == "1.1"


def test_sphere_json():
    M = stereographic(realize(4))
    data = json.loads(export.sphere_to_json(M))
    assert len(data["points"]) == 8 and len(data["circles"]) == 8
    assert data["points"][0] == {"label": "{}", "xyz": [0.0, 0.0, 1.0]}
    assert data["max_residual"] < 1e-9


def test_cli_build_table(capsys):
    code, out, _ = run(capsys, "build", "cox", "--n", "4", "--format", "csv", "--labels", "steiner-miquel")
    assert code == 0
    r = rows(out)
    assert r[0][1:] == ["q_A", "q_12", "q_13", "q_14", "q_23", "q_24", "q_34", "q_B"]
    assert [tuple(int(x) for x in row[1:]) for row in r[1:]] == list(STEINER_MIQUEL_MATRIX)


def test_cli_build_canonical_csv(capsys):
    code, out, _ = run(capsys, "build", "cox", "--n", "4", "--format", "csv")
    assert code == 0
    assert sum(int(x) for row in rows(out)[1:] for x in row[1:]) == 32


def test_cli_build_json(capsys, tmp_path):
    target = tmp_path / "k.json"
    assert main(["build", "kdagger", "--n", "4", "--k", "2", "--out", str(target)]) == 0
    data = json.loads(target.read_text())
    assert len(data["points"]) == 6 and len(data["blocks"]) == 8
    assert "T{1,2,3}" in data["blocks"] and "S{1}" in data["blocks"]


def test_cli_steiner_labels_need_cox4(capsys):
    code, _, err = run(capsys, "build", "cox", "--n", "5", "--format", "csv", "--labels", "steiner-miquel")
    assert code == 2 and "n=4" in err


def test_cli_check_axioms(capsys):
    code, out, _ = run(capsys, "check", "axioms", "--n", "5")
    assert code == 0
    assert "condition V: pass" in out and "weak chain structure: yes" in out


def test_cli_check_axioms_mutant_witness(capsys):
    code, out, err = run(capsys, "check", "axioms", "--n", "4", "--delete-flag", "{}:{1}")
    assert code == 1 and "condition I: FAIL" in out
    line = next(x for x in err.splitlines() if x.startswith("condition I witness"))
    labels = line.split(": ", 1)[1].split(" (")[0].split(", ")
    M = cox(4).without_flag(FiniteSubset.empty(4), FiniteSubset.of(4, [1]))
    assert revalidate(M, "I", tuple(FiniteSubset.parse(4, t) for t in labels))


def test_cli_check_miquel(capsys):
    code, out, _ = run(capsys, "check", "miquel", "--n", "4")
    assert code == 0 and "pass; 24 instances" in out
    code, _, err = run(capsys, "check", "miquel", "--n", "4", "--delete-block", "{1,2,4}")
    assert code == 1 and "counterexample" in err
    code, out, _ = run(capsys, "check", "miquel", "--n", "6", "--budget", "10")
    assert code == 1 and "cap reached" in out


def test_cli_levi(capsys):
    code, out, err = run(capsys, "levi", "--n", "4", "--compare-hypercube")
    assert code == 0 and "equals hypercube Q_4: yes" in err
    assert out.count(" -- ") == 32


def test_cli_aut(capsys):
    code, out, _ = run(capsys, "aut", "brute", "--structure", "cox", "--n", "4")
    assert code == 0 and out.strip() == "192; matches S_n ⋉ C_2^{n-1}: yes"
    code, out, _ = run(capsys, "aut", "brute", "--n", "3", "--correlations", "--compare")
    assert code == 0 and "48 collineations+correlations" in out and "equality with generated group: yes" in out
    code, out, _ = run(capsys, "aut", "group", "--n", "4")
    assert code == 0 and out.startswith("order 384")
    code, out, _ = run(capsys, "aut", "flag-orbit", "--n", "5")
    assert code == 0 and "80 flags of 80" in out
    code, out, _ = run(capsys, "aut", "stabilizer", "--n", "4")
    assert code == 0 and "order 24" in out
    code, out, _ = run(capsys, "aut", "brute", "--structure", "kdagger", "--n", "4", "--k", "2")
    assert code == 0 and out.startswith("48; matches C_2")


def test_cli_decompose(capsys):
    code, out, _ = run(capsys, "decompose", "--n", "6", "--split", "1,2,3")
    assert code == 0 and "family 1: 8 copies" in out and "exactly one member: yes" in out


def test_cli_realize_verify_pipeline(capsys, monkeypatch):
    code, out, _ = run(capsys, "realize", "--n", "6", "--seed", "1")
    assert code == 0
    code, out2, _ = run(capsys, "verify", stdin=out, monkeypatch=monkeypatch)
    assert code == 0 and out2.startswith("all 192 incidences exact")


def test_cli_output_byte_stable(capsys):
    run(capsys, "realize", "--n", "5")
    a = run(capsys, "realize", "--n", "5")[1]
    b = run(capsys, "realize", "--n", "5")[1]
    assert a == b


def test_cli_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("COXCONF_SEED", "7")
    out = run(capsys, "realize", "--n", "4")[1]
    assert json.loads(out)["seed"] == 7
    monkeypatch.setenv("COXCONF_SEED", "seven")
    code, _, err = run(capsys, "realize", "--n", "4")
    assert code == 2 and "COXCONF_SEED" in err


def test_cli_extend_and_cross_ratio(capsys, tmp_path, monkeypatch):
    src = tmp_path / "r4.json"
    assert main(["realize", "--n", "4", "--out", str(src)]) == 0
    code, out, _ = run(capsys, "extend", "--in", str(src))
    assert code == 0 and json.loads(out)["n"] == 5
    code, out2, _ = run(capsys, "cross-ratio", "--circle", "{1}", "--points", "{}", "{1,2}", "{1,3}", "{1,4}",
                        stdin=out, monkeypatch=monkeypatch)
    assert code == 0
    R = export.realization_from_json(out)
    value, convention = out2.splitlines()
    assert value == str(line_cross_ratio(R, 1, (2, 3, 4)))
    assert convention.startswith("# convention: ((z1-z3)")
    code, _, err = run(capsys, "cross-ratio", "--circle", "{2}", "--points", "{}", "{1,2}", "{1,3}", "{1,4}",
                       stdin=out, monkeypatch=monkeypatch)
    assert code == 1 and "not on circle" in err


def test_cli_verify_detects_corruption(capsys, monkeypatch):
    data = export.realization_to_dict(realize(4))
    rec = next(p for p in data["points"] if p["label"] == "{1,2}")
    rec["x_num"] = str(int(rec["x_num"]) + 1)
    code, out, err = run(capsys, "verify", stdin=json.dumps(data), monkeypatch=monkeypatch)
    assert code == 1 and out.startswith("FAILED: 4 incidence defects")
    assert "defect: point {1,2}" in err


def test_cli_export_formats(capsys, tmp_path, monkeypatch):
    r = tmp_path / "r.json"
    main(["realize", "--n", "4", "--out", str(r)])
    capsys.readouterr()
    code, out, _ = run(capsys, "export", "svg", "--in", str(r))
    assert code == 0 and out.startswith("<svg")
    code, out, _ = run(capsys, "export", "sphere-json", "--in", str(r), "--radius", "2")
    assert code == 0 and json.loads(out)["radius"] == 2.0
    s = tmp_path / "s.json"
    main(["build", "cox", "--n", "3", "--out", str(s)])
    code, out, _ = run(capsys, "export", "dot", "--in", str(s))
    assert code == 0 and out.count(" -- ") == 12
    code, out, _ = run(capsys, "export", "csv", "--in", str(s))
    assert code == 0 and len(rows(out)) == 5


def test_cli_usage_errors(capsys, tmp_path):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    capsys.readouterr()
    code, _, err = run(capsys, "verify", "--in", str(tmp_path / "missing.json"))
    assert code == 2 and err.startswith("error:")
    code, _, _ = run(capsys, "realize", "--n", "12")
    assert code == 2
