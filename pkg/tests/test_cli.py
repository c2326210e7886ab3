import json

import pytest

from latticetheta.cli import main
from latticetheta.io import automorphism_from_json, lattice_from_json
from latticetheta.lattice import validate_even_lattice
from latticetheta.theta import ThetaTable

OZEKI = {"gram": [[4, 2, 1, 0], [2, 4, 1, 1], [1, 1, 4, 2], [0, 1, 2, 4]]}


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(doc if isinstance(doc, str) else json.dumps(doc))
    return p


@pytest.fixture(scope="module")
def files(tmp_path_factory):
    d = tmp_path_factory.mktemp("cat")
    for name in ("A2", "E8", "E8+E8", "Leech"):
        assert main(["catalog", name, "--dir", str(d)]) == 0
    (d / "A1_A1.json").write_text(json.dumps({"label": "A1+A1", "gram": [[2, 0], [0, 2]]}))
    return d


def test_catalog_a2(capsys):
    code, doc = run(capsys, "catalog", "A2")
    assert code == 0 and doc["gram"] == [[2, -1], [-1, 2]]
    assert lattice_from_json(doc).gram == ((2, -1), (-1, 2))


def test_catalog_aut_and_dir(capsys, files):
    code, doc = run(capsys, "catalog", "E8", "--aut", "order7")
    assert code == 0 and automorphism_from_json(doc)[1] == 7
    names = sorted(p.name for p in files.iterdir())
    assert {"Leech.json", "Leech.order23.json", "Leech.order11.json", "E8.order7.json"} <= set(names)
    leech = lattice_from_json(json.loads((files / "Leech.json").read_text()))
    assert leech.rank == 24 and validate_even_lattice(leech).determinant == 1


def test_catalog_errors(capsys):
    assert main(["catalog", "D4"]) == 2
    assert main(["catalog", "A2", "--aut", "order5"]) == 2
    assert "error" in capsys.readouterr().err


def test_validate(capsys, files, tmp_path):
    code, doc = run(capsys, "validate", files / "E8.json", "--aut", files / "E8.order7.json")
    assert code == 0 and doc["ok"] and doc["automorphism"]["order"] == 7
    odd = write(tmp_path, "odd.json", {"gram": [[1, 0], [0, 1]]})
    code, doc = run(capsys, "validate", odd)
    assert code == 1 and not doc["ok"]
    bad = write(tmp_path, "bad.json", {"matrix": [[1, 0], [0, 1]], "order": 3})
    code, doc = run(capsys, "validate", files / "A2.json", "--aut", bad)
    assert code == 1 and not doc["automorphism"]["valid"]


def test_decompose(capsys, files):
    code, doc = run(capsys, "decompose", files / "E8_E8.json")
    assert code == 0 and [(c["rank"], c["det"]) for c in doc["components"]] == [(8, 1), (8, 1)]
    code, doc = run(capsys, "decompose", files / "E8.json")
    assert len(doc["components"]) == 1
    code, doc = run(capsys, "decompose", files / "A1_A1.json")
    assert [(c["rank"], c["det"]) for c in doc["components"]] == [(1, 2), (1, 2)]


def test_fixed_leech(capsys, files, tmp_path):
    code, doc = run(capsys, "fixed", files / "Leech.json", files / "Leech.order23.json")
    assert code == 0
    assert doc["m0"] == 2 and doc["det_M0"] == 23 and doc["M0_reduced_gram"] == [[4, 1], [1, 6]]
    oz = write(tmp_path, "ozeki.json", OZEKI)
    code, doc = run(capsys, "fixed", files / "Leech.json", files / "Leech.order11.json", "--compare", oz)
    assert code == 0 and doc["m0"] == 4 and doc["det_M0"] == 121 and doc["isometric_to_compare"]


def test_fixed_compare_mismatch(capsys, files, tmp_path):
    other = write(tmp_path, "other.json", {"gram": [[2, 1], [1, 4]]})
    code, doc = run(capsys, "fixed", files / "Leech.json", files / "Leech.order23.json", "--compare", other)
    assert code == 1 and doc["isometric_to_compare"] is False


@pytest.mark.parametrize("text", ["{not json", '{"gram": [[2.0]]}', '{"gram": [[true]]}',
                                  '{"gram": [[2, 1]]}', '{"gram": NaN}', "[]"])
def test_malformed_inputs_exit_2(capsys, files, tmp_path, text):
    p = write(tmp_path, "x.json", text)
    assert main(["fixed", str(p), str(files / "E8.order7.json")]) == 2
    assert main(["theta", str(p)]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_automorphisms_exit_2(capsys, files, tmp_path):
    wrong = write(tmp_path, "w.json", {"matrix": [[0, 1], [1, 0]], "order": 3})
    assert main(["fixed", str(files / "A2.json"), str(wrong)]) == 2
    shape = write(tmp_path, "s.json", {"matrix": [[1]], "order": 3})
    assert main(["fixed", str(files / "A2.json"), str(shape)]) == 2
    assert main(["fixed", str(files / "A2.json"), str(tmp_path / "missing.json")]) == 2


def test_theta(capsys, files):
    code, doc = run(capsys, "theta", files / "A1_A1.json", "--degree", 1, "--bound", 2)
    counts = {e["twoT"][0][0] // 2: int(e["count"]) for e in ThetaTable.from_json(doc).to_json()["entries"]}
    assert code == 0 and counts == {0: 1, 1: 4, 2: 4}
    code, doc = run(capsys, "theta", files / "E8.json", "--bound", 2)
    assert [e["count"] for e in doc["entries"]] == ["1", "240", "2160"]
    code, doc = run(capsys, "theta", files / "E8.json", "--bound", 0)
    assert [e["count"] for e in doc["entries"]] == ["1"]


def test_theta_heavy_gate(capsys, files):
    assert main(["theta", str(files / "Leech.json"), "--degree", "2", "--bound", "2"]) == 2
    assert "--heavy" in capsys.readouterr().err
    assert main(["theta", str(files / "E8.json"), "--degree", "0"]) == 2


def test_opcheck_defaults(capsys, files):
    code, doc = run(capsys, "opcheck", files / "E8.json", files / "E8.order7.json", "--bound", 2)
    assert code == 0 and doc["holds"]
    assert [(r["p"], r["degree"]) for r in doc["reports"]] == [(7, 2), (7, 2)]


def test_opcheck_singular(capsys, files):
    code, doc = run(capsys, "opcheck", files / "E8.json", "--prime", 7, "--degree", 3, "--bound", 1,
                    "--singular")
    assert code == 0 and doc["holds"]


def test_opcheck_reports_witnesses(capsys, files):
    # E8 at p = 5 is report-only; small shells happen to be divisible by 5
    code, doc = run(capsys, "opcheck", files / "E8.json", "--prime", 5, "--degree", 2, "--bound", 2)
    assert code == (0 if doc["holds"] else 1)
    code, doc = run(capsys, "opcheck", files / "A2.json", "--prime", 5, "--degree", 1, "--bound", 1)
    assert code == 1 and not doc["holds"]
    assert doc["reports"][0]["witnesses"] == [{"twoT": [[2]], "count": "6", "det2T": 2}]


def test_opcheck_usage_errors(capsys, files):
    assert main(["opcheck", str(files / "E8.json"), "--degree", "2"]) == 2
    assert main(["opcheck", str(files / "E8.json"), "--prime", "9", "--degree", "2"]) == 2
    assert main(["opcheck", str(files / "A2.json"), str(files / "A2.order3.json")]) == 2


def test_output_file(capsys, files, tmp_path):
    out = tmp_path / "t.json"
    assert main(["theta", str(files / "A2.json"), "--degree", "2", "--bound", "1", "-o", str(out)]) == 0
    assert capsys.readouterr().out == ""
    table = ThetaTable.from_json(json.loads(out.read_text()))
    assert table.degree == 2 and table[[[2, -1], [-1, 2]]] == 12
