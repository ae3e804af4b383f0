"""Command-line interface: every subcommand in-process, plus exit codes."""

import json

import pytest

from heegnercert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_k_exceptional(capsys):
    code, doc = run_json(capsys, "k-exceptional", "--p", "5", "--f", "1",
                         "--bound", "50")
    assert code == 0 and doc == [3]
    code, doc = run_json(capsys, "k-exceptional", "--p", "3", "--f", "1",
                         "--bound", "50")
    assert code == 0 and doc == []


def test_classify(capsys):
    code, doc = run_json(capsys, "classify", "--p", "7", "--f", "1",
                         "--gens", "3,0,0,5;0,1,1,0")
    assert code == 0
    assert doc["irreducible"] is True
    assert doc["cartan_kind"] == "split"


def test_cohomology_plain(capsys, tmp_path):
    gf = tmp_path / "group.txt"
    gf.write_text("# unipotent generator\n1,1,0,1\n")
    code, doc = run_json(capsys, "cohomology", "--p", "3", "--group-file",
                         str(gf), "--module-dim", "2", "--max-degree", "1")
    assert code == 0
    assert doc["group_order"] == 3
    assert doc["dimensions"]["1"] == 1


def test_cohomology_filtration(capsys, tmp_path):
    gf = tmp_path / "group9.txt"
    gf.write_text("1,1,0,1\n4,0,0,7\n")
    code, doc = run_json(capsys, "cohomology", "--p", "3", "--group-file",
                         str(gf), "--module-dim", "2", "--max-degree", "1",
                         "--filtration", "2")
    assert code == 0
    assert doc["route"] == "filtration"
    assert "1" in doc["dimensions"]


def test_ap(capsys):
    code, doc = run_json(capsys, "ap", "--curve", "0,0,1,-1,0", "--p", "5")
    assert code == 0 and doc["a_p"] == -2 and doc["good"] is True


def test_tate(capsys):
    code, doc = run_json(capsys, "tate", "--curve", "0,-1,1,-10,-20",
                         "--l", "11")
    assert code == 0
    assert doc["kodaira"] == "I5" and doc["c_local"] == 5


def test_conductor(capsys):
    code, doc = run_json(capsys, "conductor", "--curve", "0,0,1,-1,0")
    assert code == 0
    assert doc["conductor"] == 37 and doc["tamagawa_product"] == 1
    assert "37" in doc["local"]


def test_classgroup(capsys):
    code, doc = run_json(capsys, "classgroup", "--disc", "-23")
    assert code == 0
    assert doc["h"] == 3 and len(doc["forms"]) == 3


def test_genus(capsys):
    code, doc = run_json(capsys, "genus", "--disc", "-15")
    assert code == 0
    assert doc["factors"] == {"3": -3, "5": 5}


def test_heegner_forms(capsys):
    code, doc = run_json(capsys, "heegner-forms", "--disc", "-71",
                         "--level", "37")
    assert code == 0
    assert len(doc["forms"]) == 7
    assert all(a % 37 == 0 for a, _, _ in doc["forms"])


def test_galois_image(capsys):
    code, doc = run_json(capsys, "galois-image", "--curve", "0,0,1,-1,0",
                         "--p", "5", "--bound", "200")
    assert code == 0 and doc["verdict"] == "irreducible_certified"


def test_heegner_with_divisibility(capsys):
    code, doc = run_json(capsys, "heegner", "--curve", "0,0,1,-1,0",
                         "--disc", "-7", "--prec", "60", "--test-div", "5")
    assert code == 0
    assert doc["residual_digits"] > 30
    assert doc["divisibility"]["status"] == "numeric-negative"


def test_certify_writes_file_and_exits_zero(capsys, tmp_path):
    out = tmp_path / "cert.json"
    code, doc = run_json(capsys, "certify", "--curve", "0,0,1,-1,0",
                         "--disc", "-7", "--prime", "5", "--out", str(out))
    assert code == 0
    assert doc["verdict"] == "certified"
    on_disk = out.read_text()
    assert json.loads(on_disk) == doc
    assert on_disk.rstrip("\n") == json.dumps(doc, indent=2, sort_keys=True)


def test_certify_not_certified_exit_two(capsys):
    code, doc = run_json(capsys, "certify", "--curve", "0,0,1,-1,0",
                         "--disc", "-8", "--prime", "5")
    assert code == 2 and doc["verdict"] == "not-certified"


def test_certify_invalid_input_exit_three(capsys):
    code, out, err = run(capsys, "certify", "--curve", "0,0,1,-1,0",
                         "--disc", "-7", "--prime", "4")
    assert code == 3
    doc = json.loads(err)
    assert doc["error"] == "ValueError"


def test_certify_batch(capsys, tmp_path):
    csv = tmp_path / "rows.csv"
    csv.write_text("label,a1,a2,a3,a4,a6,disc,prime\n"
                   "37a,0,0,1,-1,0,-7,5\n")
    out_dir = tmp_path / "certs"
    code, doc = run_json(capsys, "certify-batch", "--input", str(csv),
                         "--out-dir", str(out_dir))
    assert code == 0
    assert doc["certified"] == 1
    assert (out_dir / "37a.json").exists()


def test_unknown_subcommand_errors(capsys):
    with pytest.raises(SystemExit):
        main(["frobnicate"])
