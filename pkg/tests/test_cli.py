import json
import os

import pytest

from obstrukt.cli import main

DATA = os.path.join(os.path.dirname(__file__), "data")


def d(name):
    return os.path.join(DATA, name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out)


def test_validate_ok(capsys):
    code, doc = run(capsys, "validate", d("dual.json"))
    assert code == 0
    assert doc["outcome"] == "ok"
    assert doc["report"]["violations"] == []
    assert doc["inputs"]  # hash embedded


def test_validate_lie_and_bimodule(capsys):
    code, doc = run(capsys, "validate", d("heisenberg.json"))
    assert code == 0 and doc["report"]["type"] == "lie"
    code, doc = run(capsys, "validate", d("dual_aug_module.json"))
    assert code == 0 and doc["report"]["type"] == "bimodule"


def test_validate_refuses_bad_algebra(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({
        "field": "Q", "dim": 2,
        "mul": [[0, 0, [[1, "1"]]], [1, 0, [[0, "1"]]]]}))
    code, doc = run(capsys, "validate", str(bad))
    assert code == 1
    assert doc["outcome"] == "refused"
    assert doc["report"]["violations"]


def test_malformed_json_is_input_error(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, doc = run(capsys, "validate", str(bad))
    assert code == 2
    assert doc["outcome"] == "input-error"


def test_missing_file_is_input_error(capsys):
    code, doc = run(capsys, "validate", d("no_such_file.json"))
    assert code == 2


def test_unknown_flag_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["mul-algebra", "--bogus"])
    assert exc.value.code == 2


def test_mul_algebra_dims(capsys):
    code, doc = run(capsys, "mul-algebra", "--algebra", d("trunc_poly3.json"))
    assert code == 0
    r = doc["report"]
    assert (r["mul"], r["inn"], r["anni"], r["out"]) == (4, 2, 1, 2)
    assert r["exact_sequence"]["inn_plus_anni_is_dim_k"]


def test_cohomology(capsys):
    code, doc = run(capsys, "cohomology", "--algebra", d("dual.json"),
                    "--module", d("dual_aug_module.json"), "--degree", "3")
    assert code == 0
    assert doc["report"]["dim"] == 1


def test_ce_cohomology(capsys):
    for lie, dim in (("abelian3.json", 1), ("heisenberg.json", 1),
                     ("sl2.json", 1)):
        code, doc = run(capsys, "ce-cohomology", "--lie", d(lie),
                        "--module", d("trivial_module.json"), "--degree", "3")
        assert code == 0
        assert doc["report"]["dim"] == dim


def test_obstruct_extension_derived_vanishes(capsys):
    code, doc = run(capsys, "obstruct", "--algebra", d("dual.json"),
                    "--kernel", d("null2.json"),
                    "--connection", d("bent_connection.json"))
    assert code == 0
    assert doc["report"]["vanishes"] is True


def test_extend_roundtrip(tmp_path, capsys):
    code, doc = run(capsys, "extend", "--algebra", d("dual.json"),
                    "--kernel", d("null2.json"),
                    "--connection", d("bent_connection.json"),
                    "--hindrance", d("bent_hindrance.json"),
                    "--out", str(tmp_path))
    assert code == 0
    assert (tmp_path / "B.json").exists()
    code, doc = run(capsys, "validate", str(tmp_path / "B.json"))
    assert code == 0


def test_extend_refuses_nonzero_cochain(capsys):
    code, doc = run(capsys, "extend", "--algebra", d("dual.json"),
                    "--kernel", d("null2.json"),
                    "--connection", d("bent_connection.json"),
                    "--hindrance", d("bad_hindrance.json"))
    assert code == 1
    assert doc["report"]["error"] == "ObstructionNonzero"


def test_extend_adjust_recovers(capsys):
    code, doc = run(capsys, "extend", "--algebra", d("dual.json"),
                    "--kernel", d("null2.json"),
                    "--connection", d("bent_connection.json"),
                    "--hindrance", d("bad_hindrance.json"), "--adjust")
    assert code == 0


def test_build_kernel_thm3(tmp_path, capsys):
    code, doc = run(capsys, "build-kernel", "--mode", "thm3",
                    "--algebra", d("null1.json"),
                    "--module", d("null1_zero_module.json"),
                    "--cocycle", d("null1_f3.json"), "--out", str(tmp_path))
    assert code == 0
    r = doc["report"]
    assert r["dim_k"] == 8 == r["dimension_formula"]
    assert r["obstruction"]["vanishes"] is False
    assert (tmp_path / "K.json").exists()
    code, doc = run(capsys, "validate", str(tmp_path / "K.json"))
    assert code == 0


def test_build_kernel_thm4(capsys):
    code, doc = run(capsys, "build-kernel", "--mode", "thm4",
                    "--algebra", d("abelian3.json"),
                    "--module", d("trivial_module.json"),
                    "--cocycle", d("lambda3.json"), "--degree-bound", "4")
    assert code == 0
    assert doc["report"]["checks"]["all"]


def test_lie_transfer(capsys):
    code, doc = run(capsys, "lie-transfer", "--lie", d("abelian3.json"),
                    "--module", d("trivial_module.json"),
                    "--cocycle", d("lambda3.json"), "--bound", "4")
    assert code == 0
    assert doc["report"]["matches_input"]
    assert doc["report"]["obstruction_tensor"] == {"0,1,2": ["1"]}


def test_verify_harness(capsys):
    code, doc = run(capsys, "verify", "--algebra", d("dual.json"),
                    "--kernel", d("null2.json"),
                    "--connection", d("bent_connection.json"),
                    "--trials", "3")
    assert code == 0
    assert doc["report"]["all"]


def test_env_bound_override(capsys, monkeypatch):
    monkeypatch.setenv("OBSTRUKT_DEGREE_BOUND", "3")
    code, doc = run(capsys, "lie-transfer", "--lie", d("abelian3.json"),
                    "--module", d("trivial_module.json"),
                    "--cocycle", d("lambda3.json"))
    assert code == 1  # bound 3 is below the transfer minimum: refused
    monkeypatch.setenv("OBSTRUKT_DEGREE_BOUND", "4")
    code, doc = run(capsys, "lie-transfer", "--lie", d("abelian3.json"),
                    "--module", d("trivial_module.json"),
                    "--cocycle", d("lambda3.json"))
    assert code == 0


def test_reports_byte_identical(capsys):
    main(["mul-algebra", "--algebra", d("dual.json")])
    first = capsys.readouterr().out
    main(["mul-algebra", "--algebra", d("dual.json")])
    second = capsys.readouterr().out
    assert first == second


def test_out_artifacts(tmp_path, capsys):
    code, doc = run(capsys, "mul-algebra", "--algebra", d("dual.json"),
                    "--out", str(tmp_path), "--figures")
    assert code == 0
    assert (tmp_path / "report.json").exists()
    assert (tmp_path / "report.csv").exists()
    assert (tmp_path / "report.png").exists()
    on_disk = json.loads((tmp_path / "report.json").read_text())
    assert on_disk == doc
    csv_text = (tmp_path / "report.csv").read_text()
    assert "mul" in csv_text and "value" in csv_text
