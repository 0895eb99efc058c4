import json
from pathlib import Path

import numpy as np
import pytest

from qpgroups import cli
from qpgroups.hopf import check_hopf_axioms, dumps, loads

GOLDEN = Path(__file__).parent / "golden"


def run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_auto_m():
    assert cli.auto_m(3, cli.SUITES) == 12
    assert cli.auto_m(5, cli.SUITES) == 18
    assert cli.auto_m(5, ("types",)) == 2


def test_field_info(capsys):
    code, out, _ = run(capsys, "field-info", "--p", "3")
    info = json.loads(out)
    assert code == 0
    assert info["field"]["m"] == 12
    assert all(r["divides_q_minus_1"] for r in info["required_orders"])


@pytest.mark.parametrize("argv", [["verify", "--p", "2"], ["field-info", "--p", "9"],
                                  ["verify", "--suite", "bogus"], ["verify", "--m", "0"]])
def test_config_errors_exit_2(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2 and "config error" in err


def test_env_override(capsys, monkeypatch):
    monkeypatch.setenv("PGW_P", "2")
    code, _, err = run(capsys, "field-info")
    assert code == 2 and "p>2" in err
    monkeypatch.setenv("PGW_P", "5")
    monkeypatch.setenv("PGW_SUITE", "types")
    code, out, _ = run(capsys, "field-info")
    assert code == 0 and json.loads(out)["field"]["m"] == 2


def test_argparse_usage_error_exits_2(capsys):
    assert cli.main(["frobnicate"]) == 2
    capsys.readouterr()


@pytest.fixture(scope="module")
def types_reports(tmp_path_factory):
    d = tmp_path_factory.mktemp("reports")
    paths = [d / "a.json", d / "b.json"]
    codes = [cli.main(["verify", "--p", "3", "--suite", "types,cobar", "--out", str(p)]) for p in paths]
    return codes, [p.read_bytes() for p in paths]


def test_verify_report_shape(types_reports):
    codes, blobs = types_reports
    assert codes == [0, 0]
    rep = json.loads(blobs[0])
    assert rep["schema"] == cli.SCHEMA
    assert len(rep["field"]["modulus"]) == rep["field"]["m"] + 1
    assert rep["summary"]["checks"] == len(rep["checks"]) >= 60
    for c in rep["checks"]:
        assert set(c) == {"name", "status", "field", "witness"}
        assert c["status"] in ("pass", "fail")
    names = [c["name"] for c in rep["checks"]]
    assert len(names) == len(set(names))


def test_verify_is_byte_deterministic(types_reports):
    _, (a, b) = types_reports
    assert a == b


def test_corrupted_golden_file_fails_the_named_row(tmp_path, capsys):
    gold = cli.default_golden()
    gold["type_table"]["T10"]["aplus_empty"] = True
    path = tmp_path / "golden.json"
    path.write_text(json.dumps(gold))
    code, out, err = run(capsys, "verify", "--p", "3", "--suite", "types", "--golden", str(path))
    assert code == 1
    assert err.strip().splitlines() == ["FAIL types.table.T10.flags"]


def test_unreadable_golden_file_is_a_config_error(tmp_path, capsys):
    path = tmp_path / "g.json"
    path.write_text("{}")
    code, _, err = run(capsys, "verify", "--suite", "types", "--golden", str(path))
    assert code == 2


def test_build_roundtrip(tmp_path, capsys):
    out = tmp_path / "t5.txt"
    code, _, _ = run(capsys, "build", "T5 (1,0,0)", "--p", "3", "--out", str(out))
    assert code == 0
    text = out.read_text()
    H = loads(text)
    assert H.dim == 27
    assert dumps(H) == text
    assert check_hopf_axioms(H)["ok"]


def test_build_c5_matches_golden(capsys):
    code, out, _ = run(capsys, "build", "C5", "--p", "3")
    golden = (GOLDEN / "C5_p3.txt").read_text()
    assert code == 0 and out == golden


def test_c5_golden_satisfies_its_relations():
    H = loads((GOLDEN / "C5_p3.txt").read_text())
    x, y, z = 1, 3, 9  # PBW indices of the generators
    comm = (H.mult[y, x] - H.mult[x, y]) % 3
    assert (comm == (-H.basis(z)) % 3).all()
    for g in (x, y, z):
        cube = H.mul(H.mul(H.basis(g), H.basis(g)), H.basis(g))
        assert not cube.any()
    assert check_hopf_axioms(H)["ok"]


def test_build_empty_type_reports_emptiness(capsys):
    code, _, err = run(capsys, "build", "T(-1) (1,0,0)", "--p", "3")
    assert code == 1 and "empty" in err


def test_build_inadmissible_point_names_condition(capsys):
    code, _, err = run(capsys, "build", "T1 (1,0,0,0,0)", "--p", "3")
    assert code == 1 and "chi_P = 0" in err


@pytest.mark.parametrize("ident", ["T99 (1,0,0)", "Z7", "C(1,2)", "T5"])
def test_build_bad_ident(capsys, ident):
    code, _, _ = run(capsys, "build", ident, "--p", "3")
    assert code == 2


def test_build_needs_extension_field(capsys):
    code, _, err = run(capsys, "build", "T5 (1,0,0)", "--p", "3", "--m", "1")
    assert code == 2 and "m >= 2" in err


def test_build_residue_point(capsys):
    code, out, _ = run(capsys, "build", "T5 (a,0,1)", "--p", "3")
    assert code == 0
    H = loads(out)
    assert check_hopf_axioms(H)["ok"]
    # a different point deforms z^p differently
    other = loads(run(capsys, "build", "T5 (1,0,0)", "--p", "3")[1])
    assert not np.array_equal(H.mult, other.mult)


def test_catalog(capsys):
    code, out, _ = run(capsys, "catalog", "--p", "3", "--m", "2")
    cat = json.loads(out)
    assert code == 0
    assert cat["type_orbits"] == 17
    assert [t["label"] for t in cat["types"]][-3:] == ["T(0)", "T(1)", "T(-1)"]
