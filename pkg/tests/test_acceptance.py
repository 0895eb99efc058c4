"""End-to-end acceptance run: one test per criterion, zero tolerance.

The p = 3 report is produced once in-process with the default configuration
(all suites, auto field degree) and shared by the criteria that read it.
Runtimes are attached to each test as user properties and printed in the
terminal summary; they are reported, not gated.
"""

import subprocess
import sys
import time

import pytest

from qpgroups import classify as C
from qpgroups import cli
from qpgroups.cobar import CobarComplex
from qpgroups.gf import Field
from qpgroups.pd import H_KINDS, rank2_type, representatives


@pytest.fixture(scope="module")
def run3():
    cfg = cli.RunConfig(3, None, 0, cli.SUITES, None, None)
    cfg.validate()
    t = time.perf_counter()
    report = cli.run_verify(cfg)
    return report, time.perf_counter() - t


def _select(report, *prefixes):
    found = [c for c in report["checks"] if c["name"].startswith(prefixes)]
    assert found, f"no checks named {prefixes}"
    return found


def _all_pass(checks):
    bad = {c["name"]: c["witness"] for c in checks if c["status"] != "pass"}
    assert not bad, bad


def _timed(request, key, fn, *args):
    t = time.perf_counter()
    out = fn(*args)
    request.node.user_properties.append((key, round(time.perf_counter() - t, 1)))
    return out


@pytest.mark.criterion(1, "type catalog and type table")
def test_criterion_1_type_catalog(run3, request):
    report, _ = run3
    enum3 = _select(report, "types.enumerate.")
    table3 = _select(report, "types.table.")
    _all_pass(enum3 + table3)
    assert enum3[-1]["witness"]["orbits"] == 14 + 3  # zeta classes {0}, {1}, {-1}
    assert len(table3) == 2 * 16

    enum5 = _timed(request, "p5_enumerate_s", C.check_type_enumeration, 5)
    table5 = _timed(request, "p5_table_s", C.verify_type_table, Field(5, 2))
    assert all(c.ok for c in enum5), [c.to_dict() for c in enum5 if not c.ok]
    assert all(c.ok for c in table5), [c.name for c in table5 if not c.ok]
    # zeta in F_5 up to zeta ~ 1/zeta: {0}, {1}, {-1}, {2, 3}
    assert enum5[-1].witness["orbits"] == 14 + 4


@pytest.mark.criterion(2, "cohomology dimensions")
def test_criterion_2_cohomology(run3, request):
    report, _ = run3
    coh = _select(report, "cobar.cohomology.")
    _all_pass(coh)
    assert sorted(c["name"][-1] for c in coh) == sorted(H_KINDS)

    def p5():
        F = Field(5, 1)
        return {h: (cx.h1_dim, cx.h2_dim) for h, cx in ((h, CobarComplex.of(F, R)) for h, R in H_KINDS.items())}

    dims = _timed(request, "p5_cohomology_s", p5)
    assert dims == {h: (2, 3) for h in H_KINDS}


@pytest.mark.criterion(3, "cobar identity suite")
def test_criterion_3_cobar_identities(run3):
    report, _ = run3
    ids = _select(report, "cobar.identities.")
    _all_pass(ids)
    for c in ids:
        assert c["witness"]["samples"] >= 100
        assert not any(c["witness"]["failures"].values())


@pytest.mark.criterion(4, "PD construction")
def test_criterion_4_pd_construction(run3, request):
    report, _ = run3
    rows = _select(report, "pd.")
    _all_pass(rows)
    for c in rows:
        w = c["witness"]
        assert (w["dim"], w["axioms"], w["dim_P"], w["P_iso_h"]) == (27, True, 2, True), c["name"]
    families = {c["name"].split("[xi=")[0] for c in rows if "[xi=" in c["name"]}
    assert len(families) == 8
    for fam in families:
        assert sum(c["name"].startswith(fam + "[") for c in rows) == 8, fam
    singles = [c for c in rows if "[xi=" not in c["name"]]
    # 33 table rows; T(zeta) appears once for zeta = 0 and once for zeta = 1
    assert len(singles) == 34

    F = Field(5, 2)
    pick = [C.pd_rows(F, 1)[i] for i in (0, 9, 20, 30, 36)]
    checks = _timed(request, "p5_spot_s", lambda: [C.check_pd_row(F, *row) for row in pick])
    for c in checks:
        assert c.ok and c.witness["dim"] == 125, (c.name, c.witness)


# groups of ratios the family parameters are invariant under, by type and row
def _claimed_moduli(p):
    return {
        ("T5", "(xi,0,1)"): (p * p - 1) // 2,
        ("T10", "(xi,0,1)"): p * p - p + 1,
        ("T9", "(xi,0,1,0,1)"): p * p - p - 1,
        ("T4", "(0,xi,1,0,1)"): (p - 1) // 2,
        ("T2", "(0,xi,1,1,0)"): 2,
        ("T2", "(0,xi,1,0,1)"): 1,
    }


@pytest.mark.criterion(5, "orbit representatives, coverage and moduli")
def test_criterion_5_orbits(run3):
    report, _ = run3
    orbit_checks = _select(report, "orbits.")
    _all_pass(orbit_checks)
    byname = {c["name"]: c for c in orbit_checks}
    F = Field(3, report["field"]["m"])
    for lab in C.orbit_types(F):
        assert f"orbits.{lab}.distinct" in byname, lab
        cov = byname[f"orbits.{lab}.coverage"]["witness"]
        assert cov["samples"] == 500
        listed = {r.name for r in representatives(rank2_type(F, lab))}
        assert set(cov["hits"]) <= listed, (lab, cov["hits"])
        assert sum(cov["hits"].values()) == 500
    for (lab, row), n in _claimed_moduli(3).items():
        w = byname[f"orbits.{lab}.modulus.{row}"]["witness"]
        assert w["group"] == f"mu_{n}" and w["order"] == n
        assert len(w["positive"]) == min(n, 5) and all(ok for _, ok in w["positive"])
        assert len(w["negative"]) >= 5 and all(ok for _, ok in w["negative"])


@pytest.mark.criterion(6, "appendix tables")
def test_criterion_6_appendix(run3):
    report, _ = run3
    rows = _select(report, "appendix.", "crosswalk.")
    names = {c["name"] for c in rows}
    for lab in ("T3", "T11", "T13", "T(-1)"):
        assert f"crosswalk.u({lab})=C" in names
    zeta = next(c for c in rows if c["name"] == "appendix.T.zeta_classes")
    assert zeta["witness"]["classes"] == 2
    _all_pass(rows)


@pytest.mark.criterion(7, "emptiness certificates")
def test_criterion_7_emptiness(run3):
    report, _ = run3
    empt = _select(report, "emptiness.")
    assert sorted(c["name"] for c in empt) == sorted(f"emptiness.{t}" for t in ("T3", "T11", "T13", "T(-1)"))
    _all_pass(empt)
    for c in empt:
        assert c["witness"]["samples"] == 200


@pytest.mark.criterion(8, "byte-identical reports")
def test_criterion_8_determinism(run3, tmp_path, request):
    report, _ = run3
    out = tmp_path / "again.json"
    t = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "qpgroups.cli", "verify", "--p", "3", "--out", str(out)],
                          capture_output=True, text=True)
    request.node.user_properties.append(("second_run_s", round(time.perf_counter() - t, 1)))
    assert proc.returncode in (0, 1), proc.stderr
    assert out.read_bytes() == cli.dump_json(report).encode()
