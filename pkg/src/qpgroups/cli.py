"""Command-line front end: verify | build | catalog | field-info.

Every flag can be preset through an environment variable PGW_<FLAG>
(for example PGW_P=5, PGW_SUITE=types).  Exit codes: 0 when every enabled
check passes, 1 when any check fails (or a build request is inadmissible),
2 on configuration errors.
"""

from __future__ import annotations

import argparse
import itertools
import json
import math
import os
import re
import sys
from dataclasses import dataclass

import sympy

from . import classify as C
from .cobar import CobarComplex, verify_cobar_identities
from .gf import Field
from .hopf import dumps
from .pd import (H_KINDS, Inadmissible, admissible_space, build_deformation, parse_zeta, point_datum,
                 rank2_type, type_labels)

SCHEMA = "qpgroups-report/1"
SUITES = ("types", "orbits", "appendix", "cobar")


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    p: int
    m: int | None
    seed: int
    suites: tuple
    escalate_m_max: int | None
    out: str | None
    golden: str | None = None
    claims: dict | None = None
    counts: dict | None = None

    def validate(self):
        if self.p < 3 or not sympy.isprime(self.p):
            raise ConfigError(f"p>2 required: p must be an odd prime, got {self.p}")
        if self.m is not None and self.m < 1:
            raise ConfigError("m must be positive")


# -- field degree --------------------------------------------------------------------


def required_orders(p, suites):
    """Orders n whose roots of unity the enabled suites need inside GF(p^m)."""
    need = {"types": {p * p - 1}, "cobar": set()}
    need["orbits"] = {(p * p - 1) // 2, p * p - p + 1, p * p - p - 1, max((p - 1) // 2, 1), 2}
    need["appendix"] = {4, 2 * (p - 1)} | need["orbits"]
    out = set()
    for s in suites:
        out |= need[s]
    return sorted(out)


def auto_m(p, suites):
    """Smallest m with n | p^m - 1 for every required order n."""
    m = 1
    for n in required_orders(p, suites):
        if n > 1:
            m = math.lcm(m, sympy.n_order(p, n))
    return m


def field_info(p, m, suites):
    F = Field(p, m)
    return {"field": F.describe(), "q": F.q,
            "required_orders": [{"n": n, "divides_q_minus_1": (F.q - 1) % n == 0}
                                for n in required_orders(p, suites)]}


# -- golden tables ---------------------------------------------------------------------


def default_golden():
    """The transcribed table cells the harness compares against."""
    return {
        "type_table": {row: {"permissible": c[0], "im_phi": c[1], "ker_rho": c[2], "aplus_empty": c[3]}
                       for row, c in C.TYPE_TABLE_CLAIMS.items()},
        "t_table_counts": {lab: {"singles": s, "families": f} for lab, (s, f) in C.T_TABLE_COUNTS.items()},
    }


def load_golden(path):
    if path is None:
        return None
    try:
        with open(path) as fh:
            data = json.load(fh)
        claims = {row: (v["permissible"], v["im_phi"], v["ker_rho"], v["aplus_empty"])
                  for row, v in data["type_table"].items()}
        counts = {lab: (v["singles"], v["families"]) for lab, v in data["t_table_counts"].items()}
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read golden file {path}: {exc}") from exc
    return claims, counts


# -- suites ------------------------------------------------------------------------------


def suite_types(F, cfg):
    out = C.check_type_enumeration(F.p, cfg.seed)
    out += C.verify_type_table(F, cfg.claims)
    out += C.verify_emptiness(F, samples=200, seed=cfg.seed)
    return out


def suite_orbits(F, cfg):
    out = C.verify_orbit_tables(F, samples=500, seed=cfg.seed)
    out += escalation_checks(F, cfg)
    out += C.verify_pd_rows(F, xi_count=8)
    return out


def suite_appendix(F, cfg):
    checks, _ = C.build_appendix_tables(F, lam_count=8, xi_count=2)
    return checks + C.crosswalk_T_vs_PD(F, counts=cfg.counts)


def suite_cobar(F, cfg):
    out = []
    for h, R in H_KINDS.items():
        def run(R=R):
            cx = CobarComplex.of(F, R)
            h1, h2 = cx.h1_dim, cx.h2_dim
            return (h1, h2) == (2, 3), {"h1": h1, "h2": h2, "expected": [2, 3]}

        out.append(C._guard(f"cobar.cohomology.{h}", F, run))
    for lab in type_labels(F.p):
        T = rank2_type(F, lab)

        def run(T=T):
            fails = verify_cobar_identities(T, samples=100, seed=cfg.seed)
            return not any(fails.values()), {"samples": 100, "failures": fails}

        out.append(C._guard(f"cobar.identities.{lab}", F, run))
    return out


SUITE_FNS = {"types": suite_types, "orbits": suite_orbits, "appendix": suite_appendix, "cobar": suite_cobar}


def escalation_checks(F, cfg):
    """Repeat the pairwise non-equivalence test over GF(p^(2^k m)) up to the cap."""
    cap = cfg.escalate_m_max
    out = []
    m = F.m * 2
    while cap is not None and m <= cap:
        E = Field(F.p, m)
        for lab in C.orbit_types(E):
            def run(lab=lab, E=E):
                T = rank2_type(E, lab)
                pts = [(n, P) for n, rep, _, P in C._rep_points(T, C.xi_samples(E, 2)) if not rep.family]
                clash = [[a, b] for (a, P), (b, Q) in itertools.combinations(pts, 2) if C.orbit_same(T, P, Q) is not None]
                return not clash, {"claim": f"none up to GF({E.p}^{E.m})", "equivalent_pairs": clash}

            out.append(C._guard(f"orbits.{lab}.distinct.escalated", E, run))
        m *= 2
    return out


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if hasattr(x, "item"):
        return x.item()
    if isinstance(x, int):
        return x
    return str(x)


def run_verify(cfg: RunConfig):
    """Build the report dict for a validated config."""
    golden = load_golden(cfg.golden)
    if golden is not None:
        cfg.claims, cfg.counts = golden
    m = cfg.m or auto_m(cfg.p, cfg.suites)
    F = Field(cfg.p, m)
    checks = []
    for s in SUITES:
        if s in cfg.suites:
            checks += SUITE_FNS[s](F, cfg)
    failed = [c.name for c in checks if not c.ok]
    return {
        "schema": SCHEMA,
        "config": {"p": cfg.p, "m": m, "m_source": "flag" if cfg.m else "auto", "seed": cfg.seed,
                   "suites": list(cfg.suites), "escalate_m_max": cfg.escalate_m_max},
        "field": F.describe(),
        "summary": {"checks": len(checks), "passed": len(checks) - len(failed), "failed": failed},
        "checks": [_jsonable(c.to_dict()) for c in checks],
    }


def dump_json(obj):
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def _emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- build --------------------------------------------------------------------------------

_ID = re.compile(r"^\s*(T\(-?\d+\)|T\d+)\s*(\(.*\))?\s*$")


def _split_point(text):
    inner = text.strip()[1:-1]
    parts, depth, cur = [], 0, ""
    for ch in inner:
        depth += ch == "("
        depth -= ch == ")"
        if ch == "," and depth == 0:
            parts.append(cur.strip())
            cur = ""
        else:
            cur += ch
    parts.append(cur.strip())
    return parts


def build_algebra(F, ident):
    """HopfAlgebra for 'T5 (1,0,0)'-style ids or appendix row names (A1, C5, C(l,d), A(l))."""
    m = _ID.match(ident)
    if m:
        lab, pt = m.group(1), m.group(2)
        if F.m < 2:
            raise ConfigError("deformations of types need m >= 2")
        if lab not in type_labels(F.p) and parse_zeta(lab, F.p) is None:
            raise ConfigError(f"unknown type {lab!r}")
        T = rank2_type(F, lab)
        if pt is None:
            raise ConfigError("a point is required, e.g. 'T5 (1,0,0)'")
        P = tuple(F.parse(c.strip("()")) for c in _split_point(pt))
        if admissible_space(T).empty:
            raise Inadmissible(f"A+({lab}) is empty: no admissible point exists for this type")
        D = point_datum(T, P)
        return build_deformation(D, check=True, name=f"{lab} {pt}")
    rows = {r.name: r for r in C.appendix_rows(F, 1)}
    am = re.fullmatch(r"A\((.+)\)", ident.strip())
    cm = re.fullmatch(r"C\((.+),(.+)\)", ident.strip())
    if am:
        lam = F.from_code(F.parse(am.group(1)))
        pres = next(r for r in rows.values() if r.family == "A(lambda)")
        pres = C.Presentation(f"A(lambda={F.fmt(lam.code)})", pres.pth, pres.comm, pres.psi, pres.flags,
                              "A", {"lam": lam}, "A(lambda)")
    elif cm:
        lam, delta = (F.from_code(F.parse(g)) for g in cm.groups())
        if lam.code == 0 or lam ** (F.p - 1) != delta or delta.code not in (1, F.p - 1):
            raise ConfigError("C(lambda, delta) needs lambda^(p-1) = delta = +-1")
        pres = C.c_lambda_delta(F, lam, delta)
    elif ident.strip() in rows:
        pres = rows[ident.strip()]
    else:
        raise ConfigError(f"unknown algebra id {ident!r}")
    return pres.build(F)


# -- argument handling ------------------------------------------------------------------------


def _env(name, default=None, conv=str):
    v = os.environ.get(f"PGW_{name}")
    if v is None or v == "":
        return default
    try:
        return conv(v)
    except ValueError as exc:
        raise ConfigError(f"PGW_{name}={v!r}: {exc}") from exc


def _m_arg(v):
    return None if str(v) == "auto" else int(v)


def make_parser():
    ap = argparse.ArgumentParser(prog="qpgroups", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p", type=int, default=_env("P", 3, int))
    common.add_argument("--m", type=_m_arg, default=_env("M", None, _m_arg), help="field degree or 'auto'")
    common.add_argument("--seed", type=int, default=_env("SEED", 0, int))
    common.add_argument("--suite", default=_env("SUITE", "all"),
                        help="comma-separated subset of types,orbits,appendix,cobar, or all")
    common.add_argument("--out", default=_env("OUT"))
    common.add_argument("--escalate-m-max", type=int, default=_env("ESCALATE_M_MAX", None, int))
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", parents=[common], help="run the verification suites")
    v.add_argument("--golden", default=_env("GOLDEN"), help="JSON file overriding the transcribed tables")
    b = sub.add_parser("build", parents=[common], help="write a Hopf algebra in the text format")
    b.add_argument("ident", help="e.g. 'T5 (1,0,0)', 'C5', 'A(1)', 'C(1,1)'")
    sub.add_parser("catalog", parents=[common], help="print the type catalogue and golden tables")
    sub.add_parser("field-info", parents=[common], help="print the field configuration")
    return ap


def parse_suites(text):
    names = [s.strip() for s in text.split(",") if s.strip()]
    if names == ["all"]:
        return SUITES
    bad = [s for s in names if s not in SUITES]
    if bad or not names:
        raise ConfigError(f"unknown suite(s) {bad or text!r}; choose from {', '.join(SUITES)} or all")
    return tuple(s for s in SUITES if s in names)


def main(argv=None):
    try:
        args = make_parser().parse_args(argv)
        cfg = RunConfig(args.p, args.m, args.seed, parse_suites(args.suite), args.escalate_m_max, args.out,
                        getattr(args, "golden", None))
        cfg.validate()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except SystemExit as exc:  # argparse usage errors
        return 2 if exc.code else 0

    try:
        m = cfg.m or auto_m(cfg.p, cfg.suites)
        if args.cmd == "field-info":
            _emit(dump_json(field_info(cfg.p, m, cfg.suites)), cfg.out)
            return 0
        if args.cmd == "catalog":
            F = Field(cfg.p, m)
            cat = C.enumerate_rank2_types(cfg.p, cfg.seed)
            _emit(dump_json({"schema": SCHEMA, "field": F.describe(), "types": C.catalog(F),
                             "type_orbits": cat.orbit_count, "golden": default_golden()}), cfg.out)
            return 0
        if args.cmd == "build":
            F = Field(cfg.p, m)
            try:
                H = build_algebra(F, args.ident)
            except Inadmissible as exc:
                print(f"inadmissible: {exc}", file=sys.stderr)
                return 1
            _emit(dumps(H), cfg.out)
            return 0
        report = run_verify(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    _emit(dump_json(report), cfg.out)
    for name in report["summary"]["failed"]:
        print(f"FAIL {name}", file=sys.stderr)
    return 0 if not report["summary"]["failed"] else 1


if __name__ == "__main__":
    sys.exit(main())
