"""Build a few presented algebras from the structure tables and compare their flags."""

from qpgroups.classify import algebra_flags, appendix_rows, bucket
from qpgroups.gf import Field
from qpgroups.hopf import check_hopf_axioms

F = Field(3, 2)
rows = {r.name: r for r in appendix_rows(F, lam_count=2)}
for name in ("A1", "A1[witt]", "A2", "B1", "C5", "C9"):
    H = rows[name].build(F)
    ax = check_hopf_axioms(H)
    failed = [k for k, v in ax.items() if k != "ok" and v is False]
    flags = algebra_flags(H) if ax["ok"] else {}
    print(f"{name:9} axioms={'ok' if ax['ok'] else 'FAIL ' + ','.join(failed):24} "
          f"{flags} {bucket(H) if ax['ok'] else ''}")
