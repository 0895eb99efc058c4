"""Deform u(T5) at an admissible point and inspect the resulting 27-dimensional Hopf algebra."""

from qpgroups.classify import algebra_flags, bucket
from qpgroups.gf import Field
from qpgroups.hopf import check_hopf_axioms, dumps
from qpgroups.pd import build_deformation, point_datum, primitive_report, rank2_type

F = Field(3, 2)
T = rank2_type(F, "T5")
D = point_datum(T, (1, 0, 0))
print("theta =", D.theta_elem().to_text())

H = build_deformation(D)
axioms = check_hopf_axioms(H)
print("dim", H.dim, "axioms ok:", axioms["ok"])
print("primitives:", primitive_report(H, T))
print("flags:", algebra_flags(H), "bucket:", bucket(H))

# the serialized form is what `qpgroups build` prints
print("\n".join(dumps(H).splitlines()[:12]))
