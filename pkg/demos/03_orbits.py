"""Reduce random admissible points of T14 to the listed representatives, with the automorphism."""

import random

from qpgroups.gf import Field
from qpgroups.pd import act, admissible_space, rank2_type, reduce_point, representatives

F = Field(3, 4)
T = rank2_type(F, "T14")
space = admissible_space(T)
reps = {r.name: r for r in representatives(T)}
print("representatives:", list(reps))

rng = random.Random(0)
for _ in range(6):
    P = space.sample(rng)
    name, xi, phi = reduce_point(T, P)
    target = reps[name].point(F, xi)
    assert act(T, phi, P) == target
    print(f"{[F.fmt(c) for c in P]} -> {name}   gamma={F.fmt(phi.gamma)}")
