"""Walk the rank-two abelian types over GF(9) and print their computed flags."""

from qpgroups.classify import catalog
from qpgroups.gf import Field

F = Field(3, 2)
print(f"GF({F.q}) with modulus {F.modulus}; generator {F.fmt(F.generator)}")
a = F.generator
print(f"a^{F.q - 1} = {F.fmt(F.pow(a, F.q - 1))}, a^3 + a = {F.fmt(F.add(F.pow(a, 3), a))}")

print(f"\n{'type':7} {'perm':5} {'Im Phi':7} {'Ker rho':8} {'A+ empty':9} classes")
for row in catalog(F):
    print(f"{row['label']:7} {str(row['permissible']):5} {row['im_phi']:7} {row['ker_rho']:8} "
          f"{str(row['aplus_empty']):9} {', '.join(row['classes']) or '-'}")
