"""Quasivarieties generated by critical MV-algebras, and where they sit.

Run: python3 demos/quasivarieties.py
"""
from lukamax import qvar
from lukamax.algebra import chain_product, make_chain

for cs in ([2, 1], [2, 2], [6, 4], [3, 2, 1]):
    print(f"{cs} critical: {qvar.is_critical(cs)}")

print()
for k in (4, 6, 9):
    print(f"Q[2,1] inside Q[{k}]: {qvar.q_included([[2, 1]], [[k]])}")

print("\nminimal quasivarieties strictly above the Boolean one, inside Q[12]:")
for fam in qvar.minimal_over_boolean(12):
    print("  generated by", [list(c.chains) for c in fam])

qi = qvar.contradiction_qi(3)
print(f"\n{qi.render()}")
print("  on LV4 x LV2:", qvar.quasi_identity_holds(chain_product((3, 1)), qi).holds)
v = qvar.quasi_identity_holds(make_chain(3), qi)
print("  on LV4:", v.holds, v.countermodel)
