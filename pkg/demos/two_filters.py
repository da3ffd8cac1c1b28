"""Same algebra, different filters: LV4 with designated sets {1/3,2/3,1} and {2/3,1}.

Run: python3 demos/two_filters.py
"""
from lukamax.formula import parse
from lukamax.matrix import entails, is_valid, luk, parse_sequent

low, high = luk(3, 1), luk(3, 2)
lem2 = parse("(p | !p) o* (p | !p)")
seq = parse_sequent("p |- (p o* p) o+ (p o* p)")

for L in (low, high):
    v = is_valid(L, lem2)
    print(f"{L.name}: |= (p | !p) o* (p | !p)?  {v.holds}", "" if v.holds else f"countermodel {v.labelled()}")
for L in (low, high):
    v = entails(L, seq)
    print(f"{L.name}: {seq.render()}?  {v.holds}", "" if v.holds else f"countermodel {v.labelled()}")

print("\nEach logic validates something the other refutes, so neither contains the other.")
