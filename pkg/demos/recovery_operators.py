"""Building a recovery operator for a chain logic against a smaller one.

The setup finds unary terms moving non-classical elements onto each other,
then a set of formulas circ(p) that is designated exactly on the subalgebra.
Adding circ(q) for every variable q recovers the smaller logic inside the
larger one.

Run: python3 demos/recovery_operators.py
"""
from lukamax.algebra import chain_embedding
from lukamax.formula import parse, render
from lukamax.matrix import cpl, luk
from lukamax.recovery import HypothesesNotMet, build_setup, check_star, circle_table, dat_check, recover

s = build_setup(luk(4, 1), luk(2, 1), chain_embedding(2, 4))
print("LV5 over LV3")
for (i, j), f in sorted(s.alpha.items()):
    print(f"  move {s.label(s.elements[i - 1])} -> {s.label(s.elements[j - 1])}: {render(f)}")
art = recover(s)
print("  recovery set:", [render(f) for f in art.circle])
print("  circ table:", circle_table(s, art.circ))
print("  (*) holds:", check_star(s, art.circle).holds)

# the smaller logic and the larger one plus circ(q) give the same verdicts
for prem, concl in ((["p", "!p"], "q"), (["p"], "p | q"), (["p", "p -> q"], "q")):
    v = dat_check(s, art.circle, [parse(x) for x in prem], parse(concl))
    print(f"  {', '.join(prem)} |- {concl}: smaller {v.smaller.holds}, larger+circ {v.larger.holds}")

print("\nLV7 over CPL")
try:
    build_setup(luk(6, 1), cpl(), chain_embedding(1, 6))
except HypothesesNotMet as exc:
    print("  no setup; missing moves:", ", ".join(exc.missing))
