"""The four-valued paraconsistent logic J4 and its Hilbert calculus.

Run: python3 demos/j4_proofs.py
"""
from lukamax import jfour
from lukamax.formula import SIG_J4, parse, render


def J(text):
    return parse(text, SIG_J4)


A = jfour.a4()
print("square:", {A.labels[a]: A.labels[int(b)] for a, b in enumerate(A.table("sq"))})

goal, premises = J("q"), [J("p"), J("p -> q")]
steps = jfour.search_proof(goal, premises)
v = jfour.check_proof(jfour.H4, premises, steps)
print("\nproof of q from p, p -> q:", "accepted" if v.accepted else "rejected")
for s in v.steps:
    print(f"  {s.index}. {s.formula}  [{s.message}]")

contra = J("p & !p")
exp = [jfour.ProofStep(contra, "premise"), jfour.ProofStep(jfour.BOTTOM, "exp1", (1,))]
print("\nexplosion step in H4:   ", jfour.check_proof(jfour.H4, [contra], exp).accepted)
print("explosion step in H4bar:", jfour.check_proof(jfour.H4BAR, [contra], exp).accepted)

cm = jfour.countermodel_j4([J("p"), J("!p")], J("q"))
print("\np, !p |- q in J4:", cm.holds, cm.labelled())
print("matches for axioms:", {render(f): jfour.match_axiom(jfour.H4, f) for f in (J("sq (q | !q)"), J("sq p -> p"))})
