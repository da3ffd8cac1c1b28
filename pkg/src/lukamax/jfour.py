"""The four-valued logic J4 over the signature {or, neg, sq} and its Hilbert calculi.

J4 is the matrix <A4, {1/3, 2/3, 1}> where A4 is LV4 presented with join,
Lukasiewicz negation and the square ``sq x = x o* x``.  H4 is the Hilbert
calculus (classical block C1-C6 plus Ax1-Ax12, modus ponens); H4bar adds the
explosion rule ``phi & !phi / bottom``.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .algebra import FiniteAlgebra, boolean_j4, is_homomorphism, make_chain, make_product
from .formula import (
    SIG_J4,
    Formula,
    Op,
    Var,
    expand,
    match,
    parse,
    random_formula,
    render,
    subformulas,
    substitute,
)
from .matrix import (
    MatrixLogic,
    Sequent,
    Verdict,
    binary_table,
    entails,
    is_deductive_implication,
    is_paraconsistent,
    is_valid,
    sublogic_check,
    unary_table,
)

LABELS = ["0", "1/3", "2/3", "1"]
DESIGNATED = (1, 2, 3)
CORPUS_DIR = Path(__file__).with_name("corpus")


def a4() -> FiniteAlgebra:
    k = np.arange(4)
    return FiniteAlgebra(
        "A4",
        SIG_J4,
        4,
        {"or": np.maximum.outer(k, k), "neg": 3 - k, "sq": np.array([0, 0, 1, 3])},
        LABELS,
        kind="chain",
        params=(3,),
    )


def j4() -> MatrixLogic:
    return MatrixLogic(a4(), DESIGNATED, ("j4",), "J4")


def j4bar() -> MatrixLogic:
    """<A4 x A2, F_{1/3} x {1}> with ``sq`` the identity on A2."""
    A = make_product(a4(), boolean_j4())
    return MatrixLogic(A, [a * 2 + 1 for a in DESIGNATED], ("j4bar",), "J4bar")


# ---------------------------------------------------------------------------
# derived connectives


DERIVED_UNARY = ["delta", "tilde", "nabla", "alpha13", "beta13"]
EXPECTED_UNARY = {
    "delta": [0, 0, 0, 3],
    "tilde": [3, 0, 0, 0],
    "nabla": [0, 3, 3, 3],
    "alpha13": [0, 3, 0, 0],
    "beta13": [0, 1, 0, 0],
}


def derived_tables() -> Dict[str, List]:
    """Tables of the derived connectives of A4, as element indices."""
    A = a4()
    out: Dict[str, List] = {}
    for sym in DERIVED_UNARY:
        out[sym] = A.table(sym).tolist()
    for sym in ("imp", "and", "iff"):
        out[sym] = A.table(sym).tolist()
    return out


@dataclass
class DerivedCheck:
    tables: Dict[str, List]
    mismatches: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def to_json(self) -> dict:
        lab = {k: [[LABELS[x] for x in row] if isinstance(row, list) else LABELS[row] for row in v] for k, v in self.tables.items()}
        return {"tables": lab, "mismatches": self.mismatches, "ok": self.ok}


def check_derived() -> DerivedCheck:
    """Compare the derived tables with their intended semantics."""
    t = derived_tables()
    rep = DerivedCheck(t)
    for sym, want in EXPECTED_UNARY.items():
        if t[sym] != want:
            rep.mismatches.append(sym)
    k = np.arange(4)
    F = np.isin(k, DESIGNATED)
    # and is min; => is designated exactly classically on the filter
    if t["and"] != np.minimum.outer(k, k).tolist():
        rep.mismatches.append("and")
    if t["imp"] != np.maximum.outer(np.array(EXPECTED_UNARY["tilde"]), k).tolist():
        rep.mismatches.append("imp")
    imp = np.array(t["imp"])
    if not np.array_equal(F[imp], ~F[:, None] | F[None, :]):
        rep.mismatches.append("imp-designation")
    return rep


LUK_IMP_SIGMA = parse(
    "((nabla !p | r) & (!p | nabla r) & !beta13 r) | ((~p & alpha13 r) | (alpha13 p & alpha13 r))",
    SIG_J4,
)
OR_IN_LUK = parse("(p -> r) -> r")
SQ_IN_LUK = parse("p o* p")


def luk_imp_definability_check() -> Verdict:
    """Lukasiewicz implication written in {or, neg, sq} agrees with LV4's on all 16 pairs.

    The converse direction (join and square as Lukasiewicz terms) is checked
    too, so the two algebras are term-equivalent.
    """
    A, C = a4(), make_chain(3)
    got = binary_table(MatrixLogic(A, DESIGNATED), _bin_template(LUK_IMP_SIGMA))
    want = C.table("imp")
    bad = [f"({LABELS[a]},{LABELS[b]})" for a in range(4) for b in range(4) if got[a, b] != want[a, b]]
    chainL = MatrixLogic(C, DESIGNATED)
    if not np.array_equal(binary_table(chainL, _bin_template(OR_IN_LUK)), A.table("or")):
        bad.append("or-from-luk")
    if not np.array_equal(unary_table(chainL, SQ_IN_LUK), A.table("sq")):
        bad.append("sq-from-luk")
    if not np.array_equal(C.table("neg"), A.table("neg")):
        bad.append("neg")
    return Verdict(not bad, note="; ".join(bad) if bad else "term-equivalent on all pairs")


def _bin_template(f: Formula) -> Formula:
    """Rename ``r`` to ``q`` so the matrix helpers see their usual variable names."""
    return substitute(f, {"r": Var("q")})


def designation_classical() -> bool:
    """Membership of ``a|b``, ``a=>b`` and ``~a`` in the filter depends only on that of ``a`` and ``b``."""
    A = a4()
    F = np.isin(np.arange(4), DESIGNATED)
    for sym in ("or", "imp"):
        t = A.table(sym)
        seen: Dict[Tuple[bool, bool], bool] = {}
        for a in range(4):
            for b in range(4):
                key, val = (bool(F[a]), bool(F[b])), bool(F[t[a, b]])
                if seen.setdefault(key, val) != val:
                    return False
    t = A.table("tilde")
    seen1: Dict[bool, bool] = {}
    for a in range(4):
        if seen1.setdefault(bool(F[a]), bool(F[t[a]])) != bool(F[t[a]]):
            return False
    return True


# ---------------------------------------------------------------------------
# calculi


CPL_BLOCK = [
    ("C1", "A -> (B -> A)"),
    ("C2", "(A -> (B -> C)) -> ((A -> B) -> (A -> C))"),
    ("C3", "(~A -> ~B) -> (B -> A)"),
    ("C4", "A -> (A | B)"),
    ("C5", "B -> (A | B)"),
    ("C6", "(A -> C) -> ((B -> C) -> ((A | B) -> C))"),
]
J4_AXIOMS = [
    ("Ax1", "!~A -> A"),
    ("Ax2", "A | !A"),
    ("Ax3", "!!A <-> A"),
    ("Ax4", "!(A | B) -> !A"),
    ("Ax5", "!(A | B) -> !B"),
    ("Ax6", "!A -> (!B -> !(A | B))"),
    ("Ax7", "sq A -> A"),
    ("Ax8", "sq (A | !A)"),
    ("Ax9", "sq A -> ~sq !A"),
    ("Ax10", "sq sq A <-> ~!A"),
    ("Ax11", "!sq A <-> !A"),
    ("Ax12", "sq (A | B) <-> (sq A | sq B)"),
]

BOTTOM_VAR = "p0"
BOTTOM = parse(f"~({BOTTOM_VAR} | ~{BOTTOM_VAR})", SIG_J4)
CONTRADICTION = parse("A & !A", SIG_J4)


@dataclass
class Calculus:
    name: str
    schemas: List[Tuple[str, Formula]]
    exp1: bool = False

    def __post_init__(self):
        self._expanded = [(nm, expand(s, SIG_J4)) for nm, s in self.schemas]

    def expanded(self) -> List[Tuple[str, Formula]]:
        return self._expanded

    def schema(self, name: str) -> Formula:
        for nm, s in self.schemas:
            if nm == name:
                return s
        raise KeyError(name)


def _schemas() -> List[Tuple[str, Formula]]:
    return [(nm, parse(text, SIG_J4)) for nm, text in CPL_BLOCK + J4_AXIOMS]


H4 = Calculus("H4", _schemas())
H4BAR = Calculus("H4bar", _schemas(), exp1=True)
CALCULI = {"H4": H4, "H4bar": H4BAR}


def calculus(name: str) -> Calculus:
    try:
        return CALCULI[name]
    except KeyError:
        raise ValueError(f"unknown calculus {name!r}; expected one of {sorted(CALCULI)}") from None


def match_axiom(cal: Calculus, f: Formula) -> Optional[str]:
    """Name of the first schema (in listing order) that ``f`` instantiates."""
    g = expand(f, SIG_J4)
    for nm, s in cal.expanded():
        if match(s, g) is not None:
            return nm
    return None


def soundness_scan(cal: Calculus = H4, logic: Optional[MatrixLogic] = None) -> Dict[str, bool]:
    """Validity of every schema read with its metavariables as ordinary variables."""
    L = logic or j4()
    return {nm: is_valid(L, s).holds for nm, s in cal.schemas}


# ---------------------------------------------------------------------------
# proofs


@dataclass
class ProofStep:
    formula: Formula
    kind: str  # premise | axiom | mp | exp1
    refs: Tuple[int, ...] = ()
    axiom: Optional[str] = None


@dataclass
class StepReport:
    index: int
    formula: str
    ok: bool
    message: str

    def to_json(self) -> dict:
        return {"step": self.index, "formula": self.formula, "ok": self.ok, "message": self.message}


@dataclass
class ProofVerdict:
    accepted: bool
    calculus: str
    steps: List[StepReport]
    conclusion: Optional[str] = None
    semantic: Optional[Verdict] = None
    error: Optional[str] = None

    def __bool__(self):
        return self.accepted

    def to_json(self) -> dict:
        out = {
            "accepted": self.accepted,
            "calculus": self.calculus,
            "conclusion": self.conclusion,
            "steps": [s.to_json() for s in self.steps],
        }
        if self.semantic is not None:
            out["semantic"] = self.semantic.to_json()
        if self.error:
            out["error"] = self.error
        return out


def _justify(cal: Calculus, premises: Sequence[Formula], proof: Sequence[ProofStep], i: int) -> Tuple[bool, str]:
    st = proof[i]
    for r in st.refs:
        if not 1 <= r <= i:
            return False, f"reference {r} does not point to an earlier step"
    if st.kind == "premise":
        g = expand(st.formula, SIG_J4)
        if any(expand(p, SIG_J4) == g for p in premises):
            return True, "premise"
        return False, "not among the premises"
    if st.kind == "axiom":
        name = match_axiom(cal, st.formula)
        if name is None:
            return False, "not an instance of any axiom schema"
        if st.axiom is not None and st.axiom != name:
            s = dict(cal.expanded()).get(st.axiom)
            if s is None:
                return False, f"unknown axiom {st.axiom}"
            if match(s, expand(st.formula, SIG_J4)) is None:
                return False, f"not an instance of {st.axiom} (it instantiates {name})"
            name = st.axiom
        return True, f"axiom {name}"
    if st.kind == "mp":
        if len(st.refs) != 2:
            return False, "mp needs two references"
        a, b = (proof[r - 1].formula for r in st.refs)
        if expand(b, SIG_J4) != expand(Op("imp", (a, st.formula)), SIG_J4):
            return False, f"step {st.refs[1]} is not step {st.refs[0]} => this formula"
        return True, f"mp {st.refs[0]},{st.refs[1]}"
    if st.kind == "exp1":
        if not cal.exp1:
            return False, f"exp1 is not a rule of {cal.name}"
        if len(st.refs) != 1:
            return False, "exp1 needs one reference"
        src = proof[st.refs[0] - 1].formula
        if match(expand(CONTRADICTION, SIG_J4), expand(src, SIG_J4)) is None:
            return False, f"step {st.refs[0]} is not of the form phi & !phi"
        if expand(st.formula, SIG_J4) != expand(BOTTOM, SIG_J4):
            return False, f"exp1 concludes {render(BOTTOM)}"
        return True, f"exp1 {st.refs[0]}"
    return False, f"unknown justification {st.kind!r}"


def check_proof(cal: Calculus, premises: Sequence[Formula], proof: Sequence[ProofStep], semantic: bool = True) -> ProofVerdict:
    """Check every step; on acceptance confirm the conclusion semantically (J4 or J4bar)."""
    reports = []
    for i, st in enumerate(proof):
        ok, msg = _justify(cal, premises, proof, i)
        reports.append(StepReport(i + 1, render(st.formula), ok, msg))
    if not proof:
        return ProofVerdict(False, cal.name, reports, error="empty proof")
    accepted = all(r.ok for r in reports)
    v = ProofVerdict(accepted, cal.name, reports, render(proof[-1].formula))
    if accepted and semantic:
        L = j4bar() if cal.exp1 else j4()
        v.semantic = entails(L, Sequent(premises, proof[-1].formula))
        if not v.semantic.holds:
            v.accepted = False
            v.error = "derivation accepted syntactically but the conclusion does not follow semantically"
    return v


def _parse_step(obj: dict) -> ProofStep:
    f = parse(obj["formula"], SIG_J4)
    just = obj.get("just", {})
    kind = just.get("type")
    if kind == "premise":
        return ProofStep(f, "premise")
    if kind == "axiom":
        return ProofStep(f, "axiom", axiom=just.get("name"))
    if kind == "mp":
        refs = just.get("from", [])
        return ProofStep(f, "mp", tuple(int(r) for r in refs))
    if kind == "exp1":
        ref = just.get("from")
        refs = tuple(ref) if isinstance(ref, list) else (ref,)
        return ProofStep(f, "exp1", tuple(int(r) for r in refs))
    raise ValueError(f"unknown justification {kind!r}")


def load_proof(source: Union[str, Path, dict]) -> Tuple[Calculus, List[Formula], List[ProofStep], dict]:
    """Read a ``.proof.json`` document (path, corpus name or parsed dict)."""
    if isinstance(source, dict):
        doc = source
    else:
        path = Path(source)
        if not path.exists() and (CORPUS_DIR / path.name).exists():
            path = CORPUS_DIR / path.name
        doc = json.loads(path.read_text())
    cal = calculus(doc.get("calculus", "H4"))
    premises = [parse(p, SIG_J4) for p in doc.get("premises", [])]
    steps = [_parse_step(s) for s in doc.get("steps", [])]
    return cal, premises, steps, doc


def check_proof_file(source) -> ProofVerdict:
    cal, premises, steps, _ = load_proof(source)
    return check_proof(cal, premises, steps)


def corpus_files() -> List[Path]:
    return sorted(CORPUS_DIR.glob("*.proof.json"))


# ---------------------------------------------------------------------------
# semantics


def countermodel_j4(gamma: Sequence[Formula], phi: Formula) -> Verdict:
    return entails(j4(), Sequent(gamma, phi))


J4_OPS = [("or", 2), ("neg", 1), ("sq", 1), ("imp", 2), ("tilde", 1), ("and", 2)]
STRESSER_LAW = parse("sq (p -> q) -> (sq p -> sq q)", SIG_J4)


@dataclass
class DeductionReport:
    checked: int
    failures: List[str]
    pointwise: bool
    stresser_law: bool

    @property
    def ok(self) -> bool:
        return self.pointwise and self.stresser_law and not self.failures

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "failures": self.failures,
            "pointwise": self.pointwise,
            "stresser_law": self.stresser_law,
            "ok": self.ok,
        }


def random_dt_instance(rng: random.Random, names=("p", "q", "r"), depth: int = 3) -> Tuple[List[Formula], Formula, Formula]:
    k = rng.randint(0, 2)
    gamma = [random_formula(rng, J4_OPS, names, depth) for _ in range(k)]
    return gamma, random_formula(rng, J4_OPS, names, depth), random_formula(rng, J4_OPS, names, depth)


def deduction_theorem_check(samples: int = 200, seed: int = 0) -> DeductionReport:
    """Gamma, a |= b  iff  Gamma |= a => b on seeded random instances."""
    L = j4()
    rng = random.Random(seed)
    fails = []
    for _ in range(samples):
        gamma, a, b = random_dt_instance(rng)
        left = entails(L, Sequent(gamma + [a], b)).holds
        right = entails(L, Sequent(gamma, Op("imp", (a, b)))).holds
        if left != right:
            fails.append(Sequent(gamma + [a], b).render())
    pointwise = is_deductive_implication(L, Op("imp", (Var("p"), Var("q"))))
    return DeductionReport(samples, fails, pointwise, is_valid(L, STRESSER_LAW).holds)


# the maximal-set properties, each read as a statement about designation in A4
def _shadow_items():
    A = a4()
    F = np.isin(np.arange(4), DESIGNATED)
    o, n, s, t, i = (A.table(x) for x in ("or", "neg", "sq", "tilde", "imp"))
    d = lambda x: bool(F[x])
    return [
        ("1", 2, lambda a, b: d(o[a, b]) == (d(a) or d(b))),
        ("2", 1, lambda a, b: (not d(a)) == d(t[a])),
        ("3", 2, lambda a, b: d(i[a, b]) == ((not d(a)) or d(b))),
        ("4", 1, lambda a, b: d(a) or d(n[a])),
        ("5", 1, lambda a, b: d(a) == d(n[n[a]])),
        ("6", 1, lambda a, b: (not d(n[t[a]])) or d(a)),
        ("7", 2, lambda a, b: d(n[o[a, b]]) == (d(n[a]) and d(n[b]))),
        ("8", 1, lambda a, b: (not d(s[a])) or d(a)),
        ("9", 2, lambda a, b: d(s[o[a, b]]) == (d(s[a]) or d(s[b]))),
        ("10", 1, lambda a, b: d(s[s[a]]) == (not d(n[a]))),
        ("11", 1, lambda a, b: d(n[s[a]]) == d(n[a])),
        ("12", 1, lambda a, b: (not d(s[a])) == d(s[n[a]])),
    ]


def maxset_shadows() -> Dict[str, bool]:
    """Each maximal-set property checked on every element (or pair) of A4."""
    out = {}
    for name, arity, pred in _shadow_items():
        pairs = [(a, b) for a in range(4) for b in range(4)] if arity == 2 else [(a, 0) for a in range(4)]
        out[name] = all(pred(a, b) for a, b in pairs)
    return out


def truth_lemma_classification() -> bool:
    """The designation of ``a``, ``!a`` and ``sq a`` determines ``a`` as in the canonical valuation."""
    A = a4()
    F = np.isin(np.arange(4), DESIGNATED)
    n, s = A.table("neg"), A.table("sq")

    def classify(a):
        if not F[a]:
            return 0
        if not F[n[a]]:
            return 3
        return 2 if F[s[a]] else 1

    return all(classify(a) == a for a in range(4))


@dataclass
class J4IdealReport:
    paraconsistent: bool
    deductive: bool
    classical_reduct: bool
    sublogic_of_cpl: bool
    extension_explosive: bool
    witness: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return all([self.paraconsistent, self.deductive, self.classical_reduct, self.sublogic_of_cpl, self.extension_explosive])

    def to_json(self) -> dict:
        return {
            "i_paraconsistent": self.paraconsistent,
            "ii_deductive_implication": self.deductive,
            "iii_classical_presentation": self.classical_reduct,
            "iv_sublogic_of_cpl": self.sublogic_of_cpl,
            "proper_extension_explosive": self.extension_explosive,
            "witness": self.witness,
            "ok": self.ok,
        }


def j4_ideal_conditions(samples: int = 100, seed: int = 0) -> J4IdealReport:
    L = j4()
    para, wit = is_paraconsistent(L, Op("neg", (Var("p"),)))
    deductive = is_deductive_implication(L, Op("imp", (Var("p"), Var("q"))))
    B = boolean_j4()
    emb = [0, 3]
    classical = is_homomorphism(B, L.algebra, emb)
    rng = random.Random(seed)
    seqs = []
    for _ in range(samples):
        gamma, a, b = random_dt_instance(rng)
        seqs.append(Sequent(gamma + [a], b))
    sub = sublogic_check(L, MatrixLogic(B, [1], ("cpl-j4",), "CPL[J4]"), emb, seqs).ok
    explosive = entails(j4bar(), Sequent([Var("p"), Op("neg", (Var("p"),))], Var("q"))).holds
    return J4IdealReport(para, deductive, classical, sub, explosive, wit)


# ---------------------------------------------------------------------------
# bounded proof search


def search_proof(goal: Formula, premises: Sequence[Formula] = (), cal: Calculus = H4, depth: int = 6) -> Optional[List[ProofStep]]:
    """Backward iterative deepening over axioms, premises and modus ponens.

    Minor premises are drawn from the subformulas of the goal and of the
    premises, so only short derivations are found; ``None`` means no proof
    within the bound, not unprovability.
    """
    prem = {expand(p, SIG_J4): p for p in premises}
    pool: List[Formula] = []
    seen = set()
    for f in list(premises) + [goal]:
        for g in subformulas(f):
            if g not in seen:
                seen.add(g)
                pool.append(g)

    def leaf(f):
        g = expand(f, SIG_J4)
        if g in prem:
            return [ProofStep(prem[g], "premise")]
        if match_axiom(cal, f) is not None:
            return [ProofStep(f, "axiom")]
        return None

    def go(f, d, visiting):
        hit = leaf(f)
        if hit is not None or d == 0:
            return hit
        key = expand(f, SIG_J4)
        if key in visiting:
            return None
        visiting = visiting | {key}
        for a in pool:
            major = Op("imp", (a, f))
            pm = go(major, d - 1, visiting)
            if pm is None:
                continue
            pa = go(a, d - 1, visiting)
            if pa is None:
                continue
            return pa + pm + [ProofStep(f, "mp")]
        return None

    for d in range(depth + 1):
        steps = go(goal, d, frozenset())
        if steps is not None:
            return _number(steps)
    return None


def _number(steps: List[ProofStep]) -> List[ProofStep]:
    """Fill in MP references; each MP step uses the two subproofs immediately before it."""
    out: List[ProofStep] = []
    ends: List[int] = []
    for st in steps:
        if st.kind == "mp":
            minor_end, major_end = ends[-2], ends[-1]
            ends = ends[:-2]
            out.append(ProofStep(st.formula, "mp", (minor_end, major_end)))
        else:
            out.append(st)
        ends.append(len(out))
    return out


def proof_to_json(cal: Calculus, premises: Sequence[Formula], steps: Sequence[ProofStep]) -> dict:
    def just(st):
        if st.kind == "premise":
            return {"type": "premise"}
        if st.kind == "axiom":
            return {"type": "axiom", "name": st.axiom or match_axiom(cal, st.formula)}
        if st.kind == "mp":
            return {"type": "mp", "from": list(st.refs)}
        return {"type": "exp1", "from": st.refs[0]}

    return {
        "calculus": cal.name,
        "premises": [render(p) for p in premises],
        "steps": [{"formula": render(st.formula), "just": just(st)} for st in steps],
    }
